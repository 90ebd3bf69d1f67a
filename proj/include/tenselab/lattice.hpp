#pragma once

// Finite Heyting algebras, subsets/relations as bit rows, posets and up-sets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tenselab {

using Element = unsigned;

/// Largest carrier handled anywhere; subsets are 64-bit masks.
inline constexpr std::size_t kMaxCarrier = 64;

// ---------------------------------------------------------------------------
// Subsets and relations
// ---------------------------------------------------------------------------

class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  static constexpr Subset full(std::size_t n) {
    return Subset(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr Subset single(std::size_t i) { return Subset(std::uint64_t{1} << i); }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
  constexpr void erase(std::size_t i) { bits_ &= ~(std::uint64_t{1} << i); }
  constexpr bool empty() const { return bits_ == 0; }
  int count() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr Subset complement(std::size_t n) const { return Subset(~bits_ & full(n).bits_); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
  friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
  friend constexpr bool operator==(Subset a, Subset b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator<(Subset a, Subset b) { return a.bits_ < b.bits_; }
  Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }

 private:
  std::uint64_t bits_ = 0;
};

/// Binary relation on {0..n-1}; row x holds {y | x R y}.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : rows_(n) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.rows_[i].insert(i);
    return r;
  }
  static Relation from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Relation r(n);
    for (auto [a, b] : pairs) r.add(a, b);
    return r;
  }

  std::size_t size() const { return rows_.size(); }
  bool has(std::size_t a, std::size_t b) const { return rows_[a].contains(b); }
  void add(std::size_t a, std::size_t b) { rows_[a].insert(b); }
  void remove(std::size_t a, std::size_t b) { rows_[a].erase(b); }
  Subset row(std::size_t a) const { return rows_[a]; }
  void set_row(std::size_t a, Subset s) { rows_[a] = s; }

  /// x (this∘s) z iff some y has x this y and y s z.
  Relation compose(const Relation& s) const {
    Relation out(size());
    for (std::size_t x = 0; x < size(); ++x) {
      Subset acc;
      for (std::size_t y : rows_[x].members()) acc |= s.rows_[y];
      out.rows_[x] = acc;
    }
    return out;
  }

  Relation inverse() const {
    Relation out(size());
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y : rows_[x].members()) out.rows_[y].insert(x);
    return out;
  }

  Relation reflexive_transitive_closure() const {
    Relation out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.rows_[i].insert(i);
    for (std::size_t k = 0; k < size(); ++k)
      for (std::size_t i = 0; i < size(); ++i)
        if (out.rows_[i].contains(k)) out.rows_[i] |= out.rows_[k];
    return out;
  }

  bool subset_of(const Relation& o) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!rows_[i].subset_of(o.rows_[i])) return false;
    return true;
  }

  /// First pair (row-major) in this but not in `o`.
  std::optional<std::pair<std::size_t, std::size_t>> first_difference(const Relation& o) const {
    for (std::size_t i = 0; i < size(); ++i) {
      const Subset d(rows_[i].bits() & ~o.rows_[i].bits());
      if (!d.empty()) return std::pair{i, d.members().front()};
    }
    return std::nullopt;
  }

  bool is_reflexive() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!has(i, i)) return false;
    return true;
  }
  bool is_transitive() const { return compose(*this).subset_of(*this); }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j : rows_[i].members()) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const Relation& a, const Relation& b) { return a.rows_ == b.rows_; }

 private:
  std::vector<Subset> rows_;
};

// ---------------------------------------------------------------------------
// Heyting algebras
// ---------------------------------------------------------------------------

class LatticeError : public std::runtime_error {
 public:
  enum class Kind { Empty, TooLarge, DuplicateName, UnknownElement, Cyclic, NoBounds, NotALattice, NotDistributive, CapExceeded };

  LatticeError(Kind kind, std::string message, std::vector<std::string> witness = {})
      : std::runtime_error(std::move(message)), kind_(kind), witness_(std::move(witness)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<std::string> witness_;
};

class HeytingAlgebra {
 public:
  HeytingAlgebra() = default;

  /// Builds all tables from a complete order matrix (already reflexive and transitive).
  static HeytingAlgebra from_matrix(std::vector<std::string> names, const Relation& leq);

  std::size_t size() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Element e) const { return names_[e]; }
  std::optional<Element> find(std::string_view name) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (names_[i] == name) return static_cast<Element>(i);
    return std::nullopt;
  }
  Element element(std::string_view name) const {
    if (auto e = find(name)) return *e;
    throw LatticeError(LatticeError::Kind::UnknownElement, "unknown element '" + std::string(name) + "'",
                       {std::string(name)});
  }

  bool leq(Element a, Element b) const { return order_.has(a, b); }
  Element join(Element a, Element b) const { return join_[a * n_ + b]; }
  Element meet(Element a, Element b) const { return meet_[a * n_ + b]; }
  Element imp(Element a, Element b) const { return imp_[a * n_ + b]; }
  Element neg(Element a) const { return imp(a, bottom_); }
  Element bottom() const { return bottom_; }
  Element top() const { return top_; }
  const Relation& order() const { return order_; }

  /// Elements other than 0 and 1 in index order, then 0, then 1. Witness searches use this order.
  const std::vector<Element>& search_order() const { return search_order_; }

  /// Pairs (a, b) with a < b and nothing strictly between.
  std::vector<std::pair<Element, Element>> covers() const {
    std::vector<std::pair<Element, Element>> out;
    for (Element a = 0; a < n_; ++a)
      for (Element b = 0; b < n_; ++b) {
        if (a == b || !leq(a, b)) continue;
        bool cover = true;
        for (Element c = 0; c < n_ && cover; ++c)
          if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
        if (cover) out.emplace_back(a, b);
      }
    return out;
  }

  /// Nonzero elements that are not the join of two strictly smaller elements.
  std::vector<Element> join_irreducibles() const {
    std::vector<Element> out;
    for (Element j = 0; j < n_; ++j) {
      if (j == bottom_) continue;
      bool irreducible = true;
      for (Element a = 0; a < n_ && irreducible; ++a)
        for (Element b = 0; b < n_ && irreducible; ++b)
          if (a != j && b != j && leq(a, j) && leq(b, j) && join(a, b) == j) irreducible = false;
      if (irreducible) out.push_back(j);
    }
    return out;
  }

  Subset up(Element a) const { return order_.row(a); }

  bool is_chain() const {
    for (Element a = 0; a < n_; ++a)
      for (Element b = 0; b < n_; ++b)
        if (!leq(a, b) && !leq(b, a)) return false;
    return true;
  }

  /// Same carrier size, order, and names; tables then agree too.
  friend bool operator==(const HeytingAlgebra& a, const HeytingAlgebra& b) {
    return a.names_ == b.names_ && a.order_ == b.order_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  Relation order_;
  std::vector<Element> join_, meet_, imp_;
  Element bottom_ = 0, top_ = 0;
  std::vector<Element> search_order_;
};

inline HeytingAlgebra HeytingAlgebra::from_matrix(std::vector<std::string> names, const Relation& leq) {
  const std::size_t n = names.size();
  if (n == 0) throw LatticeError(LatticeError::Kind::Empty, "empty carrier");
  if (n > kMaxCarrier) {
    throw LatticeError(LatticeError::Kind::TooLarge,
                       "carrier has " + std::to_string(n) + " elements; limit is " + std::to_string(kMaxCarrier));
  }
  HeytingAlgebra h;
  h.n_ = n;
  h.names_ = std::move(names);
  h.order_ = leq;
  const auto nm = [&h](std::size_t i) { return h.names_[i]; };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (leq.has(a, b) && leq.has(b, a)) {
        throw LatticeError(LatticeError::Kind::Cyclic, "order is cyclic: " + nm(a) + " and " + nm(b) + " are mutually below each other",
                           {nm(a), nm(b)});
      }

  const Relation geq = leq.inverse();
  std::optional<std::size_t> bot, top;
  for (std::size_t a = 0; a < n; ++a) {
    if (leq.row(a) == Subset::full(n)) bot = a;
    if (geq.row(a) == Subset::full(n)) top = a;
  }
  if (!bot || !top) {
    throw LatticeError(LatticeError::Kind::NoBounds, !bot ? "order has no least element" : "order has no greatest element");
  }
  h.bottom_ = static_cast<Element>(*bot);
  h.top_ = static_cast<Element>(*top);

  h.join_.assign(n * n, 0);
  h.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Subset upper = leq.row(a) & leq.row(b);
      const Subset lower = geq.row(a) & geq.row(b);
      std::optional<std::size_t> lub, glb;
      for (std::size_t u : upper.members())
        if (upper.subset_of(leq.row(u))) lub = u;
      for (std::size_t l : lower.members())
        if (lower.subset_of(geq.row(l))) glb = l;
      if (!lub || !glb) {
        throw LatticeError(LatticeError::Kind::NotALattice,
                           std::string(!lub ? "no least upper bound" : "no greatest lower bound") + " for " + nm(a) + ", " + nm(b),
                           {nm(a), nm(b)});
      }
      h.join_[a * n + b] = static_cast<Element>(*lub);
      h.meet_[a * n + b] = static_cast<Element>(*glb);
    }
  }

  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        if (h.meet(x, h.join(y, z)) != h.join(h.meet(x, y), h.meet(x, z))) {
          throw LatticeError(LatticeError::Kind::NotDistributive,
                             "not distributive at " + nm(x) + ", " + nm(y) + ", " + nm(z), {nm(x), nm(y), nm(z)});
        }

  h.imp_.assign(n * n, 0);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Element acc = h.bottom_;
      for (Element z = 0; z < n; ++z)
        if (h.leq(h.meet(z, a), b)) acc = h.join(acc, z);
      h.imp_[a * n + b] = acc;
    }

  for (Element e = 0; e < n; ++e)
    if (e != h.bottom_ && e != h.top_) h.search_order_.push_back(e);
  h.search_order_.push_back(h.bottom_);
  if (h.top_ != h.bottom_) h.search_order_.push_back(h.top_);
  return h;
}

/// Builds a Heyting algebra from generating pairs a ≤ b; the reflexive-transitive closure is taken.
inline HeytingAlgebra from_order(std::vector<std::string> names,
                                 const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second) {
      throw LatticeError(LatticeError::Kind::DuplicateName, "duplicate element '" + names[i] + "'", {names[i]});
    }
  }
  if (names.size() > kMaxCarrier) {
    throw LatticeError(LatticeError::Kind::TooLarge, "carrier has " + std::to_string(names.size()) + " elements; limit is 64");
  }
  Relation r(names.size());
  for (const auto& [a, b] : leq_pairs) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      const std::string& bad = ia == index.end() ? a : b;
      throw LatticeError(LatticeError::Kind::UnknownElement, "unknown element '" + bad + "'", {bad});
    }
    r.add(ia->second, ib->second);
  }
  return HeytingAlgebra::from_matrix(std::move(names), r.reflexive_transitive_closure());
}

/// Chain 0 < 1 < ... with the given names in increasing order.
inline HeytingAlgebra chain_algebra(std::vector<std::string> names) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) pairs.emplace_back(names[i], names[i + 1]);
  return from_order(std::move(names), pairs);
}

// ---------------------------------------------------------------------------
// Enumeration of finite distributive lattices
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> standard_names(std::size_t n) {
  if (n == 1) return {"0"};
  std::vector<std::string> out{"0"};
  for (std::size_t i = 1; i + 1 < n; ++i) out.emplace_back(1, static_cast<char>('a' + i - 1));
  out.emplace_back("1");
  return out;
}

/// Bit code of the strict order among middle points, row-major over pairs i < j.
inline std::uint64_t upper_code(const Relation& mid) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < mid.size(); ++i)
    for (std::size_t j = i + 1; j < mid.size(); ++j) code = (code << 1) | (mid.has(i, j) ? 1u : 0u);
  return code;
}

inline Relation permute(const Relation& r, const std::vector<std::size_t>& perm) {
  Relation out(r.size());
  for (auto [a, b] : r.pairs()) out.add(perm[a], perm[b]);
  return out;
}

/// Transitive strict orders on m points with i < j whenever i precedes j.
inline std::vector<Relation> natural_posets(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) slots.emplace_back(i, j);
  std::vector<Relation> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Relation r(m);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((mask >> s) & 1u) r.add(slots[s].first, slots[s].second);
    if (r.compose(r).subset_of(r)) out.push_back(std::move(r));
  }
  return out;
}

inline HeytingAlgebra bounded_from_middle(const Relation& mid) {
  const std::size_t m = mid.size();
  const std::size_t n = m + 2;
  Relation leq(n);
  for (std::size_t i = 0; i < n; ++i) {
    leq.add(0, i);
    leq.add(i, n - 1);
    leq.add(i, i);
  }
  for (auto [a, b] : mid.pairs()) leq.add(a + 1, b + 1);
  return HeytingAlgebra::from_matrix(standard_names(n), leq);
}

inline bool lattice_ok(const Relation& mid) {
  try {
    (void)bounded_from_middle(mid);
    return true;
  } catch (const LatticeError&) {
    return false;
  }
}

/// All finite distributive lattices of exactly n elements.
inline std::vector<HeytingAlgebra> distributive_lattices_of_size(std::size_t n, bool up_to_iso) {
  if (n == 0) return {};
  if (n == 1) return {HeytingAlgebra::from_matrix({"0"}, Relation::identity(1))};
  const std::size_t m = n - 2;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  const auto is_natural = [](const Relation& r) {
    for (auto [a, b] : r.pairs())
      if (a > b) return false;
    return true;
  };

  std::vector<HeytingAlgebra> out;
  if (up_to_iso) {
    // Canonical form: natural relabeling with the largest code.
    std::map<std::uint64_t, Relation, std::greater<>> canon;
    for (const Relation& r : natural_posets(m)) {
      if (!lattice_ok(r)) continue;
      std::optional<std::pair<std::uint64_t, Relation>> best;
      for (const auto& p : perms) {
        Relation q = permute(r, p);
        if (!is_natural(q)) continue;
        const std::uint64_t c = upper_code(q);
        if (!best || c > best->first) best.emplace(c, std::move(q));
      }
      canon.emplace(best->first, best->second);
    }
    for (const auto& [code, rel] : canon) out.push_back(bounded_from_middle(rel));
  } else {
    std::map<std::vector<std::pair<std::size_t, std::size_t>>, Relation> labeled;
    for (const Relation& r : natural_posets(m)) {
      if (!lattice_ok(r)) continue;
      for (const auto& p : perms) {
        Relation q = permute(r, p);
        labeled.emplace(q.pairs(), q);
      }
    }
    std::vector<std::pair<std::vector<std::pair<std::size_t, std::size_t>>, Relation>> items(labeled.begin(), labeled.end());
    for (const auto& [key, rel] : items) out.push_back(bounded_from_middle(rel));
  }
  return out;
}

}  // namespace detail

/// Pull-based stream of distributive lattices by increasing size.
class HeytingStream {
 public:
  HeytingStream(std::size_t n_max, bool up_to_iso, std::size_t cap = 7) : n_max_(n_max), up_to_iso_(up_to_iso) {
    if (n_max > cap) {
      throw LatticeError(LatticeError::Kind::CapExceeded,
                         "enumeration size " + std::to_string(n_max) + " exceeds cap " + std::to_string(cap));
    }
  }

  std::optional<HeytingAlgebra> next() {
    while (pos_ >= batch_.size()) {
      if (size_ >= n_max_) return std::nullopt;
      ++size_;
      batch_ = detail::distributive_lattices_of_size(size_, up_to_iso_);
      pos_ = 0;
    }
    return batch_[pos_++];
  }

 private:
  std::size_t n_max_;
  bool up_to_iso_;
  std::size_t size_ = 0;
  std::vector<HeytingAlgebra> batch_;
  std::size_t pos_ = 0;
};

/// Every distributive lattice with at most n_max elements; see HeytingStream for the order.
inline std::vector<HeytingAlgebra> enumerate_heyting(std::size_t n_max, bool up_to_iso, std::size_t cap = 7) {
  HeytingStream s(n_max, up_to_iso, cap);
  std::vector<HeytingAlgebra> out;
  while (auto h = s.next()) out.push_back(std::move(*h));
  return out;
}

// ---------------------------------------------------------------------------
// Posets and up-sets
// ---------------------------------------------------------------------------

struct Poset {
  std::vector<std::string> names;
  Relation leq;  // reflexive and transitive; antisymmetry not required

  std::size_t size() const { return names.size(); }
};

inline bool is_upset(const Poset& p, Subset a) {
  for (std::size_t x : a.members())
    if (!p.leq.row(x).subset_of(a)) return false;
  return true;
}

/// All up-sets, sorted by bit pattern (so the empty set comes first).
inline std::vector<Subset> upsets(const Poset& p) {
  const std::size_t n = p.size();
  const Relation geq = p.leq.inverse();
  std::vector<Subset> out;
  // Decide elements in index order; including x forces ↑x, excluding forces ↓x out.
  const auto rec = [&](auto&& self, std::size_t i, Subset in, Subset outset) -> void {
    while (i < n && (in.contains(i) || outset.contains(i))) ++i;
    if (i == n) {
      out.push_back(in);
      return;
    }
    const Subset up = p.leq.row(i);
    if ((up & outset).empty()) self(self, i + 1, in | up, outset);
    const Subset down = geq.row(i);
    if ((down & in).empty()) self(self, i + 1, in, outset | down);
  };
  rec(rec, 0, Subset(), Subset());
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest up-set inside `a`.
inline Subset interior(const Poset& p, Subset a) {
  Subset out;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.leq.row(x).subset_of(a)) out.insert(x);
  return out;
}

inline std::string subset_name(const std::vector<std::string>& names, Subset s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s.members()) {
    if (!first) out += ',';
    out += names[i];
    first = false;
  }
  return out + "}";
}

struct UpsetAlgebra {
  HeytingAlgebra algebra;
  std::vector<Subset> carrier;  // carrier[e] is the up-set named by element e
};

/// Heyting algebra of up-sets ordered by inclusion; element names list the members.
inline UpsetAlgebra upset_algebra(const Poset& p) {
  UpsetAlgebra out;
  out.carrier = upsets(p);
  if (out.carrier.size() > kMaxCarrier) {
    throw LatticeError(LatticeError::Kind::TooLarge,
                       "poset has " + std::to_string(out.carrier.size()) + " up-sets; limit is 64");
  }
  std::vector<std::string> names;
  Relation leq(out.carrier.size());
  for (std::size_t i = 0; i < out.carrier.size(); ++i) {
    names.push_back(subset_name(p.names, out.carrier[i]));
    for (std::size_t j = 0; j < out.carrier.size(); ++j)
      if (out.carrier[i].subset_of(out.carrier[j])) leq.add(i, j);
  }
  out.algebra = HeytingAlgebra::from_matrix(std::move(names), leq);
  return out;
}

inline std::optional<Element> index_of(const std::vector<Subset>& carrier, Subset s) {
  auto it = std::lower_bound(carrier.begin(), carrier.end(), s);
  if (it == carrier.end() || !(*it == s)) return std::nullopt;
  return static_cast<Element>(it - carrier.begin());
}

}  // namespace tenselab
