#pragma once

// Frames (X, ≤, R) with ≤ a quasiorder, IK²-models, satisfaction and relational validity.
//
// Composition reads left to right: x (R∘S) z iff x R y and y S z for some y.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tenselab/lattice.hpp"
#include "tenselab/syntax.hpp"

namespace tenselab {

class FrameError : public std::runtime_error {
 public:
  enum class Kind { Empty, TooLarge, DuplicateName, UnknownWorld, NotQuasiorder, NotPersistent, UnboundVariable, CapExceeded };

  FrameError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class Frame {
 public:
  Frame() = default;

  /// `leq` must already be reflexive and transitive.
  Frame(std::vector<std::string> names, Relation leq, Relation r) : names_(std::move(names)), leq_(std::move(leq)), r_(std::move(r)) {
    const std::size_t n = names_.size();
    if (n > kMaxCarrier) throw FrameError(FrameError::Kind::TooLarge, "frame has more than 64 worlds");
    if (leq_.size() != n || r_.size() != n) throw FrameError(FrameError::Kind::NotQuasiorder, "relation size does not match the worlds");
    if (!leq_.is_reflexive() || !leq_.is_transitive()) {
      throw FrameError(FrameError::Kind::NotQuasiorder, "world order is not reflexive and transitive");
    }
    std::set<std::string> seen;
    for (const auto& w : names_)
      if (!seen.insert(w).second) throw FrameError(FrameError::Kind::DuplicateName, "duplicate world '" + w + "'");
    geq_ = leq_.inverse();
    r_geq_ = r_.compose(geq_);
    leq_r_ = leq_.compose(r_);
    r_geq_inv_ = r_geq_.inverse();
    leq_r_inv_ = leq_r_.inverse();
  }

  /// Worlds named w0, w1, ...
  static Frame unnamed(Relation leq, Relation r) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < leq.size(); ++i) names.push_back("w" + std::to_string(i));
    return Frame(std::move(names), std::move(leq), std::move(r));
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t w) const { return names_[w]; }
  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  const Relation& leq() const { return leq_; }
  const Relation& geq() const { return geq_; }
  const Relation& r() const { return r_; }
  /// R∘≥ and ≤∘R, the relations behind ◇ and □.
  const Relation& r_geq() const { return r_geq_; }
  const Relation& leq_r() const { return leq_r_; }
  const Relation& r_geq_inverse() const { return r_geq_inv_; }
  const Relation& leq_r_inverse() const { return leq_r_inv_; }

  Poset poset() const { return Poset{names_, leq_}; }

 private:
  std::vector<std::string> names_;
  Relation leq_, r_;
  Relation geq_, r_geq_, leq_r_, r_geq_inv_, leq_r_inv_;
};

using WorldPair = std::pair<std::size_t, std::size_t>;

/// (≥∘Q∘≥) ⊆ Q; returns the first offending pair if it fails.
inline std::optional<WorldPair> intgc_violation(const Relation& leq, const Relation& q) {
  const Relation geq = leq.inverse();
  return geq.compose(q).compose(geq).first_difference(q);
}

struct IkFrameReport {
  bool forward = true;   // (R∘≤) ⊆ (≤∘R)
  bool backward = true;  // (≥∘R) ⊆ (R∘≥)
  std::optional<WorldPair> forward_witness, backward_witness;
  bool intgc_r_geq = true;       // (X, ≤, R∘≥) satisfies the IntGC condition
  bool intgc_rinv_geq = true;    // (X, ≤, R⁻¹∘≥) does
  std::optional<WorldPair> intgc_r_geq_witness, intgc_rinv_geq_witness;
  bool lemma_agrees = true;      // ik() == intgc_r_geq && intgc_rinv_geq

  bool ik() const { return forward && backward; }
};

inline IkFrameReport check_ik_frame(const Frame& f) {
  IkFrameReport rep;
  const Relation& le = f.leq();
  const Relation& ge = f.geq();
  const Relation& r = f.r();
  rep.forward_witness = r.compose(le).first_difference(le.compose(r));
  rep.backward_witness = ge.compose(r).first_difference(r.compose(ge));
  rep.forward = !rep.forward_witness;
  rep.backward = !rep.backward_witness;
  rep.intgc_r_geq_witness = intgc_violation(le, r.compose(ge));
  rep.intgc_rinv_geq_witness = intgc_violation(le, r.inverse().compose(ge));
  rep.intgc_r_geq = !rep.intgc_r_geq_witness;
  rep.intgc_rinv_geq = !rep.intgc_rinv_geq_witness;
  rep.lemma_agrees = rep.ik() == (rep.intgc_r_geq && rep.intgc_rinv_geq);
  return rep;
}

inline bool is_ik_frame(const Frame& f) { return check_ik_frame(f).ik(); }

// ---------------------------------------------------------------------------
// Models and satisfaction
// ---------------------------------------------------------------------------

using WorldValuation = std::map<std::string, Subset>;

class Model {
 public:
  Model(Frame frame, WorldValuation val) : frame_(std::move(frame)), val_(std::move(val)) {
    const Poset p = frame_.poset();
    for (const auto& [name, set] : val_) {
      if (!set.subset_of(Subset::full(frame_.size()))) {
        throw FrameError(FrameError::Kind::UnknownWorld, "valuation of '" + name + "' mentions a world outside the frame");
      }
      if (!is_upset(p, set)) {
        throw FrameError(FrameError::Kind::NotPersistent,
                         "valuation of '" + name + "' is not closed upward: " + subset_name(frame_.names(), set));
      }
    }
  }

  const Frame& frame() const { return frame_; }
  const WorldValuation& valuation() const { return val_; }

 private:
  Frame frame_;
  WorldValuation val_;
};

/// Truth sets of formulas over a fixed frame.
class FrameEvaluator {
 public:
  explicit FrameEvaluator(const Frame& f) : f_(f), all_(Subset::full(f.size())) {}

  Subset box_of(const Relation& rel, Subset a) const {
    Subset out;
    for (std::size_t x = 0; x < f_.size(); ++x)
      if (rel.row(x).subset_of(a)) out.insert(x);
    return out;
  }
  Subset dia_of(const Relation& rel, Subset a) const {
    Subset out;
    for (std::size_t x = 0; x < f_.size(); ++x)
      if (!(rel.row(x) & a).empty()) out.insert(x);
    return out;
  }

  Subset imp(Subset a, Subset b) const { return box_of(f_.leq(), a.complement(f_.size()) | b); }
  Subset dia(Subset a) const { return dia_of(f_.r_geq(), a); }
  Subset box(Subset a) const { return box_of(f_.leq_r(), a); }
  Subset bdia(Subset a) const { return dia_of(f_.leq_r_inverse(), a); }
  Subset bbox(Subset a) const { return box_of(f_.r_geq_inverse(), a); }

  Subset run(const CompiledFormula& c, const std::vector<Subset>& slots, std::vector<Subset>& stack) const {
    stack.clear();
    for (const auto& ins : c.program) {
      switch (ins.op) {
        case Connective::Var: stack.push_back(slots[ins.slot]); break;
        case Connective::Top: stack.push_back(all_); break;
        case Connective::Bot: stack.push_back(Subset()); break;
        case Connective::Not: stack.back() = imp(stack.back(), Subset()); break;
        case Connective::Dia: stack.back() = dia(stack.back()); break;
        case Connective::Box: stack.back() = box(stack.back()); break;
        case Connective::BDia: stack.back() = bdia(stack.back()); break;
        case Connective::BBox: stack.back() = bbox(stack.back()); break;
        default: {
          const Subset r = stack.back();
          stack.pop_back();
          const Subset l = stack.back();
          switch (ins.op) {
            case Connective::And: stack.back() = l & r; break;
            case Connective::Or: stack.back() = l | r; break;
            case Connective::Imp: stack.back() = imp(l, r); break;
            default: stack.back() = imp(l, r) & imp(r, l); break;
          }
        }
      }
    }
    return stack.back();
  }

  Subset truth_set(const WorldValuation& val, const Formula& f) const {
    const CompiledFormula c = compile(f);
    std::vector<Subset> slots;
    for (const auto& name : c.variables) {
      auto it = val.find(name);
      if (it == val.end()) throw FrameError(FrameError::Kind::UnboundVariable, "variable '" + name + "' has no valuation");
      slots.push_back(it->second);
    }
    std::vector<Subset> stack;
    return run(c, slots, stack);
  }

 private:
  const Frame& f_;
  Subset all_;
};

inline Subset truth_set(const Model& m, const Formula& f) { return FrameEvaluator(m.frame()).truth_set(m.valuation(), f); }

inline bool satisfies(const Model& m, std::size_t world, const Formula& f) {
  if (world >= m.frame().size()) throw FrameError(FrameError::Kind::UnknownWorld, "world index out of range");
  return truth_set(m, f).contains(world);
}

struct PersistenceWitness {
  std::size_t formula_index;
  std::size_t lower, upper;  // lower ≤ upper, formula true at lower, false at upper
};

struct PersistenceReport {
  bool persistent = true;
  std::optional<PersistenceWitness> witness;
};

/// Checks that every corpus formula has an up-closed truth set.
inline PersistenceReport check_persistence(const Model& m, const std::vector<Formula>& corpus) {
  PersistenceReport rep;
  const Frame& fr = m.frame();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Subset t = truth_set(m, corpus[i]);
    for (std::size_t x : t.members()) {
      const Subset bad(fr.leq().row(x).bits() & ~t.bits());
      if (!bad.empty()) {
        rep.persistent = false;
        rep.witness = PersistenceWitness{i, x, bad.members().front()};
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Relational validity
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultWorldCap = 5;

struct FrameValidityResult {
  bool valid = true;
  WorldValuation valuation;  // counter-model valuation, when not valid
  std::size_t world = 0;     // first world where the formula fails
  std::uint64_t valuations_checked = 0;
};

/// Exhaustive over all up-set valuations of the formula's variables (lexicographic in
/// up-set order, first variable slowest) and all worlds.
inline FrameValidityResult frame_validity(const Frame& fr, const Formula& f, std::size_t world_cap = kDefaultWorldCap,
                                          std::size_t var_cap = 4) {
  if (fr.size() > world_cap) {
    throw FrameError(FrameError::Kind::CapExceeded,
                     "frame has " + std::to_string(fr.size()) + " worlds; cap is " + std::to_string(world_cap));
  }
  const CompiledFormula c = compile(f);
  if (c.variables.size() > var_cap) {
    throw FrameError(FrameError::Kind::CapExceeded,
                     "formula has " + std::to_string(c.variables.size()) + " variables; cap is " + std::to_string(var_cap));
  }
  const std::vector<Subset> ups = upsets(fr.poset());
  const FrameEvaluator ev(fr);
  const Subset all = Subset::full(fr.size());
  FrameValidityResult res;
  const std::size_t k = c.variables.size();
  std::vector<std::size_t> pos(k, 0);
  std::vector<Subset> slots(k), stack;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) slots[i] = ups[pos[i]];
    ++res.valuations_checked;
    const Subset t = ev.run(c, slots, stack);
    if (!(t == all)) {
      res.valid = false;
      res.world = Subset(all.bits() & ~t.bits()).members().front();
      for (std::size_t i = 0; i < k; ++i) res.valuation[c.variables[i]] = slots[i];
      return res;
    }
    std::size_t i = k;
    bool done = true;
    while (i > 0) {
      --i;
      if (++pos[i] < ups.size()) {
        done = false;
        break;
      }
      pos[i] = 0;
    }
    if (done) return res;
  }
}

// ---------------------------------------------------------------------------
// Enumeration of small frames
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t relation_code(const Relation& r, const std::vector<std::size_t>& perm) {
  const std::size_t n = r.size();
  std::uint64_t code = 0;
  for (auto [a, b] : r.pairs()) code |= std::uint64_t{1} << (perm[a] * n + perm[b]);
  return code;
}

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline Relation relation_from_code(std::size_t n, std::uint64_t code) {
  Relation r(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if ((code >> (a * n + b)) & 1u) r.add(a, b);
  return r;
}

}  // namespace detail

/// Reflexive, transitive relations on n points; with up_to_iso one per isomorphism class
/// (the representative with the smallest code).
inline std::vector<Relation> enumerate_quasiorders(std::size_t n, bool up_to_iso) {
  if (n > 5) throw FrameError(FrameError::Kind::CapExceeded, "quasiorder enumeration is limited to 5 points");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) slots.emplace_back(i, j);
  const auto perms = detail::all_permutations(n);
  std::vector<Relation> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Relation r = Relation::identity(n);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((mask >> s) & 1u) r.add(slots[s].first, slots[s].second);
    if (!r.is_transitive()) continue;
    if (up_to_iso) {
      const std::uint64_t own = detail::relation_code(r, perms.front());
      bool minimal = true;
      for (const auto& p : perms)
        if (detail::relation_code(r, p) < own) {
          minimal = false;
          break;
        }
      if (!minimal) continue;
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Calls visit(frame) for every frame on exactly n worlds; with up_to_iso, once per
/// isomorphism class of (≤, R). Stops early when visit returns false.
template <class Visit>
void for_each_frame(std::size_t n, bool ik_only, bool up_to_iso, Visit&& visit) {
  if (n > 4) throw FrameError(FrameError::Kind::CapExceeded, "frame enumeration is limited to 4 worlds");
  const auto perms = detail::all_permutations(n);
  for (const Relation& leq : enumerate_quasiorders(n, up_to_iso)) {
    std::vector<const std::vector<std::size_t>*> autos;
    const std::uint64_t leq_code = detail::relation_code(leq, perms.front());
    for (const auto& p : perms)
      if (detail::relation_code(leq, p) == leq_code) autos.push_back(&p);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * n)); ++code) {
      const Relation r = detail::relation_from_code(n, code);
      if (up_to_iso) {
        bool minimal = true;
        for (const auto* p : autos)
          if (detail::relation_code(r, *p) < code) {
            minimal = false;
            break;
          }
        if (!minimal) continue;
      }
      Frame f = Frame::unnamed(leq, r);
      if (ik_only && !is_ik_frame(f)) continue;
      if (!visit(f)) return;
    }
  }
}

inline std::vector<Frame> enumerate_frames(std::size_t n, bool ik_only, bool up_to_iso) {
  std::vector<Frame> out;
  for_each_frame(n, ik_only, up_to_iso, [&out](const Frame& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

}  // namespace tenselab
