#pragma once

// Heyting algebras with two Galois pairs of operators: law checking, adjoints,
// enumeration of Galois pairs, evaluation and validity.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tenselab/lattice.hpp"
#include "tenselab/syntax.hpp"

namespace tenselab {

using UnaryTable = std::vector<Element>;
using Valuation = std::map<std::string, Element>;

class AlgebraError : public std::runtime_error {
 public:
  enum class Kind { TableSize, IndexOutOfRange, NotNormal, NotJoinPreserving, NotMeetPreserving, UnboundVariable, CapExceeded, ModalOperatorPresent, UnknownLaw };

  AlgebraError(Kind kind, std::string message, std::vector<Element> witness = {})
      : std::runtime_error(std::move(message)), kind_(kind), witness_(std::move(witness)) {}

  Kind kind() const { return kind_; }
  const std::vector<Element>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<Element> witness_;
};

/// ◇ = F, □ = G, ⧫ = P, ■ = H. Galois pairs are (dia, bbox) and (bdia, box).
struct OperatorTables {
  UnaryTable dia, box, bdia, bbox;

  friend bool operator==(const OperatorTables&, const OperatorTables&) = default;
};

inline OperatorTables identity_tables(std::size_t n) {
  UnaryTable id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<Element>(i);
  return {id, id, id, id};
}

// ---------------------------------------------------------------------------
// Laws
// ---------------------------------------------------------------------------

enum class Law {
  GcDiaBbox,
  GcBdiaBox,
  DiaNormal,
  DiaAdditive,
  BdiaNormal,
  BdiaAdditive,
  BoxConormal,
  BoxMultiplicative,
  BboxConormal,
  BboxMultiplicative,
  Br1,
  Br2,
  Br3,
  Br4,
  Fs1,
  Fs2,
  Fs3,
  Fs4,
  D1,
  D2,
  DunnSecond,
  DunnSecondPast,
};

inline constexpr std::array kAllLaws = {
    Law::GcDiaBbox, Law::GcBdiaBox, Law::DiaNormal, Law::DiaAdditive, Law::BdiaNormal, Law::BdiaAdditive,
    Law::BoxConormal, Law::BoxMultiplicative, Law::BboxConormal, Law::BboxMultiplicative, Law::Br1, Law::Br2,
    Law::Br3, Law::Br4, Law::Fs1, Law::Fs2, Law::Fs3, Law::Fs4, Law::D1, Law::D2, Law::DunnSecond,
    Law::DunnSecondPast};

/// Laws that make up an H2GC+FS-algebra; the two Dunn-style laws are reported but not required.
inline std::vector<Law> core_laws() { return {kAllLaws.begin(), kAllLaws.end() - 2}; }

inline std::vector<Law> gc_laws() { return {Law::GcDiaBbox, Law::GcBdiaBox}; }

inline const char* law_name(Law law) {
  switch (law) {
    case Law::GcDiaBbox: return "gc_dia_bbox";
    case Law::GcBdiaBox: return "gc_bdia_box";
    case Law::DiaNormal: return "dia_normal";
    case Law::DiaAdditive: return "dia_additive";
    case Law::BdiaNormal: return "bdia_normal";
    case Law::BdiaAdditive: return "bdia_additive";
    case Law::BoxConormal: return "box_conormal";
    case Law::BoxMultiplicative: return "box_multiplicative";
    case Law::BboxConormal: return "bbox_conormal";
    case Law::BboxMultiplicative: return "bbox_multiplicative";
    case Law::Br1: return "br1";
    case Law::Br2: return "br2";
    case Law::Br3: return "br3";
    case Law::Br4: return "br4";
    case Law::Fs1: return "fs1";
    case Law::Fs2: return "fs2";
    case Law::Fs3: return "fs3";
    case Law::Fs4: return "fs4";
    case Law::D1: return "d1";
    case Law::D2: return "d2";
    case Law::DunnSecond: return "dunn_second";
    case Law::DunnSecondPast: return "dunn_second_past";
  }
  return "?";
}

/// The law as an (in)equation in x, y using the formula operator letters.
inline const char* law_statement(Law law) {
  switch (law) {
    case Law::GcDiaBbox: return "F x <= y  iff  x <= H y";
    case Law::GcBdiaBox: return "P x <= y  iff  x <= G y";
    case Law::DiaNormal: return "F 0 = 0";
    case Law::DiaAdditive: return "F (x | y) = F x | F y";
    case Law::BdiaNormal: return "P 0 = 0";
    case Law::BdiaAdditive: return "P (x | y) = P x | P y";
    case Law::BoxConormal: return "G 1 = 1";
    case Law::BoxMultiplicative: return "G (x & y) = G x & G y";
    case Law::BboxConormal: return "H 1 = 1";
    case Law::BboxMultiplicative: return "H (x & y) = H x & H y";
    case Law::Br1: return "x <= H F x";
    case Law::Br2: return "F H x <= x";
    case Law::Br3: return "x <= G P x";
    case Law::Br4: return "P G x <= x";
    case Law::Fs1: return "F (x -> y) <= G x -> F y";
    case Law::Fs2: return "F x -> G y <= G (x -> y)";
    case Law::Fs3: return "P (x -> y) <= H x -> P y";
    case Law::Fs4: return "P x -> H y <= H (x -> y)";
    case Law::D1: return "F x & G y <= F (x & y)";
    case Law::D2: return "P x & H y <= P (x & y)";
    case Law::DunnSecond: return "G (x | y) <= G x | F y";
    case Law::DunnSecondPast: return "H (x | y) <= H x | P y";
  }
  return "?";
}

inline Law parse_law(std::string_view name) {
  for (Law l : kAllLaws)
    if (name == law_name(l)) return l;
  throw AlgebraError(AlgebraError::Kind::UnknownLaw, "unknown law '" + std::string(name) + "'");
}

/// Comma-separated law names; the groups "gc", "h2gc" (= gc) and "h2gc+fs" (= every core law) are accepted.
inline std::vector<Law> parse_law_set(std::string_view text) {
  std::vector<Law> out;
  const auto add = [&out](Law l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "gc" || item == "h2gc") {
      for (Law l : gc_laws()) add(l);
    } else if (item == "h2gc+fs") {
      for (Law l : core_laws()) add(l);
    } else if (!item.empty()) {
      add(parse_law(item));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct LawVerdict {
  Law law;
  bool holds = true;
  std::vector<Element> witness;  // falsifying (x) or (x, y); empty for constant laws
  Element lhs = 0, rhs = 0;      // both sides at the witness
};

class LawReport {
 public:
  LawReport() = default;
  explicit LawReport(std::vector<LawVerdict> v) : verdicts_(std::move(v)) {}

  const std::vector<LawVerdict>& verdicts() const { return verdicts_; }

  const LawVerdict& at(Law law) const {
    for (const auto& v : verdicts_)
      if (v.law == law) return v;
    throw AlgebraError(AlgebraError::Kind::UnknownLaw, std::string("law not in report: ") + law_name(law));
  }
  bool holds(Law law) const { return at(law).holds; }
  bool holds_all(const std::vector<Law>& laws) const {
    return std::all_of(laws.begin(), laws.end(), [this](Law l) { return holds(l); });
  }

  bool h2gc() const { return holds_all(gc_laws()); }
  bool h2gc_fs() const { return h2gc() && holds_all({Law::Fs1, Law::Fs2, Law::Fs3, Law::Fs4}); }
  /// Every core law holds.
  bool all_green() const { return holds_all(core_laws()); }

 private:
  std::vector<LawVerdict> verdicts_;
};

// ---------------------------------------------------------------------------
// Algebras with operators
// ---------------------------------------------------------------------------

class AlgebraWithOps;
inline LawReport check_laws(const AlgebraWithOps& alg, const std::vector<Law>& laws);

class AlgebraWithOps {
 public:
  AlgebraWithOps() = default;
  AlgebraWithOps(HeytingAlgebra base, OperatorTables ops, std::string name = {})
      : base_(std::move(base)), ops_(std::move(ops)), name_(std::move(name)) {
    const std::size_t n = base_.size();
    const auto check = [n](const UnaryTable& t, const char* which) {
      if (t.size() != n) {
        throw AlgebraError(AlgebraError::Kind::TableSize,
                           std::string(which) + " table has " + std::to_string(t.size()) + " entries; carrier has " + std::to_string(n));
      }
      for (std::size_t i = 0; i < n; ++i)
        if (t[i] >= n) {
          throw AlgebraError(AlgebraError::Kind::IndexOutOfRange,
                             std::string(which) + " maps element " + std::to_string(i) + " outside the carrier",
                             {static_cast<Element>(i)});
        }
    };
    check(ops_.dia, "dia");
    check(ops_.box, "box");
    check(ops_.bdia, "bdia");
    check(ops_.bbox, "bbox");
    report_ = check_laws(*this, {kAllLaws.begin(), kAllLaws.end()});
  }

  const HeytingAlgebra& base() const { return base_; }
  const OperatorTables& ops() const { return ops_; }
  const LawReport& report() const { return report_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  std::size_t size() const { return base_.size(); }

  Element dia(Element x) const { return ops_.dia[x]; }
  Element box(Element x) const { return ops_.box[x]; }
  Element bdia(Element x) const { return ops_.bdia[x]; }
  Element bbox(Element x) const { return ops_.bbox[x]; }

  Element apply(Connective op, Element x) const {
    switch (op) {
      case Connective::Dia: return dia(x);
      case Connective::Box: return box(x);
      case Connective::BDia: return bdia(x);
      case Connective::BBox: return bbox(x);
      default: throw std::invalid_argument("AlgebraWithOps::apply: not a modal connective");
    }
  }

  friend bool operator==(const AlgebraWithOps& a, const AlgebraWithOps& b) {
    return a.base_ == b.base_ && a.ops_ == b.ops_;
  }

 private:
  HeytingAlgebra base_;
  OperatorTables ops_;
  std::string name_;
  LawReport report_;
};

/// Attaches operator tables and evaluates every law; the report is available via report().
inline AlgebraWithOps attach_ops(HeytingAlgebra base, OperatorTables tables, std::string name = {}) {
  return AlgebraWithOps(std::move(base), std::move(tables), std::move(name));
}

inline AlgebraWithOps with_identity_ops(const HeytingAlgebra& base) {
  return attach_ops(base, identity_tables(base.size()), "identity expansion");
}

namespace detail {

struct LawScan {
  const AlgebraWithOps& a;
  const HeytingAlgebra& h;
  const std::vector<Element>& order;

  LawVerdict unary_leq(Law law, const std::function<Element(Element)>& lhs, const std::function<Element(Element)>& rhs) const {
    for (Element x : order) {
      const Element l = lhs(x), r = rhs(x);
      if (!h.leq(l, r)) return {law, false, {x}, l, r};
    }
    return {law, true, {}, 0, 0};
  }

  LawVerdict binary(Law law, bool equality, const std::function<Element(Element, Element)>& lhs,
                    const std::function<Element(Element, Element)>& rhs) const {
    for (Element x : order)
      for (Element y : order) {
        const Element l = lhs(x, y), r = rhs(x, y);
        if (equality ? l != r : !h.leq(l, r)) return {law, false, {x, y}, l, r};
      }
    return {law, true, {}, 0, 0};
  }

  LawVerdict constant(Law law, Element l, Element r) const {
    if (l != r) return {law, false, {}, l, r};
    return {law, true, {}, 0, 0};
  }

  LawVerdict adjunction(Law law, const UnaryTable& lower, const UnaryTable& upper) const {
    for (Element x : order)
      for (Element y : order)
        if (h.leq(lower[x], y) != h.leq(x, upper[y])) return {law, false, {x, y}, lower[x], upper[y]};
    return {law, true, {}, 0, 0};
  }
};

}  // namespace detail

inline LawVerdict check_law(const AlgebraWithOps& a, Law law) {
  const HeytingAlgebra& h = a.base();
  const detail::LawScan s{a, h, h.search_order()};
  const auto& o = a.ops();
  const auto J = [&h](Element x, Element y) { return h.join(x, y); };
  const auto M = [&h](Element x, Element y) { return h.meet(x, y); };
  const auto I = [&h](Element x, Element y) { return h.imp(x, y); };
  switch (law) {
    case Law::GcDiaBbox: return s.adjunction(law, o.dia, o.bbox);
    case Law::GcBdiaBox: return s.adjunction(law, o.bdia, o.box);
    case Law::DiaNormal: return s.constant(law, o.dia[h.bottom()], h.bottom());
    case Law::BdiaNormal: return s.constant(law, o.bdia[h.bottom()], h.bottom());
    case Law::BoxConormal: return s.constant(law, o.box[h.top()], h.top());
    case Law::BboxConormal: return s.constant(law, o.bbox[h.top()], h.top());
    case Law::DiaAdditive:
      return s.binary(law, true, [&](Element x, Element y) { return o.dia[J(x, y)]; },
                      [&](Element x, Element y) { return J(o.dia[x], o.dia[y]); });
    case Law::BdiaAdditive:
      return s.binary(law, true, [&](Element x, Element y) { return o.bdia[J(x, y)]; },
                      [&](Element x, Element y) { return J(o.bdia[x], o.bdia[y]); });
    case Law::BoxMultiplicative:
      return s.binary(law, true, [&](Element x, Element y) { return o.box[M(x, y)]; },
                      [&](Element x, Element y) { return M(o.box[x], o.box[y]); });
    case Law::BboxMultiplicative:
      return s.binary(law, true, [&](Element x, Element y) { return o.bbox[M(x, y)]; },
                      [&](Element x, Element y) { return M(o.bbox[x], o.bbox[y]); });
    case Law::Br1: return s.unary_leq(law, [](Element x) { return x; }, [&](Element x) { return o.bbox[o.dia[x]]; });
    case Law::Br2: return s.unary_leq(law, [&](Element x) { return o.dia[o.bbox[x]]; }, [](Element x) { return x; });
    case Law::Br3: return s.unary_leq(law, [](Element x) { return x; }, [&](Element x) { return o.box[o.bdia[x]]; });
    case Law::Br4: return s.unary_leq(law, [&](Element x) { return o.bdia[o.box[x]]; }, [](Element x) { return x; });
    case Law::Fs1:
      return s.binary(law, false, [&](Element x, Element y) { return o.dia[I(x, y)]; },
                      [&](Element x, Element y) { return I(o.box[x], o.dia[y]); });
    case Law::Fs2:
      return s.binary(law, false, [&](Element x, Element y) { return I(o.dia[x], o.box[y]); },
                      [&](Element x, Element y) { return o.box[I(x, y)]; });
    case Law::Fs3:
      return s.binary(law, false, [&](Element x, Element y) { return o.bdia[I(x, y)]; },
                      [&](Element x, Element y) { return I(o.bbox[x], o.bdia[y]); });
    case Law::Fs4:
      return s.binary(law, false, [&](Element x, Element y) { return I(o.bdia[x], o.bbox[y]); },
                      [&](Element x, Element y) { return o.bbox[I(x, y)]; });
    case Law::D1:
      return s.binary(law, false, [&](Element x, Element y) { return M(o.dia[x], o.box[y]); },
                      [&](Element x, Element y) { return o.dia[M(x, y)]; });
    case Law::D2:
      return s.binary(law, false, [&](Element x, Element y) { return M(o.bdia[x], o.bbox[y]); },
                      [&](Element x, Element y) { return o.bdia[M(x, y)]; });
    case Law::DunnSecond:
      return s.binary(law, false, [&](Element x, Element y) { return o.box[J(x, y)]; },
                      [&](Element x, Element y) { return J(o.box[x], o.dia[y]); });
    case Law::DunnSecondPast:
      return s.binary(law, false, [&](Element x, Element y) { return o.bbox[J(x, y)]; },
                      [&](Element x, Element y) { return J(o.bbox[x], o.bdia[y]); });
  }
  throw AlgebraError(AlgebraError::Kind::UnknownLaw, "unknown law");
}

inline LawReport check_laws(const AlgebraWithOps& alg, const std::vector<Law>& laws) {
  std::vector<LawVerdict> v;
  v.reserve(laws.size());
  for (Law l : laws) v.push_back(check_law(alg, l));
  return LawReport(std::move(v));
}

// ---------------------------------------------------------------------------
// Adjoints and Galois pairs
// ---------------------------------------------------------------------------

enum class AdjointSide {
  Lower,  // the given map is the lower adjoint; its upper adjoint is returned
  Upper,  // the given map is the upper adjoint; its lower adjoint is returned
};

inline UnaryTable adjoint_of(const HeytingAlgebra& h, const UnaryTable& f, AdjointSide side) {
  const std::size_t n = h.size();
  if (f.size() != n) throw AlgebraError(AlgebraError::Kind::TableSize, "map size does not match carrier");
  for (Element x = 0; x < n; ++x)
    if (f[x] >= n) throw AlgebraError(AlgebraError::Kind::IndexOutOfRange, "map value outside the carrier", {x});
  UnaryTable g(n);
  if (side == AdjointSide::Lower) {
    if (f[h.bottom()] != h.bottom()) throw AlgebraError(AlgebraError::Kind::NotNormal, "map does not send 0 to 0");
    for (Element x : h.search_order())
      for (Element y : h.search_order())
        if (f[h.join(x, y)] != h.join(f[x], f[y])) {
          throw AlgebraError(AlgebraError::Kind::NotJoinPreserving, "map does not preserve the join of " + h.name(x) + ", " + h.name(y), {x, y});
        }
    // g(y) = max {x | f(x) <= y}; the join of that set belongs to it because f preserves joins
    for (Element y = 0; y < n; ++y) {
      Element acc = h.bottom();
      for (Element x = 0; x < n; ++x)
        if (h.leq(f[x], y)) acc = h.join(acc, x);
      g[y] = acc;
    }
  } else {
    if (f[h.top()] != h.top()) throw AlgebraError(AlgebraError::Kind::NotNormal, "map does not send 1 to 1");
    for (Element x : h.search_order())
      for (Element y : h.search_order())
        if (f[h.meet(x, y)] != h.meet(f[x], f[y])) {
          throw AlgebraError(AlgebraError::Kind::NotMeetPreserving, "map does not preserve the meet of " + h.name(x) + ", " + h.name(y), {x, y});
        }
    for (Element x = 0; x < n; ++x) {
      Element acc = h.top();
      for (Element y = 0; y < n; ++y)
        if (h.leq(x, f[y])) acc = h.meet(acc, y);
      g[x] = acc;
    }
  }
  return g;
}

struct GcPair {
  UnaryTable lower;
  UnaryTable upper;

  friend bool operator==(const GcPair&, const GcPair&) = default;
};

/// Every join-preserving normal map with its upper adjoint, ordered by the lower table.
/// A join-preserving map on a finite distributive lattice is fixed by its monotone
/// restriction to the join-irreducibles, so those restrictions are enumerated.
inline std::vector<GcPair> enumerate_gc_pairs(const HeytingAlgebra& h) {
  const std::size_t n = h.size();
  const std::vector<Element> irr = h.join_irreducibles();
  std::vector<GcPair> out;
  std::vector<Element> choice(irr.size(), 0);
  const auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == irr.size()) {
      UnaryTable f(n, h.bottom());
      for (Element x = 0; x < n; ++x)
        for (std::size_t i = 0; i < irr.size(); ++i)
          if (h.leq(irr[i], x)) f[x] = h.join(f[x], choice[i]);
      out.push_back({f, adjoint_of(h, f, AdjointSide::Lower)});
      return;
    }
    for (Element v = 0; v < n; ++v) {
      bool monotone = true;
      for (std::size_t i = 0; i < k && monotone; ++i) {
        if (h.leq(irr[i], irr[k]) && !h.leq(choice[i], v)) monotone = false;
        if (h.leq(irr[k], irr[i]) && !h.leq(v, choice[i])) monotone = false;
      }
      if (!monotone) continue;
      choice[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const GcPair& a, const GcPair& b) { return a.lower < b.lower; });
  return out;
}

/// ◇ and ■ from the first pair, ⧫ and □ from the second.
inline OperatorTables tables_from_pairs(const GcPair& future, const GcPair& past) {
  return {future.lower, past.upper, past.lower, future.upper};
}

// ---------------------------------------------------------------------------
// Evaluation and validity
// ---------------------------------------------------------------------------

/// Evaluates a compiled formula; slots[i] is the value of program variable i.
inline Element evaluate_compiled(const AlgebraWithOps& a, const CompiledFormula& c, std::span<const Element> slots,
                                 std::vector<Element>& stack) {
  const HeytingAlgebra& h = a.base();
  stack.clear();
  for (const auto& ins : c.program) {
    switch (ins.op) {
      case Connective::Var: stack.push_back(slots[ins.slot]); break;
      case Connective::Top: stack.push_back(h.top()); break;
      case Connective::Bot: stack.push_back(h.bottom()); break;
      case Connective::Not: stack.back() = h.neg(stack.back()); break;
      case Connective::Dia: stack.back() = a.dia(stack.back()); break;
      case Connective::Box: stack.back() = a.box(stack.back()); break;
      case Connective::BDia: stack.back() = a.bdia(stack.back()); break;
      case Connective::BBox: stack.back() = a.bbox(stack.back()); break;
      default: {
        const Element r = stack.back();
        stack.pop_back();
        const Element l = stack.back();
        switch (ins.op) {
          case Connective::And: stack.back() = h.meet(l, r); break;
          case Connective::Or: stack.back() = h.join(l, r); break;
          case Connective::Imp: stack.back() = h.imp(l, r); break;
          default: stack.back() = h.meet(h.imp(l, r), h.imp(r, l)); break;
        }
      }
    }
  }
  return stack.back();
}

namespace detail {
inline std::vector<Element> bind_slots(const CompiledFormula& c, const Valuation& v) {
  std::vector<Element> slots;
  for (const auto& name : c.variables) {
    auto it = v.find(name);
    if (it == v.end()) throw AlgebraError(AlgebraError::Kind::UnboundVariable, "variable '" + name + "' has no value");
    slots.push_back(it->second);
  }
  return slots;
}
}  // namespace detail

inline Element evaluate(const AlgebraWithOps& a, const Valuation& v, const Formula& f) {
  const CompiledFormula c = compile(f);
  const std::vector<Element> slots = detail::bind_slots(c, v);
  for (Element e : slots)
    if (e >= a.size()) throw AlgebraError(AlgebraError::Kind::IndexOutOfRange, "valuation value outside the carrier", {e});
  std::vector<Element> stack;
  return evaluate_compiled(a, c, slots, stack);
}

/// Evaluation in a bare Heyting algebra; rejects modal formulas.
inline Element evaluate_propositional(const HeytingAlgebra& h, const Valuation& v, const Formula& f) {
  if (f.has_modality()) {
    throw AlgebraError(AlgebraError::Kind::ModalOperatorPresent, "formula contains a modal operator: " + render_formula(f));
  }
  const auto rec = [&](const Formula& g) { return evaluate_propositional(h, v, g); };
  switch (f.kind()) {
    case Connective::Var: {
      auto it = v.find(f.name());
      if (it == v.end()) throw AlgebraError(AlgebraError::Kind::UnboundVariable, "variable '" + f.name() + "' has no value");
      return it->second;
    }
    case Connective::Top: return h.top();
    case Connective::Bot: return h.bottom();
    case Connective::Not: return h.neg(rec(f.operand()));
    case Connective::And: return h.meet(rec(f.lhs()), rec(f.rhs()));
    case Connective::Or: return h.join(rec(f.lhs()), rec(f.rhs()));
    case Connective::Imp: return h.imp(rec(f.lhs()), rec(f.rhs()));
    case Connective::Iff: {
      const Element l = rec(f.lhs()), r = rec(f.rhs());
      return h.meet(h.imp(l, r), h.imp(r, l));
    }
    default: break;
  }
  return h.bottom();
}

struct ValidityResult {
  bool valid = true;
  Valuation countervaluation;  // first falsifying valuation, when not valid
  Element value = 0;           // formula value under it
  std::uint64_t valuations_checked = 0;
};

inline constexpr std::size_t kDefaultVariableCap = 4;

/// Calls visit(slots) for every assignment of `k` variables, lexicographic in the
/// algebra's search order (first variable slowest); stops when visit returns false.
template <class Visit>
bool for_each_assignment(const HeytingAlgebra& h, std::size_t k, Visit&& visit) {
  const std::vector<Element>& order = h.search_order();
  std::vector<std::size_t> pos(k, 0);
  std::vector<Element> slots(k, order[0]);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) slots[i] = order[pos[i]];
    if (!visit(std::span<const Element>(slots))) return false;
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++pos[i] < order.size()) break;
      pos[i] = 0;
      if (i == 0) return true;
    }
    if (k == 0) return true;
  }
}

inline ValidityResult algebra_validity(const AlgebraWithOps& a, const Formula& f, std::size_t var_cap = kDefaultVariableCap) {
  const CompiledFormula c = compile(f);
  if (c.variables.size() > var_cap) {
    throw AlgebraError(AlgebraError::Kind::CapExceeded,
                       "formula has " + std::to_string(c.variables.size()) + " variables; cap is " + std::to_string(var_cap));
  }
  ValidityResult r;
  std::vector<Element> stack;
  const Element top = a.base().top();
  for_each_assignment(a.base(), c.variables.size(), [&](std::span<const Element> slots) {
    ++r.valuations_checked;
    const Element val = evaluate_compiled(a, c, slots, stack);
    if (val == top) return true;
    r.valid = false;
    r.value = val;
    for (std::size_t i = 0; i < slots.size(); ++i) r.countervaluation[c.variables[i]] = slots[i];
    return false;
  });
  return r;
}

/// Validity in a bare Heyting algebra via the propositional evaluator.
inline ValidityResult propositional_validity(const HeytingAlgebra& h, const Formula& f, std::size_t var_cap = kDefaultVariableCap) {
  const std::vector<std::string> vars = variables_of(f);
  if (vars.size() > var_cap) {
    throw AlgebraError(AlgebraError::Kind::CapExceeded,
                       "formula has " + std::to_string(vars.size()) + " variables; cap is " + std::to_string(var_cap));
  }
  ValidityResult r;
  for_each_assignment(h, vars.size(), [&](std::span<const Element> slots) {
    ++r.valuations_checked;
    Valuation v;
    for (std::size_t i = 0; i < slots.size(); ++i) v[vars[i]] = slots[i];
    const Element val = evaluate_propositional(h, v, f);
    if (val == h.top()) return true;
    r.valid = false;
    r.value = val;
    r.countervaluation = std::move(v);
    return false;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Intermediate-logic identities
// ---------------------------------------------------------------------------

struct Identity {
  std::string name;
  Formula formula;
};

inline Identity prelinearity() { return {"prelinearity", parse_formula("(p -> q) | (q -> p)")}; }
inline Identity peirce() { return {"peirce", parse_formula("((p -> q) -> p) -> p")}; }
inline Identity excluded_middle() { return {"excluded_middle", parse_formula("p | ~p")}; }
inline Identity custom_identity(std::string name, const Formula& f) { return {std::move(name), f}; }

inline ValidityResult check_intermediate_identity(const AlgebraWithOps& a, const Identity& id, std::size_t var_cap = kDefaultVariableCap) {
  return algebra_validity(a, id.formula, var_cap);
}

inline ValidityResult check_intermediate_identity(const HeytingAlgebra& h, const Identity& id, std::size_t var_cap = kDefaultVariableCap) {
  return algebra_validity(with_identity_ops(h), id.formula, var_cap);
}

inline std::string format_valuation(const HeytingAlgebra& h, const Valuation& v) {
  std::string out;
  for (const auto& [name, e] : v) {
    if (!out.empty()) out += ", ";
    out += name + "=" + h.name(e);
  }
  return out;
}

}  // namespace tenselab
