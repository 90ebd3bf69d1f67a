#pragma once

// Hilbert-style proof checking for IK_t, Int2GC+FS and relatives, and a term-level builder that
// compiles natural-deduction style derivations into plain Hilbert steps via the deduction theorem.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tenselab/syntax.hpp"

namespace tenselab {

class ProofError : public std::runtime_error {
 public:
  enum class Kind {
    UnknownSystem,
    UnknownAxiom,
    UnknownRule,
    UnknownLemma,
    NotAvailable,
    BadSubstitution,
    BadHypothesis,
    ShapeMismatch,
    ForwardReference,
    FormulaMismatch,
    TheoremMismatch,
    NotSchematic,
    DuplicateId,
    EmptyScript,
    OpenAssumption,
  };

  ProofError(Kind kind, std::size_t step, std::string message)
      : std::runtime_error(step ? "step " + std::to_string(step) + ": " + message : message), kind_(kind), step_(step) {}
  Kind kind() const { return kind_; }
  /// 1-based step number; 0 for script-level problems.
  std::size_t step() const { return step_; }

 private:
  Kind kind_;
  std::size_t step_;
};

inline const char* proof_error_name(ProofError::Kind k) {
  switch (k) {
    case ProofError::Kind::UnknownSystem: return "UnknownSystem";
    case ProofError::Kind::UnknownAxiom: return "UnknownAxiom";
    case ProofError::Kind::UnknownRule: return "UnknownRule";
    case ProofError::Kind::UnknownLemma: return "UnknownLemma";
    case ProofError::Kind::NotAvailable: return "NotAvailable";
    case ProofError::Kind::BadSubstitution: return "BadSubstitution";
    case ProofError::Kind::BadHypothesis: return "BadHypothesis";
    case ProofError::Kind::ShapeMismatch: return "ShapeMismatch";
    case ProofError::Kind::ForwardReference: return "ForwardReference";
    case ProofError::Kind::FormulaMismatch: return "FormulaMismatch";
    case ProofError::Kind::TheoremMismatch: return "TheoremMismatch";
    case ProofError::Kind::NotSchematic: return "NotSchematic";
    case ProofError::Kind::DuplicateId: return "DuplicateId";
    case ProofError::Kind::EmptyScript: return "EmptyScript";
    case ProofError::Kind::OpenAssumption: return "OpenAssumption";
  }
  return "?";
}

struct AxiomSchema {
  std::string id;
  std::string label;
  Formula schema;
};

struct InferenceRule {
  std::string id;
  std::string label;
  std::vector<Formula> premises;
  Formula conclusion;
};

struct System {
  std::string name;
  std::vector<std::string> axioms;
  std::vector<std::string> rules;
};

struct Step {
  enum class Kind { Axiom, Rule, Lemma, Hypothesis };
  Kind kind = Kind::Axiom;
  std::string id;              // axiom, rule or lemma id
  Substitution subst;          // metavariable -> formula
  std::vector<std::size_t> from;  // 1-based premise steps (rules)
  std::size_t hypothesis = 0;  // 1-based (hypothesis steps)
  std::optional<Formula> formula;  // stated result, checked when present
};

struct ProofScript {
  std::string id;
  std::string system;
  std::vector<std::string> extra_axioms;
  std::vector<Formula> premises;  // nonempty for derived rules
  Formula theorem;
  std::vector<Step> steps;
  std::string note;
};

struct CheckedTheorem {
  std::string id;
  std::string system;
  std::vector<Formula> premises;
  Formula theorem;
  std::set<std::string> uses;  // "axiom:ID" and "rule:ID" entries, transitively
  std::size_t steps = 0;
  std::string note;

  bool is_rule() const { return !premises.empty(); }
};

inline std::vector<std::string> metavariables_of(const Formula& f) {
  std::vector<std::string> out;
  for (auto& v : variables_of(f))
    if (is_metavariable_name(v)) out.push_back(v);
  return out;
}

inline bool is_schematic(const Formula& f) {
  for (auto& v : variables_of(f))
    if (!is_metavariable_name(v)) return false;
  return true;
}

/// Renames metavariables to fresh ordinary variables p, q, r, s, ... (in sorted order).
inline Formula instantiate_metavariables(const Formula& f) {
  const auto all = variables_of(f);
  std::set<std::string> taken(all.begin(), all.end());
  Substitution s;
  std::size_t next = 0;
  static const char* pool[] = {"p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"};
  for (const auto& m : metavariables_of(f)) {
    std::string name;
    do {
      name = next < std::size(pool) ? pool[next] : "p" + std::to_string(next);
      ++next;
    } while (taken.count(name));
    taken.insert(name);
    s[m] = Formula::var(name);
  }
  return substitute(f, s);
}

namespace detail {

inline bool match_all(const std::vector<Formula>& patterns, const std::vector<Formula>& targets, Substitution& binding) {
  for (std::size_t i = 0; i < patterns.size(); ++i)
    if (!match_pattern(patterns[i], targets[i], binding)) return false;
  return true;
}

}  // namespace detail

/// Fits premise formulas to a rule's premise shapes; tries the given order first, then every other order.
inline std::optional<Substitution> fit_rule(const std::vector<Formula>& shapes, std::vector<Formula> given, const Substitution& seed) {
  std::vector<std::size_t> perm(given.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    std::vector<Formula> ordered;
    for (std::size_t i : perm) ordered.push_back(given[i]);
    Substitution b = seed;
    if (detail::match_all(shapes, ordered, b)) return b;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

class ProofLibrary {
 public:
  ProofLibrary() { install_builtins(); }

  const std::map<std::string, AxiomSchema>& axioms() const { return axioms_; }
  const std::map<std::string, InferenceRule>& rules() const { return rules_; }
  const std::vector<System>& systems() const { return systems_; }
  const std::map<std::string, CheckedTheorem>& entries() const { return entries_; }
  const std::vector<std::string>& order() const { return order_; }

  const AxiomSchema* axiom(const std::string& id) const {
    auto it = axioms_.find(id);
    return it == axioms_.end() ? nullptr : &it->second;
  }
  const InferenceRule* rule(const std::string& id) const {
    auto it = rules_.find(id);
    return it == rules_.end() ? nullptr : &it->second;
  }
  const CheckedTheorem* entry(const std::string& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const System* system(const std::string& name) const {
    for (const auto& s : systems_)
      if (s.name == name) return &s;
    auto alias = aliases_.find(name);
    if (alias != aliases_.end()) return system(alias->second);
    return nullptr;
  }

  /// Axioms and primitive rules usable by a script in `system` with the extra axioms added.
  std::set<std::string> available(const std::string& system_name, const std::vector<std::string>& extra) const {
    const System* s = system(system_name);
    if (!s) throw ProofError(ProofError::Kind::UnknownSystem, 0, "unknown system '" + system_name + "'");
    std::set<std::string> out;
    for (const auto& a : s->axioms) out.insert("axiom:" + a);
    for (const auto& a : extra) {
      if (!axiom(a)) throw ProofError(ProofError::Kind::UnknownAxiom, 0, "unknown extra axiom '" + a + "'");
      out.insert("axiom:" + a);
    }
    for (const auto& r : s->rules) out.insert("rule:" + r);
    return out;
  }

  /// Premise shapes and conclusion of a primitive or registered derived rule.
  std::optional<std::pair<std::vector<Formula>, Formula>> rule_shape(const std::string& id) const {
    if (const InferenceRule* r = rule(id)) return std::make_pair(r->premises, r->conclusion);
    if (const CheckedTheorem* e = entry(id); e && e->is_rule()) return std::make_pair(e->premises, e->theorem);
    return std::nullopt;
  }

  /// Validates every step; throws ProofError at the first bad one.
  CheckedTheorem check(const ProofScript& script) const;

  /// Checks and stores the script so later scripts may cite it.
  const CheckedTheorem& add(const ProofScript& script) {
    if (entries_.count(script.id) || rules_.count(script.id) || axioms_.count(script.id))
      throw ProofError(ProofError::Kind::DuplicateId, 0, "id '" + script.id + "' is already registered");
    CheckedTheorem t = check(script);
    order_.push_back(script.id);
    return entries_[script.id] = std::move(t);
  }

 private:
  void axiom_(std::string id, std::string label, const char* text) { axioms_[id] = {id, std::move(label), parse_schema(text)}; }
  void rule_(std::string id, std::string label, std::vector<const char*> premises, const char* conclusion) {
    InferenceRule r{id, std::move(label), {}, parse_schema(conclusion)};
    for (const char* p : premises) r.premises.push_back(parse_schema(p));
    rules_[id] = std::move(r);
  }
  void install_builtins();

  std::map<std::string, AxiomSchema> axioms_;
  std::map<std::string, InferenceRule> rules_;
  std::vector<System> systems_;
  std::map<std::string, std::string> aliases_;
  std::map<std::string, CheckedTheorem> entries_;
  std::vector<std::string> order_;
};

inline const std::vector<std::string>& int_basis_ids() {
  static const std::vector<std::string> ids{"K",   "S",    "AND_E1", "AND_E2", "AND_I",  "OR_I1",  "OR_I2", "OR_E",
                                            "EFQ", "NEG_E", "NEG_I", "TOP",    "IFF_E1", "IFF_E2", "IFF_I"};
  return ids;
}

/// Ewald's axioms (2) to (11'), in the order (2), (2'), (3), (3'), ...
inline const std::vector<std::string>& ewald_ids() {
  static const std::vector<std::string> ids{"E2", "E2'", "E3", "E3'", "E4",  "E4'",  "E5",  "E5'",  "E6",  "E6'",
                                            "E7", "E7'", "E8", "E8'", "E9", "E9'", "E10", "E10'", "E11", "E11'"};
  return ids;
}

inline void ProofLibrary::install_builtins() {
  axiom_("K", "implication K", "A -> (B -> A)");
  axiom_("S", "implication S", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))");
  axiom_("AND_E1", "conjunction elimination", "A & B -> A");
  axiom_("AND_E2", "conjunction elimination", "A & B -> B");
  axiom_("AND_I", "conjunction introduction", "A -> (B -> A & B)");
  axiom_("OR_I1", "disjunction introduction", "A -> A | B");
  axiom_("OR_I2", "disjunction introduction", "B -> A | B");
  axiom_("OR_E", "disjunction elimination", "(A -> C) -> ((B -> C) -> (A | B -> C))");
  axiom_("EFQ", "ex falso", "bot -> A");
  axiom_("NEG_E", "negation as implication", "~A -> (A -> bot)");
  axiom_("NEG_I", "negation as implication", "(A -> bot) -> ~A");
  axiom_("TOP", "truth", "top");
  axiom_("IFF_E1", "biconditional elimination", "(A <-> B) -> (A -> B)");
  axiom_("IFF_E2", "biconditional elimination", "(A <-> B) -> (B -> A)");
  axiom_("IFF_I", "biconditional introduction", "(A -> B) -> ((B -> A) -> (A <-> B))");
  axiom_("PEIRCE", "Peirce's law", "((A -> B) -> A) -> A");

  axiom_("FS1", "(FS1)", "F (A -> B) -> (G A -> F B)");
  axiom_("FS2", "(FS2)", "P (A -> B) -> (H A -> P B)");
  axiom_("FS3", "(FS3)", "(F A -> G B) -> G (A -> B)");
  axiom_("FS4", "(FS4)", "(P A -> H B) -> H (A -> B)");

  axiom_("BR1", "(BR1)", "A -> H F A");
  axiom_("BR2", "(BR2)", "F H A -> A");
  axiom_("BR3", "(BR3)", "A -> G P A");
  axiom_("BR4", "(BR4)", "P G A -> A");

  axiom_("IK1", "(IK1)", "F (A | B) -> F A | F B");
  axiom_("IK2", "(IK2)", "G A & G B -> G (A & B)");
  axiom_("IK3", "(IK3)", "~F bot");
  axiom_("IK4", "(IK4)", "F (A -> B) -> (G A -> F B)");
  axiom_("IK5", "(IK5)", "(F A -> G B) -> G (A -> B)");
  axiom_("IK1'", "(IK1')", "P (A | B) -> P A | P B");
  axiom_("IK2'", "(IK2')", "H A & H B -> H (A & B)");
  axiom_("IK3'", "(IK3')", "~P bot");
  axiom_("IK4'", "(IK4')", "P (A -> B) -> (H A -> P B)");
  axiom_("IK5'", "(IK5')", "(P A -> H B) -> H (A -> B)");

  axiom_("E2", "(2)", "G (A -> B) -> (G A -> G B)");
  axiom_("E2'", "(2')", "H (A -> B) -> (H A -> H B)");
  axiom_("E3", "(3)", "G (A & B) <-> G A & G B");
  axiom_("E3'", "(3')", "H (A & B) <-> H A & H B");
  axiom_("E4", "(4)", "F (A | B) <-> F A | F B");
  axiom_("E4'", "(4')", "P (A | B) <-> P A | P B");
  axiom_("E5", "(5)", "G (A -> B) -> (F A -> F B)");
  axiom_("E5'", "(5')", "H (A -> B) -> (P A -> P B)");
  axiom_("E6", "(6)", "G A & F B -> F (A & B)");
  axiom_("E6'", "(6')", "H A & P B -> P (A & B)");
  axiom_("E7", "(7)", "G ~A -> ~F A");
  axiom_("E7'", "(7')", "H ~A -> ~P A");
  axiom_("E8", "(8)", "F H A -> A");
  axiom_("E8'", "(8')", "P G A -> A");
  axiom_("E9", "(9)", "A -> H F A");
  axiom_("E9'", "(9')", "A -> G P A");
  axiom_("E10", "(10)", "(F A -> G B) -> G (A -> B)");
  axiom_("E10'", "(10')", "(P A -> H B) -> H (A -> B)");
  axiom_("E11", "(11)", "F (A -> B) -> (G A -> F B)");
  axiom_("E11'", "(11')", "P (A -> B) -> (H A -> P B)");

  rule_("MP", "(MP)", {"A", "A -> B"}, "B");
  rule_("GC_HF", "(GC ■◇)", {"A -> H B"}, "F A -> B");
  rule_("GC_FH", "(GC ◇■)", {"F A -> B"}, "A -> H B");
  rule_("GC_GP", "(GC □⧫)", {"A -> G B"}, "P A -> B");
  rule_("GC_PG", "(GC ⧫□)", {"P A -> B"}, "A -> G B");
  rule_("RG", "(RG)", {"A"}, "G A");
  rule_("RH", "(RH)", {"A"}, "H A");
  rule_("RM_F", "(RM◇)", {"A -> B"}, "F A -> F B");
  rule_("RM_G", "(RM□)", {"A -> B"}, "G A -> G B");
  rule_("RM_P", "(RM⧫)", {"A -> B"}, "P A -> P B");
  rule_("RM_H", "(RM■)", {"A -> B"}, "H A -> H B");

  const auto with = [](std::vector<std::string> base, std::initializer_list<const char*> more) {
    for (const char* m : more) base.push_back(m);
    return base;
  };
  const std::vector<std::string> intb = int_basis_ids();
  systems_.push_back({"Int", intb, {"MP"}});
  systems_.push_back({"Int2GC", intb, {"MP", "GC_HF", "GC_FH", "GC_GP", "GC_PG"}});
  systems_.push_back({"Int2GC+FS", with(intb, {"FS1", "FS2"}), {"MP", "GC_HF", "GC_FH", "GC_GP", "GC_PG"}});
  systems_.push_back({"Cl2GC+FS", with(intb, {"FS1", "FS2", "PEIRCE"}), {"MP", "GC_HF", "GC_FH", "GC_GP", "GC_PG"}});
  std::vector<std::string> ikt = intb;
  for (const auto& e : ewald_ids()) ikt.push_back(e);
  systems_.push_back({"IK_t", ikt, {"MP", "RG", "RH"}});
  systems_.push_back({"IK⊗IK+BR",
                      with(intb, {"IK1", "IK2", "IK3", "IK4", "IK5", "IK1'", "IK2'", "IK3'", "IK4'", "IK5'", "BR1", "BR2",
                                  "BR3", "BR4"}),
                      {"MP", "RG", "RH", "RM_F", "RM_G", "RM_P", "RM_H"}});
  aliases_["IKt"] = "IK_t";
  aliases_["IKxIK+BR"] = "IK⊗IK+BR";
}

inline CheckedTheorem ProofLibrary::check(const ProofScript& script) const {
  const std::set<std::string> avail = available(script.system, script.extra_axioms);
  if (script.steps.empty()) throw ProofError(ProofError::Kind::EmptyScript, 0, "script has no steps");
  if (!script.premises.empty()) {
    for (const auto& p : script.premises)
      if (!is_schematic(p))
        throw ProofError(ProofError::Kind::NotSchematic, 0, "derived rule premise '" + render_formula(p) + "' mentions ordinary variables");
    if (!is_schematic(script.theorem))
      throw ProofError(ProofError::Kind::NotSchematic, 0, "derived rule conclusion mentions ordinary variables");
  }

  CheckedTheorem out{script.id, script.system, script.premises, script.theorem, {}, script.steps.size(), script.note};
  std::vector<Formula> proved;
  const auto require = [&](const std::string& key, std::size_t k, const std::string& what) {
    if (!avail.count(key))
      throw ProofError(ProofError::Kind::NotAvailable, k, what + " is not available in " + script.system);
  };
  const auto check_keys = [](const Substitution& s, const std::vector<std::string>& metas, std::size_t k, const std::string& what) {
    for (const auto& [key, value] : s) {
      if (std::find(metas.begin(), metas.end(), key) == metas.end())
        throw ProofError(ProofError::Kind::BadSubstitution, k, "'" + key + "' is not a metavariable of " + what);
      if (value.empty()) throw ProofError(ProofError::Kind::BadSubstitution, k, "empty formula for '" + key + "'");
    }
  };

  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const Step& st = script.steps[i];
    const std::size_t k = i + 1;
    Formula f;
    switch (st.kind) {
      case Step::Kind::Axiom: {
        const AxiomSchema* ax = axiom(st.id);
        if (!ax) throw ProofError(ProofError::Kind::UnknownAxiom, k, "unknown axiom '" + st.id + "'");
        require("axiom:" + st.id, k, "axiom " + st.id);
        check_keys(st.subst, metavariables_of(ax->schema), k, "axiom " + st.id);
        f = substitute(ax->schema, st.subst);
        out.uses.insert("axiom:" + st.id);
        break;
      }
      case Step::Kind::Hypothesis: {
        if (st.hypothesis == 0 || st.hypothesis > script.premises.size())
          throw ProofError(ProofError::Kind::BadHypothesis, k, "no premise " + std::to_string(st.hypothesis));
        f = script.premises[st.hypothesis - 1];
        break;
      }
      case Step::Kind::Lemma: {
        const CheckedTheorem* e = entry(st.id);
        if (!e) throw ProofError(ProofError::Kind::UnknownLemma, k, "unknown lemma '" + st.id + "'");
        if (e->is_rule())
          throw ProofError(ProofError::Kind::UnknownLemma, k, "'" + st.id + "' is a derived rule; apply it as a rule");
        for (const auto& u : e->uses) require(u, k, "lemma " + st.id + " (uses " + u.substr(u.find(':') + 1) + ")");
        check_keys(st.subst, metavariables_of(e->theorem), k, "lemma " + st.id);
        f = substitute(e->theorem, st.subst);
        out.uses.insert(e->uses.begin(), e->uses.end());
        break;
      }
      case Step::Kind::Rule: {
        auto shape = rule_shape(st.id);
        if (!shape) throw ProofError(ProofError::Kind::UnknownRule, k, "unknown rule '" + st.id + "'");
        if (rule(st.id)) {
          require("rule:" + st.id, k, "rule " + st.id);
          out.uses.insert("rule:" + st.id);
        } else {
          const CheckedTheorem* e = entry(st.id);
          for (const auto& u : e->uses) require(u, k, "derived rule " + st.id + " (uses " + u.substr(u.find(':') + 1) + ")");
          out.uses.insert(e->uses.begin(), e->uses.end());
        }
        const auto& [shapes, conclusion] = *shape;
        if (st.from.size() != shapes.size()) {
          throw ProofError(ProofError::Kind::ShapeMismatch, k,
                           st.id + " takes " + std::to_string(shapes.size()) + " premise(s), got " + std::to_string(st.from.size()));
        }
        std::vector<Formula> given;
        for (std::size_t j : st.from) {
          if (j == 0 || j >= k)
            throw ProofError(ProofError::Kind::ForwardReference, k, "premise " + std::to_string(j) + " is not an earlier step");
          given.push_back(proved[j - 1]);
        }
        std::vector<std::string> metas;
        for (const auto& s : shapes)
          for (const auto& m : metavariables_of(s)) metas.push_back(m);
        for (const auto& m : metavariables_of(conclusion)) metas.push_back(m);
        check_keys(st.subst, metas, k, "rule " + st.id);
        auto binding = fit_rule(shapes, given, st.subst);
        if (!binding) {
          std::string msg = st.id + " does not apply:";
          for (std::size_t j = 0; j < shapes.size(); ++j)
            msg += " premise " + std::to_string(j + 1) + " must have shape " + render_formula(shapes[j]) + ", step " +
                   std::to_string(st.from[j]) + " is " + render_formula(given[j]) + ";";
          msg.pop_back();
          throw ProofError(ProofError::Kind::ShapeMismatch, k, msg);
        }
        for (const auto& m : metavariables_of(conclusion))
          if (!binding->count(m))
            throw ProofError(ProofError::Kind::BadSubstitution, k, st.id + " leaves " + m + " unbound; give it in subst");
        f = substitute(conclusion, *binding);
        break;
      }
    }
    if (st.formula && !(*st.formula == f)) {
      throw ProofError(ProofError::Kind::FormulaMismatch, k,
                       "stated formula " + render_formula(*st.formula) + " differs from derived " + render_formula(f));
    }
    proved.push_back(std::move(f));
  }
  if (!(proved.back() == script.theorem)) {
    throw ProofError(ProofError::Kind::TheoremMismatch, script.steps.size(),
                     "last step proves " + render_formula(proved.back()) + ", not " + render_formula(script.theorem));
  }
  return out;
}

struct CheckResult {
  bool ok = false;
  Formula theorem;
  std::size_t error_step = 0;
  std::optional<ProofError::Kind> error_kind;
  std::string reason;
};

inline CheckResult check_proof(const ProofLibrary& lib, const ProofScript& script) {
  CheckResult r;
  try {
    r.theorem = lib.check(script).theorem;
    r.ok = true;
  } catch (const ProofError& e) {
    r.error_step = e.step();
    r.error_kind = e.kind();
    r.reason = e.what();
  }
  return r;
}

/// Registers a derived rule (a script with premises); returns its id.
inline std::string register_derived_rule(ProofLibrary& lib, const ProofScript& script) {
  if (script.premises.empty()) throw ProofError(ProofError::Kind::ShapeMismatch, 0, "a derived rule needs at least one premise");
  lib.add(script);
  return script.id;
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

class ProofBuilder {
 public:
  using Ref = std::size_t;

  ProofBuilder(const ProofLibrary& lib, std::string system, std::vector<std::string> extra_axioms = {},
               std::vector<Formula> premises = {})
      : lib_(lib), system_(std::move(system)), extra_(std::move(extra_axioms)), premises_(std::move(premises)) {}

  const Formula& formula(Ref r) const { return nodes_[r].f; }

  Ref axiom(const std::string& id, const Substitution& s = {}) {
    const AxiomSchema* ax = lib_.axiom(id);
    if (!ax) throw ProofError(ProofError::Kind::UnknownAxiom, 0, "unknown axiom '" + id + "'");
    return add({Step::Kind::Axiom, id, s, {}, 0, substitute(ax->schema, s), {}});
  }

  Ref lemma(const std::string& id, const Substitution& s = {}) {
    const CheckedTheorem* e = lib_.entry(id);
    if (!e || e->is_rule()) throw ProofError(ProofError::Kind::UnknownLemma, 0, "unknown lemma '" + id + "'");
    return add({Step::Kind::Lemma, id, s, {}, 0, substitute(e->theorem, s), {}});
  }

  Ref hyp(std::size_t k) {
    if (k == 0 || k > premises_.size()) throw ProofError(ProofError::Kind::BadHypothesis, 0, "no premise " + std::to_string(k));
    return add({Step::Kind::Hypothesis, {}, {}, {}, k, premises_[k - 1], {}});
  }

  Ref rule(const std::string& id, std::vector<Ref> from, const Substitution& s = {}) {
    auto shape = lib_.rule_shape(id);
    if (!shape) throw ProofError(ProofError::Kind::UnknownRule, 0, "unknown rule '" + id + "'");
    std::vector<Formula> given;
    for (Ref r : from) given.push_back(nodes_[r].f);
    auto b = fit_rule(shape->first, given, s);
    if (!b) {
      std::string msg = id + " does not apply to";
      for (const auto& g : given) msg += " [" + render_formula(g) + "]";
      throw ProofError(ProofError::Kind::ShapeMismatch, 0, msg);
    }
    std::set<Ref> deps;
    for (Ref r : from) deps.insert(nodes_[r].deps.begin(), nodes_[r].deps.end());
    Node n{Step::Kind::Rule, id, s, std::move(from), 0, substitute(shape->second, *b), std::move(deps)};
    return add(std::move(n));
  }

  Ref mp(Ref minor, Ref major) {
    const Formula& m = nodes_[major].f;
    if (m.kind() != Connective::Imp || !(m.lhs() == nodes_[minor].f)) {
      throw ProofError(ProofError::Kind::ShapeMismatch, 0,
                       "modus ponens on " + render_formula(nodes_[minor].f) + " and " + render_formula(m));
    }
    return rule("MP", {minor, major});
  }

  Ref assume(const Formula& f) {
    Node n{Step::Kind::Hypothesis, "assume", {}, {}, 0, f, {}};
    n.deps.insert(nodes_.size());
    n.assumption = true;
    return add(std::move(n));
  }

  /// Deduction theorem: from body (depending on assumption a) a proof of a -> body.
  Ref discharge(Ref a, Ref body) {
    std::map<Ref, Ref> memo;
    return discharge_(a, body, memo);
  }

  template <class Body>
  Ref suppose(const Formula& f, Body&& body) {
    const Ref a = assume(f);
    return discharge(a, body(a));
  }

  Ref identity(const Formula& a) {
    const Formula aa = Formula::implies(a, a);
    const Ref k1 = axiom("K", {{"A", a}, {"B", aa}});
    const Ref s1 = axiom("S", {{"A", a}, {"B", aa}, {"C", a}});
    const Ref k2 = axiom("K", {{"A", a}, {"B", a}});
    return mp(k2, mp(k1, s1));
  }

  Ref top() { return axiom("TOP"); }
  Ref and_intro(Ref a, Ref b) { return mp(b, mp(a, axiom("AND_I", {{"A", formula(a)}, {"B", formula(b)}}))); }
  Ref and_left(Ref ab) { return mp(ab, axiom("AND_E1", {{"A", formula(ab).lhs()}, {"B", formula(ab).rhs()}})); }
  Ref and_right(Ref ab) { return mp(ab, axiom("AND_E2", {{"A", formula(ab).lhs()}, {"B", formula(ab).rhs()}})); }
  Ref or_left(Ref a, const Formula& b) { return mp(a, axiom("OR_I1", {{"A", formula(a)}, {"B", b}})); }
  Ref or_right(const Formula& a, Ref b) { return mp(b, axiom("OR_I2", {{"A", a}, {"B", formula(b)}})); }
  /// From A | B, A -> C and B -> C conclude C.
  Ref or_elim(Ref ab, Ref ac, Ref bc) {
    const Formula& c = formula(ac).rhs();
    const Ref ax = axiom("OR_E", {{"A", formula(ab).lhs()}, {"B", formula(ab).rhs()}, {"C", c}});
    return mp(ab, mp(bc, mp(ac, ax)));
  }
  Ref efq(Ref bot, const Formula& c) { return mp(bot, axiom("EFQ", {{"A", c}})); }
  Ref neg_elim(Ref na, Ref a) { return mp(a, mp(na, axiom("NEG_E", {{"A", formula(a)}}))); }
  Ref neg_intro(Ref a_bot) { return mp(a_bot, axiom("NEG_I", {{"A", formula(a_bot).lhs()}})); }
  Ref iff_intro(Ref ab, Ref ba) {
    return mp(ba, mp(ab, axiom("IFF_I", {{"A", formula(ab).lhs()}, {"B", formula(ab).rhs()}})));
  }
  Ref iff_left(Ref iff) { return mp(iff, axiom("IFF_E1", {{"A", formula(iff).lhs()}, {"B", formula(iff).rhs()}})); }
  Ref iff_right(Ref iff) { return mp(iff, axiom("IFF_E2", {{"A", formula(iff).lhs()}, {"B", formula(iff).rhs()}})); }
  /// From A -> B and B -> C, A -> C.
  Ref chain(Ref ab, Ref bc) {
    return suppose(formula(ab).lhs(), [&](Ref a) { return mp(mp(a, ab), bc); });
  }

  ProofScript finish(std::string id, Ref conclusion, std::string note = {}) const {
    if (!nodes_[conclusion].deps.empty())
      throw ProofError(ProofError::Kind::OpenAssumption, 0, "conclusion still depends on an assumption");
    ProofScript out{std::move(id), system_, extra_, premises_, nodes_[conclusion].f, {}, std::move(note)};
    std::map<Ref, std::size_t> at;
    std::unordered_map<Formula, std::size_t, FormulaHash> by_formula;
    emit_(conclusion, out.steps, at, by_formula);
    return out;
  }

 private:
  struct Node {
    Step::Kind kind;
    std::string id;
    Substitution subst;
    std::vector<Ref> from;
    std::size_t hypothesis;
    Formula f;
    std::set<Ref> deps;
    bool assumption = false;
  };

  Ref add(Node n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  Ref discharge_(Ref a, Ref t, std::map<Ref, Ref>& memo) {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    const Formula fa = nodes_[a].f;
    Ref out;
    if (!nodes_[t].deps.count(a)) {
      const Formula ft = nodes_[t].f;
      out = mp(t, axiom("K", {{"A", ft}, {"B", fa}}));
    } else if (t == a) {
      out = identity(fa);
    } else if (nodes_[t].kind == Step::Kind::Rule && nodes_[t].id == "MP") {
      const Ref minor = nodes_[t].from[0], major = nodes_[t].from[1];
      const Ref dm = discharge_(a, minor, memo);
      const Ref dj = discharge_(a, major, memo);
      const Formula psi = nodes_[minor].f, phi = nodes_[t].f;
      const Ref s = axiom("S", {{"A", fa}, {"B", psi}, {"C", phi}});
      out = mp(dm, mp(dj, s));
    } else {
      throw ProofError(ProofError::Kind::OpenAssumption, 0,
                       "rule " + nodes_[t].id + " is applied to a formula that depends on the assumption " + render_formula(fa));
    }
    memo[t] = out;
    return out;
  }

  std::size_t emit_(Ref r, std::vector<Step>& steps, std::map<Ref, std::size_t>& at,
                    std::unordered_map<Formula, std::size_t, FormulaHash>& by_formula) const {
    if (auto it = at.find(r); it != at.end()) return it->second;
    const Node& n = nodes_[r];
    if (auto it = by_formula.find(n.f); it != by_formula.end()) return at[r] = it->second;
    Step st;
    st.kind = n.kind;
    st.id = n.id;
    st.subst = n.subst;
    st.hypothesis = n.hypothesis;
    if (n.kind == Step::Kind::Hypothesis) st.id.clear();
    for (Ref c : n.from) st.from.push_back(emit_(c, steps, at, by_formula));
    st.formula = n.f;
    steps.push_back(std::move(st));
    const std::size_t k = steps.size();
    by_formula[n.f] = k;
    return at[r] = k;
  }

  const ProofLibrary& lib_;
  std::string system_;
  std::vector<std::string> extra_;
  std::vector<Formula> premises_;
  std::vector<Node> nodes_;
};

}  // namespace tenselab
