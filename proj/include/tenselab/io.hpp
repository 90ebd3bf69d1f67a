#pragma once

// JSON file formats for algebras, frames, models, fuzzy instances, proof scripts and reports.
//
// Algebra: { "name", "elements": [..], "leq": [[a, b], ..], "ops": { "dia": {x: y}, "box", "bdia", "bbox" } }
//   (order closure taken; ops optional)
// Frame:   { "worlds": [..], "leq": [[w, u], ..], "R": [[w, u], ..] }  (reflexive-transitive closure taken)
// Model:   a frame plus "val": { "p": [worlds] }  (must be up-sets; never repaired)
// Fuzzy:   { "algebra": <file name or inline algebra>, "universe": [..], "relation": { "x,y": grade } }
// Proof:   { "id", "system", "extra_axioms", "premises", "theorem", "steps": [ {"axiom", "subst"}, {"rule", "from", "subst"},
//            {"lemma", "subst"}, {"hyp"} ] }, each step optionally with "formula"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tenselab/algebra.hpp"
#include "tenselab/duality.hpp"
#include "tenselab/fixtures.hpp"
#include "tenselab/frames.hpp"
#include "tenselab/fuzzy.hpp"
#include "tenselab/lattice.hpp"
#include "tenselab/proofs.hpp"
#include "tenselab/search.hpp"
#include "tenselab/syntax.hpp"

namespace tenselab {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  enum class Kind { File, Json, Schema, UnknownName };
  IoError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoError::Kind::File, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError(IoError::Kind::Json, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError(IoError::Kind::File, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw IoError(IoError::Kind::Schema, where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) throw IoError(IoError::Kind::Schema, where + ": expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> strings(const Json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(IoError::Kind::Schema, where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(str(x, where));
  return out;
}

inline std::vector<std::pair<std::string, std::string>> pairs(const Json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(IoError::Kind::Schema, where + ": expected an array of pairs");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw IoError(IoError::Kind::Schema, where + ": each entry must be a pair");
    out.emplace_back(str(p[0], where), str(p[1], where));
  }
  return out;
}

inline Formula formula_field(const Json& j, const std::string& where, bool schema) {
  const std::string text = str(j, where);
  return schema ? parse_schema(text) : parse_formula(text);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Algebras
// ---------------------------------------------------------------------------

struct LoadedAlgebra {
  std::string name;
  HeytingAlgebra base;
  std::optional<AlgebraWithOps> with_ops;

  /// The algebra with operators; throws when the file had no "ops".
  const AlgebraWithOps& ops() const {
    if (!with_ops) throw IoError(IoError::Kind::Schema, "algebra '" + name + "' has no modal operators");
    return *with_ops;
  }
};

inline LoadedAlgebra algebra_from_json(const Json& j) {
  const std::string where = "algebra";
  LoadedAlgebra out;
  out.name = j.contains("name") ? detail::str(j.at("name"), where + ".name") : std::string("algebra");
  const auto names = detail::strings(detail::field(j, "elements", where), where + ".elements");
  const auto leq = j.contains("leq") ? detail::pairs(j.at("leq"), where + ".leq") : std::vector<std::pair<std::string, std::string>>{};
  out.base = from_order(names, leq);
  if (j.contains("ops")) {
    const Json& ops = j.at("ops");
    OperatorTables t{UnaryTable(names.size()), UnaryTable(names.size()), UnaryTable(names.size()), UnaryTable(names.size())};
    const auto load = [&](const char* key, UnaryTable& table) {
      const Json& m = detail::field(ops, key, where + ".ops");
      if (!m.is_object()) throw IoError(IoError::Kind::Schema, where + ".ops." + key + ": expected an object");
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (!m.contains(names[i]))
          throw IoError(IoError::Kind::Schema, where + ".ops." + key + ": no value for '" + names[i] + "'");
        const std::string v = detail::str(m.at(names[i]), where + ".ops." + key);
        auto e = out.base.find(v);
        if (!e) throw IoError(IoError::Kind::UnknownName, where + ".ops." + key + ": unknown element '" + v + "'");
        table[out.base.element(names[i])] = *e;
      }
      for (const auto& [k, v] : m.items())
        if (!out.base.find(k)) throw IoError(IoError::Kind::UnknownName, where + ".ops." + key + ": unknown element '" + k + "'");
    };
    load("dia", t.dia);
    load("box", t.box);
    load("bdia", t.bdia);
    load("bbox", t.bbox);
    out.with_ops = attach_ops(out.base, std::move(t), out.name);
  }
  return out;
}

inline LoadedAlgebra load_algebra(const std::filesystem::path& path) { return algebra_from_json(read_json_file(path)); }

inline Json algebra_to_json(const HeytingAlgebra& h, const OperatorTables* ops, const std::string& name) {
  Json j;
  j["name"] = name;
  j["elements"] = h.names();
  Json leq = Json::array();
  for (const auto& [a, b] : h.covers()) leq.push_back({h.name(a), h.name(b)});
  j["leq"] = leq;
  if (ops) {
    Json o;
    const auto table = [&](const UnaryTable& t) {
      Json m = Json::object();
      for (std::size_t i = 0; i < h.size(); ++i) m[h.name(static_cast<Element>(i))] = h.name(t[i]);
      return m;
    };
    o["dia"] = table(ops->dia);
    o["box"] = table(ops->box);
    o["bdia"] = table(ops->bdia);
    o["bbox"] = table(ops->bbox);
    j["ops"] = o;
  }
  return j;
}

inline Json algebra_to_json(const AlgebraWithOps& a) {
  return algebra_to_json(a.base(), &a.ops(), a.name().empty() ? std::string("algebra") : a.name());
}

// ---------------------------------------------------------------------------
// Frames and models
// ---------------------------------------------------------------------------

inline Frame frame_from_json(const Json& j) {
  const std::string where = "frame";
  const auto names = detail::strings(detail::field(j, "worlds", where), where + ".worlds");
  if (names.empty()) throw FrameError(FrameError::Kind::Empty, "frame has no worlds");
  if (names.size() > kMaxCarrier) throw FrameError(FrameError::Kind::TooLarge, "frame has more than 64 worlds");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second) throw FrameError(FrameError::Kind::DuplicateName, "duplicate world '" + names[i] + "'");
  const auto rel = [&](const char* key, bool required) {
    Relation r(names.size());
    if (!j.contains(key)) {
      if (required) throw IoError(IoError::Kind::Schema, where + ": missing \"" + key + "\"");
      return r;
    }
    for (const auto& [a, b] : detail::pairs(j.at(key), where + "." + key)) {
      auto ia = index.find(a), ib = index.find(b);
      if (ia == index.end() || ib == index.end())
        throw FrameError(FrameError::Kind::UnknownWorld, "unknown world '" + (ia == index.end() ? a : b) + "'");
      r.add(ia->second, ib->second);
    }
    return r;
  };
  return Frame(names, rel("leq", false).reflexive_transitive_closure(), rel("R", true));
}

inline Frame load_frame(const std::filesystem::path& path) { return frame_from_json(read_json_file(path)); }

inline Json relation_to_json(const Frame& f, const Relation& r) {
  Json out = Json::array();
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (r.has(x, y)) out.push_back({f.name(x), f.name(y)});
  return out;
}

/// leq is written as its non-reflexive pairs.
inline Json frame_to_json(const Frame& f) {
  Json j;
  j["worlds"] = f.names();
  Json leq = Json::array();
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (x != y && f.leq().has(x, y)) leq.push_back({f.name(x), f.name(y)});
  j["leq"] = leq;
  j["R"] = relation_to_json(f, f.r());
  return j;
}

inline Json world_set_to_json(const Frame& f, Subset s) {
  Json out = Json::array();
  for (std::size_t w : s.members()) out.push_back(f.name(w));
  return out;
}

inline Json world_valuation_to_json(const Frame& f, const WorldValuation& v) {
  Json out = Json::object();
  for (const auto& [p, s] : v) out[p] = world_set_to_json(f, s);
  return out;
}

inline Model model_from_json(const Json& j) {
  Frame f = frame_from_json(j);
  WorldValuation val;
  if (j.contains("val")) {
    const Json& v = j.at("val");
    if (!v.is_object()) throw IoError(IoError::Kind::Schema, "model.val: expected an object");
    for (const auto& [p, worlds] : v.items()) {
      validate_variable_name(p);
      Subset s;
      for (const auto& w : detail::strings(worlds, "model.val." + p)) {
        auto i = f.find(w);
        if (!i) throw FrameError(FrameError::Kind::UnknownWorld, "unknown world '" + w + "' in valuation of " + p);
        s.insert(*i);
      }
      val[p] = s;
    }
  }
  return Model(std::move(f), std::move(val));
}

inline Model load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

inline Json model_to_json(const Model& m) {
  Json j = frame_to_json(m.frame());
  j["val"] = world_valuation_to_json(m.frame(), m.valuation());
  return j;
}

// ---------------------------------------------------------------------------
// Fuzzy instances
// ---------------------------------------------------------------------------

struct FuzzyInstance {
  LoadedAlgebra values;
  std::vector<std::string> universe;
  FuzzyRelation relation;
};

using AlgebraResolver = std::function<Json(const std::string&)>;

/// Resolves a named algebra as `<dir>/<name>` or `<dir>/<name>.json`.
inline AlgebraResolver directory_resolver(std::vector<std::filesystem::path> dirs) {
  return [dirs = std::move(dirs)](const std::string& name) {
    for (const auto& d : dirs)
      for (const std::string& candidate : {name, name + ".json"}) {
        const auto p = d / candidate;
        if (std::filesystem::is_regular_file(p)) return read_json_file(p);
      }
    throw IoError(IoError::Kind::File, "cannot find algebra '" + name + "'");
  };
}

inline FuzzyInstance fuzzy_from_json(const Json& j, const AlgebraResolver& resolve) {
  const std::string where = "fuzzy";
  const Json& a = detail::field(j, "algebra", where);
  FuzzyInstance out{algebra_from_json(a.is_string() ? resolve(a.get<std::string>()) : a), {}, {}};
  out.universe = detail::strings(detail::field(j, "universe", where), where + ".universe");
  const std::size_t k = out.universe.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i)
    if (!index.emplace(out.universe[i], i).second)
      throw IoError(IoError::Kind::Schema, where + ".universe: duplicate '" + out.universe[i] + "'");
  const Json& rel = detail::field(j, "relation", where);
  if (!rel.is_object()) throw IoError(IoError::Kind::Schema, where + ".relation: expected an object");
  std::vector<std::vector<bool>> seen(k, std::vector<bool>(k, false));
  out.relation.assign(k, std::vector<Element>(k, 0));
  for (const auto& [key, grade] : rel.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw IoError(IoError::Kind::Schema, where + ".relation: key '" + key + "' is not \"x,y\"");
    auto ix = index.find(key.substr(0, comma)), iy = index.find(key.substr(comma + 1));
    if (ix == index.end() || iy == index.end()) throw IoError(IoError::Kind::UnknownName, where + ".relation: unknown point in '" + key + "'");
    const std::string g = detail::str(grade, where + ".relation");
    auto e = out.values.base.find(g);
    if (!e) throw IoError(IoError::Kind::UnknownName, where + ".relation: unknown grade '" + g + "'");
    out.relation[ix->second][iy->second] = *e;
    seen[ix->second][iy->second] = true;
  }
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      if (!seen[x][y])
        throw IoError(IoError::Kind::Schema, where + ".relation: no grade for \"" + out.universe[x] + "," + out.universe[y] + "\"");
  return out;
}

inline Json fuzzy_to_json(const FuzzyInstance& f) {
  Json j;
  j["algebra"] = algebra_to_json(f.values.base, nullptr, f.values.name);
  j["universe"] = f.universe;
  Json rel = Json::object();
  for (std::size_t x = 0; x < f.universe.size(); ++x)
    for (std::size_t y = 0; y < f.universe.size(); ++y)
      rel[f.universe[x] + "," + f.universe[y]] = f.values.base.name(f.relation[x][y]);
  j["relation"] = rel;
  return j;
}

// ---------------------------------------------------------------------------
// Proof scripts
// ---------------------------------------------------------------------------

inline Substitution substitution_from_json(const Json& j, const std::string& where) {
  Substitution s;
  if (!j.is_object()) throw IoError(IoError::Kind::Schema, where + ": substitution must be an object");
  for (const auto& [k, v] : j.items()) s[k] = detail::formula_field(v, where + "." + k, true);
  return s;
}

inline ProofScript proof_from_json(const Json& j) {
  const std::string where = "proof";
  ProofScript s;
  s.id = j.contains("id") ? detail::str(j.at("id"), where + ".id") : std::string("script");
  s.system = detail::str(detail::field(j, "system", where), where + ".system");
  if (j.contains("extra_axioms")) s.extra_axioms = detail::strings(j.at("extra_axioms"), where + ".extra_axioms");
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) s.premises.push_back(detail::formula_field(p, where + ".premises", true));
  s.theorem = detail::formula_field(detail::field(j, "theorem", where), where + ".theorem", true);
  if (j.contains("note")) s.note = detail::str(j.at("note"), where + ".note");
  const Json& steps = detail::field(j, "steps", where);
  if (!steps.is_array()) throw IoError(IoError::Kind::Schema, where + ".steps: expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Json& st = steps[i];
    const std::string at = where + ".steps[" + std::to_string(i + 1) + "]";
    Step step;
    int kinds = 0;
    if (st.contains("axiom")) {
      step.kind = Step::Kind::Axiom;
      step.id = detail::str(st.at("axiom"), at);
      ++kinds;
    }
    if (st.contains("rule")) {
      step.kind = Step::Kind::Rule;
      step.id = detail::str(st.at("rule"), at);
      const Json& from = detail::field(st, "from", at);
      if (!from.is_array()) throw IoError(IoError::Kind::Schema, at + ".from: expected an array");
      for (const auto& k : from) {
        if (!k.is_number_unsigned()) throw IoError(IoError::Kind::Schema, at + ".from: step numbers are positive integers");
        step.from.push_back(k.get<std::size_t>());
      }
      ++kinds;
    }
    if (st.contains("lemma")) {
      step.kind = Step::Kind::Lemma;
      step.id = detail::str(st.at("lemma"), at);
      ++kinds;
    }
    if (st.contains("hyp")) {
      step.kind = Step::Kind::Hypothesis;
      if (!st.at("hyp").is_number_unsigned()) throw IoError(IoError::Kind::Schema, at + ".hyp: expected a positive integer");
      step.hypothesis = st.at("hyp").get<std::size_t>();
      ++kinds;
    }
    if (kinds != 1) throw IoError(IoError::Kind::Schema, at + ": needs exactly one of axiom, rule, lemma, hyp");
    if (st.contains("subst")) step.subst = substitution_from_json(st.at("subst"), at + ".subst");
    if (st.contains("formula")) step.formula = detail::formula_field(st.at("formula"), at + ".formula", true);
    s.steps.push_back(std::move(step));
  }
  return s;
}

inline ProofScript load_proof(const std::filesystem::path& path) { return proof_from_json(read_json_file(path)); }

inline Json proof_to_json(const ProofScript& s) {
  Json j;
  j["id"] = s.id;
  j["system"] = s.system;
  if (!s.extra_axioms.empty()) j["extra_axioms"] = s.extra_axioms;
  if (!s.premises.empty()) {
    Json ps = Json::array();
    for (const auto& p : s.premises) ps.push_back(render_formula(p));
    j["premises"] = ps;
  }
  j["theorem"] = render_formula(s.theorem);
  if (!s.note.empty()) j["note"] = s.note;
  Json steps = Json::array();
  for (const auto& st : s.steps) {
    Json o;
    switch (st.kind) {
      case Step::Kind::Axiom: o["axiom"] = st.id; break;
      case Step::Kind::Lemma: o["lemma"] = st.id; break;
      case Step::Kind::Hypothesis: o["hyp"] = st.hypothesis; break;
      case Step::Kind::Rule:
        o["rule"] = st.id;
        o["from"] = st.from;
        break;
    }
    if (!st.subst.empty()) {
      Json sub = Json::object();
      for (const auto& [k, v] : st.subst) sub[k] = render_formula(v);
      o["subst"] = sub;
    }
    if (st.formula) o["formula"] = render_formula(*st.formula);
    steps.push_back(o);
  }
  j["steps"] = steps;
  return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json valuation_to_json(const HeytingAlgebra& h, const Valuation& v) {
  Json out = Json::object();
  for (const auto& [p, e] : v) out[p] = h.name(e);
  return out;
}

/// Parses "p=a,q=b" against the element names of h.
inline Valuation parse_valuation(const HeytingAlgebra& h, const std::string& text) {
  Valuation v;
  std::stringstream ss(text);
  std::string item;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw IoError(IoError::Kind::Schema, "valuation entry '" + item + "' is not var=element");
    const std::string p = trim(item.substr(0, eq)), e = trim(item.substr(eq + 1));
    validate_variable_name(p);
    auto el = h.find(e);
    if (!el) throw IoError(IoError::Kind::UnknownName, "unknown element '" + e + "'");
    v[p] = *el;
  }
  return v;
}

inline Json law_report_to_json(const AlgebraWithOps& a, const std::vector<Law>& laws) {
  const HeytingAlgebra& h = a.base();
  Json out = Json::array();
  for (Law law : laws) {
    const LawVerdict& v = a.report().at(law);
    Json o;
    o["law"] = law_name(law);
    o["statement"] = law_statement(law);
    o["holds"] = v.holds;
    if (!v.holds) {
      Json w = Json::array();
      for (Element e : v.witness) w.push_back(h.name(e));
      o["witness"] = w;
      o["lhs"] = h.name(v.lhs);
      o["rhs"] = h.name(v.rhs);
    }
    out.push_back(o);
  }
  return out;
}

inline Json world_pair_to_json(const Frame& f, const std::optional<WorldPair>& p) {
  if (!p) return nullptr;
  return Json::array({f.name(p->first), f.name(p->second)});
}

inline Json ik_report_to_json(const Frame& f, const IkFrameReport& r) {
  Json j;
  j["ik_frame"] = r.ik();
  j["forward"] = r.forward;
  j["forward_witness"] = world_pair_to_json(f, r.forward_witness);
  j["backward"] = r.backward;
  j["backward_witness"] = world_pair_to_json(f, r.backward_witness);
  j["intgc_r_geq"] = r.intgc_r_geq;
  j["intgc_rinv_geq"] = r.intgc_rinv_geq;
  j["lemma_agrees"] = r.lemma_agrees;
  return j;
}

inline Json verdict_to_json(const Verdict& v) {
  Json j;
  j["status"] = search_status_name(v.status);
  j["structures_scanned"] = v.structures_scanned;
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.algebra) {
    j["algebra"] = algebra_to_json(*v.algebra);
    if (!v.valuation.empty()) {
      j["valuation"] = valuation_to_json(v.algebra->base(), v.valuation);
      j["value"] = v.algebra->base().name(v.value);
    }
  }
  if (v.frame) {
    Json m = frame_to_json(*v.frame);
    m["val"] = world_valuation_to_json(*v.frame, v.world_valuation);
    j["model"] = m;
    j["world"] = v.frame->name(v.world);
  }
  return j;
}

inline Json canonical_to_json(const AlgebraWithOps& a, const CanonicalFrame& cf) {
  Json j;
  Json filters = Json::array();
  for (const auto& f : cf.filters) filters.push_back(subset_name(a.base().names(), f));
  j["filters"] = filters;
  j["frame"] = frame_to_json(cf.frame);
  j["ik"] = ik_report_to_json(cf.frame, cf.ik);
  j["characterisations_agree"] = cf.characterisations_agree();
  return j;
}

inline Json embedding_to_json(const AlgebraWithOps& a, const EmbeddingReport& r) {
  Json j;
  j["degenerate"] = r.degenerate;
  j["injective"] = r.injective;
  j["surjective"] = r.surjective;
  j["isomorphism"] = r.embedding() && r.surjective;
  j["homomorphism"] = r.homomorphism();
  j["preserves_failures"] = r.preserves_failures;
  j["ik_frame"] = r.ik_frame;
  j["characterisations_agree"] = r.characterisations_agree;
  j["connection_below"] = r.connection_below;
  j["connection_above"] = r.connection_above;
  j["key_lemma"] = {{"holds", r.key_lemma.holds}, {"checks", r.key_lemma.checks}};
  Json h = Json::object();
  for (std::size_t e = 0; e < r.h.size(); ++e)
    h[a.base().name(static_cast<Element>(e))] = subset_name(a.base().names(), r.h[e]);
  j["h"] = h;
  j["all_green"] = r.all_green();
  return j;
}

inline Json fixture_report_to_json(const FixtureReport& r) {
  Json out = Json::array();
  for (const auto& o : r.outcomes) {
    Json j;
    j["id"] = o.id;
    j["group"] = o.group;
    j["system"] = o.system;
    j["statement"] = o.statement;
    j["kind"] = o.rule ? "rule" : "theorem";
    j["steps"] = o.steps;
    j["ok"] = o.ok;
    if (!o.ok) j["error"] = o.error;
    out.push_back(j);
  }
  return out;
}

}  // namespace tenselab
