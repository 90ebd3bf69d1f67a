#pragma once

// The tenselab command line. Exit codes: 0 success/valid, 1 counterexample/found/rejected,
// 2 input or usage error, 3 timeout.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tenselab/io.hpp"

namespace tenselab::cli {

inline constexpr int kOk = 0;
inline constexpr int kFound = 1;
inline constexpr int kInputError = 2;
inline constexpr int kTimeout = 3;

namespace detail {

inline int status_code(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return kFound;
    case SearchStatus::Exhausted: return kOk;
    case SearchStatus::Timeout: return kTimeout;
  }
  return kInputError;
}

inline std::string valuation_text(const HeytingAlgebra& h, const Valuation& v) {
  std::string s;
  for (const auto& [p, e] : v) s += (s.empty() ? "" : ", ") + p + "=" + h.name(e);
  return s;
}

inline std::string world_valuation_text(const Frame& f, const WorldValuation& v) {
  std::string s;
  for (const auto& [p, set] : v) s += (s.empty() ? "" : ", ") + p + "=" + subset_name(f.names(), set);
  return s;
}

inline std::string pairs_text(const Frame& f, const Relation& r) {
  std::string s;
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (r.has(x, y)) s += (s.empty() ? "" : " ") + f.name(x) + "->" + f.name(y);
  return s.empty() ? "(none)" : s;
}

inline void print_ops(std::ostream& out, const AlgebraWithOps& a) {
  const HeytingAlgebra& h = a.base();
  const auto row = [&](const char* label, const UnaryTable& t) {
    out << "  " << label << ":";
    for (std::size_t i = 0; i < h.size(); ++i) out << " " << h.name(static_cast<Element>(i)) << "->" << h.name(t[i]);
    out << "\n";
  };
  row("F", a.ops().dia);
  row("G", a.ops().box);
  row("P", a.ops().bdia);
  row("H", a.ops().bbox);
}

inline void print_verdict(std::ostream& out, const Verdict& v) {
  out << "status: " << search_status_name(v.status) << " (" << v.structures_scanned << " structures scanned)\n";
  if (!v.detail.empty()) out << v.detail << "\n";
  if (v.algebra) {
    const HeytingAlgebra& h = v.algebra->base();
    out << "algebra: {";
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? ", " : "") << h.name(static_cast<Element>(i));
    out << "} with covers";
    for (const auto& [x, y] : h.covers()) out << " " << h.name(x) << "<" << h.name(y);
    out << "\n";
    print_ops(out, *v.algebra);
    if (!v.valuation.empty()) out << "valuation: " << valuation_text(h, v.valuation) << "; value " << h.name(v.value) << "\n";
  }
  if (v.frame) {
    out << "frame: worlds " << v.frame->size() << "; leq " << pairs_text(*v.frame, v.frame->leq()) << "; R "
        << pairs_text(*v.frame, v.frame->r()) << "\n";
    out << "valuation: " << world_valuation_text(*v.frame, v.world_valuation) << "; fails at " << v.frame->name(v.world) << "\n";
  }
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tenselab: intermediate tense logic workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "print a JSON report");

  std::string formula_text, algebra_path, frame_path, model_path, fuzzy_path, val_text, world_name, laws_text, bounds_text;
  std::string a_laws, b_laws, base_laws = "gc", system_name, emit_dir;
  std::vector<std::string> proof_paths, algebra_dirs;
  std::size_t vars = kDefaultVariableCap, cap = kDefaultFuzzyCap, world_cap = kDefaultWorldCap;
  bool schema = false, frames = false, conservativity = false, directional = false, no_fixtures = false, all_frames = false;

  auto* parse = app.add_subcommand("parse", "parse and render a formula");
  parse->add_option("--formula,-f", formula_text)->required();
  parse->add_flag("--schema", schema, "allow metavariables A, B, ...");

  auto* check_algebra = app.add_subcommand("check-algebra", "law report for an algebra");
  check_algebra->add_option("--algebra,-a", algebra_path)->required();
  check_algebra->add_option("--laws", laws_text, "laws that must hold (default h2gc+fs)");

  auto* check_frame = app.add_subcommand("check-frame", "IK-frame conditions for a frame");
  check_frame->add_option("--frame", frame_path)->required();

  auto* eval = app.add_subcommand("eval", "value of a formula in an algebra or truth at a world of a model");
  eval->add_option("--formula,-f", formula_text)->required();
  auto* eval_alg = eval->add_option("--algebra,-a", algebra_path);
  eval->add_option("--val", val_text, "valuation p=a,q=b");
  auto* eval_model = eval->add_option("--model", model_path);
  eval->add_option("--world", world_name);
  eval_alg->excludes(eval_model);

  auto* validity = app.add_subcommand("validity", "validity of a formula in an algebra");
  validity->add_option("--algebra,-a", algebra_path)->required();
  validity->add_option("--formula,-f", formula_text)->required();
  validity->add_option("--vars", vars, "variable cap");

  auto* frame_validity_cmd = app.add_subcommand("frame-validity", "validity of a formula on a frame");
  frame_validity_cmd->add_option("--frame", frame_path)->required();
  frame_validity_cmd->add_option("--formula,-f", formula_text)->required();
  frame_validity_cmd->add_option("--vars", vars, "variable cap");
  frame_validity_cmd->add_option("--worlds", world_cap, "world cap");

  auto* canonical = app.add_subcommand("canonical", "canonical frame of an H2GC+FS-algebra");
  canonical->add_option("--algebra,-a", algebra_path)->required();

  auto* complex = app.add_subcommand("complex", "complex algebra of an IK-frame");
  complex->add_option("--frame", frame_path)->required();

  auto* embed = app.add_subcommand("embed", "representation embedding check");
  embed->add_option("--algebra,-a", algebra_path)->required();

  auto* fuzzy_build = app.add_subcommand("fuzzy-build", "algebra of fuzzy sets from a fuzzy relation");
  fuzzy_build->add_option("--fuzzy", fuzzy_path)->required();
  fuzzy_build->add_option("--cap", cap, "carrier cap");
  fuzzy_build->add_option("--algebra-dir", algebra_dirs, "directories searched for named algebras");

  auto* check_proof_cmd = app.add_subcommand("check-proof", "check proof scripts in order");
  check_proof_cmd->add_option("--proof,-p", proof_paths)->required();
  check_proof_cmd->add_flag("--no-fixtures", no_fixtures, "do not preload the fixture derivations");

  auto* search = app.add_subcommand("search", "countermodel search");
  search->add_option("--formula,-f", formula_text)->required();
  search->add_option("--laws", laws_text, "laws the algebras must satisfy (default h2gc+fs)");
  search->add_flag("--frames", frames, "search IK-frames instead of algebras");
  search->add_flag("--all-frames", all_frames, "with --frames, include frames that are not IK");
  search->add_flag("--conservativity", conservativity, "compare each Heyting algebra with its identity expansion");
  search->add_option("--bounds", bounds_text, "size=5,frames=4,vars=3,pairs=0,seconds=300");

  auto* equiv = app.add_subcommand("equiv", "search for an algebra separating two law sets");
  equiv->add_option("--a", a_laws)->required();
  equiv->add_option("--b", b_laws)->required();
  equiv->add_option("--base", base_laws, "laws every candidate satisfies (default gc)");
  equiv->add_flag("--directional", directional, "only look for algebras where the first set holds and the second fails");
  equiv->add_option("--bounds", bounds_text, "size=5,frames=4,vars=3,pairs=0,seconds=300");

  auto* fixtures = app.add_subcommand("fixtures", "check the shipped derivations");
  fixtures->add_option("--system", system_name, "only list derivations in this system");
  fixtures->add_option("--emit", emit_dir, "write each script as JSON into this directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (parse->parsed()) {
      const Formula f = schema ? parse_schema(formula_text) : parse_formula(formula_text);
      if (json) {
        out << Json{{"formula", render_formula(f)}, {"variables", variables_of(f)}, {"size", f.size()}, {"modal", f.has_modality()}}.dump(2)
            << "\n";
      } else {
        out << render_formula(f) << "\n";
      }
      return kOk;
    }

    if (check_algebra->parsed()) {
      const LoadedAlgebra la = load_algebra(algebra_path);
      if (!la.with_ops) {
        if (json) out << Json{{"name", la.name}, {"elements", la.base.size()}, {"heyting", true}, {"ops", false}}.dump(2) << "\n";
        else out << "Heyting algebra with " << la.base.size() << " elements; no modal operators\n";
        return kOk;
      }
      const AlgebraWithOps& a = la.ops();
      const std::vector<Law> required = laws_text.empty() ? core_laws() : parse_law_set(laws_text);
      const std::vector<Law> all(kAllLaws.begin(), kAllLaws.end());
      const bool ok = a.report().holds_all(required);
      if (json) {
        out << Json{{"name", la.name}, {"h2gc", a.report().h2gc()}, {"h2gc_fs", a.report().all_green()}, {"required_hold", ok},
                    {"laws", law_report_to_json(a, all)}}
                   .dump(2)
            << "\n";
      } else {
        for (Law l : all) {
          const LawVerdict& v = a.report().at(l);
          out << (v.holds ? "holds  " : "FAILS  ") << law_name(l) << "  " << law_statement(l);
          if (!v.holds) {
            out << "  at";
            for (Element e : v.witness) out << " " << a.base().name(e);
            out << ": " << a.base().name(v.lhs) << " vs " << a.base().name(v.rhs);
          }
          out << "\n";
        }
        out << "H2GC: " << (a.report().h2gc() ? "yes" : "no") << "; H2GC+FS: " << (a.report().all_green() ? "yes" : "no") << "\n";
      }
      return ok ? kOk : kFound;
    }

    if (check_frame->parsed()) {
      const Frame f = load_frame(frame_path);
      const IkFrameReport r = check_ik_frame(f);
      if (json) {
        out << ik_report_to_json(f, r).dump(2) << "\n";
      } else {
        const auto w = [&](const std::optional<WorldPair>& p) {
          return p ? " (witness " + f.name(p->first) + ", " + f.name(p->second) + ")" : std::string();
        };
        out << "(R o <=) in (<= o R): " << (r.forward ? "yes" : "no") << w(r.forward_witness) << "\n";
        out << "(>= o R) in (R o >=): " << (r.backward ? "yes" : "no") << w(r.backward_witness) << "\n";
        out << "IntGC condition on R o >=: " << (r.intgc_r_geq ? "yes" : "no") << "; on R^-1 o >=: " << (r.intgc_rinv_geq ? "yes" : "no")
            << "\n";
        out << "IK-frame: " << (r.ik() ? "yes" : "no") << "\n";
      }
      return r.ik() ? kOk : kFound;
    }

    if (eval->parsed()) {
      const Formula f = parse_formula(formula_text);
      if (!model_path.empty()) {
        const Model m = load_model(model_path);
        std::vector<std::string> worlds;
        if (world_name.empty()) {
          worlds = m.frame().names();
        } else {
          if (!m.frame().find(world_name)) throw FrameError(FrameError::Kind::UnknownWorld, "unknown world '" + world_name + "'");
          worlds = {world_name};
        }
        Json j = Json::object();
        for (const auto& w : worlds) {
          const bool t = satisfies(m, *m.frame().find(w), f);
          j[w] = t;
          if (!json) out << w << ": " << (t ? "true" : "false") << "\n";
        }
        if (json) out << j.dump(2) << "\n";
        return kOk;
      }
      if (algebra_path.empty()) throw IoError(IoError::Kind::Schema, "eval needs --algebra or --model");
      const LoadedAlgebra la = load_algebra(algebra_path);
      const Valuation v = parse_valuation(la.base, val_text);
      const Element e = f.has_modality() ? evaluate(la.ops(), v, f) : evaluate_propositional(la.base, v, f);
      if (json) out << Json{{"value", la.base.name(e)}}.dump(2) << "\n";
      else out << la.base.name(e) << "\n";
      return kOk;
    }

    if (validity->parsed()) {
      const LoadedAlgebra la = load_algebra(algebra_path);
      const Formula f = parse_formula(formula_text);
      const ValidityResult r = la.with_ops ? algebra_validity(*la.with_ops, f, vars)
                                            : (f.has_modality() ? algebra_validity(la.ops(), f, vars) : propositional_validity(la.base, f, vars));
      if (json) {
        Json j{{"valid", r.valid}, {"valuations_checked", r.valuations_checked}};
        if (!r.valid) {
          j["countervaluation"] = valuation_to_json(la.base, r.countervaluation);
          j["value"] = la.base.name(r.value);
        }
        out << j.dump(2) << "\n";
      } else if (r.valid) {
        out << "valid (" << r.valuations_checked << " valuations)\n";
      } else {
        out << "not valid: " << detail::valuation_text(la.base, r.countervaluation) << " gives " << la.base.name(r.value) << "\n";
      }
      return r.valid ? kOk : kFound;
    }

    if (frame_validity_cmd->parsed()) {
      const Frame fr = load_frame(frame_path);
      const Formula f = parse_formula(formula_text);
      const FrameValidityResult r = frame_validity(fr, f, world_cap, vars);
      if (json) {
        Json j{{"valid", r.valid}, {"valuations_checked", r.valuations_checked}};
        if (!r.valid) {
          Json m = frame_to_json(fr);
          m["val"] = world_valuation_to_json(fr, r.valuation);
          j["model"] = m;
          j["world"] = fr.name(r.world);
        }
        out << j.dump(2) << "\n";
      } else if (r.valid) {
        out << "valid (" << r.valuations_checked << " valuations)\n";
      } else {
        out << "not valid: fails at " << fr.name(r.world) << " under " << detail::world_valuation_text(fr, r.valuation) << "\n";
      }
      return r.valid ? kOk : kFound;
    }

    if (canonical->parsed()) {
      const LoadedAlgebra la = load_algebra(algebra_path);
      const CanonicalFrame cf = canonical_frame(la.ops());
      if (json) {
        out << canonical_to_json(la.ops(), cf).dump(2) << "\n";
      } else {
        out << "prime filters:";
        for (std::size_t i = 0; i < cf.filters.size(); ++i)
          out << " " << cf.frame.name(i) << "=" << subset_name(la.base.names(), cf.filters[i]);
        out << "\nRc: " << detail::pairs_text(cf.frame, cf.frame.r()) << "\n";
        out << "IK-frame: " << (cf.ik.ik() ? "yes" : "no") << "; characterisations agree: " << (cf.characterisations_agree() ? "yes" : "no")
            << "\n";
      }
      return kOk;
    }

    if (complex->parsed()) {
      const Frame fr = load_frame(frame_path);
      const ComplexAlgebra ca = complex_algebra(fr);
      if (json) {
        Json j = algebra_to_json(ca.algebra);
        j["h2gc_fs"] = ca.algebra.report().all_green();
        out << j.dump(2) << "\n";
      } else {
        out << "complex algebra with " << ca.algebra.size() << " up-sets\n";
        detail::print_ops(out, ca.algebra);
        out << "H2GC+FS: " << (ca.algebra.report().all_green() ? "yes" : "no") << "\n";
      }
      return kOk;
    }

    if (embed->parsed()) {
      const LoadedAlgebra la = load_algebra(algebra_path);
      const EmbeddingReport r = embedding_check(la.ops());
      if (json) {
        out << embedding_to_json(la.ops(), r).dump(2) << "\n";
      } else {
        out << "prime filters: " << r.canonical.filters.size() << "\n";
        out << "h injective: " << (r.injective ? "yes" : "no") << "; homomorphism: " << (r.homomorphism() ? "yes" : "no")
            << "; surjective: " << (r.surjective ? "yes" : "no") << "\n";
        if (!r.preserves_failures.empty()) {
          out << "h does not commute with:";
          for (const auto& op : r.preserves_failures) out << " " << op;
          out << "\n";
        }
        out << "key lemma: " << (r.key_lemma.holds ? "holds" : "FAILS") << " (" << r.key_lemma.checks << " checks)\n";
        if (r.embedding() && r.surjective) out << "h is an isomorphism onto the complex algebra of the canonical frame\n";
      }
      return r.all_green() ? kOk : kFound;
    }

    if (fuzzy_build->parsed()) {
      std::vector<std::filesystem::path> dirs;
      for (const auto& d : algebra_dirs) dirs.emplace_back(d);
      dirs.push_back(std::filesystem::path(fuzzy_path).parent_path());
      dirs.push_back(std::filesystem::path(fuzzy_path).parent_path().parent_path() / "algebras");
      const FuzzyInstance fi = fuzzy_from_json(read_json_file(fuzzy_path), directory_resolver(dirs));
      const FuzzyAlgebra fa = build_fuzzy_algebra(fi.values.base, fi.universe, fi.relation, cap);
      const bool green = fa.algebra.report().all_green();
      const std::vector<Law> all(kAllLaws.begin(), kAllLaws.end());
      if (json) {
        Json j = algebra_to_json(fa.algebra);
        j["h2gc_fs"] = green;
        j["laws"] = law_report_to_json(fa.algebra, all);
        out << j.dump(2) << "\n";
      } else {
        out << "fuzzy algebra with " << fa.algebra.size() << " fuzzy sets over " << fi.universe.size() << " points\n";
        for (Law l : all) {
          const LawVerdict& v = fa.algebra.report().at(l);
          out << (v.holds ? "holds  " : "FAILS  ") << law_name(l);
          if (!v.holds) {
            out << "  at";
            for (Element e : v.witness) out << " " << fa.algebra.base().name(e);
            out << ": " << fa.algebra.base().name(v.lhs) << " vs " << fa.algebra.base().name(v.rhs);
          }
          out << "\n";
        }
        out << "H2GC+FS: " << (green ? "yes" : "no") << "\n";
      }
      return green ? kOk : kFound;
    }

    if (check_proof_cmd->parsed()) {
      ProofLibrary lib;
      std::vector<FixtureScript> preloaded;
      if (!no_fixtures) preloaded = build_fixture_scripts(lib);
      // A script reusing a fixture id is checked against the fixtures that precede it.
      const auto check_as_fixture = [&](const ProofScript& s) {
        ProofLibrary before;
        for (const auto& fx : preloaded) {
          if (fx.script.id == s.id) break;
          before.add(fx.script);
        }
        before.check(s);
      };
      Json results = Json::array();
      bool all_ok = true;
      for (const auto& p : proof_paths) {
        const ProofScript s = load_proof(p);
        Json r{{"file", p}, {"id", s.id}, {"system", s.system}};
        try {
          const bool is_fixture =
              std::any_of(preloaded.begin(), preloaded.end(), [&](const FixtureScript& fx) { return fx.script.id == s.id; });
          if (is_fixture) check_as_fixture(s);
          else lib.add(s);
          r["ok"] = true;
          r["theorem"] = statement_of(s);
          if (!json) out << p << ": ok  " << statement_of(s) << "\n";
        } catch (const ProofError& e) {
          all_ok = false;
          r["ok"] = false;
          r["step"] = e.step();
          r["error"] = proof_error_name(e.kind());
          r["reason"] = e.what();
          if (!json) out << p << ": rejected (" << proof_error_name(e.kind()) << ") " << e.what() << "\n";
        }
        results.push_back(r);
      }
      if (json) out << results.dump(2) << "\n";
      return all_ok ? kOk : kFound;
    }

    if (search->parsed()) {
      const SearchBounds bounds = parse_bounds(bounds_text);
      const Formula f = parse_formula(formula_text);
      if (conservativity) {
        const ConservativityVerdict c = conservativity_check(f, bounds);
        if (json) {
          Json j = verdict_to_json(c.verdict);
          j["algebras_checked"] = c.algebras_checked;
          j["refuting_algebras"] = c.failing;
          out << j.dump(2) << "\n";
        } else {
          out << (c.verdict.found() ? "validity differs between an algebra and its identity expansion\n"
                                    : "validity agrees on every algebra (" + std::to_string(c.algebras_checked) + " checked)\n");
          out << "refuted by " << c.failing.size() << " base algebra(s)\n";
          if (c.verdict.found()) detail::print_verdict(out, c.verdict);
        }
        return detail::status_code(c.verdict.status);
      }
      const Verdict v = frames ? find_frame_countermodel(f, bounds, !all_frames)
                               : find_algebra_countermodel(f, laws_text.empty() ? core_laws() : parse_law_set(laws_text), bounds);
      if (json) out << verdict_to_json(v).dump(2) << "\n";
      else detail::print_verdict(out, v);
      return detail::status_code(v.status);
    }

    if (equiv->parsed()) {
      const SearchBounds bounds = parse_bounds(bounds_text);
      const Verdict v = test_law_equivalence(parse_law_set(a_laws), parse_law_set(b_laws), bounds, !directional, parse_law_set(base_laws));
      if (json) out << verdict_to_json(v).dump(2) << "\n";
      else detail::print_verdict(out, v);
      return detail::status_code(v.status);
    }

    if (fixtures->parsed()) {
      ProofLibrary lib;
      const std::vector<FixtureScript> scripts = build_fixture_scripts(lib);
      const FixtureReport all = recheck_scripts(scripts);
      FixtureReport shown;
      for (const auto& o : all.outcomes)
        if (system_name.empty() || o.system == system_name || (lib.system(system_name) && lib.system(system_name)->name == o.system))
          shown.outcomes.push_back(o);
      if (!system_name.empty() && !lib.system(system_name))
        throw ProofError(ProofError::Kind::UnknownSystem, 0, "unknown system '" + system_name + "'");
      if (!emit_dir.empty()) {
        std::filesystem::create_directories(emit_dir);
        for (std::size_t i = 0; i < scripts.size(); ++i) {
          char prefix[8];
          std::snprintf(prefix, sizeof prefix, "%03zu_", i + 1);
          Json j = proof_to_json(scripts[i].script);
          j["group"] = scripts[i].group;
          write_json_file(std::filesystem::path(emit_dir) / (prefix + scripts[i].script.id + ".json"), j);
        }
      }
      if (json) {
        out << fixture_report_to_json(shown).dump(2) << "\n";
      } else {
        for (const auto& o : shown.outcomes)
          out << (o.ok ? "ok    " : "FAIL  ") << o.id << "  [" << o.system << ", " << o.steps << " steps]  " << o.statement
              << (o.ok ? "" : "  " + o.error) << "\n";
        out << shown.outcomes.size() << " derivation(s) checked\n";
      }
      return all.all_ok() ? kOk : kFound;
    }
  } catch (const ParseError& e) {
    err << "formula error: " << e.what() << "\n";
    return kInputError;
  } catch (const IoError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const LatticeError& e) {
    err << "algebra error: " << e.what() << "\n";
    return kInputError;
  } catch (const AlgebraError& e) {
    err << "algebra error: " << e.what() << "\n";
    return kInputError;
  } catch (const FrameError& e) {
    err << "frame error: " << e.what() << "\n";
    return kInputError;
  } catch (const DualityError& e) {
    err << "duality error: " << e.what() << "\n";
    return kInputError;
  } catch (const SearchError& e) {
    err << "search error: " << e.what() << "\n";
    return kInputError;
  } catch (const ProofError& e) {
    err << "proof error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace tenselab::cli
