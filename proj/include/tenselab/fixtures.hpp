#pragma once

// Formal derivations shipped with the library: propositional helpers, the Brouwerian axioms and
// monotonicity in Int2GC, the FS equivalences, the FS consequences, the IK axioms, the Galois rules
// inside IK⊗IK+BR and IK_t, and every Ewald axiom inside Int2GC+FS.

#include <functional>
#include <string>
#include <vector>

#include "tenselab/proofs.hpp"

namespace tenselab {

struct FixtureScript {
  std::string group;
  ProofScript script;
};

namespace detail {

class FixtureWriter {
 public:
  using Ref = ProofBuilder::Ref;
  using Body = std::function<Ref(ProofBuilder&)>;

  explicit FixtureWriter(ProofLibrary& lib) : lib_(lib) {}

  void theorem(const std::string& group, const std::string& id, const std::string& system, const Body& body,
               std::vector<std::string> extra = {}, std::string note = {}) {
    ProofBuilder b(lib_, system, std::move(extra));
    keep(group, b.finish(id, body(b), std::move(note)));
  }

  void derived_rule(const std::string& group, const std::string& id, const std::string& system,
                    std::vector<const char*> premises, const Body& body, std::string note = {}) {
    std::vector<Formula> ps;
    for (const char* p : premises) ps.push_back(parse_schema(p));
    ProofBuilder b(lib_, system, {}, std::move(ps));
    keep(group, b.finish(id, body(b), std::move(note)));
  }

  std::vector<FixtureScript> take() { return std::move(out_); }

 private:
  void keep(const std::string& group, ProofScript s) {
    lib_.add(s);
    out_.push_back({group, std::move(s)});
  }

  ProofLibrary& lib_;
  std::vector<FixtureScript> out_;
};

inline Formula sch(const char* text) { return parse_schema(text); }

}  // namespace detail

/// Builds every fixture derivation, registering each in `lib` as it goes.
inline std::vector<FixtureScript> build_fixture_scripts(ProofLibrary& lib) {
  using detail::sch;
  using Ref = ProofBuilder::Ref;
  detail::FixtureWriter w(lib);
  const Formula A = sch("A"), B = sch("B");

  // propositional
  w.theorem("propositional", "id", "Int", [&](ProofBuilder& b) { return b.identity(A); });
  w.derived_rule("propositional", "syl", "Int", {"A -> B", "B -> C"},
                 [](ProofBuilder& b) { return b.chain(b.hyp(1), b.hyp(2)); });

  // Brouwerian axioms from the Galois rules
  w.theorem("brouwerian", "br1", "Int2GC", [](ProofBuilder& b) { return b.rule("GC_FH", {b.lemma("id", {{"A", sch("F A")}})}); });
  w.theorem("brouwerian", "br2", "Int2GC", [](ProofBuilder& b) { return b.rule("GC_HF", {b.lemma("id", {{"A", sch("H A")}})}); });
  w.theorem("brouwerian", "br3", "Int2GC", [](ProofBuilder& b) { return b.rule("GC_PG", {b.lemma("id", {{"A", sch("P A")}})}); });
  w.theorem("brouwerian", "br4", "Int2GC", [](ProofBuilder& b) { return b.rule("GC_GP", {b.lemma("id", {{"A", sch("G A")}})}); });

  // monotonicity and necessitation
  w.derived_rule("monotonicity", "rm_dia", "Int2GC", {"A -> B"}, [](ProofBuilder& b) {
    return b.rule("GC_HF", {b.rule("syl", {b.hyp(1), b.lemma("br1", {{"A", sch("B")}})})});
  });
  w.derived_rule("monotonicity", "rm_bbox", "Int2GC", {"A -> B"}, [](ProofBuilder& b) {
    return b.rule("GC_FH", {b.rule("syl", {b.lemma("br2"), b.hyp(1)})});
  });
  w.derived_rule("monotonicity", "rm_bdia", "Int2GC", {"A -> B"}, [](ProofBuilder& b) {
    return b.rule("GC_GP", {b.rule("syl", {b.hyp(1), b.lemma("br3", {{"A", sch("B")}})})});
  });
  w.derived_rule("monotonicity", "rm_box", "Int2GC", {"A -> B"}, [](ProofBuilder& b) {
    return b.rule("GC_PG", {b.rule("syl", {b.lemma("br4"), b.hyp(1)})});
  });
  const char* necessitation_note = "necessitation admissible in Int2GC; derivation reconstructed";
  w.derived_rule("monotonicity", "rn_bbox", "Int2GC", {"A"}, [](ProofBuilder& b) {
    const Ref k = b.axiom("K", {{"A", sch("A")}, {"B", sch("F top")}});
    return b.mp(b.top(), b.rule("GC_FH", {b.mp(b.hyp(1), k)}));
  }, necessitation_note);
  w.derived_rule("monotonicity", "rn_box", "Int2GC", {"A"}, [](ProofBuilder& b) {
    const Ref k = b.axiom("K", {{"A", sch("A")}, {"B", sch("P top")}});
    return b.mp(b.top(), b.rule("GC_PG", {b.mp(b.hyp(1), k)}));
  }, necessitation_note);

  // FS1 <=> FS4 and FS2 <=> FS3 over Int2GC
  w.theorem("fs-equivalence", "fs1_implies_fs4", "Int2GC", [&](ProofBuilder& b) {
    const Ref fs1 = b.axiom("FS1", {{"A", sch("P A")}, {"B", sch("H B")}});
    const Ref core = b.suppose(sch("F (P A -> H B)"), [&](Ref x) {
      const Ref y = b.mp(x, fs1);
      return b.suppose(A, [&](Ref a) {
        return b.mp(b.mp(b.mp(a, b.lemma("br3")), y), b.lemma("br2", {{"A", B}}));
      });
    });
    return b.rule("GC_FH", {core});
  }, {"FS1"});
  w.theorem("fs-equivalence", "fs4_implies_fs1", "Int2GC", [&](ProofBuilder& b) {
    const Ref inner = b.suppose(sch("A -> B"), [&](Ref ab) {
      return b.suppose(sch("P G A"), [&](Ref pga) {
        return b.mp(b.mp(b.mp(pga, b.lemma("br4")), ab), b.lemma("br1", {{"A", B}}));
      });
    });
    const Ref lifted = b.rule("rm_dia", {inner});
    const Ref fs4 = b.rule("GC_HF", {b.axiom("FS4", {{"A", sch("G A")}, {"B", sch("F B")}})});
    return b.chain(lifted, fs4);
  }, {"FS4"});
  w.theorem("fs-equivalence", "fs2_implies_fs3", "Int2GC", [&](ProofBuilder& b) {
    const Ref fs2 = b.axiom("FS2", {{"A", sch("F A")}, {"B", sch("G B")}});
    const Ref core = b.suppose(sch("P (F A -> G B)"), [&](Ref x) {
      const Ref y = b.mp(x, fs2);
      return b.suppose(A, [&](Ref a) {
        return b.mp(b.mp(b.mp(a, b.lemma("br1")), y), b.lemma("br4", {{"A", B}}));
      });
    });
    return b.rule("GC_PG", {core});
  }, {"FS2"});
  w.theorem("fs-equivalence", "fs3_implies_fs2", "Int2GC", [&](ProofBuilder& b) {
    const Ref inner = b.suppose(sch("A -> B"), [&](Ref ab) {
      return b.suppose(sch("F H A"), [&](Ref fha) {
        return b.mp(b.mp(b.mp(fha, b.lemma("br2")), ab), b.lemma("br3", {{"A", B}}));
      });
    });
    const Ref lifted = b.rule("rm_bdia", {inner});
    const Ref fs3 = b.rule("GC_GP", {b.axiom("FS3", {{"A", sch("H A")}, {"B", sch("P B")}})});
    return b.chain(lifted, fs3);
  }, {"FS3"});

  // consequences of FS1 and FS2
  const auto conj_form = [&](const char* fs, const char* rm, const char* box_a, const char* dia_b) {
    return [=, &A, &B](ProofBuilder& b) {
      const Formula ab = Formula::conj(A, B);
      const Ref ax = b.axiom(fs, {{"A", A}, {"B", ab}});
      const Ref pair = b.suppose(B, [&](Ref y) { return b.suppose(A, [&](Ref x) { return b.and_intro(x, y); }); });
      const Ref lifted = b.rule(rm, {pair});
      return b.suppose(Formula::conj(sch(box_a), sch(dia_b)), [&](Ref c) {
        return b.mp(b.and_left(c), b.mp(b.mp(b.and_right(c), lifted), ax));
      });
    };
  };
  w.theorem("fs-consequences", "lemma_a", "Int2GC+FS", conj_form("FS1", "rm_dia", "G A", "F B"));
  w.theorem("fs-consequences", "lemma_a_past", "Int2GC+FS", conj_form("FS2", "rm_bdia", "H A", "P B"));

  const auto k_form = [&](const char* x_text, const char* back, const char* rm, const char* conj_lemma, const char* unit,
                          const char* modal_x, const char* dia_a) {
    return [=, &A, &B](ProofBuilder& b) {
      const Formula x = sch(x_text);
      const Formula mx = sch(modal_x);
      const Ref back_inst = b.lemma(back, {{"A", sch("A -> B")}});
      const Ref mp_pair = b.suppose(Formula::conj(mx, A), [&](Ref c) { return b.mp(b.and_right(c), b.mp(b.and_left(c), back_inst)); });
      const Ref lifted = b.rule(rm, {mp_pair});
      const Ref conj = b.lemma(conj_lemma, {{"A", mx}, {"B", A}});
      const Ref up = b.lemma(unit, {{"A", x}});
      return b.suppose(x, [&](Ref xr) {
        return b.suppose(sch(dia_a), [&](Ref fa) { return b.mp(b.mp(b.and_intro(b.mp(xr, up), fa), conj), lifted); });
      });
    };
  };
  w.theorem("fs-consequences", "lemma_b", "Int2GC+FS", k_form("G (A -> B)", "br4", "rm_dia", "lemma_a", "br3", "P G (A -> B)", "F A"));
  w.theorem("fs-consequences", "lemma_b_past", "Int2GC+FS",
            k_form("H (A -> B)", "br2", "rm_bdia", "lemma_a_past", "br1", "F H (A -> B)", "P A"));

  const auto neg_form = [&](const char* k_lemma, const char* rm, const char* gc, const char* bot_box, const char* box_neg) {
    return [=, &A](ProofBuilder& b) {
      const Ref lb = b.lemma(k_lemma, {{"A", A}, {"B", Formula::bot()}});
      const Ref lift = b.rule(rm, {b.axiom("NEG_E", {{"A", A}})});
      const Ref dia_bot = b.rule(gc, {b.axiom("EFQ", {{"A", sch(bot_box)}})});
      return b.suppose(sch(box_neg), [&](Ref g) { return b.neg_intro(b.chain(b.mp(b.mp(g, lift), lb), dia_bot)); });
    };
  };
  w.theorem("fs-consequences", "lemma_c", "Int2GC+FS", neg_form("lemma_b", "rm_box", "GC_HF", "H bot", "G ~A"));
  w.theorem("fs-consequences", "lemma_c_past", "Int2GC+FS", neg_form("lemma_b_past", "rm_bbox", "GC_GP", "G bot", "H ~A"));

  // IK axioms, both pairs
  const auto ik1 = [&](const char* unit, const char* rm, const char* gc, Connective dia) {
    return [=, &A, &B](ProofBuilder& b) {
      const Formula da = Formula::unary(dia, A), db = Formula::unary(dia, B);
      const Ref left = b.chain(b.lemma(unit), b.rule(rm, {b.axiom("OR_I1", {{"A", da}, {"B", db}})}));
      const Ref right = b.chain(b.lemma(unit, {{"A", B}}), b.rule(rm, {b.axiom("OR_I2", {{"A", da}, {"B", db}})}));
      const Ref cases = b.suppose(Formula::disj(A, B), [&](Ref ab) { return b.or_elim(ab, left, right); });
      return b.rule(gc, {cases});
    };
  };
  w.theorem("ik-axioms", "ik1", "Int2GC", ik1("br1", "rm_bbox", "GC_HF", Connective::Dia));
  w.theorem("ik-axioms", "ik1_past", "Int2GC", ik1("br3", "rm_box", "GC_GP", Connective::BDia));

  const auto ik2 = [&](const char* rm, const char* counit, const char* gc, const char* conj_text) {
    return [=](ProofBuilder& b) {
      const Formula c = sch(conj_text);
      const Ref l = b.chain(b.rule(rm, {b.axiom("AND_E1", {{"A", c.lhs()}, {"B", c.rhs()}})}), b.lemma(counit));
      const Ref r = b.chain(b.rule(rm, {b.axiom("AND_E2", {{"A", c.lhs()}, {"B", c.rhs()}})}), b.lemma(counit, {{"A", sch("B")}}));
      const Ref both = b.suppose(b.formula(l).lhs(), [&](Ref d) { return b.and_intro(b.mp(d, l), b.mp(d, r)); });
      return b.rule(gc, {both});
    };
  };
  w.theorem("ik-axioms", "ik2", "Int2GC", ik2("rm_bdia", "br4", "GC_PG", "G A & G B"));
  w.theorem("ik-axioms", "ik2_past", "Int2GC", ik2("rm_dia", "br2", "GC_FH", "H A & H B"));

  w.theorem("ik-axioms", "ik3", "Int2GC", [](ProofBuilder& b) {
    return b.neg_intro(b.rule("GC_HF", {b.axiom("EFQ", {{"A", sch("H bot")}})}));
  });
  w.theorem("ik-axioms", "ik3_past", "Int2GC", [](ProofBuilder& b) {
    return b.neg_intro(b.rule("GC_GP", {b.axiom("EFQ", {{"A", sch("G bot")}})}));
  });
  w.theorem("ik-axioms", "ik4", "Int2GC+FS", [](ProofBuilder& b) { return b.axiom("FS1"); });
  w.theorem("ik-axioms", "ik5", "Int2GC+FS", [](ProofBuilder& b) { return b.lemma("fs2_implies_fs3"); });
  w.theorem("ik-axioms", "ik4_past", "Int2GC+FS", [](ProofBuilder& b) { return b.axiom("FS2"); });
  w.theorem("ik-axioms", "ik5_past", "Int2GC+FS", [](ProofBuilder& b) { return b.lemma("fs1_implies_fs4"); });

  // Galois rules inside IK⊗IK+BR
  const char* ikbr = "IK⊗IK+BR";
  w.derived_rule("gc-from-br", "gc_hf_ikbr", ikbr, {"A -> H B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.rule("RM_F", {b.hyp(1)}), b.axiom("BR2", {{"A", sch("B")}})});
  });
  w.derived_rule("gc-from-br", "gc_fh_ikbr", ikbr, {"F A -> B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.axiom("BR1", {{"A", sch("A")}}), b.rule("RM_H", {b.hyp(1)})});
  });
  w.derived_rule("gc-from-br", "gc_gp_ikbr", ikbr, {"A -> G B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.rule("RM_P", {b.hyp(1)}), b.axiom("BR4", {{"A", sch("B")}})});
  });
  w.derived_rule("gc-from-br", "gc_pg_ikbr", ikbr, {"P A -> B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.axiom("BR3", {{"A", sch("A")}}), b.rule("RM_G", {b.hyp(1)})});
  });

  // Ewald's axioms inside Int2GC+FS
  const char* fs = "Int2GC+FS";
  const auto cite = [&](const char* id, const char* lemma) {
    w.theorem("ewald", id, fs, [=](ProofBuilder& b) { return b.lemma(lemma); });
  };
  const auto distribute_box = [&](const char* rm, const char* counit, const char* gc, const char* box_ab, const char* box_a) {
    return [=, &A, &B](ProofBuilder& b) {
      const Formula x = sch(box_ab), y = sch(box_a);
      const Formula xy = Formula::conj(x, y);
      const Ref l = b.chain(b.rule(rm, {b.axiom("AND_E1", {{"A", x}, {"B", y}})}), b.lemma(counit, {{"A", sch("A -> B")}}));
      const Ref r = b.chain(b.rule(rm, {b.axiom("AND_E2", {{"A", x}, {"B", y}})}), b.lemma(counit));
      const Ref both = b.suppose(b.formula(l).lhs(), [&](Ref d) { return b.mp(b.mp(d, r), b.mp(d, l)); });
      const Ref boxed = b.rule(gc, {both});
      return b.suppose(x, [&](Ref xr) { return b.suppose(y, [&](Ref yr) { return b.mp(b.and_intro(xr, yr), boxed); }); });
    };
  };
  w.theorem("ewald", "ewald_2", fs, distribute_box("rm_bdia", "br4", "GC_PG", "G (A -> B)", "G A"));
  w.theorem("ewald", "ewald_2p", fs, distribute_box("rm_dia", "br2", "GC_FH", "H (A -> B)", "H A"));

  const auto box_and = [&](const char* rm, const char* conj_lemma, const char* box_ab) {
    return [=, &A, &B](ProofBuilder& b) {
      const Formula x = sch(box_ab);
      const Ref l = b.rule(rm, {b.axiom("AND_E1", {{"A", A}, {"B", B}})});
      const Ref r = b.rule(rm, {b.axiom("AND_E2", {{"A", A}, {"B", B}})});
      const Ref fwd = b.suppose(x, [&](Ref xr) { return b.and_intro(b.mp(xr, l), b.mp(xr, r)); });
      return b.iff_intro(fwd, b.lemma(conj_lemma));
    };
  };
  w.theorem("ewald", "ewald_3", fs, box_and("rm_box", "ik2", "G (A & B)"));
  w.theorem("ewald", "ewald_3p", fs, box_and("rm_bbox", "ik2_past", "H (A & B)"));

  const auto dia_or = [&](const char* rm, const char* split) {
    return [=, &A, &B](ProofBuilder& b) {
      const Ref l = b.rule(rm, {b.axiom("OR_I1", {{"A", A}, {"B", B}})});
      const Ref r = b.rule(rm, {b.axiom("OR_I2", {{"A", A}, {"B", B}})});
      const Formula da = b.formula(l).lhs(), db = b.formula(r).lhs();
      const Ref back = b.suppose(Formula::disj(da, db), [&](Ref d) { return b.or_elim(d, l, r); });
      return b.iff_intro(b.lemma(split), back);
    };
  };
  w.theorem("ewald", "ewald_4", fs, dia_or("rm_dia", "ik1"));
  w.theorem("ewald", "ewald_4p", fs, dia_or("rm_bdia", "ik1_past"));
  cite("ewald_5", "lemma_b");
  cite("ewald_5p", "lemma_b_past");
  cite("ewald_6", "lemma_a");
  cite("ewald_6p", "lemma_a_past");
  cite("ewald_7", "lemma_c");
  cite("ewald_7p", "lemma_c_past");
  cite("ewald_8", "br2");
  cite("ewald_8p", "br4");
  cite("ewald_9", "br1");
  cite("ewald_9p", "br3");
  cite("ewald_10", "fs2_implies_fs3");
  cite("ewald_10p", "fs1_implies_fs4");
  w.theorem("ewald", "ewald_11", fs, [](ProofBuilder& b) { return b.axiom("FS1"); });
  w.theorem("ewald", "ewald_11p", fs, [](ProofBuilder& b) { return b.axiom("FS2"); });

  // monotonicity and the Galois rules inside IK_t
  const char* ikt = "IK_t";
  const auto rm_t = [&](const char* id, const char* nec, const char* ax) {
    w.derived_rule("ikt-rules", id, ikt, {"A -> B"}, [=](ProofBuilder& b) { return b.mp(b.rule(nec, {b.hyp(1)}), b.axiom(ax)); });
  };
  rm_t("rm_box_ikt", "RG", "E2");
  rm_t("rm_bbox_ikt", "RH", "E2'");
  rm_t("rm_dia_ikt", "RG", "E5");
  rm_t("rm_bdia_ikt", "RH", "E5'");
  w.derived_rule("ikt-rules", "gc_hf_ikt", ikt, {"A -> H B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.rule("rm_dia_ikt", {b.hyp(1)}), b.axiom("E8", {{"A", sch("B")}})});
  });
  w.derived_rule("ikt-rules", "gc_fh_ikt", ikt, {"F A -> B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.axiom("E9"), b.rule("rm_bbox_ikt", {b.hyp(1)})});
  });
  w.derived_rule("ikt-rules", "gc_gp_ikt", ikt, {"A -> G B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.rule("rm_bdia_ikt", {b.hyp(1)}), b.axiom("E8'", {{"A", sch("B")}})});
  });
  w.derived_rule("ikt-rules", "gc_pg_ikt", ikt, {"P A -> B"}, [](ProofBuilder& b) {
    return b.rule("syl", {b.axiom("E9'"), b.rule("rm_box_ikt", {b.hyp(1)})});
  });

  return w.take();
}

/// Ewald axiom id -> fixture id proving it inside Int2GC+FS.
inline std::vector<std::pair<std::string, std::string>> ewald_fixture_ids() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : ewald_ids()) {
    std::string f = "ewald_" + e.substr(1);
    if (f.back() == '\'') f.back() = 'p';
    out.emplace_back(e, f);
  }
  return out;
}

struct FixtureOutcome {
  std::string group;
  std::string id;
  std::string system;
  std::string statement;
  std::size_t steps = 0;
  bool rule = false;
  bool ok = false;
  std::string error;
};

struct FixtureReport {
  std::vector<FixtureOutcome> outcomes;
  bool all_ok() const {
    if (outcomes.empty()) return false;
    for (const auto& o : outcomes)
      if (!o.ok) return false;
    return true;
  }
};

inline std::string statement_of(const ProofScript& s) {
  std::string out;
  for (std::size_t i = 0; i < s.premises.size(); ++i) out += (i ? ", " : "") + render_formula(s.premises[i]);
  if (!s.premises.empty()) out += " / ";
  return out + render_formula(s.theorem);
}

/// Re-checks scripts in order against a fresh library, recording each outcome.
inline FixtureReport recheck_scripts(const std::vector<FixtureScript>& scripts) {
  FixtureReport r;
  ProofLibrary lib;
  for (const auto& f : scripts) {
    FixtureOutcome o{f.group, f.script.id, f.script.system, statement_of(f.script), f.script.steps.size(), !f.script.premises.empty(), false, {}};
    try {
      lib.add(f.script);
      o.ok = true;
    } catch (const ProofError& e) {
      o.error = e.what();
    }
    r.outcomes.push_back(std::move(o));
  }
  return r;
}

inline FixtureReport fixture_suite() {
  ProofLibrary lib;
  return recheck_scripts(build_fixture_scripts(lib));
}

}  // namespace tenselab
