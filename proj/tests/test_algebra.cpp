#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "random_formulas.hpp"
#include "tenselab/algebra.hpp"

using namespace tenselab;

namespace {

oracle::NaiveLattice naive(const HeytingAlgebra& h) {
  oracle::Matrix m(h.size(), std::vector<bool>(h.size(), false));
  for (Element i = 0; i < h.size(); ++i)
    for (Element j = 0; j < h.size(); ++j) m[i][j] = h.leq(i, j);
  return *oracle::naive_lattice(m);
}

oracle::NaiveOps naive_ops(const OperatorTables& t) {
  const auto conv = [](const UnaryTable& u) { return oracle::Map(u.begin(), u.end()); };
  return {conv(t.dia), conv(t.box), conv(t.bdia), conv(t.bbox)};
}

// 0 < c < a, b < 1 with the operator tables where the first Dunn law fails.
AlgebraWithOps split_dunn_algebra() {
  const HeytingAlgebra h =
      from_order({"0", "a", "b", "c", "1"}, {{"0", "c"}, {"c", "a"}, {"c", "b"}, {"a", "1"}, {"b", "1"}});
  const Element z = h.element("0"), a = h.element("a"), b = h.element("b"), c = h.element("c"), o = h.element("1");
  UnaryTable dia(5), box(5);
  for (Element x : {z, b, c}) dia[x] = z;
  for (Element x : {a, o}) dia[x] = a;
  for (Element x : {z, b, c}) box[x] = b;
  for (Element x : {a, o}) box[x] = o;
  return attach_ops(h, {dia, box, dia, box});
}

std::vector<AlgebraWithOps> all_gc_algebras(std::size_t max_size) {
  std::vector<AlgebraWithOps> out;
  for (const HeytingAlgebra& h : enumerate_heyting(max_size, true)) {
    const auto pairs = enumerate_gc_pairs(h);
    for (const auto& f : pairs)
      for (const auto& p : pairs) out.push_back(attach_ops(h, tables_from_pairs(f, p)));
  }
  return out;
}

}  // namespace

TEST(AttachOps, SplitDunnExample) {
  const AlgebraWithOps alg = split_dunn_algebra();
  const HeytingAlgebra& h = alg.base();
  const LawReport& r = alg.report();
  EXPECT_TRUE(r.holds(Law::GcDiaBbox));
  EXPECT_TRUE(r.holds(Law::GcBdiaBox));
  EXPECT_TRUE(r.holds(Law::DunnSecond));
  EXPECT_TRUE(r.holds(Law::DunnSecondPast));
  const LawVerdict& d1 = r.at(Law::D1);
  ASSERT_FALSE(d1.holds);
  EXPECT_EQ(d1.witness, (std::vector<Element>{h.element("a"), h.element("b")}));
  EXPECT_EQ(d1.lhs, h.element("c"));
  EXPECT_EQ(d1.rhs, h.element("0"));
  // the past operators repeat the future ones, so the past form fails at the same point
  const LawVerdict& d2 = r.at(Law::D2);
  ASSERT_FALSE(d2.holds);
  EXPECT_EQ(d2.witness, d1.witness);
  EXPECT_TRUE(r.h2gc());
  EXPECT_FALSE(r.h2gc_fs());
  EXPECT_FALSE(r.all_green());
}

TEST(AttachOps, IdentityOperatorsPassEveryLaw) {
  for (const HeytingAlgebra& h : enumerate_heyting(6, true)) {
    const AlgebraWithOps alg = with_identity_ops(h);
    for (const auto& v : alg.report().verdicts()) EXPECT_TRUE(v.holds) << law_name(v.law);
  }
}

TEST(AttachOps, ConstantTopDiamondBreaksAdjunction) {
  const HeytingAlgebra h = chain_algebra({"0", "1"});
  const UnaryTable top{1, 1}, id{0, 1};
  const AlgebraWithOps alg = attach_ops(h, {top, id, id, id});
  const LawVerdict& v = alg.report().at(Law::GcDiaBbox);
  ASSERT_FALSE(v.holds);
  EXPECT_FALSE(alg.report().holds(Law::Br2));
  EXPECT_FALSE(alg.report().holds(Law::DiaNormal));
}

TEST(AttachOps, RejectsBadTables) {
  const HeytingAlgebra h = chain_algebra({"0", "1"});
  EXPECT_THROW(attach_ops(h, {{0}, {0, 1}, {0, 1}, {0, 1}}), AlgebraError);
  EXPECT_THROW(attach_ops(h, {{0, 2}, {0, 1}, {0, 1}, {0, 1}}), AlgebraError);
}

TEST(Laws, InequalityLawsAgreeWithFormulaValidityOracle) {
  // x ≤ y iff x → y = 1, so each inequation law is the validity of one formula
  const std::vector<std::pair<Law, const char*>> laws{
      {Law::Br1, "p -> H F p"},
      {Law::Br2, "F H p -> p"},
      {Law::Br3, "p -> G P p"},
      {Law::Br4, "P G p -> p"},
      {Law::Fs1, "F (p -> q) -> (G p -> F q)"},
      {Law::Fs2, "(F p -> G q) -> G (p -> q)"},
      {Law::Fs3, "P (p -> q) -> (H p -> P q)"},
      {Law::Fs4, "(P p -> H q) -> H (p -> q)"},
      {Law::D1, "F p & G q -> F (p & q)"},
      {Law::D2, "P p & H q -> P (p & q)"},
      {Law::DunnSecond, "G (p | q) -> G p | F q"},
      {Law::DunnSecondPast, "H (p | q) -> H p | P q"},
  };
  std::mt19937 rng(7);
  for (const HeytingAlgebra& h : enumerate_heyting(4, true)) {
    const oracle::NaiveLattice l = naive(h);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(h.size() - 1));
    for (int trial = 0; trial < 60; ++trial) {
      OperatorTables t;
      for (UnaryTable* u : {&t.dia, &t.box, &t.bdia, &t.bbox}) {
        u->resize(h.size());
        for (auto& e : *u) e = pick(rng);
      }
      const AlgebraWithOps alg = attach_ops(h, t);
      for (const auto& [law, text] : laws) {
        EXPECT_EQ(alg.report().holds(law), oracle::naive_valid(l, naive_ops(t), parse_formula(text))) << law_name(law);
      }
    }
  }
}

TEST(Laws, AdjunctionAgreesWithDefinition) {
  std::mt19937 rng(11);
  for (const HeytingAlgebra& h : enumerate_heyting(4, true)) {
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(h.size() - 1));
    for (int trial = 0; trial < 200; ++trial) {
      UnaryTable f(h.size()), g(h.size());
      for (auto& e : f) e = pick(rng);
      for (auto& e : g) e = pick(rng);
      bool expected = true;
      for (Element x = 0; x < h.size(); ++x)
        for (Element y = 0; y < h.size(); ++y)
          if (h.leq(f[x], y) != h.leq(x, g[y])) expected = false;
      const AlgebraWithOps alg = attach_ops(h, {f, g, f, g});
      EXPECT_EQ(alg.report().holds(Law::GcDiaBbox), expected);
      EXPECT_EQ(alg.report().holds(Law::GcBdiaBox), expected);
    }
  }
}

TEST(Adjoint, Examples) {
  const HeytingAlgebra two = chain_algebra({"0", "1"});
  EXPECT_EQ(adjoint_of(two, {0, 1}, AdjointSide::Lower), (UnaryTable{0, 1}));
  const HeytingAlgebra three = chain_algebra({"0", "m", "1"});
  EXPECT_EQ(adjoint_of(three, {0, 0, 0}, AdjointSide::Lower), (UnaryTable{2, 2, 2}));

  const AlgebraWithOps alg = split_dunn_algebra();
  EXPECT_EQ(adjoint_of(alg.base(), alg.ops().dia, AdjointSide::Lower), alg.ops().box);
  EXPECT_EQ(adjoint_of(alg.base(), alg.ops().box, AdjointSide::Upper), alg.ops().dia);
}

TEST(Adjoint, Errors) {
  const HeytingAlgebra diamond = detail::distributive_lattices_of_size(4, true)[1];
  const Element a = 1, b = 2;
  // f(a ∨ b) must be f(a) ∨ f(b); break it
  UnaryTable bad{0, a, b, 0};
  try {
    adjoint_of(diamond, bad, AdjointSide::Lower);
    FAIL();
  } catch (const AlgebraError& e) {
    EXPECT_EQ(e.kind(), AlgebraError::Kind::NotJoinPreserving);
    EXPECT_EQ(e.witness().size(), 2u);
  }
  try {
    adjoint_of(diamond, {a, a, a, a}, AdjointSide::Lower);
    FAIL();
  } catch (const AlgebraError& e) {
    EXPECT_EQ(e.kind(), AlgebraError::Kind::NotNormal);
  }
  try {
    adjoint_of(diamond, {0, 3, 3, 3}, AdjointSide::Upper);
    FAIL();
  } catch (const AlgebraError& e) {
    EXPECT_EQ(e.kind(), AlgebraError::Kind::NotMeetPreserving);
  }
}

TEST(Adjoint, RoundTripIsIdentity) {
  for (const HeytingAlgebra& h : enumerate_heyting(5, true))
    for (const GcPair& p : enumerate_gc_pairs(h)) {
      EXPECT_EQ(adjoint_of(h, p.upper, AdjointSide::Upper), p.lower);
      EXPECT_EQ(adjoint_of(h, adjoint_of(h, p.lower, AdjointSide::Lower), AdjointSide::Upper), p.lower);
    }
}

TEST(GcPairs, CountsAndTablesMatchBruteForce) {
  EXPECT_EQ(enumerate_gc_pairs(chain_algebra({"0", "1"})).size(), 2u);
  EXPECT_EQ(enumerate_gc_pairs(detail::distributive_lattices_of_size(1, true)[0]).size(), 1u);
  for (const HeytingAlgebra& h : enumerate_heyting(5, true)) {
    std::set<std::pair<std::vector<int>, std::vector<int>>> expected;
    for (const auto& [f, g] : oracle::brute_gc_pairs(naive(h))) expected.emplace(f, g);
    std::set<std::pair<std::vector<int>, std::vector<int>>> got;
    const auto pairs = enumerate_gc_pairs(h);
    for (const auto& p : pairs) got.emplace(std::vector<int>(p.lower.begin(), p.lower.end()), std::vector<int>(p.upper.begin(), p.upper.end()));
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.size(), pairs.size());
    EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end(), [](const GcPair& a, const GcPair& b) { return a.lower < b.lower; }));
  }
}

TEST(Evaluate, Examples) {
  const AlgebraWithOps alg = split_dunn_algebra();
  const HeytingAlgebra& h = alg.base();
  const Valuation v{{"p", h.element("a")}, {"q", h.element("b")}};
  EXPECT_EQ(evaluate(alg, v, parse_formula("F p & G q")), h.element("c"));
  EXPECT_EQ(evaluate(alg, v, parse_formula("F (p & q)")), h.element("0"));
  EXPECT_EQ(evaluate(alg, v, parse_formula("p -> p")), h.top());
  EXPECT_THROW(evaluate(alg, v, parse_formula("r")), AlgebraError);
}

TEST(Evaluate, DefinedConnectivesFollowTheirDefinitions) {
  std::mt19937 rng(3);
  const std::vector<std::string> vars{"p", "q"};
  for (const AlgebraWithOps& alg : all_gc_algebras(3)) {
    for (int i = 0; i < 20; ++i) {
      const Formula a = oracle::random_formula(rng, 3, vars), b = oracle::random_formula(rng, 3, vars);
      for (Element x = 0; x < alg.size(); ++x)
        for (Element y = 0; y < alg.size(); ++y) {
          const Valuation v{{"p", x}, {"q", y}};
          EXPECT_EQ(evaluate(alg, v, Formula::iff(a, b)),
                    evaluate(alg, v, Formula::conj(Formula::implies(a, b), Formula::implies(b, a))));
        }
    }
    EXPECT_EQ(evaluate(alg, {}, Formula::bot()), evaluate(alg, {}, Formula::negation(Formula::top())));
    EXPECT_EQ(evaluate(alg, {}, Formula::top()), evaluate(alg, {{"p", 0}}, parse_formula("p -> p")));
  }
}

TEST(Evaluate, MatchesNaiveOracleOnRandomFormulas) {
  std::mt19937 rng(5);
  const std::vector<std::string> vars{"p", "q", "r"};
  const auto algs = all_gc_algebras(4);
  for (std::size_t k = 0; k < algs.size(); k += 7) {
    const AlgebraWithOps& alg = algs[k];
    const oracle::NaiveLattice l = naive(alg.base());
    for (int i = 0; i < 30; ++i) {
      const Formula f = oracle::random_formula(rng, 5, vars);
      std::uniform_int_distribution<Element> pick(0, static_cast<Element>(alg.size() - 1));
      const Valuation v{{"p", pick(rng)}, {"q", pick(rng)}, {"r", pick(rng)}};
      const std::map<std::string, int> nv{{"p", v.at("p")}, {"q", v.at("q")}, {"r", v.at("r")}};
      EXPECT_EQ(static_cast<int>(evaluate(alg, v, f)), oracle::naive_eval(l, naive_ops(alg.ops()), nv, f));
    }
  }
}

TEST(Validity, Examples) {
  const AlgebraWithOps alg = split_dunn_algebra();
  const HeytingAlgebra& h = alg.base();
  const ValidityResult r = algebra_validity(alg, parse_formula("F p & G q -> F (p & q)"));
  ASSERT_FALSE(r.valid);
  EXPECT_EQ(r.countervaluation, (Valuation{{"p", h.element("a")}, {"q", h.element("b")}}));
  EXPECT_NE(r.value, h.top());
  EXPECT_EQ(format_valuation(h, r.countervaluation), "p=a, q=b");

  EXPECT_TRUE(algebra_validity(alg, parse_formula("bot -> p")).valid);
  for (const AlgebraWithOps& a : all_gc_algebras(4)) {
    if (!a.report().all_green()) continue;
    EXPECT_TRUE(algebra_validity(a, parse_formula("p -> H F p")).valid);
  }
  EXPECT_THROW(algebra_validity(alg, parse_formula("p & q & r & s & t")), AlgebraError);
  EXPECT_NO_THROW(algebra_validity(alg, parse_formula("p & q & r & s & t"), 5));
}

TEST(Validity, AgreesWithNaiveOracle) {
  std::mt19937 rng(9);
  const std::vector<std::string> vars{"p", "q"};
  const auto algs = all_gc_algebras(4);
  for (std::size_t k = 0; k < algs.size(); k += 5) {
    const AlgebraWithOps& alg = algs[k];
    const oracle::NaiveLattice l = naive(alg.base());
    for (int i = 0; i < 20; ++i) {
      const Formula f = oracle::random_formula(rng, 4, vars);
      const ValidityResult r = algebra_validity(alg, f);
      EXPECT_EQ(r.valid, oracle::naive_valid(l, naive_ops(alg.ops()), f)) << render_formula(f);
      if (!r.valid) {
        EXPECT_NE(evaluate(alg, r.countervaluation, f), alg.base().top());
      }
    }
  }
}

TEST(Identities, IntermediateLogicChecks) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const HeytingAlgebra chain = detail::distributive_lattices_of_size(n, true)[0];
    ASSERT_TRUE(chain.is_chain());
    EXPECT_TRUE(check_intermediate_identity(chain, prelinearity()).valid);
  }
  const HeytingAlgebra two = chain_algebra({"0", "1"});
  EXPECT_TRUE(check_intermediate_identity(two, peirce()).valid);
  EXPECT_TRUE(check_intermediate_identity(two, excluded_middle()).valid);
  EXPECT_FALSE(check_intermediate_identity(chain_algebra({"0", "m", "1"}), peirce()).valid);

  // the four-element diamond is Boolean; the naive oracle decides prelinearity there
  const HeytingAlgebra diamond = from_order({"0", "a", "b", "1"}, {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}});
  const bool oracle_verdict =
      oracle::naive_valid(naive(diamond), naive_ops(identity_tables(4)), prelinearity().formula);
  EXPECT_EQ(check_intermediate_identity(diamond, prelinearity()).valid, oracle_verdict);
  EXPECT_TRUE(oracle_verdict);

  // below a new top the diamond's atoms are no longer complemented
  const HeytingAlgebra raised = from_order({"0", "a", "b", "c", "1"}, {{"0", "a"}, {"0", "b"}, {"a", "c"}, {"b", "c"}, {"c", "1"}});
  const ValidityResult r = check_intermediate_identity(raised, prelinearity());
  ASSERT_FALSE(r.valid);
  EXPECT_EQ(r.countervaluation, (Valuation{{"p", raised.element("a")}, {"q", raised.element("b")}}));
  EXPECT_EQ(r.value, raised.element("c"));

  const Identity custom = custom_identity("weak_excluded_middle", parse_formula("~p | ~~p"));
  EXPECT_FALSE(check_intermediate_identity(raised, custom).valid);
  EXPECT_TRUE(check_intermediate_identity(chain_algebra({"0", "m", "1"}), custom).valid);
}

TEST(Identities, PropositionalRouteAgreesWithIdentityExpansion) {
  std::mt19937 rng(13);
  const std::vector<std::string> vars{"p", "q"};
  for (const HeytingAlgebra& h : enumerate_heyting(5, true)) {
    const AlgebraWithOps id = with_identity_ops(h);
    for (int i = 0; i < 40; ++i) {
      Formula f = oracle::random_formula(rng, 4, vars);
      if (f.has_modality()) continue;
      EXPECT_EQ(propositional_validity(h, f).valid, algebra_validity(id, f).valid);
    }
  }
  EXPECT_THROW(evaluate_propositional(chain_algebra({"0", "1"}), {{"p", 0}}, parse_formula("F p")), AlgebraError);
}

TEST(FischerServi, EquivalenceClassesOnSmallAlgebras) {
  for (const AlgebraWithOps& alg : all_gc_algebras(4)) {
    const LawReport& r = alg.report();
    if (!r.h2gc()) continue;
    EXPECT_EQ(r.holds(Law::Fs1), r.holds(Law::D1));
    EXPECT_EQ(r.holds(Law::Fs1), r.holds(Law::Fs4));
    EXPECT_EQ(r.holds(Law::Fs2), r.holds(Law::D2));
    EXPECT_EQ(r.holds(Law::Fs2), r.holds(Law::Fs3));
    EXPECT_EQ(r.holds_all({Law::D1, Law::D2}), r.holds_all({Law::Fs1, Law::Fs2, Law::Fs3, Law::Fs4}));
    EXPECT_EQ(r.all_green(), r.h2gc_fs());
  }
}

TEST(LawSets, Parsing) {
  EXPECT_EQ(parse_law_set("fs1"), std::vector<Law>{Law::Fs1});
  EXPECT_EQ(parse_law_set("gc, d1"), (std::vector<Law>{Law::GcDiaBbox, Law::GcBdiaBox, Law::D1}));
  EXPECT_EQ(parse_law_set("h2gc+fs").size(), core_laws().size());
  EXPECT_THROW(parse_law_set("fs9"), AlgebraError);
}
