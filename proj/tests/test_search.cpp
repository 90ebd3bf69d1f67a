#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "tenselab/search.hpp"

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

bool naive_gc(const oracle::NaiveLattice& l, const oracle::Map& lower, const oracle::Map& upper) {
  for (int x = 0; x < l.n; ++x)
    for (int y = 0; y < l.n; ++y)
      if (l.leq[lower[x]][y] != l.leq[x][upper[y]]) return false;
  return true;
}

// Re-evaluates an algebra witness with the reference evaluator.
void expect_algebra_witness(const Verdict& v, const Formula& f) {
  ASSERT_TRUE(v.found());
  ASSERT_TRUE(v.algebra.has_value());
  const auto l = naive(v.algebra->base());
  const auto ops = naive_ops(v.algebra->ops());
  EXPECT_TRUE(naive_gc(l, ops.dia, ops.bbox));
  EXPECT_TRUE(naive_gc(l, ops.bdia, ops.box));
  std::map<std::string, int> val;
  for (const auto& [p, e] : v.valuation) val[p] = e;
  const int value = oracle::naive_eval(l, ops, val, f);
  EXPECT_NE(value, l.top);
  EXPECT_EQ(value, static_cast<int>(v.value));
}

oracle::NaiveFrame naive_frame(const Frame& fr) {
  oracle::NaiveFrame n{static_cast<int>(fr.size()), {}, {}};
  n.leq.assign(fr.size(), std::vector<bool>(fr.size(), false));
  n.r = n.leq;
  for (std::size_t x = 0; x < fr.size(); ++x)
    for (std::size_t y = 0; y < fr.size(); ++y) {
      n.leq[x][y] = fr.leq().has(x, y);
      n.r[x][y] = fr.r().has(x, y);
    }
  return n;
}

void expect_frame_witness(const Verdict& v, const Formula& f) {
  ASSERT_TRUE(v.found());
  ASSERT_TRUE(v.frame.has_value());
  const auto n = naive_frame(*v.frame);
  EXPECT_TRUE(oracle::naive_ik_frame(n));
  std::map<std::string, std::uint64_t> val;
  for (const auto& [p, s] : v.world_valuation) {
    EXPECT_TRUE(is_upset(v.frame->poset(), s));
    val[p] = s.bits();
  }
  EXPECT_FALSE(oracle::naive_sat(n, val, static_cast<int>(v.world), f));
}

}  // namespace

TEST(Bounds, ParsesAndValidates) {
  const SearchBounds d = parse_bounds("");
  EXPECT_EQ(d.max_size, 5u);
  EXPECT_EQ(d.max_frame, 4u);
  EXPECT_EQ(d.max_vars, 3u);
  EXPECT_EQ(d.max_gc_pairs, 0u);
  EXPECT_DOUBLE_EQ(d.seconds, 300);
  const SearchBounds b = parse_bounds("size=4,frames=2,vars=2,pairs=7,seconds=1.5");
  EXPECT_EQ(b.max_size, 4u);
  EXPECT_EQ(b.max_frame, 2u);
  EXPECT_EQ(b.max_vars, 2u);
  EXPECT_EQ(b.max_gc_pairs, 7u);
  EXPECT_DOUBLE_EQ(b.seconds, 1.5);
  for (const char* bad : {"size=8", "frames=5", "size=0", "seconds=0", "depth=2", "size", "size=x", "size=3x"})
    EXPECT_THROW(parse_bounds(bad), SearchError) << bad;
}

TEST(Enumeration, VisitsEveryLatticeWithEveryPairOfGcPairs) {
  std::uint64_t expected = 0;
  for (int n = 1; n <= 4; ++n) {
    std::set<std::string> seen;
    for (const auto& m : oracle::all_partial_orders(n)) {
      auto l = oracle::naive_lattice(m);
      if (!l || !oracle::is_distributive(*l) || !seen.insert(oracle::iso_code(m)).second) continue;
      const auto pairs = oracle::brute_gc_pairs(*l).size();
      expected += pairs * pairs;
    }
  }
  std::uint64_t visited = 0;
  for_each_gc_algebra(4, 0, [&](const AlgebraWithOps& a) {
    const auto l = naive(a.base());
    const auto ops = naive_ops(a.ops());
    EXPECT_TRUE(naive_gc(l, ops.dia, ops.bbox));
    EXPECT_TRUE(naive_gc(l, ops.bdia, ops.box));
    ++visited;
    return true;
  });
  EXPECT_EQ(visited, expected);
}

TEST(Enumeration, H2gcfsAlgebrasPassEveryCoreLaw) {
  const auto algebras = enumerate_h2gcfs_algebras(4);
  EXPECT_FALSE(algebras.empty());
  for (const auto& a : algebras) {
    const auto l = naive(a.base());
    const auto ops = naive_ops(a.ops());
    for (const char* fs : {"F (p -> q) -> G p -> F q", "(F p -> G q) -> G (p -> q)", "P (p -> q) -> H p -> P q",
                           "(P p -> H q) -> H (p -> q)"})
      EXPECT_TRUE(oracle::naive_valid(l, ops, parse_formula(fs))) << fs;
  }
}

TEST(AlgebraSearch, FindsCountermodelsToNonTheorems) {
  for (const char* text : {"F p <-> ~G ~p", "G p <-> ~F ~p", "G (p | q) -> G p | F q", "F p -> p"}) {
    const Formula f = parse_formula(text);
    const Verdict v = find_algebra_countermodel(f, core_laws());
    EXPECT_TRUE(v.found()) << text;
    expect_algebra_witness(v, f);
    EXPECT_TRUE(v.algebra->report().all_green()) << text;
  }
}

TEST(AlgebraSearch, ExhaustsOnTheorems) {
  for (const char* text : {"p -> H F p", "P G p -> p", "F (p -> q) -> G p -> F q", "G ~p -> ~F p", "F p & G q -> F (p & q)"}) {
    const Verdict v = find_algebra_countermodel(parse_formula(text), core_laws(), parse_bounds("size=4"));
    EXPECT_EQ(v.status, SearchStatus::Exhausted) << text;
    EXPECT_GT(v.structures_scanned, 0u);
  }
}

TEST(AlgebraSearch, LawFilterChangesTheAnswer) {
  // The first Dunn law fails once the Fischer Servi laws are dropped.
  const Formula f = parse_formula("F p & G q -> F (p & q)");
  EXPECT_EQ(find_algebra_countermodel(f, core_laws(), parse_bounds("size=4")).status, SearchStatus::Exhausted);
  const Verdict v = find_algebra_countermodel(f, gc_laws(), parse_bounds("size=5"));
  expect_algebra_witness(v, f);
  EXPECT_FALSE(v.algebra->report().holds(Law::D1));
}

TEST(AlgebraSearch, TimeoutAndErrors) {
  const Verdict v = find_algebra_countermodel(parse_formula("p -> H F p"), core_laws(), parse_bounds("size=5,seconds=0.000001"));
  EXPECT_EQ(v.status, SearchStatus::Timeout);
  EXPECT_THROW(find_algebra_countermodel(parse_formula("p & q & r & s -> p"), core_laws()), SearchError);
}

TEST(FrameSearch, FindsCountermodelsOnIkFrames) {
  for (const char* text : {"F p <-> ~G ~p", "G p <-> ~F ~p", "F p -> p"}) {
    const Formula f = parse_formula(text);
    const Verdict v = find_frame_countermodel(f, parse_bounds("frames=3"));
    expect_frame_witness(v, f);
  }
}

TEST(FrameSearch, ExhaustsOnTheorems) {
  for (const char* text : {"p -> H F p", "p -> G P p", "F (p -> q) -> G p -> F q", "(P p -> H q) -> H (p -> q)"}) {
    const Verdict v = find_frame_countermodel(parse_formula(text), parse_bounds("frames=3"));
    EXPECT_EQ(v.status, SearchStatus::Exhausted) << text;
  }
}

TEST(FrameSearch, NonIkFramesRefuteFischerServi) {
  const Formula f = parse_formula("F (p -> q) -> G p -> F q");
  EXPECT_EQ(find_frame_countermodel(f, parse_bounds("frames=3"), true).status, SearchStatus::Exhausted);
  const Verdict v = find_frame_countermodel(f, parse_bounds("frames=3"), false);
  ASSERT_TRUE(v.found());
  EXPECT_FALSE(oracle::naive_ik_frame(naive_frame(*v.frame)));
}

TEST(LawEquivalence, FischerServiMatchesDunn) {
  const auto b = parse_bounds("size=4");
  EXPECT_EQ(test_law_equivalence({Law::Fs1}, {Law::D1}, b).status, SearchStatus::Exhausted);
  EXPECT_EQ(test_law_equivalence({Law::Fs4}, {Law::D1}, b).status, SearchStatus::Exhausted);
  EXPECT_EQ(test_law_equivalence({Law::Fs2}, {Law::D2}, b).status, SearchStatus::Exhausted);
  EXPECT_EQ(test_law_equivalence({Law::Fs3}, {Law::D2}, b).status, SearchStatus::Exhausted);
  EXPECT_EQ(test_law_equivalence({Law::Fs1, Law::Fs2}, {Law::D1, Law::D2}, b).status, SearchStatus::Exhausted);
  EXPECT_EQ(test_law_equivalence({Law::D1}, {Law::D1}, b).status, SearchStatus::Exhausted);
  // The future and past halves are independent of each other.
  const Verdict v = test_law_equivalence({Law::D1}, {Law::D2}, b);
  ASSERT_TRUE(v.found());
  EXPECT_NE(v.algebra->report().holds(Law::D1), v.algebra->report().holds(Law::D2));
}

TEST(LawEquivalence, DunnLawsAreIndependent) {
  const Verdict v = test_law_equivalence({Law::DunnSecond}, {Law::D1}, parse_bounds("size=5"), false);
  ASSERT_TRUE(v.found());
  EXPECT_TRUE(v.algebra->report().holds(Law::DunnSecond));
  EXPECT_FALSE(v.algebra->report().holds(Law::D1));
  const Verdict w = test_law_equivalence({Law::D1}, {Law::DunnSecond}, parse_bounds("size=5"), true);
  ASSERT_TRUE(w.found());
  EXPECT_NE(w.algebra->report().holds(Law::D1), w.algebra->report().holds(Law::DunnSecond));
}

TEST(Conservativity, PropositionalFormulasAgree) {
  for (const char* text : {"p | ~p", "((p -> q) -> p) -> p", "(p -> q) | (q -> p)", "~~p -> p", "p -> p", "~(p & ~p)"}) {
    const ConservativityVerdict c = conservativity_check(parse_formula(text));
    EXPECT_EQ(c.verdict.status, SearchStatus::Exhausted) << text;
    EXPECT_GT(c.algebras_checked, 0u);
  }
  EXPECT_TRUE(conservativity_check(parse_formula("p -> p")).failing.empty());
  EXPECT_FALSE(conservativity_check(parse_formula("p | ~p")).failing.empty());
  EXPECT_FALSE(conservativity_check(parse_formula("((p -> q) -> p) -> p")).failing.empty());
}

TEST(Conservativity, RejectsModalFormulas) {
  try {
    conservativity_check(parse_formula("F p -> p"));
    FAIL() << "expected an error";
  } catch (const SearchError& e) {
    EXPECT_EQ(e.kind(), SearchError::Kind::ModalOperatorPresent);
  }
}
