#include <gtest/gtest.h>

#include <random>

#include "random_formulas.hpp"
#include "tenselab/syntax.hpp"

using namespace tenselab;

namespace {

Formula v(const char* n) { return Formula::var(n); }

}  // namespace

TEST(Parse, ModalImplication) {
  EXPECT_EQ(parse_formula("F p -> G q"), Formula::implies(Formula::dia(v("p")), Formula::box(v("q"))));
}

TEST(Parse, ImplicationIsRightAssociative) {
  EXPECT_EQ(parse_formula("p -> q -> r"), Formula::implies(v("p"), Formula::implies(v("q"), v("r"))));
}

TEST(Parse, FischerServiAxiom) {
  const Formula expected = Formula::implies(Formula::dia(Formula::implies(v("p"), v("q"))),
                                            Formula::implies(Formula::box(v("p")), Formula::dia(v("q"))));
  EXPECT_EQ(parse_formula("F (p -> q) -> (G p -> F q)"), expected);
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse_formula("p & q | r"), Formula::disj(Formula::conj(v("p"), v("q")), v("r")));
  EXPECT_EQ(parse_formula("p | q & r"), Formula::disj(v("p"), Formula::conj(v("q"), v("r"))));
  EXPECT_EQ(parse_formula("p | q -> r"), Formula::implies(Formula::disj(v("p"), v("q")), v("r")));
  EXPECT_EQ(parse_formula("p -> q <-> r"), Formula::iff(Formula::implies(v("p"), v("q")), v("r")));
  EXPECT_EQ(parse_formula("~p & q"), Formula::conj(Formula::negation(v("p")), v("q")));
  EXPECT_EQ(parse_formula("F p & q"), Formula::conj(Formula::dia(v("p")), v("q")));
  EXPECT_EQ(parse_formula("F ~G p"), Formula::dia(Formula::negation(Formula::box(v("p")))));
}

TEST(Parse, LeftAssociativity) {
  EXPECT_EQ(parse_formula("p & q & r"), Formula::conj(Formula::conj(v("p"), v("q")), v("r")));
  EXPECT_EQ(parse_formula("p | q | r"), Formula::disj(Formula::disj(v("p"), v("q")), v("r")));
  EXPECT_EQ(parse_formula("p <-> q <-> r"), Formula::iff(Formula::iff(v("p"), v("q")), v("r")));
}

TEST(Parse, OperatorAliases) {
  EXPECT_EQ(parse_formula("dia p"), parse_formula("F p"));
  EXPECT_EQ(parse_formula("box p"), parse_formula("G p"));
  EXPECT_EQ(parse_formula("bdia p"), parse_formula("P p"));
  EXPECT_EQ(parse_formula("bbox p"), parse_formula("H p"));
  EXPECT_EQ(parse_formula("Fp"), parse_formula("F p"));
  EXPECT_EQ(parse_formula("FGPHp"), parse_formula("F G P H p"));
  EXPECT_EQ(parse_formula("◇(p → q) → (□p → ◇q)"), parse_formula("F (p -> q) -> (G p -> F q)"));
  EXPECT_EQ(parse_formula("⧫p ∧ ■q ∨ ¬⊤ ↔ ⊥"), parse_formula("P p & H q | ~top <-> bot"));
}

TEST(Parse, Constants) {
  EXPECT_EQ(parse_formula("top").kind(), Connective::Top);
  EXPECT_EQ(parse_formula("bot").kind(), Connective::Bot);
  EXPECT_EQ(parse_formula("topx"), v("topx"));
  EXPECT_EQ(parse_formula("p_1Ab"), v("p_1Ab"));
}

TEST(ParseErrors, LexErrorReportsPosition) {
  try {
    parse_formula("p & $q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::Lex);
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_formula("p - q"), ParseError);
  EXPECT_THROW(parse_formula("Q"), ParseError);
}

TEST(ParseErrors, SyntaxErrorListsExpectedTokens) {
  try {
    parse_formula("p &");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.position(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse_formula("(p | q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.expected(), std::vector<std::string>{"')'"});
  }
  EXPECT_THROW(parse_formula(""), ParseError);
  EXPECT_THROW(parse_formula("p q"), ParseError);
  EXPECT_THROW(parse_formula("F"), ParseError);
}

TEST(ParseErrors, ReservedWordsAsVariables) {
  for (const char* text : {"dia", "p -> box", "bbox & q", "(bdia)"}) {
    try {
      parse_formula(text);
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseError::Kind::ReservedWord) << text;
    }
  }
  EXPECT_THROW(validate_variable_name("top"), ParseError);
  EXPECT_THROW(validate_variable_name("bot"), ParseError);
  EXPECT_THROW(validate_variable_name("Xy"), ParseError);
  EXPECT_NO_THROW(validate_variable_name("x1"));
}

TEST(Parse, Metavariables) {
  const Formula f = parse_schema("A -> H F A1");
  EXPECT_EQ(f, Formula::implies(v("A"), Formula::bbox(Formula::dia(v("A1")))));
  EXPECT_THROW(parse_formula("A -> p"), ParseError);
}

TEST(Render, Examples) {
  EXPECT_EQ(render_formula(Formula::implies(Formula::dia(v("p")), v("p"))), "F p -> p");
  EXPECT_EQ(render_formula(Formula::conj(Formula::disj(v("p"), v("q")), v("r"))), "(p | q) & r");
  EXPECT_EQ(render_formula(Formula::iff(Formula::bbox(Formula::negation(v("p"))),
                                        Formula::negation(Formula::bdia(v("p"))))),
            "H ~p <-> ~P p");
  EXPECT_EQ(render_formula(parse_formula("(p -> q) -> r")), "(p -> q) -> r");
  EXPECT_EQ(render_formula(parse_formula("p -> (q -> r)")), "p -> q -> r");
  EXPECT_EQ(render_formula(parse_formula("p & (q & r)")), "p & (q & r)");
  EXPECT_EQ(render_formula(parse_formula("~(p & q)")), "~(p & q)");
  EXPECT_EQ(render_formula(parse_formula("F(G p)")), "F G p");
  EXPECT_EQ(render_formula(parse_formula("dia top")), "F top");
}

TEST(Render, RandomRoundTrip) {
  std::mt19937 rng(20240601);
  const std::vector<std::string> vars{"p", "q", "r", "s1"};
  for (int i = 0; i < 2000; ++i) {
    const Formula f = oracle::random_formula(rng, 6, vars);
    const std::string text = render_formula(f);
    ASSERT_EQ(parse_formula(text), f) << text;
    ASSERT_EQ(render_formula(parse_formula(text)), text);
  }
}

TEST(Variables, Examples) {
  EXPECT_EQ(variables_of(parse_formula("F p & G p")), std::vector<std::string>{"p"});
  EXPECT_TRUE(variables_of(parse_formula("top")).empty());
  EXPECT_EQ(variables_of(parse_formula("(P a -> H b) -> H (a -> b)")), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(variables_of(parse_formula("z | a & m -> a")), (std::vector<std::string>{"a", "m", "z"}));
}

TEST(Substitution, SimultaneousReplacement) {
  const Formula f = parse_formula("p -> q");
  const Formula g = substitute(f, {{"p", parse_formula("q")}, {"q", parse_formula("F p")}});
  EXPECT_EQ(g, parse_formula("q -> F p"));
  EXPECT_EQ(substitute(f, {{"r", v("s")}}), f);
}

TEST(Substitution, MatchPatternInvertsSubstitution) {
  const Formula schema = parse_schema("F (A -> B) -> (G A -> F B)");
  const Formula inst = parse_formula("F (p & q -> H r) -> (G (p & q) -> F H r)");
  Substitution s;
  ASSERT_TRUE(match_pattern(schema, inst, s));
  EXPECT_EQ(s.at("A"), parse_formula("p & q"));
  EXPECT_EQ(s.at("B"), parse_formula("H r"));
  EXPECT_EQ(substitute(schema, s), inst);

  Substitution t;
  EXPECT_FALSE(match_pattern(schema, parse_formula("F (p -> q) -> (G r -> F q)"), t));
}

TEST(Formula, StructuralEqualityAndSharing) {
  const Formula a = parse_formula("F p -> G (q & r)");
  const Formula b = parse_formula("F p -> G (q & r)");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, parse_formula("F p -> G (r & q)"));
  EXPECT_TRUE(a.has_modality());
  EXPECT_FALSE(parse_formula("p -> ~q").has_modality());
  EXPECT_EQ(a.size(), 7u);
}

TEST(Compile, SlotsFollowSortedVariables) {
  const CompiledFormula c = compile(parse_formula("q -> p & q"));
  EXPECT_EQ(c.variables, (std::vector<std::string>{"p", "q"}));
  ASSERT_EQ(c.program.size(), 5u);
  EXPECT_EQ(c.program[0].slot, 1u);
  EXPECT_EQ(c.program[1].slot, 0u);
  EXPECT_EQ(c.max_stack, 3u);
}
