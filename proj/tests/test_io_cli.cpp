#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "tenselab/cli.hpp"
#include "tenselab/io.hpp"

using namespace tenselab;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = TENSELAB_CORPUS_DIR;

std::string alg(const char* name) { return (kCorpus / "algebras" / name).string(); }
std::string frm(const char* name) { return (kCorpus / "frames" / name).string(); }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tenselab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(AlgebraFiles, LoadsTheIndependenceExample) {
  const LoadedAlgebra la = load_algebra(alg("exa_independent.json"));
  ASSERT_TRUE(la.with_ops.has_value());
  const HeytingAlgebra& h = la.base;
  const Element z = h.element("0"), a = h.element("a"), b = h.element("b"), c = h.element("c"), o = h.element("1");
  EXPECT_TRUE(h.leq(c, a) && h.leq(c, b) && !h.leq(a, b) && !h.leq(b, a));
  EXPECT_EQ(h.meet(a, b), c);
  const auto& t = la.ops().ops();
  EXPECT_EQ(t.dia[a], a);
  EXPECT_EQ(t.dia[o], a);
  EXPECT_EQ(t.dia[c], z);
  EXPECT_EQ(t.box[b], b);
  EXPECT_EQ(t.box[a], o);
  EXPECT_EQ(t.bdia, t.dia);
  EXPECT_EQ(t.bbox, t.box);
}

TEST(AlgebraFiles, RoundTripEveryEnumeratedAlgebra) {
  for (const auto& a : enumerate_h2gcfs_algebras(4)) {
    const LoadedAlgebra back = algebra_from_json(algebra_to_json(a));
    ASSERT_TRUE(back.with_ops.has_value());
    EXPECT_EQ(*back.with_ops, a);
  }
  const LoadedAlgebra base = load_algebra(alg("diamond_top.json"));
  EXPECT_FALSE(base.with_ops.has_value());
  EXPECT_EQ(algebra_from_json(algebra_to_json(base.base, nullptr, base.name)).base, base.base);
}

TEST(AlgebraFiles, RejectsMalformedInput) {
  const Json good = read_json_file(alg("exa_independent.json"));
  Json missing_entry = good;
  missing_entry["ops"]["dia"].erase("c");
  EXPECT_THROW(algebra_from_json(missing_entry), IoError);
  Json missing_table = good;
  missing_table["ops"].erase("bbox");
  EXPECT_THROW(algebra_from_json(missing_table), IoError);
  Json unknown = good;
  unknown["ops"]["box"]["a"] = "z";
  EXPECT_THROW(algebra_from_json(unknown), IoError);
  Json not_lattice = Json::parse(R"({"elements": ["0", "a", "b"], "leq": [["0", "a"], ["0", "b"]]})");
  EXPECT_ANY_THROW(algebra_from_json(not_lattice));
  Json not_gc = good;
  not_gc["ops"]["dia"]["0"] = "a";
  EXPECT_FALSE(algebra_from_json(not_gc).ops().report().holds(Law::GcDiaBbox));
  EXPECT_THROW(load_algebra(alg("no_such_file.json")), IoError);
}

TEST(FrameFiles, ClosureTakenAndRoundTrip) {
  const Frame f = frame_from_json(Json::parse(R"({"worlds": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]], "R": [["a", "c"]]})"));
  EXPECT_TRUE(f.leq().has(*f.find("a"), *f.find("c")));
  EXPECT_TRUE(f.leq().has(*f.find("b"), *f.find("b")));
  const Frame back = frame_from_json(frame_to_json(f));
  EXPECT_EQ(back.names(), f.names());
  EXPECT_EQ(back.leq(), f.leq());
  EXPECT_EQ(back.r(), f.r());
  EXPECT_THROW(frame_from_json(Json::parse(R"({"worlds": ["a"], "leq": []})")), IoError);
  EXPECT_THROW(frame_from_json(Json::parse(R"({"worlds": ["a"], "leq": [], "R": [["a", "b"]]})")), FrameError);
}

TEST(ModelFiles, PersistenceValidatedNotRepaired) {
  const Model m = load_model(frm("two_chain_model.json"));
  const Model back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.frame().names(), m.frame().names());
  EXPECT_EQ(back.valuation(), m.valuation());
  Json bad = read_json_file(frm("two_chain_model.json"));
  bad["val"]["p"] = Json::array({"u"});
  EXPECT_ANY_THROW(model_from_json(bad));
}

TEST(FuzzyFiles, LoadsNamedAlgebraAndRoundTrips) {
  const FuzzyInstance fi =
      fuzzy_from_json(read_json_file(kCorpus / "fuzzy" / "dunn_second_fails.json"), directory_resolver({kCorpus / "algebras"}));
  EXPECT_EQ(fi.universe, (std::vector<std::string>{"x", "y"}));
  const HeytingAlgebra& h = fi.values.base;
  EXPECT_EQ(fi.relation[0][0], h.element("a"));
  EXPECT_EQ(fi.relation[0][1], h.element("b"));
  const FuzzyAlgebra fa = build_fuzzy_algebra(h, fi.universe, fi.relation);
  EXPECT_TRUE(fa.algebra.report().all_green());
  EXPECT_FALSE(fa.algebra.report().holds(Law::DunnSecond));
  const FuzzyInstance back = fuzzy_from_json(fuzzy_to_json(fi), directory_resolver({}));
  EXPECT_EQ(back.relation, fi.relation);
  EXPECT_EQ(back.values.base, h);
  Json partial = fuzzy_to_json(fi);
  partial["relation"].erase("y,x");
  EXPECT_THROW(fuzzy_from_json(partial, directory_resolver({})), IoError);
}

TEST(ProofFiles, FixturesRoundTripAndRecheck) {
  ProofLibrary lib;
  const auto scripts = build_fixture_scripts(lib);
  ProofLibrary fresh;
  for (const auto& fx : scripts) {
    const ProofScript back = proof_from_json(proof_to_json(fx.script));
    EXPECT_EQ(back.id, fx.script.id);
    EXPECT_EQ(back.steps.size(), fx.script.steps.size());
    EXPECT_NO_THROW(fresh.add(back)) << fx.script.id;
  }
  EXPECT_THROW(proof_from_json(Json::parse(R"({"id": "x", "system": "Int", "theorem": "A -> A", "steps": [{"axiom": "K", "rule": "MP"}]})")),
               IoError);
}

TEST(Valuations, ParseText) {
  const LoadedAlgebra la = load_algebra(alg("exa_independent.json"));
  const Valuation v = parse_valuation(la.base, "p=a, q=b");
  EXPECT_EQ(v.at("p"), la.base.element("a"));
  EXPECT_EQ(v.at("q"), la.base.element("b"));
  EXPECT_THROW(parse_valuation(la.base, "p=z"), IoError);
  EXPECT_THROW(parse_valuation(la.base, "p"), IoError);
}

TEST(Cli, IndependenceCountervaluation) {
  const Outcome r = invoke({"--json", "validity", "--algebra", alg("exa_independent.json"), "--formula", "F p & G q -> F (p & q)"});
  EXPECT_EQ(r.code, 1);
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["valid"].get<bool>());
  EXPECT_EQ(j["countervaluation"]["p"], "a");
  EXPECT_EQ(j["countervaluation"]["q"], "b");
  EXPECT_EQ(j["value"], "0");
  EXPECT_EQ(invoke({"validity", "-a", alg("exa_independent.json"), "-f", "G (p | q) -> G p | F q"}).code, 0);
}

TEST(Cli, EmbedReportsIsomorphism) {
  const Outcome r = invoke({"embed", "--algebra", alg("two_element_identity.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("isomorphism"), std::string::npos);
  const Outcome j = invoke({"--json", "embed", "--algebra", alg("two_element_identity.json")});
  EXPECT_TRUE(Json::parse(j.out)["isomorphism"].get<bool>());
}

TEST(Cli, FixturesBySystem) {
  const Outcome r = invoke({"--json", "fixtures", "--system", "Int2GC+FS"});
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j.empty());
  for (const auto& o : j) {
    EXPECT_EQ(o["system"], "Int2GC+FS");
    EXPECT_TRUE(o["ok"].get<bool>());
  }
  EXPECT_EQ(invoke({"fixtures", "--system", "S5"}).code, 2);
}

TEST(Cli, EmittedProofsCheckAndTamperingIsCaught) {
  const fs::path dir = scratch("proofs");
  ASSERT_EQ(invoke({"fixtures", "--emit", dir.string()}).code, 0);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  ASSERT_FALSE(files.empty());
  std::vector<std::string> args{"check-proof", "--no-fixtures", "--proof"};
  for (const auto& f : files) args.push_back(f.string());
  EXPECT_EQ(invoke(args).code, 0);

  std::vector<std::string> preloaded{"check-proof", "--proof"};
  for (const auto& f : files) preloaded.push_back(f.string());
  EXPECT_EQ(invoke(preloaded).code, 0);

  Json circular = read_json_file(files.back());
  circular["steps"] = Json::array({Json{{"lemma", circular["id"]}}});
  const fs::path loop = dir / "circular.json";
  write_json_file(loop, circular);
  EXPECT_EQ(invoke({"check-proof", "--proof", loop.string()}).code, 1);

  Json j = read_json_file(files.front());
  j["theorem"] = "A -> B";
  const fs::path bad = dir / "tampered.json";
  write_json_file(bad, j);
  const Outcome r = invoke({"--json", "check-proof", "--proof", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(Json::parse(r.out)[0]["ok"].get<bool>());
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"parse", "-f", "F p & G q -> F (p & q)"}).code, 0);
  EXPECT_EQ(invoke({"parse", "-f", "F p & (q"}).code, 2);
  EXPECT_EQ(invoke({"parse", "-f", "p", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"validity", "-a", alg("no_such_file.json"), "-f", "p"}).code, 2);
  EXPECT_EQ(invoke({"check-frame", "--frame", frm("two_chain_r.json")}).code, 0);
  EXPECT_EQ(invoke({"check-frame", "--frame", frm("not_ik.json")}).code, 1);
  EXPECT_EQ(invoke({"check-algebra", "-a", alg("two_element_identity.json")}).code, 0);
  EXPECT_EQ(invoke({"check-algebra", "-a", alg("exa_independent.json")}).code, 1);
  EXPECT_EQ(invoke({"check-algebra", "-a", alg("exa_independent.json"), "--laws", "gc,dunn_second"}).code, 0);
  EXPECT_EQ(invoke({"canonical", "-a", alg("exa_independent.json")}).code, 2);
  EXPECT_EQ(invoke({"complex", "--frame", frm("not_ik.json")}).code, 2);
  EXPECT_EQ(invoke({"search", "-f", "F p <-> ~G ~p"}).code, 1);
  EXPECT_EQ(invoke({"search", "-f", "p -> H F p", "--bounds", "size=3"}).code, 0);
  EXPECT_EQ(invoke({"search", "-f", "p -> H F p", "--bounds", "size=5,seconds=0.000001"}).code, 3);
  EXPECT_EQ(invoke({"search", "-f", "p", "--bounds", "size=9"}).code, 2);
  EXPECT_EQ(invoke({"search", "--conservativity", "-f", "F p -> p"}).code, 2);
  EXPECT_EQ(invoke({"search", "--conservativity", "-f", "p | ~p"}).code, 0);
  EXPECT_EQ(invoke({"equiv", "--a", "fs1", "--b", "d1", "--bounds", "size=4"}).code, 0);
  EXPECT_EQ(invoke({"equiv", "--a", "dunn_second", "--b", "d1"}).code, 1);
  EXPECT_EQ(invoke({"equiv", "--a", "nonsense", "--b", "d1"}).code, 2);
}

TEST(Cli, EvalInAlgebraAndModel) {
  const Outcome a = invoke({"eval", "-a", alg("exa_independent.json"), "--val", "p=a,q=b", "-f", "F p & G q"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, "c\n");
  const Outcome m = invoke({"--json", "eval", "--model", frm("two_chain_model.json"), "-f", "p", "--world", "u"});
  EXPECT_EQ(m.code, 0);
  EXPECT_FALSE(Json::parse(m.out)["u"].get<bool>());
  EXPECT_EQ(invoke({"eval", "--model", frm("two_chain_model.json"), "-f", "p", "--world", "nowhere"}).code, 2);
}

TEST(Cli, JsonOutputReloadsAndIsStable) {
  const std::vector<std::string> search{"--json", "search", "-f", "F p <-> ~G ~p"};
  const Outcome first = invoke(search);
  EXPECT_EQ(first.out, invoke(search).out);
  const Json v = Json::parse(first.out);
  const LoadedAlgebra witness = algebra_from_json(v["algebra"]);
  const Valuation val = parse_valuation(witness.base, "p=" + v["valuation"]["p"].get<std::string>());
  EXPECT_NE(evaluate(witness.ops(), val, parse_formula("F p <-> ~G ~p")), witness.base.top());

  const Outcome frames = invoke({"--json", "search", "--frames", "-f", "F p <-> ~G ~p", "--bounds", "frames=3"});
  EXPECT_EQ(frames.code, 1);
  const Json fj = Json::parse(frames.out);
  const Model m = model_from_json(fj["model"]);
  EXPECT_FALSE(satisfies(m, *m.frame().find(fj["world"].get<std::string>()), parse_formula("F p <-> ~G ~p")));

  const Outcome fv = invoke({"--json", "frame-validity", "--frame", frm("two_worlds_cycle.json"), "-f", "F p -> p"});
  EXPECT_EQ(fv.code, 1);
  EXPECT_NO_THROW(model_from_json(Json::parse(fv.out)["model"]));

  const Outcome cx = invoke({"--json", "complex", "--frame", frm("two_chain_r.json")});
  EXPECT_EQ(cx.code, 0);
  const LoadedAlgebra ca = algebra_from_json(Json::parse(cx.out));
  EXPECT_EQ(*ca.with_ops, complex_algebra(load_frame(frm("two_chain_r.json"))).algebra);

  const Outcome fz = invoke({"--json", "fuzzy-build", "--fuzzy", (kCorpus / "fuzzy" / "dunn_second_fails.json").string()});
  EXPECT_EQ(fz.code, 0);
  const LoadedAlgebra fa = algebra_from_json(Json::parse(fz.out));
  EXPECT_TRUE(fa.ops().report().all_green());
  EXPECT_FALSE(fa.ops().report().holds(Law::DunnSecond));

  const Outcome cf = invoke({"--json", "canonical", "-a", alg("two_element_identity.json")});
  EXPECT_EQ(cf.code, 0);
  EXPECT_NO_THROW(frame_from_json(Json::parse(cf.out)["frame"]));
}

TEST(Corpus, EveryFileLoads) {
  for (const auto& e : fs::directory_iterator(kCorpus / "algebras")) EXPECT_NO_THROW(load_algebra(e.path())) << e.path();
  for (const auto& e : fs::directory_iterator(kCorpus / "frames")) {
    const Json j = read_json_file(e.path());
    if (j.contains("val")) EXPECT_NO_THROW(model_from_json(j)) << e.path();
    else EXPECT_NO_THROW(frame_from_json(j)) << e.path();
  }
  std::vector<fs::path> proofs;
  for (const auto& e : fs::directory_iterator(kCorpus / "proofs")) proofs.push_back(e.path());
  std::sort(proofs.begin(), proofs.end());
  EXPECT_FALSE(proofs.empty());
  ProofLibrary lib;
  for (const auto& p : proofs) EXPECT_NO_THROW(lib.add(load_proof(p))) << p;
}
