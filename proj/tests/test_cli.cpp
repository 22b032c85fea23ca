#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "eqpl/cli.hpp"
#include "eqpl/semantics.hpp"
#include "support/fixtures.hpp"
#include "support/random_structure.hpp"

using namespace eqpl;
using json = nlohmann::ordered_json;

namespace {

const std::string kFixtures = EQPL_FIXTURES_DIR;
const std::string kCatModel = kFixtures + "/cat.model.json";

struct Run {
  int code;
  json report;
  std::string text;
};

Run run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  Run r{code, nullptr, out.str()};
  if (!out.str().empty() && out.str().front() == '{') r.report = json::parse(out.str());
  return r;
}

json without_timing(json j) {
  j.erase("timing_ms");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run_json({"parse", "--formula", "(qb0 && qb1)"}).code == 0);
  Run r = run_json({"parse", "--formula", "(qb0 &&"});
  CHECK(r.code == 1);
  CHECK(r.report["verdict"] == "not parsed");
  CHECK(r.report["diagnostics"].size() == 1);
  CHECK(run_json({"bogus"}).code == 2);
  CHECK(run_json({"check", "--formula", "qb0"}).code == 2);  // missing --model
  CHECK(run_json({"check", "--model", "/nonexistent.json", "--formula", "qb0"}).code == 2);
  std::ostringstream out, err;
  CHECK(cli::run({"--help"}, out, err) == 0);
  CHECK(out.str().find("solve") != std::string::npos);
}

TEST_CASE("check: the cat model satisfies every assertion") {
  for (const auto& line : testing::cat_assertions()) {
    Run r = run_json({"check", "--model", kCatModel, "--formula", line});
    CHECK_MESSAGE(r.code == 0, line);
    CHECK(r.report["verdict"] == "satisfied");
  }
  CHECK(run_json({"check", "--model", kCatModel, "--formula", kFixtures + "/cat_all.eqpl"}).code == 0);
  CHECK(run_json({"check", "--model", kCatModel, "--formula", "[cata]"}).code == 1);
  CHECK(run_json({"check", "--model", kCatModel, "--formula", "(Pr(cata) = 1/2)"}).code == 1);

  Run r = run_json({"eval", "--model", kCatModel, "--term", "Pr(cata)"});
  CHECK(r.code == 0);
  CHECK(std::abs(r.report["value"].get<double>() - 1.0 / 3) < 1e-12);
  r = run_json({"eval", "--model", kCatModel, "--term", "amp{cata,catm}{}"});
  REQUIRE(r.report["category"] == "complex");
  CHECK(std::abs(r.report["value"][0].get<double>() - std::sqrt(2.0 / 3) / 2) < 1e-12);
}

TEST_CASE("the model file matches the hand-built cat structure") {
  const cli::ModelFile m = cli::load_model(slurp(kCatModel));
  const QuantumStructure w = testing::cat_structure();
  CHECK(m.structure.frame == w.frame);
  CHECK(m.structure.admissible == w.admissible);
  CHECK(m.structure.partition == w.partition);
  for (std::size_t i = 0; i < w.blocks.size(); ++i)
    for (std::size_t v = 0; v < w.blocks[i].amps.size(); ++v)
      CHECK(std::abs(m.structure.blocks[i].amps[v] - w.blocks[i].amps[v]) < 1e-15);
  CHECK(run_json({"validate-model", "--model", kCatModel}).code == 0);
}

TEST_CASE("malformed model files") {
  CHECK_THROWS_AS(cli::load_model("{"), Error);
  CHECK_THROWS_AS(cli::load_model("[]"), Error);
  CHECK_THROWS_AS(cli::load_model(R"({"frame": ["nope"]})"), Error);
  CHECK_THROWS_AS(cli::load_model(R"({"frame": ["qb0"], "partition": [["qb0"]], "blocks": []})"), Error);
  CHECK_THROWS_AS(cli::load_model(R"({"frame": ["qb0"], "partition": [["qb0"]], "blocks": [{"01": 1}]})"), Error);
  CHECK_THROWS_AS(cli::load_model(R"({"frame": ["qb0"], "assignment": {"x1": [0, 1]}})"), Error);
  // Loads, but is not a structure: the block is not normalised.
  const auto m = cli::load_model(R"({"frame": ["qb0"], "admissible": ["0", "1"],
                                     "partition": [["qb0"]], "blocks": [{"0": 1, "1": 1}]})");
  CHECK_FALSE(validate_structure(m.structure).empty());
}

TEST_CASE("prove: the PUnit script") {
  Run r = run_json({"prove", "--script", kFixtures + "/punit.proof"});
  CHECK(r.code == 0);
  CHECK(r.report["verdict"] == "proof ok");
  CHECK(r.report["lines"] == 7);
  CHECK(r.report["conclusion"] == "(Pr(top) = 1)");

  std::string script = slurp(kFixtures + "/punit.proof");
  script.replace(script.find("QMP(3,6)"), 8, "QMP(3,5)");
  const std::string path = "cli_bad.proof";
  std::ofstream(path) << script;
  r = run_json({"prove", "--script", path});
  CHECK(r.code == 1);
  CHECK(r.report["line"] == 7);
}

TEST_CASE("eval: arithmetical formulas go to the oracle") {
  Run r = run_json({"eval", "--formula", "(0 <= (x1 * x1))"});
  CHECK(r.code == 0);
  CHECK(r.report["verdict"] == "valid");
  r = run_json({"eval", "--formula", "(x1 <= x2)"});
  CHECK(r.code == 1);
  CHECK(r.report["verdict"] == "invalid");
  CHECK(r.report.contains("witness"));
  r = run_json({"eval", "--formula", "(x1 <= x2)", "--assign", "x1=1 x2=2"});
  CHECK(r.code == 0);
  CHECK(run_json({"eval", "--term", "(x1 + 1)", "--assign", "x1=2"}).report["value"] == 3.0);
  CHECK(run_json({"eval", "--term", "(x1 + 1)"}).code == 2);  // unbound
}

TEST_CASE("dnf and expand") {
  Run r = run_json({"dnf", "--formula", "((qb0 -> qb1) && dia(qb0))", "--bound", "qb0,qb1"});
  CHECK(r.code == 0);
  CHECK(r.report["count"] == 1);
  r = run_json({"expand", "--formula", "dia(qb0)"});
  CHECK(r.code == 0);
  CHECK(r.report["rendered"].get<std::string>().find("Pr(qb0)") != std::string::npos);
}

TEST_CASE("solve writes a model that validates and satisfies the input") {
  const std::string path = "cli_solved.json";
  Run r = run_json({"--seed", "7", "solve", "--bound", "cati,cata,catm", "--formula", kFixtures + "/cat_all.eqpl",
                    "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.report["verdict"] == "model found");
  CHECK(run_json({"validate-model", "--model", path}).code == 0);
  CHECK(run_json({"check", "--model", path, "--formula", kFixtures + "/cat_all.eqpl"}).code == 0);
  CHECK(run_json({"check", "--model", path, "--formula", "(Pr(cata) = 1/3)"}).code == 0);

  r = run_json({"solve", "--bound", "qb0", "--formula", "(qb0 && ~ qb0)"});
  CHECK(r.code == 1);
  CHECK(r.report["verdict"] == "inconsistent");
}

TEST_CASE("reports are deterministic apart from timing") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--seed", "3", "solve", "--bound", "qb0,qb1", "--formula", "(! [qb0] && [qb0,qb1])"},
           {"--seed", "3", "eval", "--formula", "(x1 <= (x2 * x2))"},
           {"prove", "--script", kFixtures + "/punit.proof"}}) {
    Run a = run_json(args), b = run_json(args);
    CHECK(a.code == b.code);
    CHECK(without_timing(a.report) == without_timing(b.report));
  }
}

TEST_CASE("property: model files round-trip") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> probes = {"[qb0]", "[qb0,qb1]", "dia(qb0)", "(Pr((qb0 /\\ qb1)) <= 1/2)",
                                           "(re(amp{qb0,qb1}{qb0}) <= 0)", "! [qb1]"};
  for (int trial = 0; trial < 50; ++trial) {
    const QuantumStructure w = testing::random_structure(rng, trial % 2 ? QubitSet{0, 1} : QubitSet{0, 1, 2});
    cli::ModelFile m{w, Assignment{}, AliasTable{}};
    const cli::ModelFile back = cli::load_model(cli::save_model(m));
    REQUIRE(validate_structure(back.structure).empty());
    CHECK(back.structure.partition == w.partition);
    CHECK(back.structure.admissible == w.admissible);
    for (const auto& p : probes) {
      const Ptr g = parse(p, Category::Quantum);
      CHECK_MESSAGE(satisfies(w, {}, g) == satisfies(back.structure, {}, g), p);
    }
  }
}
