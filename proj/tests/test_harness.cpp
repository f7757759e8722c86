#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "heis/harness.hpp"

using namespace heis;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int call_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "heis");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("heis_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("number parsing") {
  CHECK(parse_number("2^-10") == std::ldexp(1.0, -10));
  CHECK(parse_number("2^3") == 8.0);
  CHECK(parse_number("0.25") == 0.25);
  CHECK(parse_number(" 1e-3 ") == 0.001);
  CHECK_THROWS(parse_number("abc"));
  CHECK_THROWS(parse_number("2^x"));
  CHECK(parse_number_list("2^-2,2^-3, 0.5") == std::vector<double>{0.25, 0.125, 0.5});
}

TEST_CASE("reference curve parser") {
  const ReferenceCurve z = parse_reference_curve("zero");
  CHECK(z.is_zero());
  CHECK(z.curve().at(0.6) == GroupElement::identity());
  const ReferenceCurve l = parse_reference_curve("line 1 0");
  CHECK(l.curve().at(0.5) == GroupElement{0.5, 0, 0});
  // lift of (t, t^2): z = 1/2 int (s * 2s - s^2) ds = t^3 / 6
  const ReferenceCurve p = parse_reference_curve("poly2 1 1");
  for (double t : {0.25, 0.5, 1.0}) {
    const GroupElement g = p.curve().at(t);
    CHECK(g.x == doctest::Approx(t));
    CHECK(g.y == doctest::Approx(t * t));
    CHECK(g.z == doctest::Approx(t * t * t / 6.0).epsilon(1e-13));
  }
  const ReferenceCurve q = parse_reference_curve("quad 0 0 1 0 0 1");
  CHECK(std::abs(q.curve().at(0.7).z - p.curve().at(0.7).z) < 1e-14);
  const ReferenceCurve two = parse_reference_curve("line 1 0; line 0 1");
  CHECK(two.curve().at(0.5).x == doctest::Approx(1.0));
  CHECK(two.curve().at(1.0).y == doctest::Approx(1.0));
  CHECK(two.curve().at(1.0).z == doctest::Approx(0.5));
  CHECK(two.jumps().size() == 1);

  try {
    parse_reference_curve("quad 1 0 1 0 0 1");
    FAIL("accepted a nonzero start");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("nonzero start point") != std::string::npos);
  }
  try {
    parse_reference_curve("line 1 x");
    FAIL("accepted a bad number");
  } catch (const ParseError& e) {
    CHECK(e.position == 7);
  }
  CHECK_THROWS_AS(parse_reference_curve(""), ParseError);
  CHECK_THROWS_AS(parse_reference_curve("spiral 1"), ParseError);
  CHECK_THROWS_AS(parse_reference_curve("line 1 0;"), ParseError);
  CHECK_THROWS_AS(parse_reference_curve("line 1"), ParseError);
}

TEST_CASE("experiment names") {
  CHECK(experiment_names().size() == 9);
  for (const auto& n : experiment_names()) CHECK(to_string(parse_experiment(n)) == n);
  CHECK_THROWS_AS(parse_experiment("nope"), ConfigError);
}

TEST_CASE("config defaults, overrides and validation") {
  const auto c = ExperimentConfig::make(Experiment::ws_converge);
  CHECK(c.fields["seed"] == 1);
  CHECK(c.fields["trials"] == 2000);
  CHECK(c.fields["fine_step"].get<double>() == std::ldexp(1.0, -12));
  const auto o = ExperimentConfig::make(Experiment::ws_converge, {{"deltas", "2^-2,2^-3"}, {"trials", "10"}});
  CHECK(o.fields["deltas"].size() == 2);
  CHECK(o.fields["trials"] == 10);

  auto field_of = [](Experiment e, const json& j) {
    try {
      ExperimentConfig::make(e, j);
    } catch (const ConfigError& ex) {
      return ex.field;
    }
    return std::string("<accepted>");
  };
  CHECK(field_of(Experiment::simulate, {{"fine_step", 0.3}}) == "fine_step");
  CHECK(field_of(Experiment::simulate, {{"fine_step", "2^-5"}}) == "fine_step");
  CHECK(field_of(Experiment::simulate, {{"fine_step", "2^-21"}}) == "fine_step");
  CHECK(field_of(Experiment::simulate, {{"fine_step", "2^-20"}}) == "<accepted>");
  CHECK(field_of(Experiment::simulate, {{"bogus", 1}}) == "bogus");
  CHECK(field_of(Experiment::ws_converge, {{"trials", 0}}) == "trials");
  CHECK(field_of(Experiment::ws_converge, {{"trials", 2.5}}) == "trials");
  CHECK(field_of(Experiment::ws_converge, {{"deltas", "0.3"}}) == "deltas");
  CHECK(field_of(Experiment::ws_converge, {{"deltas", "3*2^-12"}}) == "deltas");
  CHECK(field_of(Experiment::tube, {{"phi", "line 1"}}) == "phi");
  CHECK(field_of(Experiment::tube, {{"epsilon", -1}}) == "epsilon");
  CHECK(field_of(Experiment::helix, {{"n", "0,4"}}) == "n");
  CHECK(field_of(Experiment::helix, {{"target", "1,1"}}) == "target");
  CHECK(field_of(Experiment::helix, {{"variant", "sideways"}}) == "variant");
  CHECK(field_of(Experiment::dds_diagnostics, {{"times", "0.3"}}) == "times");
  CHECK(field_of(Experiment::energy_diverge, {{"steps", "2^-2"}}) == "steps");
  CHECK(field_of(Experiment::helix, {{"experiment", "tube"}}) == "experiment");
}

TEST_CASE("config hash covers every numeric field") {
  for (const auto& name : experiment_names()) {
    const Experiment e = parse_experiment(name);
    const auto base = ExperimentConfig::make(e);
    CHECK(base.hash() == ExperimentConfig::make(e).hash());
    CHECK(base.hash().size() == 16);
    // output location and thread count never enter the hash
    CHECK(base.hash() == ExperimentConfig::make(e, {{"out", "/tmp/x"}, {"threads", 3}}).hash());
    const auto changed = ExperimentConfig::make(e, {{"seed", 2}});
    CHECK(changed.hash() != base.hash());
  }
  std::set<std::string> hashes;
  for (const auto& name : experiment_names()) hashes.insert(ExperimentConfig::make(parse_experiment(name)).hash());
  CHECK(hashes.size() == 9);
  CHECK(ExperimentConfig::make(Experiment::tube, {{"epsilon", 0.8}}).hash() !=
        ExperimentConfig::make(Experiment::tube).hash());
  CHECK(ExperimentConfig::make(Experiment::helix, {{"variant", "offset-start"}}).hash() !=
        ExperimentConfig::make(Experiment::helix).hash());
}

TEST_CASE("status and exit codes") {
  CHECK(exit_code(Status::pass) == 0);
  CHECK(exit_code(Status::fail) == 1);
  CHECK(exit_code(Status::inconclusive) == 2);
  CHECK(to_string(Status::inconclusive) == "inconclusive");
}

TEST_CASE("simulate is byte-identical across runs and writes both files") {
  const fs::path out = scratch("simulate");
  const auto cfg = ExperimentConfig::make(Experiment::simulate, {{"fine_step", "2^-10"}, {"out", out.string()}});
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(a.status == Status::pass);
  CHECK(a.csv == b.csv);
  CHECK(a.csv.rfind("t,x,y,z\n", 0) == 0);
  write_outputs(a);
  CHECK(slurp(out / "simulate.csv") == a.csv);
  const json s = json::parse(slurp(out / "simulate.summary.json"));
  CHECK(s["hash"] == cfg.hash());
  CHECK(s["pass"] == true);
  CHECK(s["assertions"].size() == a.assertions.size());
  CHECK(s["config"]["seed"] == 1);
  fs::remove_all(out);
}

TEST_CASE("helix experiment through the harness") {
  const auto r = run(ExperimentConfig::make(Experiment::helix, {{"n", "4,8,16,32,64"}, {"target", "0,0,1"}}));
  CHECK(r.status == Status::pass);
  CHECK(r.csv.rfind("n,distance,distance_refined,bound_constant\n", 0) == 0);
  CHECK(r.extra["fitted_C"].get<double>() == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("command line") {
  const fs::path out = scratch("cli");
  CHECK(call_cli({"simulate", "--seed", "1", "--fine-step", "2^-10", "--out", out.string()}) == 0);
  const std::string first = slurp(out / "simulate.csv");
  CHECK(call_cli({"simulate", "--seed", "1", "--fine-step", "2^-10", "--out", out.string()}) == 0);
  CHECK(slurp(out / "simulate.csv") == first);
  CHECK(call_cli({"simulate", "--fine-step", "0.3", "--out", out.string()}) == 1);
  CHECK(call_cli({"nonsense"}) == 1);

  const fs::path cfg = out / "cfg.json";
  std::ofstream(cfg) << R"({"seed": 2, "fine_step": "2^-8"})";
  CHECK(call_cli({"simulate", "--config", cfg.string(), "--out", out.string()}) == 0);
  const json s = json::parse(slurp(out / "simulate.summary.json"));
  CHECK(s["config"]["seed"] == 2);
  // flags win over the file
  CHECK(call_cli({"simulate", "--config", cfg.string(), "--seed", "3", "--out", out.string()}) == 0);
  CHECK(json::parse(slurp(out / "simulate.summary.json"))["config"]["seed"] == 3);
  std::ofstream(cfg) << "{not json";
  CHECK(call_cli({"simulate", "--config", cfg.string(), "--out", out.string()}) == 1);
  // a tube run that cannot reach its acceptance floor is inconclusive, not failed
  CHECK(call_cli({"tube", "--fine-step", "2^-6", "--trials", "50", "--max-trials", "100", "--deltas", "0.05",
                  "--out", out.string()}) == 2);
  fs::remove_all(out);
}
