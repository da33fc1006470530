#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "rmt/errors.hpp"
#include "rmt/io.hpp"
#include "rmt/scenarios.hpp"

using namespace rmt;

TEST_CASE("format_real") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("task spec JSON round trip is exact") {
  for (auto regime : {Regime::WellBehaved, Regime::Skewed, Regime::ExtremePoints}) {
    ScenarioConfig c;
    c.regime = regime;
    c.n_examples = 20;
    c.n_hypotheses = 10;
    c.seed = 3;
    const auto s = generate(c);
    const std::string text = task_spec_to_json(s);
    const auto back = task_spec_from_json(text);
    CHECK(task_spec_to_json(back) == text);
    CHECK(back.prior == s.prior);
    CHECK(back.rate == s.rate);
    CHECK(back.target_id == s.target_id);
    for (std::size_t i = 0; i < s.num_examples(); ++i) {
      CHECK(back.examples[i].x() == s.examples[i].x());
      CHECK(back.examples[i].label == s.examples[i].label);
    }
  }
}

TEST_CASE("task spec field order") {
  TaskSpec s;
  s.hypotheses = {Hypothesis{0, {1.0}}, Hypothesis{1, {-1.0}}};
  s.prior = {0.25, 0.75};
  s.rate = 0.5;
  s.examples = {LabeledExample{Instance{0, {2.0}}, Label::Positive}};
  CHECK(task_spec_to_json(s) ==
        "{\"d\": 1, \"eta\": 0.5, \"prior\": [0.25, 0.75], \"hypotheses\": [[1], [-1]], \"target\": 0, "
        "\"examples\": [{\"x\": [2], \"y\": 1}]}\n");
}

TEST_CASE("task spec parsing rejects bad input") {
  CHECK_THROWS_AS(task_spec_from_json("{"), ParameterError);
  CHECK_THROWS_AS(task_spec_from_json("{\"d\": 1}"), ParameterError);
  const std::string ok =
      "{\"d\": 1, \"eta\": 0.5, \"prior\": [0.5, 0.5], \"hypotheses\": [[1], [-1]], \"target\": 0, "
      "\"examples\": [{\"x\": [2], \"y\": 1}]}";
  CHECK_NOTHROW(task_spec_from_json(ok));
  std::string bad_d = ok;
  bad_d.replace(bad_d.find("\"d\": 1"), 6, "\"d\": 2");
  CHECK_THROWS_AS(task_spec_from_json(bad_d), ParameterError);
  std::string bad_y = ok;
  bad_y.replace(bad_y.find("\"y\": 1"), 6, "\"y\": 0");
  CHECK_THROWS_AS(task_spec_from_json(bad_y), ParameterError);
  std::string bad_prior = ok;
  bad_prior.replace(bad_prior.find("[0.5, 0.5]"), 10, "[0.5, 0.6]");
  CHECK_THROWS_AS(task_spec_from_json(bad_prior), ParameterError);
}

TEST_CASE("outcome JSON") {
  TeachingOutcome o;
  o.selected = {4, 1};
  o.f_trace = {0.0, 0.25, 0.375};
  o.threshold = 0.3;
  o.reached = true;
  o.final_error = std::numeric_limits<double>::quiet_NaN();
  CHECK(outcome_to_json(o) ==
        "{\"selected\": [4, 1], \"f_trace\": [0, 0.25, 0.375], \"threshold\": 0.29999999999999999, "
        "\"reached\": true, \"final_error\": null}\n");
}

TEST_CASE("sweep config parsing") {
  const std::string text = R"({
    "scenario": {"regime": "skewed", "n_examples": 30, "n_hypotheses": 5, "prior": "uniform", "seed": 9},
    "epsilon": 0.01, "noise_kind": "rate_under", "delta_grid": [0.0, 0.1], "runs": 3,
    "baselines": ["Rnd:2"], "seed": 11, "output_path": "x.csv"})";
  const auto c = sweep_config_from_json(text);
  CHECK(c.scenario.regime == Regime::Skewed);
  CHECK(c.scenario.n_examples == 30);
  CHECK(c.scenario.seed == 9);
  CHECK(c.scenario.prior.empty());
  CHECK(c.epsilon == 0.01);
  CHECK(c.kind == SweepKind::RateUnder);
  CHECK(c.delta_grid == std::vector<double>{0.0, 0.1});
  CHECK(c.runs == 3);
  CHECK(c.baselines == std::vector<std::string>{"Rnd:2"});
  CHECK(c.seed == 11);
  CHECK(c.output_path == "x.csv");

  CHECK(scenario_config_from_json(text).regime == Regime::Skewed);
  CHECK(scenario_config_from_json(R"({"regime": "extreme_points", "n_examples": 10, "n_hypotheses": 9})").regime ==
        Regime::ExtremePoints);

  CHECK_THROWS_AS(sweep_config_from_json("[]"), ParameterError);
  std::string bad_kind = text;
  bad_kind.replace(bad_kind.find("rate_under"), 10, "gaussian__");
  CHECK_THROWS_AS(sweep_config_from_json(bad_kind), ParameterError);
  std::string bad_baseline = text;
  bad_baseline.replace(bad_baseline.find("Rnd:2"), 5, "Rnd:x");
  CHECK_THROWS_AS(sweep_config_from_json(bad_baseline), ParameterError);
  std::string bad_prior = text;
  bad_prior.replace(bad_prior.find("\"uniform\""), 9, "\"zipfian\"");
  CHECK_THROWS_AS(sweep_config_from_json(bad_prior), ParameterError);
}

TEST_CASE("shipped configs parse") {
  for (const auto& entry : std::filesystem::directory_iterator(RMT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const std::string text = read_text_file(entry.path().string());
    if (text.find("\"noise_kind\"") != std::string::npos)
      CHECK_NOTHROW(sweep_config_from_json(text));
    else
      CHECK_NOTHROW(generate(scenario_config_from_json(text)));
  }
}

TEST_CASE("text files") {
  const auto path = (std::filesystem::temp_directory_path() / "rmt_io_test.txt").string();
  write_text_file(path, "a,b\n1,2\n");
  CHECK(read_text_file(path) == "a,b\n1,2\n");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_text_file(path), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.txt", "x"), IoError);
}
