// rmt: command-line front end for noise sweeps, property suites, the
// worst-case rate constructions and scenario generation.
//
// Exit codes: 0 success, 1 failed verification, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmt/bounds.hpp"
#include "rmt/errors.hpp"
#include "rmt/harness.hpp"
#include "rmt/imperfect.hpp"
#include "rmt/io.hpp"
#include "rmt/scenarios.hpp"
#include "rmt/teacher.hpp"
#include "rmt/verify.hpp"

namespace {

constexpr int kUsageError = 2;

struct SweepArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> runs;
};

struct AdversarialArgs {
  double eps = 0.01;
  double eta = 0.5;
  double delta = 0.1;
  std::string direction = "over";
  std::optional<double> eps_hat;
  std::optional<std::string> out;
};

struct GenerateArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

int cmd_sweep(const SweepArgs& a) {
  auto cfg = rmt::sweep_config_from_json(rmt::read_text_file(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.out) cfg.output_path = *a.out;
  if (a.runs) cfg.runs = *a.runs;
  rmt::validate(cfg);
  const auto rows = rmt::run_sweep(cfg);

  std::ostringstream csv, summary;
  rmt::write_sweep_csv(csv, rows);
  rmt::write_summary_csv(summary, rmt::summarize(rows));
  rmt::write_text_file(cfg.output_path, csv.str());
  rmt::write_text_file(cfg.output_path + ".summary.csv", summary.str());
  std::cout << "wrote " << rows.size() << " rows to " << cfg.output_path << '\n';
  return 0;
}

int cmd_verify(const std::string& kind) {
  bool ok = true;
  for (const auto& r : rmt::verify::run_suite(kind)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int cmd_adversarial(const AdversarialArgs& a) {
  const bool over = a.direction == "over";
  rmt::TaskSpec truth;
  std::size_t k = 0;
  double eps_hat = a.eps;
  if (over) {
    k = rmt::rate_over_k(a.eps, a.eta, a.delta);
    truth = rmt::adversarial_rate_over(a.eps, a.eta, a.delta);
    if (a.eps_hat) eps_hat = *a.eps_hat;
  } else {
    if (!a.eps_hat) throw rmt::ParameterError("--direction under needs --eps-hat");
    eps_hat = *a.eps_hat;
    k = rmt::rate_under_k(a.eps, eps_hat, a.eta, a.delta);
    truth = rmt::adversarial_rate_under(a.eps, eps_hat, a.eta, a.delta);
  }
  const auto view = rmt::perturb_rate(truth, a.delta, over ? rmt::RateDirection::Over : rmt::RateDirection::Under);
  const auto problem = rmt::TeachingProblem::over_all(view.spec, a.eps);
  const auto tilde = rmt::brute_force_teach(problem, problem.pool.size(), truth);

  rmt::BoundParams params;
  params.delta1 = a.delta;
  params.eps_hat = eps_hat;
  rmt::BoundInputs inputs;
  inputs.view_run = tilde;
  inputs.oracle = rmt::run_oracle(rmt::TeachingProblem::over_all(truth, eps_hat));
  const auto report = rmt::check_bounds(rmt::NoiseKind::Rate, truth, a.eps, params, inputs);

  std::cout << "direction=" << a.direction << " k=" << k << " teaching_size=" << tilde.size()
            << " true_error=" << rmt::format_real(tilde.final_error);
  if (over) std::cout << " closed_form_error=" << rmt::format_real(rmt::rate_over_error(a.eps, a.eta, a.delta));
  std::cout << '\n';
  rmt::write_bound_csv_header(std::cout);
  rmt::write_bound_csv_row(std::cout, report);
  if (a.out) rmt::write_text_file(*a.out, rmt::task_spec_to_json(truth));
  return 0;
}

int cmd_generate(const GenerateArgs& a) {
  auto cfg = rmt::scenario_config_from_json(rmt::read_text_file(a.scenario));
  if (a.seed) cfg.seed = *a.seed;
  const auto json = rmt::task_spec_to_json(rmt::generate(cfg));
  if (a.out)
    rmt::write_text_file(*a.out, json);
  else
    std::cout << json;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teaching under imperfect knowledge: sweeps, property checks and constructions"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run a noise sweep and write CSV results");
  s->add_option("config", sweep.config, "Sweep config JSON")->required();
  s->add_option("--seed", sweep.seed, "Override the config seed");
  s->add_option("--out", sweep.out, "Override the output CSV path");
  s->add_option("--runs", sweep.runs, "Override runs per grid point");

  std::string verify_kind;
  auto* v = app.add_subcommand("verify", "Run the theorem property suites");
  v->add_option("kind", verify_kind, "prior | rate | sample | feature | all")
      ->required()
      ->check(CLI::IsMember({"prior", "rate", "sample", "feature", "all"}));

  AdversarialArgs adv;
  auto* a = app.add_subcommand("adversarial", "Build and evaluate a worst-case rate-noise construction");
  a->add_option("--eps", adv.eps, "Target error")->required();
  a->add_option("--eta", adv.eta, "True learning rate")->required();
  a->add_option("--delta", adv.delta, "Rate estimation error")->required();
  a->add_option("--direction", adv.direction, "over | under")->check(CLI::IsMember({"over", "under"}));
  a->add_option("--eps-hat", adv.eps_hat, "Comparison threshold (required for under)");
  a->add_option("--out", adv.out, "Write the constructed spec as JSON");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a task spec from a scenario config");
  g->add_option("scenario", gen.scenario, "Scenario config JSON")->required();
  g->add_option("--seed", gen.seed, "Override the scenario seed");
  g->add_option("--out", gen.out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (s->parsed()) return cmd_sweep(sweep);
    if (v->parsed()) return cmd_verify(verify_kind);
    if (a->parsed()) return cmd_adversarial(adv);
    if (g->parsed()) return cmd_generate(gen);
  } catch (const rmt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
