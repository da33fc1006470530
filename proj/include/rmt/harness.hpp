#pragma once

// Noise sweeps: for every grid value and run, build a teacher view, plan on
// it, evaluate on the truth and compare with Opt and random baselines.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rmt/scenarios.hpp"

namespace rmt {

/// What the grid value delta means for each kind:
///   prior       delta1 = delta2 = delta
///   rate_over   eta~ = min(eta + delta, 1)
///   rate_under  eta~ = max(eta - delta, 1e-9)
///   sample      the teacher keeps a fraction 1 - delta of Z
///   feature     displacement norm delta * data_radius
enum class SweepKind { Prior, RateOver, RateUnder, Sample, Feature };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);  // throws ParameterError

struct SweepConfig {
  ScenarioConfig scenario;
  double epsilon = 0.001;
  SweepKind kind = SweepKind::Prior;
  std::vector<double> delta_grid{0.0};
  std::size_t runs = 10;
  std::vector<std::string> baselines{"Rnd:0.5", "Rnd:1", "Rnd:1.5"};
  std::uint64_t seed = 0;
  std::string output_path = "sweep.csv";
  std::size_t lambda_trials = 200;
};

/// Throws ParameterError describing the first invalid field.
void validate(const SweepConfig& config);

/// Size multiplier of a "Rnd:x" baseline name.
double baseline_multiplier(const std::string& name);

struct SweepRow {
  SweepKind kind = SweepKind::Prior;
  double delta = 0.0;
  std::size_t run = 0;
  std::string teacher;
  std::size_t set_size = 0;
  double error = 0.0;
  bool reached = false;
  // Bound columns, filled on OptTilde rows where a closed form exists.
  std::optional<double> error_bound;
  std::optional<double> eps_hat;
  std::optional<std::size_t> oracle_size;
  std::optional<bool> m1;
  std::optional<bool> m2;
  std::vector<std::string> conditional_on;
};

/// Rows sorted by (kind, delta, run, teacher); deterministic in config.seed.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

struct SummaryRow {
  SweepKind kind = SweepKind::Prior;
  double delta = 0.0;
  std::string teacher;
  std::size_t runs = 0;
  double error_mean = 0.0;
  double error_std = 0.0;  // sample standard deviation, 0 for a single run
  double size_mean = 0.0;
  double size_std = 0.0;
  double bound_mean = 0.0;  // mean error_bound where present, NaN otherwise
};

/// Aggregates per (kind, delta, teacher); NaN errors are left out of the error moments.
std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace rmt
