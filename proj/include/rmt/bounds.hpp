#pragma once

// Closed-form robustness bounds, the M.1/M.2 checker and the two worst-case
// rate-noise constructions.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rmt/core.hpp"
#include "rmt/imperfect.hpp"
#include "rmt/teacher.hpp"

namespace rmt {

struct BoundPair {
  double error_bound = 0.0;  // M.1 side
  double eps_hat = 0.0;      // M.2 side, clamped to 0 when vacuous
  bool vacuous = false;      // the M.2 side gives no guarantee
};

/// error <= eps (1 + d2) / (1 - d1), eps_hat = eps (1 - d1) / (1 + d2).
BoundPair bound_prior(double eps, double delta1, double delta2);

/// error <= (eps Qmax + d2) / Q0(h*), eps_hat = (eps Qmin - d2)(1 - eta)^{lambda d3} / Q0(h*).
BoundPair bound_sample(double eps, double delta2, double delta3, double lambda, double eta, double q_max,
                       double q_min, double q_target);

/// As bound_sample with d3 -> d1, plus a (1 - eta)^{lambda d1} factor under the error bound.
BoundPair bound_feature(double eps, double delta1, double delta2, double lambda, double eta, double q_max,
                        double q_min, double q_target);

// ---------------------------------------------------------------------------
// Worst-case rate-noise constructions

/// Refuses constructions that would need more than this many examples.
inline constexpr std::size_t kMaxAdversarialK = 200;

/// ceil(log(1/eps) / log((1 - eta) / (1 - eta~))) for eta~ = eta + delta.
std::size_t rate_over_k(double eps, double eta, double delta);

/// ceil(log(eps/eps_hat) / log((1 - eta~) / (1 - eta))) for eta~ = eta - delta.
std::size_t rate_under_k(double eps, double eps_hat, double eta, double delta);

/// Err of the true learner after the k examples of the over-estimation
/// construction: 1 / (1 + (1 - eta~)^k / (eps (1 - eta)^k)).
double rate_over_error(double eps, double eta, double delta);

/// Two opposite 1-D sign classifiers (h* = id 0, err 0; h-bar = id 1, err 1)
/// over k + 2 positive points, with Q0(h-bar)/Q0(h*) = eps / (1 - eta~)^k.
TaskSpec adversarial_rate_over(double eps, double eta, double delta);
TaskSpec adversarial_rate_under(double eps, double eps_hat, double eta, double delta);

// ---------------------------------------------------------------------------
// Bound checking

struct BoundParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double lambda = 0.0;
  /// Rate kind only: the eps_hat to compare against (no closed form exists).
  std::optional<double> eps_hat;
};

struct OracleRun {
  TeachingOutcome outcome;
  bool approximate = false;  // greedy stand-in for a pool above kBruteForceMaxPool
};

struct BoundInputs {
  std::optional<TeachingOutcome> view_run;  // Opt~ planned on the view, error measured on the truth
  std::optional<OracleRun> oracle;          // Opt at eps_hat on the truth
};

struct BoundReport {
  NoiseKind kind = NoiseKind::Prior;
  double eps = 0.0;
  std::vector<double> delta_params;
  double error_bound = 0.0;
  double eps_hat = 0.0;
  double observed_error = 0.0;
  std::size_t observed_size = 0;
  std::optional<std::size_t> oracle_size;
  bool m1 = false;
  std::optional<bool> m2;
  std::vector<std::string> conditional_on;
  bool incomplete = false;
};

/// Closed-form pair for `kind` given the truth's prior statistics.
BoundPair bound_for(NoiseKind kind, const TaskSpec& truth, double eps, const BoundParams& params);

/// Minimum teaching set of `problem` (exact when the pool fits brute force,
/// greedy otherwise).
OracleRun run_oracle(const TeachingProblem& problem);

BoundReport check_bounds(NoiseKind kind, const TaskSpec& truth, double eps, const BoundParams& params,
                         const BoundInputs& inputs);

void write_bound_csv_header(std::ostream& out);
void write_bound_csv_row(std::ostream& out, const BoundReport& report);

}  // namespace rmt
