#pragma once

// Property suites checking the robustness theorems empirically. Shared by
// `rmt verify` and the acceptance tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rmt::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Prior-noise soundness: M.1 and M.2 on random small WellBehaved specs,
/// both teachers solved exactly on a random pool.
struct PriorSoundnessOptions {
  std::size_t instances = 1000;
  std::size_t n_examples = 40;
  std::size_t n_hypotheses = 10;
  std::size_t pool_size = 20;
  double epsilon = 0.01;
  double eta_lo = 0.6;
  double eta_hi = 0.95;
  double slack = 1e-10;
  std::uint64_t seed = 1;
};
CheckResult prior_soundness(const PriorSoundnessOptions& opts = {});

/// (1 - d1) Q(h|S) <= Q~(h|S) <= (1 + d2) Q(h|S) for sampled views and sets.
CheckResult prior_lemma(std::size_t triples = 200, std::uint64_t seed = 2);

/// Over-estimated rate: teaching size k and true error in [0.45, 0.55].
CheckResult rate_over_witness(double eps = 0.01, double eta = 0.5, double delta = 0.1);

/// Under-estimated rate: |Opt~_eps| = |Opt_eps_hat| = k, all found by brute force.
CheckResult rate_under_witness(double eps = 0.1, double eps_hat = 0.001, double eta = 0.5, double delta = 0.1);

/// Q(h|S') <= Q(h|S) (1 - eta)^{-m} for random delta-perturbed pairs.
CheckResult smoothness_inequality(std::size_t triples = 200, std::uint64_t seed = 3);

/// Conditional M.1 soundness of the sample / feature bounds over a sweep.
struct ConditionalOptions {
  std::size_t n_examples = 160;
  std::size_t n_hypotheses = 67;
  double eta = 0.5;
  double epsilon = 0.01;
  std::size_t runs = 10;
  std::uint64_t seed = 4;
};
CheckResult sample_soundness(const ConditionalOptions& opts = {});
CheckResult feature_soundness(const ConditionalOptions& opts = {});

/// Greedy reaches the threshold whenever brute force does, and is never smaller.
CheckResult greedy_vs_oracle(std::size_t specs = 200, std::uint64_t seed = 5);

/// Every generated ExtremePoints spec certifies sizes 2 and >= 6.
CheckResult extreme_points(std::size_t specs = 20, std::uint64_t seed = 6);

/// Runs the checks belonging to `kind` (prior, rate, sample, feature, all).
/// Throws ParameterError for an unknown kind.
std::vector<CheckResult> run_suite(const std::string& kind);

}  // namespace rmt::verify
