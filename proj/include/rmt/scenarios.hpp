#pragma once

// Synthetic task families.
//
//   WellBehaved    two Gaussian clusters on either side of a through-origin
//                  target, every point at least margin_fraction * radius
//                  away from the target boundary
//   Skewed         most points packed into a small blob at the origin, where
//                  every hypothesis boundary passes, plus a sparse spread
//   ExtremePoints  two positive clusters and two isolated positive points
//                  that jointly expose every wrong hypothesis; features are
//                  homogeneous (x, y, 1) so hypotheses are affine lines
//
// Non-target hypotheses are random linear classifiers with pairwise distinct
// prediction patterns and error at least min_hypothesis_error.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmt/core.hpp"

namespace rmt {

enum class Regime { WellBehaved, Skewed, ExtremePoints };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);  // throws ParameterError

struct ScenarioConfig {
  Regime regime = Regime::WellBehaved;
  std::size_t n_examples = 160;
  std::size_t n_hypotheses = 67;
  std::size_t d = 2;
  double eta = 0.5;
  std::vector<double> prior;  // empty means uniform
  std::uint64_t seed = 0;
  double margin_fraction = 0.05;
  double min_hypothesis_error = 0.1;
};

/// Throws ParameterError on invalid configs and GenerationError when 100
/// attempts fail to produce a valid spec.
TaskSpec generate(const ScenarioConfig& config);

/// max_x |phi(x)|_2.
double data_radius(const TaskSpec& spec);

struct ExtremeCertificate {
  std::size_t with_extremes = 0;     // oracle size over the whole pool
  std::size_t without_extremes = 0;  // oracle size with the two extremes removed; 0 if unreachable
  bool passed = false;               // 2 and >= 6 respectively
};

/// Brute-force teaching sizes at eta = 1, eps = 0 with and without the two
/// extreme points, which are the last two example ids.
ExtremeCertificate certify_extreme_points(const TaskSpec& spec);

}  // namespace rmt
