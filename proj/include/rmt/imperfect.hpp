#pragma once

// Imperfect-teacher views and the structural checks that go with them.
//
// A TeacherView is the teacher's belief about the task, projected into the
// same TaskSpec shape the solvers consume. Exactly one field family differs
// from the ground truth per noise kind:
//
//   Prior    Q0 -> u_h * Q0(h), u_h ~ U[1 - delta1, 1 + delta2]; NOT renormalised
//   Rate     eta -> min(eta + delta, 1) or max(eta - delta, 1e-9)
//   Sample   Z  -> a uniform subset of ceil(f |Z|) examples (ids preserved)
//   Feature  phi(x) -> phi(x) + v_x with |v_x| = delta1 exactly
//
// For Sample and Feature views the target is re-selected as the smallest-id
// hypothesis with minimal error on the teacher's data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmt/core.hpp"

namespace rmt {

enum class NoiseKind { Prior, Rate, Sample, Feature };
enum class RateDirection { Over, Under };

std::string to_string(NoiseKind kind);

/// Lower floor for an under-estimated learning rate, keeping it in (0, 1].
inline constexpr double kMinRate = 1e-9;

struct PerturbationSpec {
  NoiseKind kind = NoiseKind::Prior;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double fraction = 1.0;  // Sample only
  RateDirection direction = RateDirection::Over;  // Rate only (delta1 holds delta)
};

struct TeacherView {
  TaskSpec spec;
  PerturbationSpec provenance;
  std::uint64_t seed = 0;
};

TeacherView perturb_prior(const TaskSpec& truth, double delta1, double delta2, std::uint64_t seed);
TeacherView perturb_rate(const TaskSpec& truth, double delta, RateDirection direction);
TeacherView sample_Z(const TaskSpec& truth, double fraction, std::uint64_t seed);
TeacherView perturb_phi(const TaskSpec& truth, double delta1, std::uint64_t seed);

/// (1 - delta1) Q0(h) <= Q0~(h) <= (1 + delta2) Q0(h) for every h.
bool verify_prior(const TaskSpec& truth, const TeacherView& view, double delta1, double delta2);

/// Smallest-id hypothesis minimising the error over the spec's examples.
std::size_t select_target(const TaskSpec& spec);

/// True iff a label-preserving bijection S -> S' exists that moves every
/// feature vector by at most delta (maximum bipartite matching).
bool check_delta_perturbed(std::span<const LabeledExample> s, std::span<const LabeledExample> s_prime, double delta);

/// Injective label-preserving assignment of every element of `s` into
/// `pool` within distance delta, or nullopt. Returned entries index `pool`.
std::optional<std::vector<std::size_t>> match_into(std::span<const LabeledExample> s,
                                                   std::span<const LabeledExample> pool, double delta);

/// Smallest delta for which match_into(s, pool, delta) succeeds, or nullopt
/// if no label-preserving injection exists at any distance.
std::optional<double> bottleneck_distance(std::span<const LabeledExample> s, std::span<const LabeledExample> pool);

/// max_h |err~(h) - err(h)|, err~ evaluated on the view's examples and features.
double measure_err_gap(const TaskSpec& truth, const TeacherView& view);

/// Empirical lower bound on the smoothness constant: the largest number of
/// label flips any hypothesis suffers over `trials` random delta-perturbed
/// subsets, divided by delta.
double estimate_lambda(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed);

/// Largest number of examples on which any single hypothesis changes its
/// prediction between the truth's features and the view's features.
std::size_t max_prediction_flips(const TaskSpec& truth, const TeacherView& view);

/// Every probe (a list of example ids of `truth`) has a delta3-perturbed
/// counterpart inside the view's example set.
bool certify_sample_view(const TaskSpec& truth, const TeacherView& view, double delta3,
                         std::span<const std::vector<std::size_t>> probes);

}  // namespace rmt
