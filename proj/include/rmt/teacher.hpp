#pragma once

// Teaching objective, stopping threshold and the three teachers.
//
// Every solver plans on `problem.spec` (which may be an imperfect teacher's
// view projected into TaskSpec shape) and reports `final_error` measured on
// the learner described by the ground-truth spec passed alongside.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmt/core.hpp"

namespace rmt {

/// Largest pool accepted by brute_force_teach.
inline constexpr std::size_t kBruteForceMaxPool = 32;

/// Greedy stops when no candidate improves F by more than this.
inline constexpr double kGreedyStallGain = 1e-15;

struct TeachingProblem {
  TaskSpec spec;
  double epsilon = 0.0;
  std::vector<std::size_t> pool;  // example ids, kept sorted ascending

  /// Problem over every example of `spec`.
  static TeachingProblem over_all(TaskSpec spec, double epsilon);
};

struct TeachingOutcome {
  std::vector<std::size_t> selected;
  /// F(S_0) = 0, F(S_1), ..., F(S_|S|) for the prefixes of `selected`.
  std::vector<double> f_trace;
  double threshold = 0.0;
  bool reached = false;
  /// Err(S) of the true learner; NaN if its posterior degenerates.
  double final_error = 0.0;

  std::size_t size() const { return selected.size(); }
};

/// F(S) = sum_h (Q0(h) - Q(h|S)) err(h), err taken over the spec's own Z.
double objective_F(const TaskSpec& spec, std::span<const std::size_t> example_ids);

/// C_eps = sum_h Q0(h) err(h) - eps Q0(h*).
double stopping_threshold(const TaskSpec& spec, double epsilon);

/// Err(S) on `truth`, NaN when every hypothesis is eliminated.
double true_error(const TaskSpec& truth, std::span<const std::size_t> example_ids);

TeachingOutcome greedy_teach(const TeachingProblem& problem, const TaskSpec& truth);
TeachingOutcome greedy_teach(const TeachingProblem& problem);

/// Exact minimum-cardinality teaching set (first in lexicographic id order
/// among minimum sets). Throws CapacityError if the pool exceeds
/// kBruteForceMaxPool.
TeachingOutcome brute_force_teach(const TeachingProblem& problem, std::size_t max_size, const TaskSpec& truth);
TeachingOutcome brute_force_teach(const TeachingProblem& problem, std::size_t max_size);

/// `size` ids drawn uniformly without replacement from the pool.
TeachingOutcome random_teach(const TeachingProblem& problem, std::size_t size, std::uint64_t seed,
                             const TaskSpec& truth);
TeachingOutcome random_teach(const TeachingProblem& problem, std::size_t size, std::uint64_t seed);

}  // namespace rmt
