#pragma once

// Hot loops of the teaching solvers and the smoothness estimator.
//
// Every kernel exists twice: `serial::` is the plain single-threaded
// reference, `parallel::` distributes the same work with OpenMP. Both
// produce bit-identical results (per-item work is independent and all
// reductions are order-free or resolved by index), which the kernel tests
// assert and bench_kernels times.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmt/core.hpp"

namespace rmt::kernels {

/// cells[r * cols + c] == 1 iff hypothesis c mislabels pool example r.
struct MismatchTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  bool at(std::size_t r, std::size_t c) const { return cells[r * cols + c] != 0; }
  std::span<const std::uint8_t> row(std::size_t r) const { return {cells.data() + r * cols, cols}; }
};

/// Residual error mass R(S) = sum_h Q0(h) err(h) (1 - eta)^{m_h(S)}, where
/// m_h(S) counts the examples of S that h mislabels. F(S) = R(0) - R(S), so
/// the stopping rule F(S) >= C_eps is R(S) <= eps * Q0(h*), which avoids the
/// cancellation of comparing two nearly equal large sums.
class ResidualModel {
 public:
  ResidualModel(std::vector<double> weights, double eta, std::size_t max_count);

  double eta() const { return eta_; }
  std::size_t num_hypotheses() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  double residual(std::span<const std::uint32_t> counts) const;
  /// F(S) evaluated term-wise as sum_h w_h (1 - (1-eta)^{m_h}).
  double removed(std::span<const std::uint32_t> counts) const;
  /// Decrease of R when one example with mismatch row `row` is added.
  double gain(std::span<const std::uint8_t> row, std::span<const std::uint32_t> counts) const;

 private:
  std::vector<double> weights_;
  double eta_;
  std::vector<double> keep_pow_;     // (1-eta)^c
  std::vector<double> removed_pow_;  // 1 - (1-eta)^c
};

/// R <= target up to a relative rounding allowance of 1e-12.
inline bool within_target(double residual, double target) { return residual <= target + 1e-12 * target; }

struct SubsetQuery {
  const MismatchTable* table = nullptr;
  const ResidualModel* model = nullptr;
  double target = 0.0;
  std::size_t max_size = 0;
};

namespace serial {

MismatchTable build_mismatch_table(const TaskSpec& spec, std::span<const std::size_t> example_indices);

/// out[r] = gain of row r given counts, or -1 for rows flagged in `used`.
void gain_scan(const MismatchTable& table, const ResidualModel& model, std::span<const std::uint32_t> counts,
               std::span<const std::uint8_t> used, std::span<double> out);

/// Smallest row subset meeting the target, first in lexicographic row order
/// among subsets of that size; nullopt if none up to max_size.
/// Branch-and-bound: F is monotone submodular, so the best r additions from
/// a node gain at most the sum of the r largest single-row gains there.
/// Rows with identical mismatch patterns are interchangeable; only the
/// lowest-index members of each pattern class are expanded.
std::optional<std::vector<std::size_t>> search_min_subset(const SubsetQuery& query);

/// Largest per-hypothesis count of prediction flips observed over `trials`
/// random subsets whose points are each displaced by a random vector of norm
/// exactly `delta`. Trial t uses seed derive_seed(seed, {t}).
std::size_t max_label_flips(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed);

}  // namespace serial

namespace parallel {

MismatchTable build_mismatch_table(const TaskSpec& spec, std::span<const std::size_t> example_indices);
void gain_scan(const MismatchTable& table, const ResidualModel& model, std::span<const std::uint32_t> counts,
               std::span<const std::uint8_t> used, std::span<double> out);
std::optional<std::vector<std::size_t>> search_min_subset(const SubsetQuery& query);
std::size_t max_label_flips(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed);

}  // namespace parallel

}  // namespace rmt::kernels
