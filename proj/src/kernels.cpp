#include "rmt/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"

namespace rmt::kernels {

// ---------------------------------------------------------------------------
// ResidualModel

ResidualModel::ResidualModel(std::vector<double> weights, double eta, std::size_t max_count)
    : weights_(std::move(weights)), eta_(eta), keep_pow_(max_count + 1), removed_pow_(max_count + 1) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("learning rate must lie in (0, 1]");
  const double log_keep = eta < 1.0 ? std::log1p(-eta) : 0.0;
  for (std::size_t c = 0; c <= max_count; ++c) {
    if (c == 0) {
      keep_pow_[c] = 1.0;
      removed_pow_[c] = 0.0;
    } else if (eta == 1.0) {
      keep_pow_[c] = 0.0;
      removed_pow_[c] = 1.0;
    } else {
      keep_pow_[c] = std::exp(static_cast<double>(c) * log_keep);
      removed_pow_[c] = -std::expm1(static_cast<double>(c) * log_keep);
    }
  }
}

double ResidualModel::residual(std::span<const std::uint32_t> counts) const {
  double r = 0.0;
  for (std::size_t h = 0; h < weights_.size(); ++h)
    if (weights_[h] != 0.0) r += weights_[h] * keep_pow_[counts[h]];
  return r;
}

double ResidualModel::removed(std::span<const std::uint32_t> counts) const {
  double f = 0.0;
  for (std::size_t h = 0; h < weights_.size(); ++h)
    if (weights_[h] != 0.0) f += weights_[h] * removed_pow_[counts[h]];
  return f;
}

double ResidualModel::gain(std::span<const std::uint8_t> row, std::span<const std::uint32_t> counts) const {
  double g = 0.0;
  for (std::size_t h = 0; h < weights_.size(); ++h)
    if (row[h]) g += weights_[h] * keep_pow_[counts[h]];
  return g * eta_;
}

namespace {

// ---------------------------------------------------------------------------
// Shared building blocks

void fill_row(const TaskSpec& spec, std::size_t example_index, std::span<std::uint8_t> row) {
  const auto& z = spec.examples[example_index];
  for (std::size_t h = 0; h < spec.hypotheses.size(); ++h)
    row[h] = predict(spec.hypotheses[h], z.instance) != z.label ? 1 : 0;
}

MismatchTable empty_table(const TaskSpec& spec, std::size_t rows) {
  MismatchTable t;
  t.rows = rows;
  t.cols = spec.hypotheses.size();
  t.cells.assign(t.rows * t.cols, 0);
  return t;
}

struct PatternClasses {
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> rank;  // position of the row within its class
  std::size_t count = 0;
};

PatternClasses classify_rows(const MismatchTable& table) {
  PatternClasses pc;
  pc.class_of.resize(table.rows);
  pc.rank.resize(table.rows);
  std::vector<std::size_t> representative;
  std::vector<std::size_t> members;
  for (std::size_t r = 0; r < table.rows; ++r) {
    const auto row = table.row(r);
    std::size_t k = 0;
    for (; k < representative.size(); ++k)
      if (std::ranges::equal(row, table.row(representative[k]))) break;
    if (k == representative.size()) {
      representative.push_back(r);
      members.push_back(0);
    }
    pc.class_of[r] = k;
    pc.rank[r] = members[k]++;
  }
  pc.count = representative.size();
  return pc;
}

/// Depth-first search over canonical subsets that start with a fixed row.
class BranchSearch {
 public:
  BranchSearch(const SubsetQuery& q, const PatternClasses& pc)
      : q_(q),
        pc_(pc),
        n_(q.table->rows),
        counts_(q.table->cols, 0),
        chosen_(pc.count, 0),
        scratch_(q.max_size + 1, std::vector<double>(n_)) {}

  bool run(std::size_t first, std::size_t size, std::vector<std::size_t>& out) {
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(chosen_.begin(), chosen_.end(), 0);
    path_.clear();
    if (pc_.rank[first] != 0) return false;
    push(first);
    if (dfs(first + 1, size - 1)) {
      out = path_;
      return true;
    }
    return false;
  }

 private:
  void push(std::size_t r) {
    const auto row = q_.table->row(r);
    for (std::size_t h = 0; h < counts_.size(); ++h) counts_[h] += row[h];
    ++chosen_[pc_.class_of[r]];
    path_.push_back(r);
  }

  void pop(std::size_t r) {
    const auto row = q_.table->row(r);
    for (std::size_t h = 0; h < counts_.size(); ++h) counts_[h] -= row[h];
    --chosen_[pc_.class_of[r]];
    path_.pop_back();
  }

  bool dfs(std::size_t start, std::size_t remaining) {
    const double r = q_.model->residual(counts_);
    if (remaining == 0) return within_target(r, q_.target);
    if (n_ - start < remaining) return false;

    auto& gains = scratch_[path_.size()];
    const std::size_t m = n_ - start;
    for (std::size_t p = start; p < n_; ++p) gains[p - start] = q_.model->gain(q_.table->row(p), counts_);
    std::nth_element(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(remaining - 1),
                     gains.begin() + static_cast<std::ptrdiff_t>(m), std::greater<>());
    double best = 0.0;
    for (std::size_t i = 0; i < remaining; ++i) best += gains[i];
    if (r - best > q_.target + 1e-12 * q_.target + 1e-9 * r) return false;

    for (std::size_t p = start; p < n_; ++p) {
      if (pc_.rank[p] != chosen_[pc_.class_of[p]]) continue;
      push(p);
      if (dfs(p + 1, remaining - 1)) return true;
      pop(p);
    }
    return false;
  }

  const SubsetQuery& q_;
  const PatternClasses& pc_;
  std::size_t n_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<double>> scratch_;
};

enum class Reachability { EmptySuffices, Unreachable, Search };

Reachability precheck(const SubsetQuery& q) {
  const auto& t = *q.table;
  std::vector<std::uint32_t> counts(t.cols, 0);
  if (within_target(q.model->residual(counts), q.target)) return Reachability::EmptySuffices;
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t h = 0; h < t.cols; ++h) counts[h] += t.cells[r * t.cols + h];
  if (!within_target(q.model->residual(counts), q.target)) return Reachability::Unreachable;
  return Reachability::Search;
}

std::size_t flips_in_trial(const TaskSpec& spec, double delta, std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  const std::size_t n = spec.examples.size();
  const std::size_t d = spec.dim();
  const std::size_t k = 1 + rng.index(n);
  const auto picked = rng.sample_without_replacement(n, k);
  std::vector<std::size_t> flips(spec.hypotheses.size(), 0);
  FeatureVector moved(d);
  for (std::size_t i : picked) {
    const auto& x = spec.examples[i].x();
    const auto dir = rng.unit_direction(d);
    for (std::size_t c = 0; c < d; ++c) moved[c] = x[c] + delta * dir[c];
    for (std::size_t h = 0; h < spec.hypotheses.size(); ++h)
      if (predict(spec.hypotheses[h].weights, x) != predict(spec.hypotheses[h].weights, moved)) ++flips[h];
  }
  return flips.empty() ? 0 : *std::ranges::max_element(flips);
}

void check_query(const SubsetQuery& q) {
  if (q.table == nullptr || q.model == nullptr) throw ContractViolation("subset query is incomplete");
  if (q.table->cols != q.model->num_hypotheses()) throw ContractViolation("table and model disagree on |H|");
  if (q.max_size > q.table->rows) throw ParameterError("max_size exceeds pool size");
}

}  // namespace

// ---------------------------------------------------------------------------
// serial

namespace serial {

MismatchTable build_mismatch_table(const TaskSpec& spec, std::span<const std::size_t> example_indices) {
  auto t = empty_table(spec, example_indices.size());
  for (std::size_t r = 0; r < t.rows; ++r)
    fill_row(spec, example_indices[r], std::span<std::uint8_t>(t.cells.data() + r * t.cols, t.cols));
  return t;
}

void gain_scan(const MismatchTable& table, const ResidualModel& model, std::span<const std::uint32_t> counts,
               std::span<const std::uint8_t> used, std::span<double> out) {
  for (std::size_t r = 0; r < table.rows; ++r) out[r] = used[r] ? -1.0 : model.gain(table.row(r), counts);
}

std::optional<std::vector<std::size_t>> search_min_subset(const SubsetQuery& q) {
  check_query(q);
  switch (precheck(q)) {
    case Reachability::EmptySuffices:
      return std::vector<std::size_t>{};
    case Reachability::Unreachable:
      return std::nullopt;
    case Reachability::Search:
      break;
  }
  const auto pc = classify_rows(*q.table);
  BranchSearch search(q, pc);
  std::vector<std::size_t> out;
  for (std::size_t size = 1; size <= q.max_size; ++size)
    for (std::size_t first = 0; first + size <= q.table->rows; ++first)
      if (search.run(first, size, out)) return out;
  return std::nullopt;
}

std::size_t max_label_flips(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed) {
  std::size_t best = 0;
  for (std::size_t t = 0; t < trials; ++t) best = std::max(best, flips_in_trial(spec, delta, derive_seed(seed, {t})));
  return best;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// parallel

namespace parallel {

MismatchTable build_mismatch_table(const TaskSpec& spec, std::span<const std::size_t> example_indices) {
  auto t = empty_table(spec, example_indices.size());
  const auto rows = static_cast<std::ptrdiff_t>(t.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r)
    fill_row(spec, example_indices[static_cast<std::size_t>(r)],
             std::span<std::uint8_t>(t.cells.data() + static_cast<std::size_t>(r) * t.cols, t.cols));
  return t;
}

void gain_scan(const MismatchTable& table, const ResidualModel& model, std::span<const std::uint32_t> counts,
               std::span<const std::uint8_t> used, std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(table.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = used[r] ? -1.0 : model.gain(table.row(r), counts);
  }
}

std::optional<std::vector<std::size_t>> search_min_subset(const SubsetQuery& q) {
  check_query(q);
  switch (precheck(q)) {
    case Reachability::EmptySuffices:
      return std::vector<std::size_t>{};
    case Reachability::Unreachable:
      return std::nullopt;
    case Reachability::Search:
      break;
  }
  const auto pc = classify_rows(*q.table);
  const std::size_t n = q.table->rows;

  for (std::size_t size = 1; size <= q.max_size; ++size) {
    std::vector<std::size_t> firsts;
    for (std::size_t r = 0; r + size <= n; ++r)
      if (pc.rank[r] == 0) firsts.push_back(r);

    std::vector<std::vector<std::size_t>> found(firsts.size());
    std::atomic<std::size_t> best_branch{firsts.size()};
    const auto branches = static_cast<std::ptrdiff_t>(firsts.size());

#pragma omp parallel
    {
      BranchSearch search(q, pc);
#pragma omp for schedule(dynamic, 1)
      for (std::ptrdiff_t b = 0; b < branches; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        if (ub > best_branch.load(std::memory_order_relaxed)) continue;
        std::vector<std::size_t> out;
        if (search.run(firsts[ub], size, out)) {
          found[ub] = std::move(out);
          std::size_t cur = best_branch.load();
          while (ub < cur && !best_branch.compare_exchange_weak(cur, ub)) {
          }
        }
      }
    }
    if (best_branch.load() < firsts.size()) return found[best_branch.load()];
  }
  return std::nullopt;
}

std::size_t max_label_flips(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed) {
  std::size_t best = 0;
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 4) reduction(max : best)
  for (std::ptrdiff_t t = 0; t < n; ++t)
    best = std::max(best, flips_in_trial(spec, delta, derive_seed(seed, {static_cast<std::uint64_t>(t)})));
  return best;
}

}  // namespace parallel

}  // namespace rmt::kernels
