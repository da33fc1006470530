#include "rmt/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/kernels.hpp"
#include "rmt/rng.hpp"

namespace rmt {

namespace {

/// Planning-side state shared by the solvers: mismatch rows for the pool
/// and the residual model of the planning spec.
struct Planner {
  std::vector<std::size_t> pool_ids;
  kernels::MismatchTable table;
  kernels::ResidualModel model;
  double target;     // eps * Q0(h*)
  double threshold;  // C_eps
};

std::vector<double> planning_weights(const TaskSpec& spec) {
  const auto errs = hypothesis_errors(spec);
  std::vector<double> w(errs.size());
  for (std::size_t h = 0; h < errs.size(); ++h) w[h] = spec.prior[h] * errs[h];
  return w;
}

Planner make_planner(const TeachingProblem& problem) {
  const auto& spec = problem.spec;
  if (problem.epsilon < 0.0 || !std::isfinite(problem.epsilon)) throw ParameterError("epsilon must be >= 0");
  std::vector<std::size_t> rows;
  rows.reserve(problem.pool.size());
  for (std::size_t id : problem.pool) rows.push_back(index_of_example(spec, id));
  for (std::size_t i = 1; i < problem.pool.size(); ++i)
    if (problem.pool[i] <= problem.pool[i - 1]) throw ContractViolation("pool ids must be strictly ascending");

  Planner p{problem.pool,
            kernels::parallel::build_mismatch_table(spec, rows),
            kernels::ResidualModel(planning_weights(spec), spec.rate, rows.size()),
            problem.epsilon * spec.prior.at(spec.target_id),
            stopping_threshold(spec, problem.epsilon)};
  return p;
}

TeachingOutcome finish(const Planner& p, const std::vector<std::size_t>& rows, const TaskSpec& truth) {
  TeachingOutcome out;
  out.threshold = p.threshold;
  std::vector<std::uint32_t> counts(p.table.cols, 0);
  out.f_trace.push_back(0.0);
  for (std::size_t r : rows) {
    const auto row = p.table.row(r);
    for (std::size_t h = 0; h < p.table.cols; ++h) counts[h] += row[h];
    out.selected.push_back(p.pool_ids[r]);
    out.f_trace.push_back(p.model.removed(counts));
  }
  out.reached = kernels::within_target(p.model.residual(counts), p.target);
  out.final_error = true_error(truth, out.selected);
  return out;
}

}  // namespace

TeachingProblem TeachingProblem::over_all(TaskSpec spec, double epsilon) {
  TeachingProblem p{std::move(spec), epsilon, {}};
  p.pool.reserve(p.spec.examples.size());
  for (const auto& z : p.spec.examples) p.pool.push_back(z.id());
  std::ranges::sort(p.pool);
  return p;
}

double objective_F(const TaskSpec& spec, std::span<const std::size_t> example_ids) {
  std::vector<std::size_t> rows;
  for (std::size_t id : example_ids) rows.push_back(index_of_example(spec, id));
  const auto table = kernels::serial::build_mismatch_table(spec, rows);
  const kernels::ResidualModel model(planning_weights(spec), spec.rate, rows.size());
  std::vector<std::uint32_t> counts(table.cols, 0);
  for (std::size_t r = 0; r < table.rows; ++r)
    for (std::size_t h = 0; h < table.cols; ++h) counts[h] += table.at(r, h) ? 1 : 0;
  return model.removed(counts);
}

double stopping_threshold(const TaskSpec& spec, double epsilon) {
  if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
  const auto w = planning_weights(spec);
  double total = 0.0;
  for (double x : w) total += x;
  return total - epsilon * spec.prior.at(spec.target_id);
}

double true_error(const TaskSpec& truth, std::span<const std::size_t> example_ids) {
  const auto state = teach(truth, example_ids);
  try {
    return learner_error(state, hypothesis_errors(truth));
  } catch (const DegeneratePosterior&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

TeachingOutcome greedy_teach(const TeachingProblem& problem, const TaskSpec& truth) {
  const Planner p = make_planner(problem);
  const std::size_t n = p.table.rows;
  std::vector<std::uint32_t> counts(p.table.cols, 0);
  std::vector<std::uint8_t> used(n, 0);
  std::vector<double> gains(n);
  std::vector<std::size_t> chosen;

  while (!kernels::within_target(p.model.residual(counts), p.target) && chosen.size() < n) {
    kernels::parallel::gain_scan(p.table, p.model, counts, used, gains);
    std::size_t best = n;
    for (std::size_t r = 0; r < n; ++r)
      if (!used[r] && (best == n || gains[r] > gains[best])) best = r;
    if (best == n || gains[best] <= kGreedyStallGain) break;
    used[best] = 1;
    chosen.push_back(best);
    const auto row = p.table.row(best);
    for (std::size_t h = 0; h < p.table.cols; ++h) counts[h] += row[h];
  }
  return finish(p, chosen, truth);
}

TeachingOutcome greedy_teach(const TeachingProblem& problem) { return greedy_teach(problem, problem.spec); }

TeachingOutcome brute_force_teach(const TeachingProblem& problem, std::size_t max_size, const TaskSpec& truth) {
  if (problem.pool.size() > kBruteForceMaxPool)
    throw CapacityError("brute force accepts at most " + std::to_string(kBruteForceMaxPool) + " pool examples, got " +
                        std::to_string(problem.pool.size()));
  if (max_size > problem.pool.size()) throw ParameterError("max_size exceeds pool size");
  const Planner p = make_planner(problem);
  const kernels::SubsetQuery q{&p.table, &p.model, p.target, max_size};
  const auto rows = kernels::parallel::search_min_subset(q);
  if (!rows) {
    TeachingOutcome out = finish(p, {}, truth);
    out.reached = false;
    return out;
  }
  return finish(p, *rows, truth);
}

TeachingOutcome brute_force_teach(const TeachingProblem& problem, std::size_t max_size) {
  return brute_force_teach(problem, max_size, problem.spec);
}

TeachingOutcome random_teach(const TeachingProblem& problem, std::size_t size, std::uint64_t seed,
                             const TaskSpec& truth) {
  if (size > problem.pool.size()) throw ParameterError("random teaching set larger than the pool");
  const Planner p = make_planner(problem);
  Rng rng(seed);
  auto rows = rng.sample_without_replacement(p.table.rows, size);
  std::ranges::sort(rows);
  return finish(p, rows, truth);
}

TeachingOutcome random_teach(const TeachingProblem& problem, std::size_t size, std::uint64_t seed) {
  return random_teach(problem, size, seed, problem.spec);
}

}  // namespace rmt
