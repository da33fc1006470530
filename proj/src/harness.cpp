#include "rmt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "rmt/bounds.hpp"
#include "rmt/errors.hpp"
#include "rmt/imperfect.hpp"
#include "rmt/io.hpp"
#include "rmt/rng.hpp"
#include "rmt/teacher.hpp"

namespace rmt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Everything computed once per sweep from the ground truth.
struct Baseline {
  TaskSpec truth;
  TeachingProblem full;
  TeachingOutcome opt;
  double radius = 0.0;
};

TeachingProblem problem_for(const TaskSpec& spec, double eps) { return TeachingProblem::over_all(spec, eps); }

TeacherView make_view(const SweepConfig& cfg, const Baseline& base, double delta, std::uint64_t seed) {
  switch (cfg.kind) {
    case SweepKind::Prior: return perturb_prior(base.truth, delta, delta, seed);
    case SweepKind::RateOver: return perturb_rate(base.truth, delta, RateDirection::Over);
    case SweepKind::RateUnder: return perturb_rate(base.truth, delta, RateDirection::Under);
    case SweepKind::Sample: return sample_Z(base.truth, 1.0 - delta, seed);
    case SweepKind::Feature: return perturb_phi(base.truth, delta * base.radius, seed);
  }
  throw ContractViolation("unknown sweep kind");
}

std::vector<LabeledExample> examples_with_ids(const TaskSpec& spec, const std::vector<std::size_t>& ids) {
  std::vector<LabeledExample> out;
  for (std::size_t id : ids) out.push_back(spec.examples.at(index_of_example(spec, id)));
  return out;
}

/// Bound parameters for the view, measured against the truth. Returns
/// nullopt for the rate kinds, which have no closed-form guarantee.
std::optional<std::pair<NoiseKind, BoundParams>> measure_params(const SweepConfig& cfg, const Baseline& base,
                                                                 const TeacherView& view, double delta,
                                                                 std::uint64_t seed) {
  BoundParams p;
  switch (cfg.kind) {
    case SweepKind::Prior:
      p.delta1 = delta;
      p.delta2 = delta;
      return std::pair{NoiseKind::Prior, p};
    case SweepKind::RateOver:
    case SweepKind::RateUnder: return std::nullopt;
    case SweepKind::Sample: {
      p.delta2 = measure_err_gap(base.truth, view);
      const auto witness = examples_with_ids(base.truth, base.opt.selected);
      const auto d3 = bottleneck_distance(witness, view.spec.examples);
      p.delta3 = d3.value_or(std::numeric_limits<double>::infinity());
      if (p.delta3 > 0.0 && std::isfinite(p.delta3))
        p.lambda = estimate_lambda(base.truth, p.delta3, cfg.lambda_trials, seed);
      return std::pair{NoiseKind::Sample, p};
    }
    case SweepKind::Feature: {
      p.delta1 = delta * base.radius;
      p.delta2 = measure_err_gap(base.truth, view);
      if (p.delta1 > 0.0) {
        // The realised perturbation is itself a delta1-perturbation of Z, so
        // its flips are a valid observation for the lambda estimate.
        const double realised = static_cast<double>(max_prediction_flips(base.truth, view)) / p.delta1;
        p.lambda = std::max(estimate_lambda(base.truth, p.delta1, cfg.lambda_trials, seed), realised);
      }
      return std::pair{NoiseKind::Feature, p};
    }
  }
  return std::nullopt;
}

SweepRow row_from(const SweepConfig& cfg, double delta, std::size_t run, std::string teacher,
                  const TeachingOutcome& o) {
  SweepRow r;
  r.kind = cfg.kind;
  r.delta = delta;
  r.run = run;
  r.teacher = std::move(teacher);
  r.set_size = o.size();
  r.error = o.final_error;
  r.reached = o.reached;
  if (std::isnan(r.error)) r.conditional_on.push_back("degenerate posterior");
  return r;
}

std::vector<SweepRow> run_point(const SweepConfig& cfg, const Baseline& base, std::size_t grid_index,
                                std::size_t run) {
  const double delta = cfg.delta_grid[grid_index];
  const std::uint64_t seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(cfg.kind), grid_index, static_cast<std::uint64_t>(run)});
  const TeacherView view = make_view(cfg, base, delta, seed);
  const TeachingOutcome tilde = greedy_teach(problem_for(view.spec, cfg.epsilon), base.truth);

  std::vector<SweepRow> rows;
  rows.push_back(row_from(cfg, delta, run, "Opt", base.opt));

  SweepRow tr = row_from(cfg, delta, run, "OptTilde", tilde);
  if (!tilde.reached) tr.conditional_on.push_back("teacher threshold not reached");
  if (cfg.kind == SweepKind::Feature && !is_realizable(view.spec))
    tr.conditional_on.push_back("teacher view not realizable");
  if (const auto measured = measure_params(cfg, base, view, delta, derive_seed(seed, {1}))) {
    const auto& [kind, params] = *measured;
    BoundInputs in;
    in.view_run = tilde;
    const BoundPair pair = bound_for(kind, base.truth, cfg.epsilon, params);
    if (!pair.vacuous) in.oracle = run_oracle(problem_for(base.truth, pair.eps_hat));
    const BoundReport rep = check_bounds(kind, base.truth, cfg.epsilon, params, in);
    tr.error_bound = rep.error_bound;
    tr.eps_hat = rep.eps_hat;
    tr.oracle_size = rep.oracle_size;
    tr.m1 = rep.m1;
    tr.m2 = rep.m2;
    tr.conditional_on.insert(tr.conditional_on.end(), rep.conditional_on.begin(), rep.conditional_on.end());
  } else {
    tr.conditional_on.push_back("no closed-form guarantee");
  }
  rows.push_back(std::move(tr));

  for (std::size_t b = 0; b < cfg.baselines.size(); ++b) {
    const double x = baseline_multiplier(cfg.baselines[b]);
    const auto size = std::min(base.full.pool.size(),
                               static_cast<std::size_t>(std::llround(x * static_cast<double>(base.opt.size()))));
    const auto o = random_teach(base.full, size, derive_seed(seed, {100 + b}), base.truth);
    rows.push_back(row_from(cfg, delta, run, cfg.baselines[b], o));
  }
  return rows;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return kNaN;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::string opt_str(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ';';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Prior: return "prior";
    case SweepKind::RateOver: return "rate_over";
    case SweepKind::RateUnder: return "rate_under";
    case SweepKind::Sample: return "sample";
    case SweepKind::Feature: return "feature";
  }
  return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (auto k : {SweepKind::Prior, SweepKind::RateOver, SweepKind::RateUnder, SweepKind::Sample, SweepKind::Feature})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown noise kind '" + name + "'");
}

double baseline_multiplier(const std::string& name) {
  if (name.rfind("Rnd:", 0) != 0) throw ParameterError("baseline names look like Rnd:<multiplier>, got '" + name + "'");
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(name.substr(4), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != name.size() - 4 || !(x > 0.0)) throw ParameterError("bad baseline multiplier in '" + name + "'");
  return x;
}

void validate(const SweepConfig& c) {
  if (c.runs < 1) throw ParameterError("runs must be >= 1");
  if (c.delta_grid.empty()) throw ParameterError("delta_grid must not be empty");
  for (std::size_t i = 0; i < c.delta_grid.size(); ++i) {
    if (!(c.delta_grid[i] >= 0.0)) throw ParameterError("delta_grid entries must be >= 0");
    if (i && c.delta_grid[i] <= c.delta_grid[i - 1]) throw ParameterError("delta_grid must be ascending");
  }
  if (c.kind == SweepKind::Prior && c.delta_grid.back() >= 1.0) throw ParameterError("prior noise needs delta < 1");
  if (c.kind == SweepKind::Sample && c.delta_grid.back() >= 1.0)
    throw ParameterError("sample noise needs delta < 1 (fraction 1 - delta)");
  if (!(c.epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (c.lambda_trials < 1) throw ParameterError("lambda_trials must be >= 1");
  for (const auto& b : c.baselines) baseline_multiplier(b);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  Baseline base;
  base.truth = generate(config.scenario);
  base.full = problem_for(base.truth, config.epsilon);
  base.opt = greedy_teach(base.full);
  base.radius = data_radius(base.truth);

  const std::size_t points = config.delta_grid.size() * config.runs;
  std::vector<std::vector<SweepRow>> per_point(points);
  std::vector<std::string> failures(points);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < points; ++t) {
    try {
      per_point[t] = run_point(config, base, t / config.runs, t % config.runs);
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  }
  for (const auto& f : failures)
    if (!f.empty()) throw Error("sweep point failed: " + f);

  std::vector<SweepRow> rows;
  for (auto& p : per_point)
    for (auto& r : p) rows.push_back(std::move(r));
  std::ranges::sort(rows, [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.kind, a.delta, a.run, a.teacher) < std::tie(b.kind, b.delta, b.run, b.teacher);
  });
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows) {
  struct Acc {
    std::vector<double> errors, sizes, bounds;
    std::size_t runs = 0;
  };
  std::map<std::tuple<SweepKind, double, std::string>, Acc> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.kind, r.delta, r.teacher}];
    ++g.runs;
    if (!std::isnan(r.error)) g.errors.push_back(r.error);
    g.sizes.push_back(static_cast<double>(r.set_size));
    if (r.error_bound) g.bounds.push_back(*r.error_bound);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, g] : groups) {
    SummaryRow s;
    std::tie(s.kind, s.delta, s.teacher) = key;
    s.runs = g.runs;
    s.error_mean = mean_of(g.errors);
    s.error_std = g.errors.empty() ? kNaN : sample_std(g.errors, s.error_mean);
    s.size_mean = mean_of(g.sizes);
    s.size_std = sample_std(g.sizes, s.size_mean);
    s.bound_mean = mean_of(g.bounds);
    out.push_back(std::move(s));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "kind,delta,run,teacher,set_size,error,reached,error_bound,eps_hat,oracle_size,m1,m2,conditional_on\n";
  const auto flag = [](const std::optional<bool>& b) { return b ? std::string(*b ? "1" : "0") : std::string(); };
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << format_real(r.delta) << ',' << r.run << ',' << r.teacher << ',' << r.set_size
        << ',' << format_real(r.error) << ',' << (r.reached ? 1 : 0) << ',' << opt_str(r.error_bound) << ','
        << opt_str(r.eps_hat) << ',' << (r.oracle_size ? std::to_string(*r.oracle_size) : std::string()) << ','
        << flag(r.m1) << ',' << flag(r.m2) << ',' << join(r.conditional_on) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "kind,delta,teacher,runs,error_mean,error_std,size_mean,size_std,bound_mean\n";
  for (const auto& s : rows) {
    out << to_string(s.kind) << ',' << format_real(s.delta) << ',' << s.teacher << ',' << s.runs << ','
        << format_real(s.error_mean) << ',' << format_real(s.error_std) << ',' << format_real(s.size_mean) << ','
        << format_real(s.size_std) << ',' << (std::isnan(s.bound_mean) ? std::string() : format_real(s.bound_mean))
        << '\n';
  }
}

}  // namespace rmt
