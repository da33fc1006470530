#include "rmt/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "rmt/bounds.hpp"
#include "rmt/errors.hpp"
#include "rmt/harness.hpp"
#include "rmt/imperfect.hpp"
#include "rmt/rng.hpp"
#include "rmt/scenarios.hpp"
#include "rmt/teacher.hpp"

namespace rmt::verify {

namespace {

ScenarioConfig well_behaved(std::size_t n, std::size_t h, double eta, std::uint64_t seed) {
  ScenarioConfig c;
  c.regime = Regime::WellBehaved;
  c.n_examples = n;
  c.n_hypotheses = h;
  c.eta = eta;
  c.seed = seed;
  return c;
}

std::vector<std::size_t> random_ids(Rng& rng, std::size_t n, std::size_t k) {
  auto ids = rng.sample_without_replacement(n, k);
  std::ranges::sort(ids);
  return ids;
}

bool has_tag(const SweepRow& r, const std::string& tag) {
  return std::ranges::find(r.conditional_on, tag) != r.conditional_on.end();
}

CheckResult conditional_soundness(const std::string& name, SweepKind kind, std::vector<double> grid,
                                  const ConditionalOptions& opts) {
  SweepConfig cfg;
  cfg.scenario = well_behaved(opts.n_examples, opts.n_hypotheses, opts.eta, opts.seed);
  cfg.epsilon = opts.epsilon;
  cfg.kind = kind;
  cfg.delta_grid = std::move(grid);
  cfg.runs = opts.runs;
  cfg.baselines.clear();
  cfg.seed = derive_seed(opts.seed, {1});
  const auto rows = run_sweep(cfg);

  std::size_t checked = 0, excluded = 0, violations = 0, m2_failures = 0, unflagged = 0;
  for (const auto& r : rows) {
    if (r.teacher != "OptTilde") continue;
    if (!has_tag(r, "empirical lambda-hat")) ++unflagged;
    if (has_tag(r, "teacher threshold not reached") || has_tag(r, "teacher view not realizable") ||
        has_tag(r, "degenerate posterior")) {
      ++excluded;
      continue;
    }
    ++checked;
    if (!r.m1.value_or(false)) ++violations;
    if (r.m2 && !*r.m2) ++m2_failures;
  }
  std::ostringstream d;
  d << checked << " runs checked, " << violations << " M.1 violations, " << excluded
    << " excluded (assumption not met), " << m2_failures << " M.2 misses vs approximate oracle; conditional on lambda-hat";
  return {name, violations == 0 && unflagged == 0 && checked > 0, d.str()};
}

}  // namespace

CheckResult prior_soundness(const PriorSoundnessOptions& opts) {
  const auto n = static_cast<std::int64_t>(opts.instances);
  std::atomic<std::size_t> checked{0}, vacuous{0}, m1_bad{0}, m2_bad{0}, m2_open{0};
  std::atomic<bool> failed{false};
  std::string error;
  double worst_slack = 1e300;
#pragma omp parallel for schedule(dynamic) reduction(min : worst_slack)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto seed = derive_seed(opts.seed, {static_cast<std::uint64_t>(i)});
      Rng rng(seed);
      const double delta = 0.1 * static_cast<double>(1 + i % 8);
      const double eta = rng.uniform(opts.eta_lo, opts.eta_hi);
      const TaskSpec truth = generate(well_behaved(opts.n_examples, opts.n_hypotheses, eta, derive_seed(seed, {1})));
      const auto pool = random_ids(rng, truth.num_examples(), opts.pool_size);
      const TeacherView view = perturb_prior(truth, delta, delta, derive_seed(seed, {2}));

      const auto tilde = brute_force_teach(TeachingProblem{view.spec, opts.epsilon, pool}, pool.size(), truth);
      if (!tilde.reached) {
        ++vacuous;
        continue;
      }
      ++checked;
      const BoundPair b = bound_prior(opts.epsilon, delta, delta);
      const double slack = b.error_bound - tilde.final_error;
      worst_slack = std::min(worst_slack, slack);
      if (!(slack >= -opts.slack)) ++m1_bad;
      const auto oracle = brute_force_teach(TeachingProblem{truth, b.eps_hat, pool}, pool.size());
      if (!oracle.reached)
        ++m2_open;
      else if (tilde.size() > oracle.size())
        ++m2_bad;
    } catch (const std::exception& e) {
#pragma omp critical
      error = e.what();
      failed = true;
    }
  }
  std::ostringstream d;
  if (failed) {
    d << "error: " << error;
    return {"prior soundness", false, d.str()};
  }
  d << checked << " non-vacuous instances (" << vacuous << " where the teacher's threshold is unreachable), "
    << m1_bad << " M.1 and " << m2_bad << " M.2 violations, " << m2_open << " with unreachable eps-hat oracle, "
    << "min slack " << worst_slack;
  return {"prior soundness", m1_bad == 0 && m2_bad == 0 && checked > 0, d.str()};
}

CheckResult prior_lemma(std::size_t triples, std::uint64_t seed) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < triples; ++t) {
    const auto s = derive_seed(seed, {t});
    Rng rng(s);
    const TaskSpec truth = generate(well_behaved(20, 6, rng.uniform(0.2, 0.95), derive_seed(s, {1})));
    const double d1 = rng.uniform(0.0, 0.9);
    const double d2 = rng.uniform(0.0, 1.0);
    const TeacherView view = perturb_prior(truth, d1, d2, derive_seed(s, {2}));
    auto ids = rng.sample_without_replacement(truth.num_examples(), rng.index(11));
    const auto q = teach(truth, ids);
    const auto qt = teach(view.spec, ids);
    for (std::size_t h = 0; h < truth.num_hypotheses(); ++h) {
      if (q.is_zero(h) || qt.is_zero(h)) {
        bad += q.is_zero(h) != qt.is_zero(h) ? 1 : 0;
        continue;
      }
      const double lr = qt.log_score(h) - q.log_score(h);
      if (lr < std::log1p(-d1) - 1e-12 || lr > std::log1p(d2) + 1e-12) ++bad;
    }
  }
  std::ostringstream d;
  d << triples << " (spec, view, S) triples, " << bad << " per-hypothesis violations";
  return {"prior lemma", bad == 0, d.str()};
}

CheckResult rate_over_witness(double eps, double eta, double delta) {
  const std::size_t k = rate_over_k(eps, eta, delta);
  const TaskSpec truth = adversarial_rate_over(eps, eta, delta);
  const TeacherView view = perturb_rate(truth, delta, RateDirection::Over);
  const auto problem = TeachingProblem::over_all(view.spec, eps);
  const auto out = brute_force_teach(problem, problem.pool.size(), truth);
  const double closed = rate_over_error(eps, eta, delta);
  std::ostringstream d;
  d << "k=" << k << ", teaching size " << out.size() << ", true error " << out.final_error << " (closed form "
    << closed << ")";
  const bool ok = out.reached && out.size() == k && out.final_error >= 0.45 && out.final_error <= 0.55 &&
                  std::abs(out.final_error - closed) <= 1e-9;
  return {"rate over-estimation witness", ok, d.str()};
}

CheckResult rate_under_witness(double eps, double eps_hat, double eta, double delta) {
  const std::size_t k = rate_under_k(eps, eps_hat, eta, delta);
  const TaskSpec truth = adversarial_rate_under(eps, eps_hat, eta, delta);
  const TeacherView view = perturb_rate(truth, delta, RateDirection::Under);
  const auto tilde_problem = TeachingProblem::over_all(view.spec, eps);
  const auto tilde = brute_force_teach(tilde_problem, tilde_problem.pool.size(), truth);
  const auto opt_problem = TeachingProblem::over_all(truth, eps_hat);
  const auto opt = brute_force_teach(opt_problem, opt_problem.pool.size());
  std::ostringstream d;
  d << "k=" << k << ", |Opt~_eps|=" << tilde.size() << ", |Opt_eps_hat|=" << opt.size();
  const bool ok = tilde.reached && opt.reached && tilde.size() == k && opt.size() == k;
  return {"rate under-estimation witness", ok, d.str()};
}

CheckResult smoothness_inequality(std::size_t triples, std::uint64_t seed) {
  std::size_t bad = 0, with_flips = 0;
  for (std::size_t t = 0; t < triples; ++t) {
    const auto s = derive_seed(seed, {t});
    Rng rng(s);
    const double eta = rng.uniform(0.3, 0.95);
    const TaskSpec truth = generate(well_behaved(30, 8, eta, derive_seed(s, {1})));
    const double delta = rng.uniform(0.02, 0.2) * data_radius(truth);
    const auto ids = rng.sample_without_replacement(truth.num_examples(), 1 + rng.index(10));
    const std::size_t h = rng.index(truth.num_hypotheses());
    TaskSpec moved = truth;
    std::size_t m = 0;
    for (std::size_t id : ids) {
      auto& x = moved.examples[id].instance.features;
      const auto v = rng.unit_direction(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta * v[i];
      if (predict(truth.hypotheses[h].weights, truth.examples[id].x()) != predict(truth.hypotheses[h].weights, x))
        ++m;
    }
    with_flips += m > 0 ? 1 : 0;
    const double log_q = teach(truth, ids).log_score(h);
    const double log_q_moved = teach(moved, ids).log_score(h);
    const double allowed = log_q - static_cast<double>(m) * std::log1p(-eta);
    if (log_q_moved > allowed + 1e-12 * std::max(1.0, std::abs(allowed))) ++bad;
  }
  std::ostringstream d;
  d << triples << " (S, S', h) triples (" << with_flips << " with label flips), " << bad << " violations";
  return {"smoothness inequality", bad == 0, d.str()};
}

CheckResult sample_soundness(const ConditionalOptions& opts) {
  return conditional_soundness("sample-noise conditional soundness", SweepKind::Sample,
                               {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}, opts);
}

CheckResult feature_soundness(const ConditionalOptions& opts) {
  return conditional_soundness("feature-noise conditional soundness", SweepKind::Feature,
                               {0.0, 0.02, 0.04, 0.06, 0.08, 0.1}, opts);
}

CheckResult greedy_vs_oracle(std::size_t specs, std::uint64_t seed) {
  std::size_t both = 0, smaller = 0, stalls = 0;
  std::ostringstream stall_log;
  for (std::size_t t = 0; t < specs; ++t) {
    const auto s = derive_seed(seed, {t});
    Rng rng(s);
    const TaskSpec truth = generate(well_behaved(12, 2 + rng.index(5), rng.uniform(0.3, 1.0), derive_seed(s, {1})));
    const auto problem = TeachingProblem::over_all(truth, rng.uniform(0.001, 0.3));
    const auto oracle = brute_force_teach(problem, problem.pool.size());
    const auto greedy = greedy_teach(problem);
    if (oracle.reached && !greedy.reached) {
      ++stalls;
      stall_log << " stall at spec " << t << ";";
      continue;
    }
    if (oracle.reached) ++both;
    if (greedy.reached && oracle.reached && greedy.size() < oracle.size()) ++smaller;
  }
  std::ostringstream d;
  d << specs << " specs, " << both << " reachable, " << smaller << " greedy sets smaller than the oracle, " << stalls
    << " greedy stalls" << stall_log.str();
  return {"greedy vs oracle", smaller == 0, d.str()};
}

CheckResult extreme_points(std::size_t specs, std::uint64_t seed) {
  std::size_t bad = 0, min_without = 1000;
  for (std::size_t t = 0; t < specs; ++t) {
    ScenarioConfig c;
    c.regime = Regime::ExtremePoints;
    c.n_examples = 22;
    c.n_hypotheses = 12;
    c.eta = 0.5;
    c.seed = derive_seed(seed, {t});
    const auto cert = certify_extreme_points(generate(c));
    if (!cert.passed) ++bad;
    min_without = std::min(min_without, cert.without_extremes);
  }
  std::ostringstream d;
  d << specs << " specs, " << bad << " failed certification, smallest teaching set without extremes " << min_without;
  return {"extreme points certification", bad == 0, d.str()};
}

std::vector<CheckResult> run_suite(const std::string& kind) {
  std::vector<CheckResult> out;
  const bool all = kind == "all";
  if (!all && kind != "prior" && kind != "rate" && kind != "sample" && kind != "feature")
    throw ParameterError("unknown verification suite '" + kind + "'");
  if (all || kind == "prior") {
    out.push_back(prior_soundness());
    out.push_back(prior_lemma());
  }
  if (all || kind == "rate") {
    out.push_back(rate_over_witness());
    out.push_back(rate_under_witness());
  }
  if (all || kind == "sample") {
    out.push_back(smoothness_inequality());
    out.push_back(sample_soundness());
  }
  if (all || kind == "feature") out.push_back(feature_soundness());
  if (all) {
    out.push_back(greedy_vs_oracle());
    out.push_back(extreme_points());
  }
  return out;
}

}  // namespace rmt::verify
