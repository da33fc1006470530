#include "rmt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/io.hpp"

namespace rmt {

namespace {

void require_rate_below_one(double eta) {
  if (!(eta < 1.0)) throw DomainError("the sample and feature bounds only hold for eta < 1");
}

void require_positive(double q_target) {
  if (!(q_target > 0.0)) throw ParameterError("Q0(h*) must be positive");
}

BoundPair finish_pair(double error_bound, double eps_hat) {
  BoundPair p{error_bound, eps_hat, false};
  if (!(eps_hat > 0.0)) {
    p.eps_hat = 0.0;
    p.vacuous = true;
  }
  return p;
}

void check_unit_interval(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw ParameterError(std::string(what) + " must lie in (0, 1)");
}

std::size_t checked_k(double k_real) {
  if (!std::isfinite(k_real) || k_real > static_cast<double>(kMaxAdversarialK))
    throw ParameterError("construction needs more than " + std::to_string(kMaxAdversarialK) + " examples");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(k_real)));
}

/// h* = sign(x), h-bar = sign(-x) over the points 1..n, all labelled +1.
TaskSpec opposite_classifiers(double eta, double eps, double eta_view, std::size_t k) {
  // log of Q0(h-bar)/Q0(h*) = eps / (1 - eta~)^k
  const double log_ratio = std::log(eps) - static_cast<double>(k) * std::log1p(-eta_view);
  TaskSpec spec;
  spec.hypotheses = {Hypothesis{0, {1.0}}, Hypothesis{1, {-1.0}}};
  spec.target_id = 0;
  spec.rate = eta;
  spec.prior = {1.0 / (1.0 + std::exp(log_ratio)), 1.0 / (1.0 + std::exp(-log_ratio))};
  for (std::size_t i = 0; i < k + 2; ++i)
    spec.examples.push_back(LabeledExample{Instance{i, {static_cast<double>(i + 1)}}, Label::Positive});
  return spec;
}

}  // namespace

BoundPair bound_prior(double eps, double delta1, double delta2) {
  if (!(delta1 < 1.0)) throw ParameterError("prior bound needs delta1 < 1");
  if (delta1 < 0.0 || delta2 < 0.0) throw ParameterError("prior bound needs non-negative deltas");
  return finish_pair(eps * (1.0 + delta2) / (1.0 - delta1), eps * (1.0 - delta1) / (1.0 + delta2));
}

BoundPair bound_sample(double eps, double delta2, double delta3, double lambda, double eta, double q_max,
                       double q_min, double q_target) {
  require_rate_below_one(eta);
  require_positive(q_target);
  const double decay = std::pow(1.0 - eta, lambda * delta3);
  return finish_pair((eps * q_max + delta2) / q_target, (eps * q_min - delta2) * decay / q_target);
}

BoundPair bound_feature(double eps, double delta1, double delta2, double lambda, double eta, double q_max,
                        double q_min, double q_target) {
  require_rate_below_one(eta);
  require_positive(q_target);
  const double decay = std::pow(1.0 - eta, lambda * delta1);
  return finish_pair((eps * q_max + delta2) / (q_target * decay), (eps * q_min - delta2) * decay / q_target);
}

std::size_t rate_over_k(double eps, double eta, double delta) {
  check_unit_interval(eps, "eps");
  check_unit_interval(eta, "eta");
  if (!(delta > 0.0)) throw ParameterError("over-estimation needs delta > 0");
  check_unit_interval(eta + delta, "eta + delta");
  return checked_k(-std::log(eps) / (std::log1p(-eta) - std::log1p(-(eta + delta))));
}

std::size_t rate_under_k(double eps, double eps_hat, double eta, double delta) {
  check_unit_interval(eps, "eps");
  check_unit_interval(eta, "eta");
  if (!(eps_hat > 0.0 && eps_hat < eps)) throw ParameterError("under-estimation needs 0 < eps_hat < eps");
  if (!(delta > 0.0)) throw ParameterError("under-estimation needs delta > 0");
  check_unit_interval(eta - delta, "eta - delta");
  return checked_k(std::log(eps / eps_hat) / (std::log1p(-(eta - delta)) - std::log1p(-eta)));
}

double rate_over_error(double eps, double eta, double delta) {
  const auto k = static_cast<double>(rate_over_k(eps, eta, delta));
  const double log_term = k * (std::log1p(-(eta + delta)) - std::log1p(-eta)) - std::log(eps);
  return 1.0 / (1.0 + std::exp(log_term));
}

TaskSpec adversarial_rate_over(double eps, double eta, double delta) {
  const std::size_t k = rate_over_k(eps, eta, delta);
  return opposite_classifiers(eta, eps, eta + delta, k);
}

TaskSpec adversarial_rate_under(double eps, double eps_hat, double eta, double delta) {
  const std::size_t k = rate_under_k(eps, eps_hat, eta, delta);
  return opposite_classifiers(eta, eps, eta - delta, k);
}

BoundPair bound_for(NoiseKind kind, const TaskSpec& truth, double eps, const BoundParams& params) {
  const auto [lo, hi] = std::ranges::minmax_element(truth.prior);
  const double q_target = truth.prior.at(truth.target_id);
  switch (kind) {
    case NoiseKind::Prior: return bound_prior(eps, params.delta1, params.delta2);
    case NoiseKind::Rate: return finish_pair(eps, params.eps_hat.value_or(eps));
    case NoiseKind::Sample:
      return bound_sample(eps, params.delta2, params.delta3, params.lambda, truth.rate, *hi, *lo, q_target);
    case NoiseKind::Feature:
      return bound_feature(eps, params.delta1, params.delta2, params.lambda, truth.rate, *hi, *lo, q_target);
  }
  throw ContractViolation("unknown noise kind");
}

OracleRun run_oracle(const TeachingProblem& problem) {
  if (problem.pool.size() <= kBruteForceMaxPool)
    return OracleRun{brute_force_teach(problem, problem.pool.size()), false};
  return OracleRun{greedy_teach(problem), true};
}

BoundReport check_bounds(NoiseKind kind, const TaskSpec& truth, double eps, const BoundParams& params,
                         const BoundInputs& inputs) {
  BoundReport r;
  r.kind = kind;
  r.eps = eps;
  switch (kind) {
    case NoiseKind::Prior: r.delta_params = {params.delta1, params.delta2}; break;
    case NoiseKind::Rate: r.delta_params = {params.delta1}; break;
    case NoiseKind::Sample: r.delta_params = {params.delta2, params.delta3}; break;
    case NoiseKind::Feature: r.delta_params = {params.delta1, params.delta2}; break;
  }
  const BoundPair pair = bound_for(kind, truth, eps, params);
  r.error_bound = pair.error_bound;
  r.eps_hat = pair.eps_hat;
  if (kind == NoiseKind::Sample || kind == NoiseKind::Feature) r.conditional_on.push_back("empirical lambda-hat");
  if (kind == NoiseKind::Rate) r.conditional_on.push_back("no closed-form guarantee");

  if (inputs.view_run) {
    r.observed_error = inputs.view_run->final_error;
    r.observed_size = inputs.view_run->size();
    r.m1 = r.observed_error <= r.error_bound + 1e-12;
  } else {
    r.observed_error = std::numeric_limits<double>::quiet_NaN();
    r.incomplete = true;
    r.conditional_on.push_back("missing teacher run");
  }

  if (pair.vacuous) {
    r.conditional_on.push_back("vacuous M.2 bound");
  } else if (inputs.oracle) {
    const auto& o = *inputs.oracle;
    if (o.approximate) r.conditional_on.push_back("approximate oracle");
    if (o.outcome.reached) {
      r.oracle_size = o.outcome.size();
      if (inputs.view_run) r.m2 = r.observed_size <= *r.oracle_size;
    } else {
      // Nothing reaches eps_hat, so no teacher can be out-competed.
      r.conditional_on.push_back("oracle unreachable");
      r.m2 = true;
    }
  } else {
    r.incomplete = true;
    r.conditional_on.push_back("missing oracle run");
  }
  return r;
}

void write_bound_csv_header(std::ostream& out) {
  out << "kind,eps,delta_params,error_bound,eps_hat,observed_error,observed_size,oracle_size,m1,m2,conditional_on\n";
}

void write_bound_csv_row(std::ostream& out, const BoundReport& r) {
  std::string deltas;
  for (std::size_t i = 0; i < r.delta_params.size(); ++i) {
    if (i) deltas += ';';
    deltas += format_real(r.delta_params[i]);
  }
  std::string tags;
  for (std::size_t i = 0; i < r.conditional_on.size(); ++i) {
    if (i) tags += ';';
    tags += r.conditional_on[i];
  }
  out << to_string(r.kind) << ',' << format_real(r.eps) << ',' << deltas << ',' << format_real(r.error_bound) << ','
      << format_real(r.eps_hat) << ',' << format_real(r.observed_error) << ',' << r.observed_size << ','
      << (r.oracle_size ? std::to_string(*r.oracle_size) : std::string()) << ',' << (r.m1 ? 1 : 0) << ','
      << (r.m2 ? (*r.m2 ? "1" : "0") : "") << ',' << tags << '\n';
}

}  // namespace rmt
