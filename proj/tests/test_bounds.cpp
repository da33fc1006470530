#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rmt/bounds.hpp"
#include "rmt/errors.hpp"
#include "rmt/rng.hpp"
#include "rmt/scenarios.hpp"

using namespace rmt;

namespace {

BoundParams deltas(double d1, double d2 = 0.0) {
  BoundParams p;
  p.delta1 = d1;
  p.delta2 = d2;
  return p;
}

}  // namespace

TEST_CASE("bound_prior") {
  auto b = bound_prior(0.001, 0.2, 0.2);
  CHECK(b.error_bound == doctest::Approx(0.0015).epsilon(1e-14));
  CHECK(b.eps_hat == doctest::Approx(0.001 * 0.8 / 1.2).epsilon(1e-14));
  CHECK_FALSE(b.vacuous);
  b = bound_prior(0.1, 0.5, 0.0);
  CHECK(b.error_bound == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(b.eps_hat == doctest::Approx(0.05).epsilon(1e-14));
  b = bound_prior(0.03, 0.0, 0.0);
  CHECK(b.error_bound == 0.03);
  CHECK(b.eps_hat == 0.03);
  CHECK_THROWS_AS(bound_prior(0.1, 1.0, 0.0), ParameterError);

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double eps = rng.uniform(1e-4, 0.5), d1 = rng.uniform(0.0, 0.9), d2 = rng.uniform(0.0, 2.0);
    const auto p = bound_prior(eps, d1, d2);
    CHECK(p.eps_hat == doctest::Approx(eps * eps / p.error_bound).epsilon(1e-13));
    const auto q = bound_prior(eps, d1 + 0.05, d2);
    const auto r = bound_prior(eps, d1, d2 + 0.05);
    CHECK(q.error_bound >= p.error_bound);
    CHECK(r.error_bound >= p.error_bound);
    CHECK(q.eps_hat <= p.eps_hat);
    CHECK(r.eps_hat <= p.eps_hat);
  }
}

TEST_CASE("bound_sample") {
  auto b = bound_sample(0.01, 0.001, 1.0, 2.0, 0.5, 0.5, 0.5, 0.5);
  CHECK(b.error_bound == doctest::Approx(0.012).epsilon(1e-14));
  CHECK(b.eps_hat == doctest::Approx(0.002).epsilon(1e-14));

  const double q = 1.0 / 67.0;
  b = bound_sample(0.01, 0.0, 0.0, 5.0, 0.5, q, q, q);
  CHECK(b.error_bound == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(b.eps_hat == doctest::Approx(0.01).epsilon(1e-14));

  b = bound_sample(0.01, 0.01, 0.0, 1.0, 0.5, 0.5, 0.5, 0.5);
  CHECK(b.vacuous);
  CHECK(b.eps_hat == 0.0);

  CHECK_THROWS_AS(bound_sample(0.01, 0.0, 0.0, 1.0, 1.0, 0.5, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(bound_sample(0.01, 0.0, 0.0, 1.0, 0.5, 0.5, 0.5, 0.0), ParameterError);

  const auto base = bound_sample(0.01, 0.001, 0.5, 2.0, 0.4, 0.5, 0.3, 0.4);
  const auto more_d2 = bound_sample(0.01, 0.002, 0.5, 2.0, 0.4, 0.5, 0.3, 0.4);
  const auto more_d3 = bound_sample(0.01, 0.001, 0.9, 2.0, 0.4, 0.5, 0.3, 0.4);
  CHECK(more_d2.error_bound >= base.error_bound);
  CHECK(more_d2.eps_hat <= base.eps_hat);
  CHECK(more_d3.error_bound >= base.error_bound);
  CHECK(more_d3.eps_hat <= base.eps_hat);
}

TEST_CASE("bound_feature") {
  const auto b = bound_feature(0.01, 1.0, 0.0, 2.0, 0.5, 0.5, 0.5, 0.5);
  CHECK(b.error_bound == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(b.eps_hat == doctest::Approx(0.0025).epsilon(1e-14));

  const auto f0 = bound_feature(0.01, 0.0, 0.003, 7.0, 0.6, 0.4, 0.2, 0.3);
  const auto s0 = bound_sample(0.01, 0.003, 0.0, 7.0, 0.6, 0.4, 0.2, 0.3);
  CHECK(f0.error_bound == s0.error_bound);
  CHECK(f0.eps_hat == s0.eps_hat);

  // Blow-up as eta approaches 1, finite for each eta below it.
  double prev = 0.0;
  for (double eta : {0.5, 0.9, 0.99, 0.999}) {
    const double e = bound_feature(0.01, 1.0, 0.0, 2.0, eta, 0.5, 0.5, 0.5).error_bound;
    CHECK(std::isfinite(e));
    CHECK(e > prev);
    prev = e;
  }
  CHECK_THROWS_AS(bound_feature(0.01, 1.0, 0.0, 2.0, 1.0, 0.5, 0.5, 0.5), DomainError);
}

TEST_CASE("rate over-estimation construction") {
  CHECK(rate_over_k(0.01, 0.5, 0.1) == 21);
  CHECK(rate_over_k(0.01, 0.5, 0.1) == static_cast<std::size_t>(std::ceil(std::log(100.0) / std::log(0.5 / 0.4))));
  const double err = rate_over_error(0.01, 0.5, 0.1);
  CHECK(err == doctest::Approx(1.0 / (1.0 + std::pow(0.8, 21) / 0.01)).epsilon(1e-12));
  CHECK(err >= 0.45);
  CHECK(err <= 0.55);

  const auto spec = adversarial_rate_over(0.01, 0.5, 0.1);
  CHECK(spec.num_hypotheses() == 2);
  CHECK(spec.num_examples() == 23);
  CHECK(spec.prior[0] + spec.prior[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spec.prior[1] / spec.prior[0] == doctest::Approx(0.01 / std::pow(0.4, 21)).epsilon(1e-10));
  const auto errs = hypothesis_errors(spec);
  CHECK(errs[0] == 0.0);
  CHECK(errs[1] == 1.0);

  const auto view = perturb_rate(spec, 0.1, RateDirection::Over);
  const auto planned = brute_force_teach(TeachingProblem::over_all(view.spec, 0.01), 23, spec);
  CHECK(planned.size() == 21);
  CHECK(planned.final_error == doctest::Approx(err).epsilon(1e-9));

  const auto report = check_bounds(NoiseKind::Rate, spec, 0.01, deltas(0.1), BoundInputs{planned, std::nullopt});
  CHECK_FALSE(report.m1);
  CHECK(report.incomplete);
  CHECK(report.observed_error == doctest::Approx(0.520).epsilon(1e-3));

  CHECK_THROWS_AS(rate_over_k(0.01, 0.5, 0.5), ParameterError);
  CHECK_THROWS_AS(rate_over_k(0.01, 0.5, 1e-6), ParameterError);  // k beyond the cap
  CHECK_THROWS_AS(adversarial_rate_over(0.01, 0.5, 0.0), ParameterError);
}

TEST_CASE("rate under-estimation construction") {
  // ceil(ln 100 / ln 1.2) = 26.
  const std::size_t k = rate_under_k(0.1, 0.001, 0.5, 0.1);
  CHECK(k == static_cast<std::size_t>(std::ceil(std::log(100.0) / std::log(0.6 / 0.5))));
  CHECK(k == 26);

  const auto spec = adversarial_rate_under(0.1, 0.001, 0.5, 0.1);
  const auto oracle = brute_force_teach(TeachingProblem::over_all(spec, 0.001), spec.num_examples());
  CHECK(oracle.reached);
  CHECK(oracle.size() == k);
  const auto view = perturb_rate(spec, 0.1, RateDirection::Under);
  const auto planned = brute_force_teach(TeachingProblem::over_all(view.spec, 0.1), spec.num_examples(), spec);
  CHECK(planned.size() == k);

  CHECK_THROWS_AS(rate_under_k(0.1, 0.2, 0.5, 0.1), ParameterError);
  CHECK_THROWS_AS(rate_under_k(0.1, 0.001, 0.05, 0.1), ParameterError);
}

TEST_CASE("brute-force sizes equal k across a small grid") {
  for (double eps : {0.05, 0.1, 0.2})
    for (double eta : {0.3, 0.5, 0.7})
      for (double delta : {0.15, 0.2}) {
        if (eta + delta >= 1.0) continue;
        const std::size_t k = rate_over_k(eps, eta, delta);
        if (k > 24) continue;
        const auto spec = adversarial_rate_over(eps, eta, delta);
        const auto view = perturb_rate(spec, delta, RateDirection::Over);
        CHECK(brute_force_teach(TeachingProblem::over_all(view.spec, eps), spec.num_examples()).size() == k);
      }
}

TEST_CASE("check_bounds") {
  ScenarioConfig c;
  c.n_examples = 20;
  c.n_hypotheses = 6;
  c.eta = 0.9;
  c.seed = 5;
  const auto truth = generate(c);
  const double eps = 0.01;
  const auto p = TeachingProblem::over_all(truth, eps);
  const auto opt = run_oracle(p);
  CHECK_FALSE(opt.approximate);
  REQUIRE(opt.outcome.reached);

  SUBCASE("zero noise satisfies both sides for every kind") {
    for (auto kind : {NoiseKind::Prior, NoiseKind::Rate, NoiseKind::Sample, NoiseKind::Feature}) {
      const auto r = check_bounds(kind, truth, eps, BoundParams{}, BoundInputs{opt.outcome, opt});
      if (kind == NoiseKind::Prior || kind == NoiseKind::Rate) {
        CHECK(r.error_bound == eps);
        CHECK(r.eps_hat == eps);
      } else {
        // Sample and feature bounds scale by Qmax/Q0(h*) and Qmin/Q0(h*).
        CHECK(r.error_bound >= eps);
      }
      CHECK(r.m1);
      REQUIRE(r.m2);
      CHECK(*r.m2);
      CHECK_FALSE(r.incomplete);
    }
  }

  SUBCASE("missing runs mark the report incomplete") {
    const auto r = check_bounds(NoiseKind::Prior, truth, eps, deltas(0.1, 0.1), BoundInputs{});
    CHECK(r.incomplete);
    CHECK_FALSE(r.m2);
    CHECK(std::isnan(r.observed_error));
  }

  SUBCASE("vacuous M.2 side") {
    BoundParams bp;
    bp.delta2 = 1.0;
    const auto r = check_bounds(NoiseKind::Sample, truth, eps, bp, BoundInputs{opt.outcome, opt});
    CHECK_FALSE(r.m2);
    CHECK(std::ranges::find(r.conditional_on, "vacuous M.2 bound") != r.conditional_on.end());
  }

  SUBCASE("csv row") {
    const auto r = check_bounds(NoiseKind::Prior, truth, eps, deltas(0.2, 0.2), BoundInputs{opt.outcome, opt});
    std::ostringstream out;
    write_bound_csv_header(out);
    write_bound_csv_row(out, r);
    const std::string s = out.str();
    CHECK(s.starts_with("kind,eps,delta_params,error_bound,eps_hat,observed_error,observed_size,oracle_size,m1,m2,"
                        "conditional_on\nprior,0.01,0.20000000000000001;0.20000000000000001,"));
    CHECK(s.find(",0.20000000000000001;0.20000000000000001,") != std::string::npos);
  }
}
