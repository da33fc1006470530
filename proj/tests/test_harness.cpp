#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/harness.hpp"

using namespace rmt;

namespace {

SweepConfig small_config(SweepKind kind, std::vector<double> grid, std::size_t runs = 3) {
  SweepConfig c;
  c.scenario.n_examples = 40;
  c.scenario.n_hypotheses = 10;
  c.scenario.seed = 21;
  c.epsilon = 0.01;
  c.kind = kind;
  c.delta_grid = std::move(grid);
  c.runs = runs;
  c.seed = 5;
  return c;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

SweepRow row(double delta, std::size_t run, const std::string& teacher, double error, std::size_t size) {
  SweepRow r;
  r.delta = delta;
  r.run = run;
  r.teacher = teacher;
  r.error = error;
  r.set_size = size;
  return r;
}

}  // namespace

TEST_CASE("sweep kind names") {
  for (auto k : {SweepKind::Prior, SweepKind::RateOver, SweepKind::RateUnder, SweepKind::Sample, SweepKind::Feature})
    CHECK(sweep_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(sweep_kind_from_string("phi"), ParameterError);
  CHECK(baseline_multiplier("Rnd:1.5") == 1.5);
  CHECK_THROWS_AS(baseline_multiplier("Opt"), ParameterError);
}

TEST_CASE("config validation") {
  auto c = small_config(SweepKind::Prior, {0.0, 0.2});
  CHECK_NOTHROW(validate(c));
  c.runs = 0;
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Prior, {});
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Prior, {0.2, 0.1});
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Prior, {-0.1});
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Prior, {1.0});
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Sample, {1.0});
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = small_config(SweepKind::Prior, {0.0});
  c.epsilon = -1.0;
  CHECK_THROWS_AS(validate(c), ParameterError);
}

TEST_CASE("prior sweep: row count, ordering and baseline sizing") {
  const auto c = small_config(SweepKind::Prior, {0.0, 0.2, 0.4, 0.6, 0.8}, 10);
  const auto rows = run_sweep(c);
  CHECK(rows.size() == 5 * 10 * 5);

  std::map<std::pair<double, std::size_t>, std::size_t> opt_size;
  for (const auto& r : rows)
    if (r.teacher == "Opt") opt_size[{r.delta, r.run}] = r.set_size;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) {
      const auto& p = rows[i - 1];
      CHECK(std::tie(p.delta, p.run, p.teacher) < std::tie(r.delta, r.run, r.teacher));
    }
    if (r.teacher == "Opt") {
      CHECK(r.reached);
      CHECK(r.error <= c.epsilon + 1e-12);
    }
    if (r.teacher.starts_with("Rnd:")) {
      const double x = baseline_multiplier(r.teacher);
      CHECK(r.set_size == static_cast<std::size_t>(std::lround(x * static_cast<double>(opt_size.at({r.delta, r.run})))));
    }
    if (r.teacher == "OptTilde") {
      REQUIRE(r.error_bound);
      REQUIRE(r.m1);
      CHECK(*r.m1);
      CHECK(r.error <= *r.error_bound + 1e-12);
    }
  }
}

TEST_CASE("zero noise makes OptTilde identical to Opt") {
  for (auto kind : {SweepKind::Prior, SweepKind::RateOver, SweepKind::RateUnder, SweepKind::Sample, SweepKind::Feature}) {
    CAPTURE(to_string(kind));
    const auto rows = run_sweep(small_config(kind, {0.0}, 2));
    CHECK(rows.size() == 2 * 5);
    for (std::size_t run = 0; run < 2; ++run) {
      const SweepRow* opt = nullptr;
      const SweepRow* tilde = nullptr;
      for (const auto& r : rows) {
        if (r.run != run) continue;
        if (r.teacher == "Opt") opt = &r;
        if (r.teacher == "OptTilde") tilde = &r;
      }
      REQUIRE(opt);
      REQUIRE(tilde);
      CHECK(opt->set_size == tilde->set_size);
      CHECK(opt->error == tilde->error);
      CHECK(opt->reached == tilde->reached);
    }
  }
}

TEST_CASE("sweeps are deterministic and thread-order independent") {
  for (auto kind : {SweepKind::Sample, SweepKind::Feature, SweepKind::RateUnder}) {
    const auto c = small_config(kind, {0.0, 0.05, 0.1}, 3);
    const std::string a = csv_of(run_sweep(c));
    const std::string b = csv_of(run_sweep(c));
    CHECK(a == b);
    CHECK(a.starts_with("kind,delta,run,teacher,set_size,error,reached,error_bound,eps_hat,oracle_size,m1,m2,"
                        "conditional_on\n"));
    auto other = c;
    other.seed = 6;
    CHECK(csv_of(run_sweep(other)) != a);
  }
}

TEST_CASE("conditional bounds are tagged") {
  const auto rows = run_sweep(small_config(SweepKind::Sample, {0.2}, 2));
  for (const auto& r : rows) {
    if (r.teacher != "OptTilde") continue;
    CHECK(std::ranges::find(r.conditional_on, "empirical lambda-hat") != r.conditional_on.end());
  }
  const auto rate = run_sweep(small_config(SweepKind::RateOver, {0.2}, 1));
  for (const auto& r : rate)
    if (r.teacher == "OptTilde")
      CHECK(std::ranges::find(r.conditional_on, "no closed-form guarantee") != r.conditional_on.end());
}

TEST_CASE("rate over-estimation error grows with delta") {
  auto c = small_config(SweepKind::RateOver, {0.0, 0.2, 0.4}, 10);
  c.scenario.n_examples = 80;
  c.scenario.n_hypotheses = 30;
  const auto summary = summarize(run_sweep(c));
  std::vector<double> means;
  for (const auto& s : summary)
    if (s.teacher == "OptTilde") means.push_back(s.error_mean);
  REQUIRE(means.size() == 3);
  MESSAGE("OptTilde mean error " << means[0] << " " << means[1] << " " << means[2]);
  CHECK(means[0] <= means[1]);
  CHECK(means[1] <= means[2]);
}

TEST_CASE("summarize") {
  std::vector<SweepRow> rows{row(0.1, 0, "Opt", 0.1, 4), row(0.1, 1, "Opt", 0.2, 5), row(0.1, 2, "Opt", 0.3, 6),
                             row(0.1, 0, "Rnd:1", 0.4, 2)};
  rows[0].error_bound = 1.0;
  rows[1].error_bound = 2.0;
  const auto s = summarize(rows);
  REQUIRE(s.size() == 2);
  CHECK(s[0].teacher == "Opt");
  CHECK(s[0].runs == 3);
  CHECK(s[0].error_mean == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(s[0].error_std == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(s[0].size_mean == 5.0);
  CHECK(s[0].size_std == 1.0);
  CHECK(s[0].bound_mean == 1.5);
  CHECK(s[1].error_mean == 0.4);
  CHECK(s[1].error_std == 0.0);
  CHECK(std::isnan(s[1].bound_mean));

  std::vector<SweepRow> same(10, row(0.0, 0, "OptTilde", 0.25, 3));
  for (std::size_t i = 0; i < same.size(); ++i) same[i].run = i;
  const auto t = summarize(same);
  CHECK(t[0].error_std == 0.0);
  CHECK(t[0].size_std == 0.0);

  std::vector<SweepRow> with_nan{row(0.0, 0, "OptTilde", 0.5, 3), row(0.0, 1, "OptTilde", NAN, 3)};
  CHECK(summarize(with_nan)[0].error_mean == 0.5);

  std::ostringstream out;
  write_summary_csv(out, s);
  CHECK(out.str().starts_with("kind,delta,teacher,runs,error_mean,error_std,size_mean,size_std,bound_mean\n"));
}
