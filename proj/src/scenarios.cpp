#include "rmt/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"
#include "rmt/teacher.hpp"

namespace rmt {

namespace {

constexpr int kMaxAttempts = 100;
constexpr std::size_t kExtremeMainHypotheses = 6;

using Pattern = std::vector<std::int8_t>;

Pattern pattern_of(const FeatureVector& w, const std::vector<LabeledExample>& examples) {
  Pattern p(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) p[i] = static_cast<std::int8_t>(to_int(predict(w, examples[i].x())));
  return p;
}

std::size_t mistakes(const Pattern& p, const std::vector<LabeledExample>& examples) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < p.size(); ++i) m += p[i] != to_int(examples[i].label) ? 1 : 0;
  return m;
}

/// Hypothesis weights plus the set of patterns already taken.
struct HypothesisPool {
  std::vector<FeatureVector> weights;
  std::set<Pattern> seen;

  bool add(const FeatureVector& w, const std::vector<LabeledExample>& examples) {
    if (!seen.insert(pattern_of(w, examples)).second) return false;
    weights.push_back(w);
    return true;
  }
};

FeatureVector uniform_in_ball(Rng& rng, std::size_t d, double radius) {
  auto v = rng.unit_direction(d);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  for (auto& c : v) c *= r;
  return v;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const FeatureVector& a) { return std::sqrt(dot(a, a)); }

std::vector<LabeledExample> label_points(const std::vector<FeatureVector>& points, const FeatureVector& target) {
  std::vector<LabeledExample> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out.push_back(LabeledExample{Instance{i, points[i]}, predict(target, points[i])});
  return out;
}

/// Adds random through-origin classifiers until `pool` holds `count` entries.
bool fill_random_directions(HypothesisPool& pool, std::size_t count, const std::vector<LabeledExample>& examples,
                            std::size_t d, double min_error, Rng& rng) {
  const auto n = static_cast<double>(examples.size());
  const std::size_t max_draws = 500 * count + 1000;
  for (std::size_t draw = 0; draw < max_draws && pool.weights.size() < count; ++draw) {
    const auto w = rng.unit_direction(d);
    if (static_cast<double>(mistakes(pattern_of(w, examples), examples)) < min_error * n) continue;
    pool.add(w, examples);
  }
  return pool.weights.size() == count;
}

/// Places the target at a random position and assigns ids by position.
TaskSpec assemble(const ScenarioConfig& cfg, std::vector<LabeledExample> examples, const FeatureVector& target,
                  std::vector<FeatureVector> others, Rng& rng) {
  TaskSpec spec;
  spec.examples = std::move(examples);
  spec.rate = cfg.eta;
  const std::size_t target_pos = rng.index(others.size() + 1);
  others.insert(others.begin() + static_cast<std::ptrdiff_t>(target_pos), target);
  for (std::size_t h = 0; h < others.size(); ++h) spec.hypotheses.push_back(Hypothesis{h, std::move(others[h])});
  spec.target_id = target_pos;
  if (cfg.prior.empty())
    spec.prior.assign(spec.hypotheses.size(), 1.0 / static_cast<double>(spec.hypotheses.size()));
  else
    spec.prior = cfg.prior;
  return spec;
}

std::optional<TaskSpec> well_behaved(const ScenarioConfig& cfg, Rng& rng) {
  constexpr double kSpread = 4.5;  // points are kept inside this ball
  const auto target = rng.unit_direction(cfg.d);
  const double min_margin = cfg.margin_fraction * kSpread;
  std::vector<FeatureVector> points;
  for (std::size_t tries = 0; points.size() < cfg.n_examples; ++tries) {
    if (tries > 1000 * cfg.n_examples) return std::nullopt;
    const double side = points.size() % 2 == 0 ? 2.0 : -2.0;
    FeatureVector x(cfg.d);
    for (std::size_t i = 0; i < cfg.d; ++i) x[i] = side * target[i] + rng.normal();
    if (norm(x) > kSpread || std::abs(dot(x, target)) < min_margin) continue;
    points.push_back(std::move(x));
  }
  auto examples = label_points(points, target);
  HypothesisPool pool;
  pool.seen.insert(pattern_of(target, examples));
  if (!fill_random_directions(pool, cfg.n_hypotheses - 1, examples, cfg.d, cfg.min_hypothesis_error, rng))
    return std::nullopt;
  return assemble(cfg, std::move(examples), target, std::move(pool.weights), rng);
}

std::optional<TaskSpec> skewed(const ScenarioConfig& cfg, Rng& rng) {
  constexpr double kRadius = 4.0;
  constexpr double kBlobFraction = 0.7;
  constexpr double kBlobRadius = 0.05 * kRadius;
  const auto target = rng.unit_direction(cfg.d);
  const auto n_blob = static_cast<std::size_t>(std::lround(kBlobFraction * static_cast<double>(cfg.n_examples)));
  std::vector<FeatureVector> points;
  for (std::size_t i = 0; i < cfg.n_examples; ++i)
    points.push_back(uniform_in_ball(rng, cfg.d, i < n_blob ? kBlobRadius : kRadius));
  auto examples = label_points(points, target);
  HypothesisPool pool;
  pool.seen.insert(pattern_of(target, examples));
  if (!fill_random_directions(pool, cfg.n_hypotheses - 1, examples, cfg.d, cfg.min_hypothesis_error, rng))
    return std::nullopt;
  return assemble(cfg, std::move(examples), target, std::move(pool.weights), rng);
}

/// Affine classifier on (x, y, 1) predicting -1 exactly where <v, p> > c.
FeatureVector cut_above(double vx, double vy, double c) { return {-vx, -vy, c}; }

std::optional<TaskSpec> extreme_points(const ScenarioConfig& cfg, Rng& rng) {
  const std::size_t n_cluster = cfg.n_examples - 2;
  std::vector<FeatureVector> points;
  // Each cluster puts its first few points on the arc of its disk that faces
  // the extremes; those are the points a single cut can isolate.
  constexpr std::size_t kArcPoints = 4;
  constexpr double kDeg = std::numbers::pi / 180.0;
  std::size_t on_arc[2] = {0, 0};
  for (std::size_t i = 0; i < n_cluster; ++i) {
    const std::size_t side = i % 2;
    const double cy = side == 0 ? 1.5 : -1.5;
    double r = 0.45 * std::sqrt(rng.uniform());
    double a = 2.0 * std::numbers::pi * rng.uniform();
    if (on_arc[side] < kArcPoints) {
      const double step = 35.0 / static_cast<double>(kArcPoints - 1);
      const double deg = 10.0 + step * static_cast<double>(on_arc[side]) + rng.uniform(-2.0, 2.0);
      a = (side == 0 ? deg : -deg) * kDeg;
      r = 0.5;
      ++on_arc[side];
    }
    points.push_back({r * std::cos(a), cy + r * std::sin(a), 1.0});
  }
  points.push_back({3.0, 0.3, 1.0});
  points.push_back({3.0, -0.3, 1.0});
  const FeatureVector target{1.0, 0.0, 2.0};
  auto examples = label_points(points, target);

  HypothesisPool pool;
  pool.seen.insert(pattern_of(target, examples));
  const auto proj = [&](double vx, double vy, std::size_t i) { return vx * points[i][0] + vy * points[i][1]; };
  constexpr double kGap = 1e-6;

  // Main hypotheses: negative on both extremes and on exactly one cluster
  // point, a different one each time.
  std::set<std::size_t> tops;
  for (int t = 0; t < 20000 && tops.size() < kExtremeMainHypotheses; ++t) {
    const double th = rng.uniform(-0.9, 0.9);
    const double vx = std::cos(th), vy = std::sin(th);
    std::size_t top = 0;
    double p1 = -1e300, p2 = -1e300;
    for (std::size_t i = 0; i < n_cluster; ++i) {
      const double p = proj(vx, vy, i);
      if (p > p1) {
        p2 = p1;
        p1 = p;
        top = i;
      } else if (p > p2) {
        p2 = p;
      }
    }
    const double e_min = std::min(proj(vx, vy, n_cluster), proj(vx, vy, n_cluster + 1));
    const double hi = std::min(p1, e_min);
    if (hi <= p2 + kGap || tops.contains(top)) continue;
    if (pool.add(cut_above(vx, vy, 0.5 * (p2 + hi)), examples)) tops.insert(top);
  }
  if (tops.size() < kExtremeMainHypotheses) return std::nullopt;

  // One hypothesis per extreme that is negative on that extreme only (plus
  // some cluster points), so neither extreme alone suffices.
  for (int side = 0; side < 2; ++side) {
    bool found = false;
    for (int t = 0; t < 20000 && !found; ++t) {
      const double th = (side == 0 ? 1.0 : -1.0) * rng.uniform(0.2, 1.5);
      const double vx = std::cos(th), vy = std::sin(th);
      const double mine = proj(vx, vy, n_cluster + side);
      const double other = proj(vx, vy, n_cluster + 1 - side);
      const double c = rng.uniform(other, mine);
      if (!(c > other + kGap && c < mine - kGap)) continue;
      bool hits_cluster = false;
      for (std::size_t i = 0; i < n_cluster; ++i) hits_cluster = hits_cluster || proj(vx, vy, i) > c;
      if (hits_cluster) found = pool.add(cut_above(vx, vy, c), examples);
    }
    if (!found) return std::nullopt;
  }

  // Fillers: negative on at least one extreme and one cluster point.
  for (int t = 0; t < 200000 && pool.weights.size() + 1 < cfg.n_hypotheses; ++t) {
    const double th = rng.uniform(-1.5, 1.5);
    const double vx = std::cos(th), vy = std::sin(th);
    const double e_max = std::max(proj(vx, vy, n_cluster), proj(vx, vy, n_cluster + 1));
    const double c = rng.uniform(-2.5, e_max);
    bool hits_cluster = false;
    for (std::size_t i = 0; i < n_cluster; ++i) hits_cluster = hits_cluster || proj(vx, vy, i) > c;
    if (hits_cluster && e_max > c + kGap) pool.add(cut_above(vx, vy, c), examples);
  }
  if (pool.weights.size() + 1 < cfg.n_hypotheses) return std::nullopt;

  TaskSpec spec = assemble(cfg, std::move(examples), target, std::move(pool.weights), rng);
  if (!certify_extreme_points(spec).passed) return std::nullopt;
  return spec;
}

void check_config(const ScenarioConfig& cfg) {
  if (cfg.n_examples < 2) throw ParameterError("n_examples must be >= 2");
  if (cfg.n_hypotheses < 2) throw ParameterError("n_hypotheses must be >= 2");
  if (cfg.d < 1) throw ParameterError("d must be >= 1");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) throw ParameterError("eta must lie in (0, 1]");
  if (!cfg.prior.empty() && cfg.prior.size() != cfg.n_hypotheses)
    throw ParameterError("explicit prior must have n_hypotheses entries");
  if (cfg.margin_fraction < 0.0 || cfg.min_hypothesis_error < 0.0 || cfg.min_hypothesis_error > 1.0)
    throw ParameterError("margin_fraction and min_hypothesis_error must be non-negative fractions");
  if (cfg.regime == Regime::ExtremePoints) {
    if (cfg.n_examples < 8 || cfg.n_examples > kBruteForceMaxPool)
      throw ParameterError("extreme_points needs 8 <= n_examples <= " + std::to_string(kBruteForceMaxPool));
    if (cfg.n_hypotheses < kExtremeMainHypotheses + 3)
      throw ParameterError("extreme_points needs at least 9 hypotheses");
  }
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::WellBehaved: return "well_behaved";
    case Regime::Skewed: return "skewed";
    case Regime::ExtremePoints: return "extreme_points";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "well_behaved") return Regime::WellBehaved;
  if (name == "skewed") return Regime::Skewed;
  if (name == "extreme_points") return Regime::ExtremePoints;
  throw ParameterError("unknown regime '" + name + "'");
}

TaskSpec generate(const ScenarioConfig& config) {
  check_config(config);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(attempt)}));
    std::optional<TaskSpec> spec;
    switch (config.regime) {
      case Regime::WellBehaved: spec = well_behaved(config, rng); break;
      case Regime::Skewed: spec = skewed(config, rng); break;
      case Regime::ExtremePoints: spec = extreme_points(config, rng); break;
    }
    if (spec && is_realizable(*spec)) {
      validate(*spec, ValidationOptions{true, true, true});
      return *spec;
    }
  }
  throw GenerationError("no valid " + to_string(config.regime) + " spec after " + std::to_string(kMaxAttempts) +
                        " attempts");
}

double data_radius(const TaskSpec& spec) {
  if (spec.examples.empty()) throw ParameterError("data radius of an empty example set");
  double r = 0.0;
  for (const auto& z : spec.examples) r = std::max(r, norm(z.x()));
  return r;
}

ExtremeCertificate certify_extreme_points(const TaskSpec& spec) {
  TaskSpec hard = spec;
  hard.rate = 1.0;
  ExtremeCertificate cert;
  auto full = TeachingProblem::over_all(hard, 0.0);
  const auto with = brute_force_teach(full, full.pool.size());
  cert.with_extremes = with.reached ? with.size() : 0;
  auto inner = full;
  inner.pool.resize(inner.pool.size() - 2);
  const auto without = brute_force_teach(inner, inner.pool.size());
  cert.without_extremes = without.reached ? without.size() : 0;
  cert.passed = cert.with_extremes == 2 && cert.without_extremes >= kExtremeMainHypotheses;
  return cert;
}

}  // namespace rmt
