#include "rmt/imperfect.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/errors.hpp"
#include "rmt/kernels.hpp"
#include "rmt/rng.hpp"

namespace rmt {

namespace {

double distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) throw ContractViolation("feature dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Kuhn's augmenting-path matching of the left side into the right side.
class Matcher {
 public:
  explicit Matcher(std::vector<std::vector<std::size_t>> adj, std::size_t right)
      : adj_(std::move(adj)), match_right_(right, kNone) {}

  /// Assignment left -> right if every left vertex can be matched.
  std::optional<std::vector<std::size_t>> perfect() {
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      visited_.assign(match_right_.size(), 0);
      if (!augment(u)) return std::nullopt;
    }
    std::vector<std::size_t> assign(adj_.size(), kNone);
    for (std::size_t v = 0; v < match_right_.size(); ++v)
      if (match_right_[v] != kNone) assign[match_right_[v]] = v;
    return assign;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      if (visited_[v]) continue;
      visited_[v] = 1;
      if (match_right_[v] == kNone || augment(match_right_[v])) {
        match_right_[v] = u;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_right_;
  std::vector<std::uint8_t> visited_;
};

std::vector<std::vector<double>> pair_distances(std::span<const LabeledExample> s,
                                                std::span<const LabeledExample> pool) {
  std::vector<std::vector<double>> d(s.size(), std::vector<double>(pool.size(), -1.0));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (s[i].label == pool[j].label) d[i][j] = distance(s[i].x(), pool[j].x());
  return d;
}

std::optional<std::vector<std::size_t>> match_with(const std::vector<std::vector<double>>& d, std::size_t right,
                                                   double delta) {
  std::vector<std::vector<std::size_t>> adj(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < right; ++j)
      if (d[i][j] >= 0.0 && d[i][j] <= delta) adj[i].push_back(j);
  return Matcher(std::move(adj), right).perfect();
}

TeacherView view_of(const TaskSpec& truth, PerturbationSpec provenance, std::uint64_t seed) {
  return TeacherView{truth, provenance, seed};
}

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Prior: return "prior";
    case NoiseKind::Rate: return "rate";
    case NoiseKind::Sample: return "sample";
    case NoiseKind::Feature: return "feature";
  }
  return "unknown";
}

TeacherView perturb_prior(const TaskSpec& truth, double delta1, double delta2, std::uint64_t seed) {
  if (!(delta1 >= 0.0) || delta1 >= 1.0) throw ParameterError("prior perturbation needs 0 <= delta1 < 1");
  if (!(delta2 >= 0.0)) throw ParameterError("prior perturbation needs delta2 >= 0");
  PerturbationSpec p;
  p.kind = NoiseKind::Prior;
  p.delta1 = delta1;
  p.delta2 = delta2;
  TeacherView view = view_of(truth, p, seed);
  Rng rng(seed);
  for (double& q : view.spec.prior) q *= rng.uniform(1.0 - delta1, 1.0 + delta2);
  return view;
}

TeacherView perturb_rate(const TaskSpec& truth, double delta, RateDirection direction) {
  if (!(delta >= 0.0)) throw ParameterError("rate perturbation needs delta >= 0");
  PerturbationSpec p;
  p.kind = NoiseKind::Rate;
  p.delta1 = delta;
  p.direction = direction;
  TeacherView view = view_of(truth, p, 0);
  view.spec.rate = direction == RateDirection::Over ? std::min(truth.rate + delta, 1.0)
                                                    : std::max(truth.rate - delta, kMinRate);
  return view;
}

TeacherView sample_Z(const TaskSpec& truth, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ParameterError("sample fraction must lie in (0, 1]");
  PerturbationSpec p;
  p.kind = NoiseKind::Sample;
  p.fraction = fraction;
  TeacherView view = view_of(truth, p, seed);
  const std::size_t n = truth.examples.size();
  // The small allowance keeps products like 0.9 * 160 = 144.00000000000003 at 144.
  const auto keep = std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  Rng rng(seed);
  auto rows = rng.sample_without_replacement(n, keep);
  std::ranges::sort(rows);
  view.spec.examples.clear();
  for (std::size_t r : rows) view.spec.examples.push_back(truth.examples[r]);
  view.spec.target_id = select_target(view.spec);
  return view;
}

TeacherView perturb_phi(const TaskSpec& truth, double delta1, std::uint64_t seed) {
  if (!(delta1 >= 0.0)) throw ParameterError("feature perturbation needs delta1 >= 0");
  PerturbationSpec p;
  p.kind = NoiseKind::Feature;
  p.delta1 = delta1;
  TeacherView view = view_of(truth, p, seed);
  Rng rng(seed);
  for (auto& z : view.spec.examples) {
    const auto v = rng.unit_direction(z.instance.features.size());
    for (std::size_t i = 0; i < v.size(); ++i) z.instance.features[i] += delta1 * v[i];
  }
  view.spec.target_id = select_target(view.spec);
  return view;
}

bool verify_prior(const TaskSpec& truth, const TeacherView& view, double delta1, double delta2) {
  if (truth.prior.size() != view.spec.prior.size()) return false;
  for (std::size_t h = 0; h < truth.prior.size(); ++h) {
    const double q = truth.prior[h];
    const double qt = view.spec.prior[h];
    const double slack = 1e-15 * q;
    if (qt < (1.0 - delta1) * q - slack || qt > (1.0 + delta2) * q + slack) return false;
  }
  return true;
}

std::size_t select_target(const TaskSpec& spec) {
  const auto errs = hypothesis_errors(spec);
  std::size_t best = 0;
  for (std::size_t h = 1; h < errs.size(); ++h)
    if (errs[h] < errs[best]) best = h;
  return best;
}

bool check_delta_perturbed(std::span<const LabeledExample> s, std::span<const LabeledExample> s_prime, double delta) {
  if (s.size() != s_prime.size()) return false;
  return match_into(s, s_prime, delta).has_value();
}

std::optional<std::vector<std::size_t>> match_into(std::span<const LabeledExample> s,
                                                   std::span<const LabeledExample> pool, double delta) {
  if (s.size() > pool.size()) return std::nullopt;
  return match_with(pair_distances(s, pool), pool.size(), delta);
}

std::optional<double> bottleneck_distance(std::span<const LabeledExample> s, std::span<const LabeledExample> pool) {
  if (s.empty()) return 0.0;
  if (s.size() > pool.size()) return std::nullopt;
  const auto d = pair_distances(s, pool);
  std::vector<double> levels;
  for (const auto& row : d)
    for (double x : row)
      if (x >= 0.0) levels.push_back(x);
  std::ranges::sort(levels);
  const auto [first, last] = std::ranges::unique(levels);
  levels.erase(first, last);
  if (levels.empty() || !match_with(d, pool.size(), levels.back())) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (match_with(d, pool.size(), levels[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return levels[lo];
}

double measure_err_gap(const TaskSpec& truth, const TeacherView& view) {
  const auto err = hypothesis_errors(truth);
  const auto err_view = hypothesis_errors(view.spec);
  if (err.size() != err_view.size()) throw ContractViolation("view and truth disagree on |H|");
  double gap = 0.0;
  for (std::size_t h = 0; h < err.size(); ++h) gap = std::max(gap, std::abs(err_view[h] - err[h]));
  return gap;
}

double estimate_lambda(const TaskSpec& spec, double delta, std::size_t trials, std::uint64_t seed) {
  if (!(delta > 0.0)) throw ParameterError("lambda estimation needs delta > 0");
  if (trials == 0) throw ParameterError("lambda estimation needs at least one trial");
  const auto flips = kernels::parallel::max_label_flips(spec, delta, trials, seed);
  return static_cast<double>(flips) / delta;
}

std::size_t max_prediction_flips(const TaskSpec& truth, const TeacherView& view) {
  std::size_t worst = 0;
  for (const auto& h : truth.hypotheses) {
    std::size_t flips = 0;
    for (const auto& zv : view.spec.examples) {
      const auto& z = truth.examples.at(index_of_example(truth, zv.id()));
      if (predict(h.weights, z.x()) != predict(h.weights, zv.x())) ++flips;
    }
    worst = std::max(worst, flips);
  }
  return worst;
}

bool certify_sample_view(const TaskSpec& truth, const TeacherView& view, double delta3,
                         std::span<const std::vector<std::size_t>> probes) {
  for (const auto& probe : probes) {
    if (probe.size() > view.spec.examples.size())
      throw ParameterError("probe set larger than the teacher's sample");
    std::vector<LabeledExample> s;
    s.reserve(probe.size());
    for (std::size_t id : probe) s.push_back(truth.examples.at(index_of_example(truth, id)));
    if (!match_into(s, view.spec.examples, delta3)) return false;
  }
  return true;
}

}  // namespace rmt
