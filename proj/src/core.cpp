#include "rmt/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "rmt/errors.hpp"

namespace rmt {

Label label_from_int(int y) {
  if (y == 1) return Label::Positive;
  if (y == -1) return Label::Negative;
  throw ParameterError("label must be -1 or +1, got " + std::to_string(y));
}

std::size_t TaskSpec::dim() const {
  if (!hypotheses.empty()) return hypotheses.front().weights.size();
  if (!examples.empty()) return examples.front().x().size();
  return 0;
}

namespace {

void check_rate(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("learning rate must lie in (0, 1], got " + std::to_string(eta));
}

bool all_finite(const FeatureVector& v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

}  // namespace

void validate(const TaskSpec& spec, const ValidationOptions& opts) {
  const std::size_t d = spec.dim();
  if (d == 0) throw ContractViolation("feature dimension must be at least 1");
  if (spec.hypotheses.empty()) throw ContractViolation("hypothesis class is empty");
  if (spec.examples.empty()) throw ContractViolation("example set is empty");
  check_rate(spec.rate);

  for (std::size_t i = 0; i < spec.hypotheses.size(); ++i) {
    const auto& h = spec.hypotheses[i];
    if (h.id != i) throw ContractViolation("hypothesis ids must be contiguous from 0");
    if (h.weights.size() != d) throw ContractViolation("hypothesis weight dimension mismatch");
    if (!all_finite(h.weights)) throw ContractViolation("hypothesis weights must be finite");
  }
  if (spec.target_id >= spec.hypotheses.size()) throw ContractViolation("target id out of range");

  std::unordered_set<std::size_t> seen;
  for (std::size_t i = 0; i < spec.examples.size(); ++i) {
    const auto& z = spec.examples[i];
    if (z.x().size() != d) throw ContractViolation("example feature dimension mismatch");
    if (!all_finite(z.x())) throw ContractViolation("example features must be finite");
    if (opts.require_contiguous_ids && z.id() != i) throw ContractViolation("example ids must be contiguous from 0");
    if (!seen.insert(z.id()).second) throw ContractViolation("duplicate example id");
  }

  if (spec.prior.size() != spec.hypotheses.size()) throw ContractViolation("prior size must equal |H|");
  double total = 0.0;
  for (double q : spec.prior) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw ParameterError("prior entries must be finite and non-negative");
    total += q;
  }
  if (opts.require_normalized_prior && std::abs(total - 1.0) > 1e-12)
    throw ParameterError("prior must sum to 1 (within 1e-12)");
  if (opts.require_realizable && !is_realizable(spec)) throw ContractViolation("target hypothesis is not consistent with Z");
}

std::size_t index_of_example(const TaskSpec& spec, std::size_t id) {
  if (id < spec.examples.size() && spec.examples[id].id() == id) return id;
  for (std::size_t i = 0; i < spec.examples.size(); ++i)
    if (spec.examples[i].id() == id) return i;
  throw ContractViolation("example id " + std::to_string(id) + " not present");
}

Label predict(std::span<const double> weights, std::span<const double> features) {
  if (weights.size() != features.size())
    throw ContractViolation("dimension mismatch: weights " + std::to_string(weights.size()) + " vs features " +
                            std::to_string(features.size()));
  double dot = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) dot += weights[i] * features[i];
  return dot >= 0.0 ? Label::Positive : Label::Negative;
}

Label predict(const Hypothesis& h, const Instance& x) { return predict(h.weights, x.features); }

double likelihood(Label y, const Hypothesis& h, const Instance& x, double eta) {
  check_rate(eta);
  return predict(h, x) != y ? 1.0 - eta : 1.0;
}

double hypothesis_error(const Hypothesis& h, std::span<const LabeledExample> examples) {
  if (examples.empty()) throw ParameterError("error over an empty example set is undefined");
  std::size_t wrong = 0;
  for (const auto& z : examples)
    if (predict(h, z.instance) != z.label) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(examples.size());
}

std::vector<double> hypothesis_errors(const TaskSpec& spec) {
  std::vector<double> errs;
  errs.reserve(spec.hypotheses.size());
  for (const auto& h : spec.hypotheses) errs.push_back(hypothesis_error(h, spec.examples));
  return errs;
}

bool is_realizable(const TaskSpec& spec) {
  const auto& target = spec.hypotheses.at(spec.target_id);
  return std::all_of(spec.examples.begin(), spec.examples.end(),
                     [&](const LabeledExample& z) { return predict(target, z.instance) == z.label; });
}

LearnerState::LearnerState(std::span<const double> prior)
    : log_scores_(prior.size(), 0.0), zero_(prior.size(), 0) {
  for (std::size_t h = 0; h < prior.size(); ++h) {
    if (prior[h] < 0.0 || !std::isfinite(prior[h])) throw ParameterError("prior entries must be finite and non-negative");
    if (prior[h] == 0.0)
      zero_[h] = 1;
    else
      log_scores_[h] = std::log(prior[h]);
  }
}

double LearnerState::score(std::size_t h) const { return zero_[h] ? 0.0 : std::exp(log_scores_[h]); }

LearnerState update(const LearnerState& state, const LabeledExample& example, std::span<const Hypothesis> hypotheses,
                    double eta) {
  check_rate(eta);
  if (hypotheses.size() != state.size()) throw ContractViolation("state size does not match hypothesis class");
  LearnerState next = state;
  const double log_keep = eta < 1.0 ? std::log1p(-eta) : 0.0;
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    if (predict(hypotheses[h], example.instance) == example.label) continue;
    if (eta == 1.0)
      next.zero_[h] = 1;
    else
      next.log_scores_[h] += log_keep;
  }
  next.history_.push_back(example.id());
  return next;
}

LearnerState update(const LearnerState& state, const LabeledExample& example, const TaskSpec& spec) {
  return update(state, example, spec.hypotheses, spec.rate);
}

LearnerState teach(const TaskSpec& spec, std::span<const std::size_t> example_ids) {
  LearnerState state = LearnerState::initial(spec);
  for (std::size_t id : example_ids) state = update(state, spec.examples[index_of_example(spec, id)], spec);
  return state;
}

double learner_error(const LearnerState& state, std::span<const double> errs) {
  if (errs.size() != state.size()) throw ContractViolation("error vector size does not match learner state");
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < state.size(); ++h)
    if (!state.is_zero(h)) max_log = std::max(max_log, state.log_score(h));
  if (!std::isfinite(max_log)) throw DegeneratePosterior("every hypothesis score is exactly zero");

  double num = 0.0;
  double den = 0.0;
  for (std::size_t h = 0; h < state.size(); ++h) {
    if (state.is_zero(h)) continue;
    const double w = std::exp(state.log_score(h) - max_log);
    num += w * errs[h];
    den += w;
  }
  return num / den;
}

}  // namespace rmt
