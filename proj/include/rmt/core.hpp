#pragma once

// Domain types and the probabilistic version-space learner.
//
// A learner holds one score per hypothesis, initialised from a prior Q0.
// Every shown example multiplies the score of each hypothesis that
// disagrees with its label by (1 - eta). Scores are stored in log domain
// with an explicit exact-zero flag so that eta = 1 eliminations never go
// through -inf arithmetic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rmt {

using FeatureVector = std::vector<double>;

enum class Label : std::int8_t { Negative = -1, Positive = 1 };

constexpr int to_int(Label y) { return static_cast<int>(y); }
Label label_from_int(int y);  // throws ParameterError unless y is +-1

struct Instance {
  std::size_t id = 0;
  FeatureVector features;
};

struct LabeledExample {
  Instance instance;
  Label label = Label::Positive;

  std::size_t id() const { return instance.id; }
  const FeatureVector& x() const { return instance.features; }
};

/// Linear-threshold classifier h(x) = sign(<weights, phi(x)>).
struct Hypothesis {
  std::size_t id = 0;
  FeatureVector weights;
};

/// The full-knowledge teaching task (Q0, eta, Z, h*, phi, H).
///
/// Example ids of a ground-truth spec are contiguous from 0 and equal the
/// position in `examples`. Teacher views projected into this shape keep the
/// ids of the instances they were derived from, so they may be sparse.
struct TaskSpec {
  std::vector<Hypothesis> hypotheses;
  std::size_t target_id = 0;
  std::vector<LabeledExample> examples;
  std::vector<double> prior;
  double rate = 0.5;

  std::size_t dim() const;
  std::size_t num_hypotheses() const { return hypotheses.size(); }
  std::size_t num_examples() const { return examples.size(); }
};

struct ValidationOptions {
  bool require_contiguous_ids = true;
  bool require_normalized_prior = true;
  bool require_realizable = false;
};

/// Throws ContractViolation / ParameterError describing the first problem found.
void validate(const TaskSpec& spec, const ValidationOptions& opts = {});

/// Position of the example with the given id; throws ContractViolation if absent.
std::size_t index_of_example(const TaskSpec& spec, std::size_t id);

// ---------------------------------------------------------------------------
// Learner primitives

/// sign(<theta, phi(x)>) with sign(0) := +1.
Label predict(const Hypothesis& h, const Instance& x);
Label predict(std::span<const double> weights, std::span<const double> features);

/// J(y | h, x, eta): 1 - eta on disagreement, 1 otherwise.
double likelihood(Label y, const Hypothesis& h, const Instance& x, double eta);

/// Fraction of `examples` that h mislabels (exact integer count, then divided).
double hypothesis_error(const Hypothesis& h, std::span<const LabeledExample> examples);

/// err(h) for every hypothesis of the spec, over the spec's own examples.
std::vector<double> hypothesis_errors(const TaskSpec& spec);

/// True when the target hypothesis labels every example correctly.
bool is_realizable(const TaskSpec& spec);

class LearnerState {
 public:
  explicit LearnerState(std::span<const double> prior);
  static LearnerState initial(const TaskSpec& spec) { return LearnerState(spec.prior); }

  std::size_t size() const { return log_scores_.size(); }
  /// log Q(h|S); meaningless when is_zero(h).
  double log_score(std::size_t h) const { return log_scores_[h]; }
  bool is_zero(std::size_t h) const { return zero_[h] != 0; }
  /// Q(h|S) in linear domain (may underflow to 0 for long teaching sets).
  double score(std::size_t h) const;
  std::span<const double> log_scores() const { return log_scores_; }
  const std::vector<std::size_t>& history() const { return history_; }

  friend LearnerState update(const LearnerState&, const LabeledExample&, std::span<const Hypothesis>,
                             double eta);

 private:
  std::vector<double> log_scores_;
  std::vector<std::uint8_t> zero_;
  std::vector<std::size_t> history_;
};

/// Returns the state after additionally showing `example`.
LearnerState update(const LearnerState& state, const LabeledExample& example,
                    std::span<const Hypothesis> hypotheses, double eta);
LearnerState update(const LearnerState& state, const LabeledExample& example, const TaskSpec& spec);

/// Learner state after showing the examples with the given ids, in order.
LearnerState teach(const TaskSpec& spec, std::span<const std::size_t> example_ids);

/// Err(S) = sum_h Q(h|S)/sum_h' Q(h'|S) * err(h), computed after subtracting
/// the maximum log-score. Throws DegeneratePosterior when every score is zero.
double learner_error(const LearnerState& state, std::span<const double> errs);

}  // namespace rmt
