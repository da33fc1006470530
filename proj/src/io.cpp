#include "rmt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

using nlohmann::json;

void append_real(std::string& out, double x) {
  if (std::isfinite(x))
    out += format_real(x);
  else
    out += "null";
}

template <typename Range>
void append_reals(std::string& out, const Range& xs) {
  out += '[';
  bool first = true;
  for (double x : xs) {
    if (!first) out += ", ";
    first = false;
    append_real(out, x);
  }
  out += ']';
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParameterError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

ScenarioConfig scenario_from(const json& j) {
  if (!j.is_object()) throw ParameterError("scenario must be an object");
  ScenarioConfig c;
  c.regime = regime_from_string(field<std::string>(j, "regime"));
  c.n_examples = field<std::size_t>(j, "n_examples");
  c.n_hypotheses = field<std::size_t>(j, "n_hypotheses");
  c.d = field_or<std::size_t>(j, "d", c.d);
  c.eta = field_or<double>(j, "eta", c.eta);
  c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
  c.margin_fraction = field_or<double>(j, "margin_fraction", c.margin_fraction);
  c.min_hypothesis_error = field_or<double>(j, "min_hypothesis_error", c.min_hypothesis_error);
  if (j.contains("prior")) {
    const auto& p = j.at("prior");
    if (p.is_string()) {
      if (p.get<std::string>() != "uniform") throw ParameterError("prior must be \"uniform\" or a list");
    } else {
      c.prior = field<std::vector<double>>(j, "prior");
    }
  }
  return c;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

std::string task_spec_to_json(const TaskSpec& spec) {
  std::string out = "{\"d\": " + std::to_string(spec.dim()) + ", \"eta\": ";
  append_real(out, spec.rate);
  out += ", \"prior\": ";
  append_reals(out, spec.prior);
  out += ", \"hypotheses\": [";
  for (std::size_t h = 0; h < spec.hypotheses.size(); ++h) {
    if (h) out += ", ";
    append_reals(out, spec.hypotheses[h].weights);
  }
  out += "], \"target\": " + std::to_string(spec.target_id) + ", \"examples\": [";
  for (std::size_t i = 0; i < spec.examples.size(); ++i) {
    if (i) out += ", ";
    out += "{\"x\": ";
    append_reals(out, spec.examples[i].x());
    out += ", \"y\": " + std::to_string(to_int(spec.examples[i].label)) + "}";
  }
  out += "]}\n";
  return out;
}

TaskSpec task_spec_from_json(const std::string& text) {
  const json j = parse(text);
  TaskSpec spec;
  const auto d = field<std::size_t>(j, "d");
  spec.rate = field<double>(j, "eta");
  spec.prior = field<std::vector<double>>(j, "prior");
  const auto hyps = field<std::vector<std::vector<double>>>(j, "hypotheses");
  for (std::size_t h = 0; h < hyps.size(); ++h) spec.hypotheses.push_back(Hypothesis{h, hyps[h]});
  spec.target_id = field<std::size_t>(j, "target");
  const auto examples = field<json>(j, "examples");
  if (!examples.is_array()) throw ParameterError("examples must be an array");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    spec.examples.push_back(
        LabeledExample{Instance{i, field<std::vector<double>>(e, "x")}, label_from_int(field<int>(e, "y"))});
  }
  validate(spec);
  if (spec.dim() != d) throw ParameterError("field 'd' disagrees with the feature dimension");
  return spec;
}

std::string outcome_to_json(const TeachingOutcome& o) {
  std::string out = "{\"selected\": [";
  for (std::size_t i = 0; i < o.selected.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(o.selected[i]);
  }
  out += "], \"f_trace\": ";
  append_reals(out, o.f_trace);
  out += ", \"threshold\": ";
  append_real(out, o.threshold);
  out += std::string(", \"reached\": ") + (o.reached ? "true" : "false") + ", \"final_error\": ";
  append_real(out, o.final_error);
  out += "}\n";
  return out;
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
  const json j = parse(text);
  return scenario_from(j.contains("scenario") ? j.at("scenario") : j);
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const json j = parse(text);
  SweepConfig c;
  c.scenario = scenario_from(field<json>(j, "scenario"));
  c.epsilon = field<double>(j, "epsilon");
  c.kind = sweep_kind_from_string(field<std::string>(j, "noise_kind"));
  c.delta_grid = field<std::vector<double>>(j, "delta_grid");
  c.runs = field_or<std::size_t>(j, "runs", c.runs);
  c.baselines = field_or<std::vector<std::string>>(j, "baselines", c.baselines);
  c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
  c.output_path = field_or<std::string>(j, "output_path", c.output_path);
  c.lambda_trials = field_or<std::size_t>(j, "lambda_trials", c.lambda_trials);
  validate(c);
  return c;
}

}  // namespace rmt
