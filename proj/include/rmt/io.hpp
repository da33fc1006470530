#pragma once

// JSON and text-file helpers.
//
// TaskSpec JSON layout (field order is fixed, reals printed with 17
// significant digits so a round trip is exact):
//
//   {"d": 2, "eta": 0.5, "prior": [...], "hypotheses": [[w0, w1], ...],
//    "target": 3, "examples": [{"x": [x0, x1], "y": 1}, ...]}
//
// Hypothesis and example ids are their positions in the arrays.

#include <string>

#include "rmt/core.hpp"
#include "rmt/harness.hpp"
#include "rmt/scenarios.hpp"
#include "rmt/teacher.hpp"

namespace rmt {

/// %.17g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_real(double x);

std::string read_text_file(const std::string& path);  // throws IoError
void write_text_file(const std::string& path, const std::string& text);

std::string task_spec_to_json(const TaskSpec& spec);
TaskSpec task_spec_from_json(const std::string& text);  // throws ParameterError

/// {"selected", "f_trace", "threshold", "reached", "final_error"}; NaN -> null.
std::string outcome_to_json(const TeachingOutcome& outcome);

ScenarioConfig scenario_config_from_json(const std::string& text);
SweepConfig sweep_config_from_json(const std::string& text);

}  // namespace rmt
