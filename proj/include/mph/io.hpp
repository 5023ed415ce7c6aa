// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// JSON and file helpers shared by the CLI, the reports and the bindings.
//
// System document:
//   {"preset": "jx4-chain", "length_mm": 84.9, "omega_flat_per_mm": ...,
//    "ramp_sharpness": ..., "ramp_length_mm": 30}
// or an explicit one:
//   {"modes": 4, "pattern": [[[re, im], ...], ...],
//    "envelope": [{"kind": "constant", "length_mm": 10, "start_per_mm": 0.1,
//                  "end_per_mm": 0.1, "sharpness": 0}, ...]}
// Subspace document:
//   {"particle": "boson", "states": [[2,0,0,0], [0,0,0,2]]}
//   {"particle": "distinguishable", "states": [{"a": 1, "b": 3}, ...]}
// Strings such as "2000" or "a1b3" are accepted in place of the arrays.

#pragma once

#include "mph/coupledmode.hpp"
#include "mph/holonomy.hpp"

#include <json.hpp>

#include <string>

namespace mph {

using Json = nlohmann::ordered_json;

/// Deterministic serialization; doubles carry 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json complex_to_json(complex c);

Json system_to_json(const CoupledModeSystem& sys);
/// Parses a system document; errors are reported with ErrorCode::config.
CoupledModeSystem system_from_json(const Json& j);
StructureCalibration calibration_from_json(const Json& j);

/// `mode_count` is used when the document does not say.
Subspace subspace_from_json(const Json& j, int mode_count);
Json subspace_to_json(const Subspace& sub);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

std::string format_double(double x);

}  // namespace mph
