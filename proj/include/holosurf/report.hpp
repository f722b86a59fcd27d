#pragma once

#include <string>

#include <json.hpp>

#include "holosurf/common.hpp"

// Canonical JSON for reports: objects keep their stored key order (reports
// are built in a fixed documented order), floating-point numbers print with
// 17 significant digits, and layout is deterministic, so parsing an emitted
// report and re-emitting it reproduces the bytes exactly.

namespace holosurf {

using Json = nlohmann::ordered_json;

// Two-space indented, '\n' line ends, no trailing newline.  Every float
// must be finite; non-finite values raise ContractViolation.
std::string canonical_json(const Json& value);

// Human-oriented rendering of a classify or verify report.
std::string render_text(const Json& report);

}  // namespace holosurf
