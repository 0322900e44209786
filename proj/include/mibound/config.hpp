// Copyright 2026 The mibound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Model definitions for the command-line tools.
//
// A model file is a YAML document with three sections:
//
//   grid:    {lower: 0, upper: pi, points: 2001}
//   prior:   {kind: uniform}            # uniform | gaussian | cosine-window | tabulated
//   model:   {builtin: cos2}            # or {tabulated: [[...], [...]]}
//
// Numbers may be written as multiples of pi ("pi", "2*pi", "pi/2").
// Diagnostics carry the source name and the 1-based line of the offending
// node. The builtin models are stored as documents in the same format.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mibound/errors.hpp"
#include "mibound/stat_model.hpp"

namespace mibound {

/// Parse or validation failure in a model definition.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Command-line values that take precedence over the file.
struct ModelOverrides {
  std::optional<std::size_t> grid_points;
  std::optional<std::size_t> gates;
  std::optional<double> eta;
};

struct LoadedModel {
  /// "builtin:<name>" or the file path.
  std::string id;
  JointModel joint;
};

/// Names accepted by load_model in place of a path.
std::vector<std::string> builtin_model_names();

/// The YAML text of a builtin model; ConfigError for unknown names.
std::string builtin_model_text(const std::string& name);

/// Loads a builtin by name, or else the file at `name_or_path`.
LoadedModel load_model(const std::string& name_or_path, const ModelOverrides& overrides = {});

/// Parses a model document. `source` names it in diagnostics.
LoadedModel load_model_text(const std::string& text, const std::string& source,
                            const ModelOverrides& overrides = {});

}  // namespace mibound
