// SPDX-License-Identifier: Apache-2.0
//
// fasamp - CSI acquisition simulator for fluid antenna systems
// Copyright (C) 2026 fasamp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef FAS_CONFIG_HPP
#define FAS_CONFIG_HPP

#include "fas/amp.hpp"
#include "fas/channel.hpp"
#include "fas/harness.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fas::cli {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Flat key-value document with three sections: [scene], [amp], [experiment].
// Unspecified keys keep the Table-I defaults baked into SceneConfig/AmpConfig.
struct FileConfig {
    chan::SceneConfig scene;
    amp::AmpConfig amp;
    int aoa_samples = 121; // N_s

    // [experiment] section
    std::optional<double> snr_db;
    std::optional<std::vector<double>> snr_grid_db;
    std::optional<std::vector<double>> port_grid;
    std::optional<std::vector<double>> kr_grid;
    std::optional<std::vector<harness::Algorithm>> algorithms;
    bool analytic_mean_lsfc = false;
    bool nmse_per_user_mean = false;
    int aoa_sparsity = 3;

    // "section.key" names the user set explicitly; experiment defaults do not
    // override these.
    std::vector<std::string> explicit_keys;
};

// Parses the whole document. Unknown keys and malformed values are hard
// errors naming the line and, for unknown keys, the valid key set.
FileConfig parse_config(const std::string& text);

// Applies one "section.key=value" override (the CLI --set flag).
void apply_override(FileConfig& config, const std::string& assignment);

// Experiment plan for `kind`: per-experiment defaults layered under the
// explicitly configured values, then the [experiment] grids.
harness::ExperimentPlan build_plan(harness::ExperimentKind kind, const FileConfig& config);

// Deterministic digest of the resolved configuration (FNV-1a over a
// canonical rendering); stamps output metadata.
std::uint64_t config_digest(const FileConfig& config);

} // namespace fas::cli

#endif
