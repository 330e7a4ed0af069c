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

#ifndef FAS_EXPERIMENT_IO_HPP
#define FAS_EXPERIMENT_IO_HPP

#include "fas/harness.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fas::cli {

struct RunManifest {
    std::string config_path; // empty means all defaults
    std::string output_dir;
    std::string experiment;
    std::uint64_t seed_base = 1;
    int seed_count = 200;
    std::vector<std::string> overrides; // section.key=value
    bool emit_plots = false;
    // Wall-clock measurements are not reproducible run to run; the
    // wall_time_s column is left empty unless timings are requested, so the
    // default CSV is byte-identical across reruns.
    bool emit_timings = false;
    int threads = 0;
};

// Per-trial rows: experiment, algorithm, grid_value, seed, ade, nmse_db,
// iterations, mac_count, wall_time_s, flags.
void write_experiment_csv(const harness::ExperimentResult& result, std::ostream& out,
                          bool with_timings);

// Long-format per-iteration traces (convergence experiment):
// experiment, algorithm, grid_value, seed, t, nmse.
void write_trace_csv(const harness::ExperimentResult& result, std::ostream& out);

// Parsed view of the per-trial CSV, used to derive plots strictly from the
// written file.
struct CsvRow {
    std::string experiment;
    std::string algorithm;
    double grid_value = 0.0;
    std::uint64_t seed = 0;
    double ade = 0.0;
    bool has_nmse = false;
    double nmse_db = 0.0;
    int iterations = 0;
    std::uint64_t mac_count = 0;
    std::string flags;
};
std::vector<CsvRow> read_experiment_csv(std::istream& in);

// Exit codes: 0 success, 1 config error, 2 runtime/IO failure.
int cmd_run(const RunManifest& manifest);

// Writes codebook.csv, x_true.csv, h.csv, activity.csv, lsfc.csv for one
// seeded scene.
int cmd_dump_scene(const std::string& config_path, const std::vector<std::string>& overrides,
                   std::uint64_t seed, const std::string& output_dir);

} // namespace fas::cli

#endif
