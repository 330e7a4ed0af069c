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

#ifndef FAS_HARNESS_HPP
#define FAS_HARNESS_HPP

#include "fas/amp.hpp"
#include "fas/channel.hpp"
#include "fas/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fas::harness {

enum class Algorithm { em_amp_geo, em_amp_conventional, somp_ls, somp_aoa };

std::string algorithm_name(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct TrialSpec {
    chan::SceneConfig scene;
    double snr_db = 0.0;
    Algorithm algorithm = Algorithm::em_amp_geo;
    amp::AmpConfig amp;
    std::uint64_t seed = 0;
    bool analytic_mean_lsfc = false; // SNR calibration from E f(d) instead of the realized active mean
    bool nmse_per_user_mean = false;
    int aoa_samples = 121;
    int aoa_sparsity = 3;
};

struct MetricRecord {
    double ade = 0.0;
    std::optional<double> nmse; // linear; absent when no active user was detected
    std::vector<double> nmse_trace;
    int iterations = 0;
    std::uint64_t mac_count = 0;
    std::uint64_t mac_init = 0;
    std::vector<std::uint64_t> mac_trace;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    int detected_count = 0;
    std::string flags; // empty, "no_detect", "rank_deficient", or "abort:<line>"
    bool aborted = false;
};

// Scene synthesis, SNR calibration, estimator, metrics. Deterministic given
// the spec; only wall_time_s varies between repeated calls.
MetricRecord run_trial(const TrialSpec& spec);

enum class ExperimentKind { convergence, vs_snr, vs_ports };

std::string experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(std::string_view name);

// A fully resolved experiment: base scene/estimator configuration plus the
// swept grid. grid holds Rician factors (convergence), SNR values in dB
// (vs_snr), or port counts (vs_ports).
struct ExperimentPlan {
    ExperimentKind kind = ExperimentKind::vs_snr;
    chan::SceneConfig scene;
    amp::AmpConfig amp;
    std::vector<double> grid;
    std::vector<Algorithm> algorithms;
    double snr_db = 0.0; // fixed operating SNR for convergence / vs_ports
    bool analytic_mean_lsfc = false;
    bool nmse_per_user_mean = false;
    int aoa_samples = 121;
    int aoa_sparsity = 3;

    TrialSpec trial(Algorithm algorithm, double grid_value, std::uint64_t seed) const;
};

struct TrialRow {
    Algorithm algorithm;
    double grid_value;
    MetricRecord record;
};

struct CellStats {
    Algorithm algorithm;
    double grid_value = 0.0;
    int trials = 0;
    int aborted = 0;
    int missing_nmse = 0;
    double mean_ade = 0.0;
    std::optional<double> mean_nmse; // linear mean over trials that produced one
    double mean_mac = 0.0;
    double mean_wall_s = 0.0;
    double mean_iterations = 0.0;
};

struct ExperimentResult {
    ExperimentPlan plan;
    std::vector<std::uint64_t> seeds; // sorted
    std::vector<TrialRow> rows;       // grid-major, then algorithm, then seed

    std::vector<CellStats> cells() const;
};

// Lookup helper over ExperimentResult::cells() output.
const CellStats* find_cell(const std::vector<CellStats>& cells, Algorithm algorithm,
                           double grid_value);

// Experiment defaults per figure analog, applied on top of the provided base
// configuration. `explicit_keys` lists config keys the user set explicitly;
// those survive the per-experiment defaults (N_o, K_a, SNR, grids).
ExperimentPlan default_plan(ExperimentKind kind, const chan::SceneConfig& scene,
                            const amp::AmpConfig& amp,
                            const std::vector<std::string>& explicit_keys = {});

// Runs the grid x algorithms x seeds cross product. Trials are independent;
// threads = 0 picks the hardware concurrency. Row order and all aggregates
// are independent of the thread count.
ExperimentResult run_experiment(const ExperimentPlan& plan,
                                const std::vector<std::uint64_t>& seeds, int threads = 0);

// Median per-iteration trace across a cell's trials; traces of runs that
// stopped early are held at their final value.
std::vector<double> median_trace(const ExperimentResult& result, Algorithm algorithm,
                                 double grid_value, int length);

struct MacAudit {
    std::uint64_t per_iteration = 0;
    std::uint64_t formula = 0; // 4 K G N_o + 3 K N_o + 2 K
    double ratio = 0.0;
};

// Steady-state per-iteration multiply count against the published formula.
MacAudit mac_audit(const MetricRecord& record, int users, int pilot_len, int ports);

} // namespace fas::harness

#endif
