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

#include "fas/harness.hpp"

#include "fas/baselines.hpp"
#include "fas/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fas::harness {

namespace {
constexpr std::uint64_t kSceneTag = 0x7363656e;
constexpr std::uint64_t kCodebookTag = 0x636f6465;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;
} // namespace

std::string algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::em_amp_geo: return "em_amp_geo";
    case Algorithm::em_amp_conventional: return "em_amp_conventional";
    case Algorithm::somp_ls: return "somp_ls";
    case Algorithm::somp_aoa: return "somp_aoa";
    }
    return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    if (name == "em_amp_geo") return Algorithm::em_amp_geo;
    if (name == "em_amp_conventional") return Algorithm::em_amp_conventional;
    if (name == "somp_ls") return Algorithm::somp_ls;
    if (name == "somp_aoa") return Algorithm::somp_aoa;
    return std::nullopt;
}

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::vs_snr: return "vs_snr";
    case ExperimentKind::vs_ports: return "vs_ports";
    }
    return "unknown";
}

std::optional<ExperimentKind> experiment_from_name(std::string_view name) {
    if (name == "convergence") return ExperimentKind::convergence;
    if (name == "vs_snr") return ExperimentKind::vs_snr;
    if (name == "vs_ports") return ExperimentKind::vs_ports;
    return std::nullopt;
}

MetricRecord run_trial(const TrialSpec& spec) {
    spec.scene.validate();
    if (spec.scene.active_users < 1)
        throw std::invalid_argument("run_trial: need at least one active user");

    const auto scene = chan::assemble_scene(spec.scene, rng::mix(spec.seed, kSceneTag));
    const auto codebook = chan::build_codebook(spec.scene.pilot_len, spec.scene.users,
                                               rng::mix(spec.seed, kCodebookTag));

    double mean_lsfc;
    if (spec.analytic_mean_lsfc) {
        mean_lsfc = spec.scene.mean_lsfc_analytic();
    } else {
        mean_lsfc = 0.0;
        for (int k : scene.activity)
            mean_lsfc += scene.lsfc[k];
        mean_lsfc /= static_cast<double>(scene.activity.size());
    }

    double noise_var = 0.0;
    if (!std::isinf(spec.snr_db))
        noise_var = chan::noise_variance_for_snr(std::pow(10.0, spec.snr_db / 10.0), mean_lsfc,
                                                 spec.scene.pilot_len);
    const auto Y = chan::synthesize_rx(codebook, scene, noise_var, rng::mix(spec.seed, kNoiseTag));

    MetricRecord record;
    record.seed = spec.seed;

    Eigen::MatrixXcd x_hat;
    std::vector<int> detected;

    const bool is_amp = spec.algorithm == Algorithm::em_amp_geo ||
                        spec.algorithm == Algorithm::em_amp_conventional;

    baseline::AoaDictionary dict;
    if (spec.algorithm == Algorithm::somp_aoa)
        dict = baseline::build_aoa_dictionary(spec.aoa_samples, spec.scene.ports,
                                              spec.scene.aperture_const,
                                              spec.scene.theta_min_deg, spec.scene.theta_max_deg);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (is_amp) {
            amp::AmpConfig cfg = spec.amp;
            cfg.variant = spec.algorithm == Algorithm::em_amp_geo ? amp::Variant::geographical
                                                                  : amp::Variant::conventional;
            cfg.known_active = spec.scene.active_users;
            const double psi = std::max(noise_var, 1e-30); // the estimator needs psi > 0
            const auto est = amp::run(Y, codebook, psi, cfg, &scene.X);
            x_hat = est.x_hat;
            detected = est.detected;
            record.iterations = est.iterations_used;
            record.nmse_trace = est.nmse_trace;
            record.mac_count = est.mac_count;
            record.mac_init = est.mac_init;
            record.mac_trace = est.mac_trace;
        } else {
            const auto pursuit =
                baseline::somp(Y, codebook, baseline::SompStop::k_known(spec.scene.active_users));
            detected = pursuit.support;
            record.iterations = static_cast<int>(pursuit.support.size());
            record.mac_count = pursuit.mac_count;
            if (pursuit.rank_deficient)
                record.flags = "rank_deficient";
            if (spec.algorithm == Algorithm::somp_ls) {
                auto ls = baseline::ls_estimate(Y, codebook, pursuit.support);
                x_hat = std::move(ls.X);
                record.mac_count += ls.mac_count;
                if (ls.rank_deficient && record.flags.empty())
                    record.flags = "rank_deficient";
            } else {
                std::uint64_t macs = 0;
                x_hat = baseline::aoa_codebook_estimate(Y, codebook, pursuit.support, dict,
                                                        spec.aoa_sparsity, &macs);
                record.mac_count += macs;
            }
        }
    } catch (const std::runtime_error& err) {
        record.aborted = true;
        record.flags = std::string("abort:") + err.what();
        record.ade = 1.0;
        record.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return record;
    }
    record.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::sort(detected.begin(), detected.end());
    record.detected_count = static_cast<int>(detected.size());
    record.ade = ade(scene.activity, detected, spec.scene.active_users);
    const auto correct = intersect_sorted(scene.activity, detected);
    record.nmse = nmse(scene.X, x_hat, correct, spec.nmse_per_user_mean);
    if (!record.nmse.has_value() && record.flags.empty())
        record.flags = "no_detect";
    return record;
}

TrialSpec ExperimentPlan::trial(Algorithm algorithm, double grid_value, std::uint64_t seed) const {
    TrialSpec spec;
    spec.scene = scene;
    spec.amp = amp;
    spec.algorithm = algorithm;
    spec.seed = seed;
    spec.snr_db = snr_db;
    spec.analytic_mean_lsfc = analytic_mean_lsfc;
    spec.nmse_per_user_mean = nmse_per_user_mean;
    spec.aoa_samples = aoa_samples;
    spec.aoa_sparsity = aoa_sparsity;
    switch (kind) {
    case ExperimentKind::convergence:
        spec.scene.rician_k = grid_value;
        break;
    case ExperimentKind::vs_snr:
        spec.snr_db = grid_value;
        break;
    case ExperimentKind::vs_ports:
        spec.scene.ports = static_cast<int>(grid_value);
        break;
    }
    return spec;
}

ExperimentPlan default_plan(ExperimentKind kind, const chan::SceneConfig& scene,
                            const amp::AmpConfig& amp,
                            const std::vector<std::string>& explicit_keys) {
    const auto user_set = [&](std::string_view key) {
        return std::find(explicit_keys.begin(), explicit_keys.end(), key) != explicit_keys.end();
    };

    ExperimentPlan plan;
    plan.kind = kind;
    plan.scene = scene;
    plan.amp = amp;
    if (!user_set("amp.phi_min"))
        plan.amp.phi_min = scene.lsfc_floor();
    if (!user_set("amp.phi_max"))
        plan.amp.phi_max = scene.lsfc_ceil();

    switch (kind) {
    case ExperimentKind::convergence:
        if (!user_set("scene.N_o")) plan.scene.ports = 8;
        if (!user_set("scene.K_a")) plan.scene.active_users = 10;
        plan.snr_db = -14.0;
        plan.grid = {0.0, 3.0};
        plan.algorithms = {Algorithm::em_amp_geo, Algorithm::em_amp_conventional};
        break;
    case ExperimentKind::vs_snr:
        if (!user_set("scene.N_o")) plan.scene.ports = 8;
        if (!user_set("scene.K_a")) plan.scene.active_users = 150;
        for (int db = -20; db <= 8; db += 2)
            plan.grid.push_back(db);
        plan.algorithms = {Algorithm::em_amp_geo, Algorithm::em_amp_conventional,
                           Algorithm::somp_ls, Algorithm::somp_aoa};
        break;
    case ExperimentKind::vs_ports:
        if (!user_set("scene.K_a")) plan.scene.active_users = 150;
        plan.snr_db = 5.0;
        plan.grid = {2, 4, 6, 8, 16, 32, 62};
        plan.algorithms = {Algorithm::em_amp_geo, Algorithm::em_amp_conventional,
                           Algorithm::somp_ls, Algorithm::somp_aoa};
        break;
    }
    return plan;
}

ExperimentResult run_experiment(const ExperimentPlan& plan,
                                const std::vector<std::uint64_t>& seeds, int threads) {
    ExperimentResult result;
    result.plan = plan;
    result.seeds = seeds;
    std::sort(result.seeds.begin(), result.seeds.end());

    struct Pending {
        Algorithm algorithm;
        double grid_value;
        std::uint64_t seed;
    };
    std::vector<Pending> pending;
    for (double g : plan.grid)
        for (Algorithm a : plan.algorithms)
            for (std::uint64_t s : result.seeds)
                pending.push_back({a, g, s});

    std::vector<TrialRow> rows(pending.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size())
                return;
            const auto& p = pending[i];
            rows[i] = TrialRow{p.algorithm, p.grid_value,
                               run_trial(plan.trial(p.algorithm, p.grid_value, p.seed))};
        }
    };

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(pending.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    result.rows = std::move(rows);
    return result;
}

std::vector<CellStats> ExperimentResult::cells() const {
    std::vector<CellStats> out;
    for (double g : plan.grid) {
        for (Algorithm a : plan.algorithms) {
            CellStats cell;
            cell.algorithm = a;
            cell.grid_value = g;
            double nmse_acc = 0.0;
            int nmse_n = 0;
            double ade_acc = 0.0, mac_acc = 0.0, wall_acc = 0.0, iter_acc = 0.0;
            int live = 0;
            for (const auto& row : rows) {
                if (row.algorithm != a || row.grid_value != g)
                    continue;
                ++cell.trials;
                if (row.record.aborted) {
                    ++cell.aborted;
                    continue;
                }
                ++live;
                ade_acc += row.record.ade;
                mac_acc += static_cast<double>(row.record.mac_count);
                wall_acc += row.record.wall_time_s;
                iter_acc += row.record.iterations;
                if (row.record.nmse.has_value()) {
                    nmse_acc += *row.record.nmse;
                    ++nmse_n;
                } else {
                    ++cell.missing_nmse;
                }
            }
            if (live > 0) {
                cell.mean_ade = ade_acc / live;
                cell.mean_mac = mac_acc / live;
                cell.mean_wall_s = wall_acc / live;
                cell.mean_iterations = iter_acc / live;
            }
            if (nmse_n > 0)
                cell.mean_nmse = nmse_acc / nmse_n;
            out.push_back(std::move(cell));
        }
    }
    return out;
}

const CellStats* find_cell(const std::vector<CellStats>& cells, Algorithm algorithm,
                           double grid_value) {
    for (const auto& c : cells)
        if (c.algorithm == algorithm && c.grid_value == grid_value)
            return &c;
    return nullptr;
}

std::vector<double> median_trace(const ExperimentResult& result, Algorithm algorithm,
                                 double grid_value, int length) {
    std::vector<std::vector<double>> traces;
    for (const auto& row : result.rows) {
        if (row.algorithm != algorithm || row.grid_value != grid_value || row.record.aborted)
            continue;
        if (row.record.nmse_trace.empty())
            continue;
        auto t = row.record.nmse_trace;
        t.resize(length, t.back()); // converged runs hold their final value
        traces.push_back(std::move(t));
    }
    std::vector<double> median(length, 0.0);
    if (traces.empty())
        return median;
    std::vector<double> column(traces.size());
    for (int t = 0; t < length; ++t) {
        for (std::size_t i = 0; i < traces.size(); ++i)
            column[i] = traces[i][t];
        const auto mid = column.begin() + column.size() / 2;
        std::nth_element(column.begin(), mid, column.end());
        if (column.size() % 2 == 1) {
            median[t] = *mid;
        } else {
            const double hi = *mid;
            const double lo = *std::max_element(column.begin(), mid);
            median[t] = 0.5 * (lo + hi);
        }
    }
    return median;
}

MacAudit mac_audit(const MetricRecord& record, int users, int pilot_len, int ports) {
    MacAudit audit;
    if (record.mac_trace.size() >= 2) {
        audit.per_iteration = record.mac_trace.back() - record.mac_trace[record.mac_trace.size() - 2];
    } else if (record.mac_trace.size() == 1) {
        audit.per_iteration = record.mac_trace[0] - record.mac_init;
    }
    audit.formula = 4ull * users * pilot_len * ports + 3ull * users * ports + 2ull * users;
    audit.ratio = audit.formula > 0 ? static_cast<double>(audit.per_iteration) / audit.formula : 0.0;
    return audit;
}

} // namespace fas::harness
