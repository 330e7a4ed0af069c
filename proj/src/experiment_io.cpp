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

#include "fas/experiment_io.hpp"

#include "fas/config.hpp"
#include "fas/csv.hpp"
#include "fas/svg_plot.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fas::cli {

namespace fs = std::filesystem;

void write_experiment_csv(const harness::ExperimentResult& result, std::ostream& out,
                          bool with_timings) {
    out << "experiment,algorithm,grid_value,seed,ade,nmse_db,iterations,mac_count,wall_time_s,flags\n";
    const std::string name = harness::experiment_name(result.plan.kind);
    for (const auto& row : result.rows) {
        out << name << ',' << harness::algorithm_name(row.algorithm) << ','
            << io::format_double(row.grid_value) << ',' << row.record.seed << ','
            << io::format_double(row.record.ade) << ',';
        if (row.record.nmse.has_value())
            out << io::format_double(harness::to_db(*row.record.nmse));
        out << ',' << row.record.iterations << ',' << row.record.mac_count << ',';
        if (with_timings)
            out << io::format_double(row.record.wall_time_s);
        out << ',' << row.record.flags << '\n';
    }
}

void write_trace_csv(const harness::ExperimentResult& result, std::ostream& out) {
    out << "experiment,algorithm,grid_value,seed,t,nmse\n";
    const std::string name = harness::experiment_name(result.plan.kind);
    for (const auto& row : result.rows) {
        for (std::size_t t = 0; t < row.record.nmse_trace.size(); ++t) {
            out << name << ',' << harness::algorithm_name(row.algorithm) << ','
                << io::format_double(row.grid_value) << ',' << row.record.seed << ',' << (t + 1)
                << ',' << io::format_double(row.record.nmse_trace[t]) << '\n';
        }
    }
}

std::vector<CsvRow> read_experiment_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    if (!std::getline(in, line))
        return rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            f.push_back(field);
        f.resize(10);
        CsvRow row;
        row.experiment = f[0];
        row.algorithm = f[1];
        row.grid_value = io::parse_double(f[2]);
        row.seed = std::stoull(f[3]);
        row.ade = io::parse_double(f[4]);
        row.has_nmse = !f[5].empty();
        if (row.has_nmse)
            row.nmse_db = io::parse_double(f[5]);
        row.iterations = static_cast<int>(io::parse_double(f[6]));
        row.mac_count = std::stoull(f[7]);
        row.flags = f[9];
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// Per-trial linear NMSE values reduced to one dB mean per (algorithm, grid) cell.
std::vector<io::Series> cell_series(const std::vector<CsvRow>& rows,
                                    const std::vector<std::string>& algorithms,
                                    auto&& accumulate) {
    std::vector<io::Series> series;
    for (const auto& alg : algorithms) {
        io::Series s;
        s.label = alg;
        std::map<double, std::pair<double, int>> cells; // grid -> (sum, n)
        for (const auto& row : rows) {
            if (row.algorithm != alg)
                continue;
            accumulate(row, cells[row.grid_value]);
        }
        for (const auto& [grid, acc] : cells) {
            s.x.push_back(grid);
            s.y.push_back(acc.second > 0 ? acc.first / acc.second
                                         : std::numeric_limits<double>::quiet_NaN());
        }
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<std::string> algorithms_in(const std::vector<CsvRow>& rows) {
    std::vector<std::string> algorithms;
    for (const auto& row : rows)
        if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end())
            algorithms.push_back(row.algorithm);
    return algorithms;
}

std::string render_metric_svg(const std::vector<CsvRow>& rows, const std::string& x_label) {
    const auto algorithms = algorithms_in(rows);

    io::Panel ade_panel{"mean activity detection error", x_label, "ADE", {}};
    ade_panel.series = cell_series(rows, algorithms, [](const CsvRow& row, auto& cell) {
        cell.first += row.ade;
        cell.second += 1;
    });

    io::Panel nmse_panel{"mean channel estimation NMSE", x_label, "NMSE (dB)", {}};
    nmse_panel.series = cell_series(rows, algorithms, [](const CsvRow& row, auto& cell) {
        if (row.has_nmse) {
            cell.first += std::pow(10.0, row.nmse_db / 10.0);
            cell.second += 1;
        }
    });
    for (auto& s : nmse_panel.series)
        for (auto& y : s.y)
            y = 10.0 * std::log10(y);

    io::Panel mac_panel{"mean multiply-accumulate count", x_label, "MAC (millions)", {}};
    mac_panel.series = cell_series(rows, algorithms, [](const CsvRow& row, auto& cell) {
        cell.first += static_cast<double>(row.mac_count) / 1e6;
        cell.second += 1;
    });

    return io::render_svg({ade_panel, nmse_panel, mac_panel});
}

std::string render_convergence_svg(const std::string& trace_path) {
    std::ifstream in(trace_path);
    std::string line;
    std::getline(in, line); // header
    // (algorithm, grid) -> t -> values
    std::map<std::pair<std::string, std::string>, std::map<int, std::vector<double>>> groups;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            f.push_back(field);
        if (f.size() != 6)
            continue;
        groups[{f[1], f[2]}][static_cast<int>(io::parse_double(f[4]))].push_back(
            io::parse_double(f[5]));
    }
    io::Panel panel{"median NMSE trace", "iteration", "NMSE (dB)", {}};
    for (auto& [key, per_t] : groups) {
        io::Series s;
        s.label = key.first + " K_r=" + key.second;
        for (auto& [t, values] : per_t) {
            std::sort(values.begin(), values.end());
            const std::size_t n = values.size();
            const double median =
                n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
            s.x.push_back(t);
            s.y.push_back(10.0 * std::log10(median));
        }
        panel.series.push_back(std::move(s));
    }
    return io::render_svg({panel}, 860, 420);
}

FileConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    FileConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
    }
    for (const auto& assignment : overrides)
        apply_override(cfg, assignment);
    return cfg;
}

} // namespace

int cmd_run(const RunManifest& manifest) {
    harness::ExperimentResult result;
    std::string experiment;
    try {
        const FileConfig cfg = load_config(manifest.config_path, manifest.overrides);
        const auto kind = harness::experiment_from_name(manifest.experiment);
        if (!kind)
            throw ConfigError("unknown experiment '" + manifest.experiment +
                              "'; valid: convergence, vs_snr, vs_ports");
        if (manifest.seed_count < 1)
            throw ConfigError("seed count must be >= 1");
        const auto plan = build_plan(*kind, cfg);
        experiment = harness::experiment_name(*kind);

        std::vector<std::uint64_t> seeds(manifest.seed_count);
        for (int i = 0; i < manifest.seed_count; ++i)
            seeds[i] = manifest.seed_base + static_cast<std::uint64_t>(i);

        result = harness::run_experiment(plan, seeds, manifest.threads);
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 1;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 1;
    }

    std::vector<fs::path> written;
    try {
        fs::create_directories(manifest.output_dir);
        const fs::path csv_path = fs::path(manifest.output_dir) / (experiment + ".csv");
        const fs::path trace_path = fs::path(manifest.output_dir) / (experiment + "_trace.csv");

        auto write_file = [&](const fs::path& path, const std::string& content) {
            const fs::path tmp = path.string() + ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot write " + tmp.string());
                out << content;
                if (!out)
                    throw std::runtime_error("write failed for " + tmp.string());
            }
            fs::rename(tmp, path);
            written.push_back(path);
        };

        std::ostringstream csv;
        write_experiment_csv(result, csv, manifest.emit_timings);
        write_file(csv_path, csv.str());

        const bool has_traces = result.plan.kind == harness::ExperimentKind::convergence;
        if (has_traces) {
            std::ostringstream trace;
            write_trace_csv(result, trace);
            write_file(trace_path, trace.str());
        }

        if (manifest.emit_plots) {
            std::string svg;
            if (has_traces) {
                svg = render_convergence_svg(trace_path.string());
            } else {
                std::ifstream in(csv_path);
                const auto rows = read_experiment_csv(in);
                svg = render_metric_svg(rows, result.plan.kind == harness::ExperimentKind::vs_snr
                                                  ? "SNR (dB)"
                                                  : "active ports");
            }
            write_file(fs::path(manifest.output_dir) / (experiment + ".svg"), svg);
        }
    } catch (const std::exception& err) {
        std::cerr << "runtime failure: " << err.what() << '\n';
        std::error_code ec;
        for (const auto& path : written)
            fs::remove(path, ec); // keep no partial outputs
        return 2;
    }
    return 0;
}

int cmd_dump_scene(const std::string& config_path, const std::vector<std::string>& overrides,
                   std::uint64_t seed, const std::string& output_dir) {
    chan::SceneConfig scene_cfg;
    try {
        const FileConfig cfg = load_config(config_path, overrides);
        scene_cfg = cfg.scene;
        scene_cfg.validate();
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 1;
    }

    try {
        const auto scene = chan::assemble_scene(scene_cfg, seed);
        const auto codebook = chan::build_codebook(scene_cfg.pilot_len, scene_cfg.users, seed);
        fs::create_directories(output_dir);

        auto write = [&](const std::string& name, auto&& body) {
            std::ofstream out(fs::path(output_dir) / name, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + name);
            body(out);
        };
        write("codebook.csv", [&](std::ostream& out) { io::write_complex_csv(codebook.A, out); });
        write("x_true.csv", [&](std::ostream& out) { io::write_complex_csv(scene.X, out); });
        write("h.csv", [&](std::ostream& out) { io::write_complex_csv(scene.H, out); });
        write("activity.csv", [&](std::ostream& out) {
            out << scene.activity.size() << '\n';
            for (int k : scene.activity)
                out << k << '\n';
        });
        write("lsfc.csv", [&](std::ostream& out) {
            out << scene.lsfc.size() << '\n';
            for (double v : scene.lsfc)
                out << io::format_double(v) << '\n';
        });
    } catch (const std::exception& err) {
        std::cerr << "runtime failure: " << err.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace fas::cli
