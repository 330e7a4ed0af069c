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

#include "fas/config.hpp"

#include "fas/csv.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fas::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.begin(), e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b)))
        ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1))))
        --e;
    return std::string(b, e);
}

const char* kSceneKeys[] = {"K", "K_a", "G", "N_o", "M", "L_s", "K_r", "d_ref", "d_max",
                            "theta_min", "theta_max", "path_loss_exponent", "N_s"};
const char* kAmpKeys[] = {"T_max", "conv_tol", "damping", "phi_min", "phi_max",
                          "activity_threshold", "em_lambda_divisor", "em_mu_update",
                          "em_variance"};
const char* kExperimentKeys[] = {"snr_db", "snr_grid_db", "no_grid", "kr_grid", "algorithms",
                                 "mean_lsfc", "nmse", "aoa_sparsity"};

template <std::size_t N>
std::string key_list(const char* const (&keys)[N]) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
        if (i)
            out += ", ";
        out += keys[i];
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_num(const std::string& value, int line, const std::string& key) {
    try {
        return io::parse_double(value);
    } catch (const std::exception&) {
        fail(line, "key '" + key + "' expects a number, got '" + value + "'");
    }
}

int parse_int(const std::string& value, int line, const std::string& key) {
    const double v = parse_num(value, line, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        fail(line, "key '" + key + "' expects an integer, got '" + value + "'");
    return i;
}

std::vector<double> parse_list(const std::string& value, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_num(trim(item), line, key));
    if (out.empty())
        fail(line, "key '" + key + "' expects a comma-separated list");
    return out;
}

void set_scene(FileConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "K") cfg.scene.users = parse_int(value, line, key);
    else if (key == "K_a") cfg.scene.active_users = parse_int(value, line, key);
    else if (key == "G") cfg.scene.pilot_len = parse_int(value, line, key);
    else if (key == "N_o") cfg.scene.ports = parse_int(value, line, key);
    else if (key == "M") cfg.scene.aperture_const = parse_int(value, line, key);
    else if (key == "L_s") cfg.scene.paths = parse_int(value, line, key);
    else if (key == "K_r") cfg.scene.rician_k = parse_num(value, line, key);
    else if (key == "d_ref") cfg.scene.d_ref = parse_num(value, line, key);
    else if (key == "d_max") cfg.scene.d_max = parse_num(value, line, key);
    else if (key == "theta_min") cfg.scene.theta_min_deg = parse_num(value, line, key);
    else if (key == "theta_max") cfg.scene.theta_max_deg = parse_num(value, line, key);
    else if (key == "path_loss_exponent") cfg.scene.path_loss_exp = parse_num(value, line, key);
    else if (key == "N_s") cfg.aoa_samples = parse_int(value, line, key);
    else fail(line, "unknown [scene] key '" + key + "'; valid keys: " + key_list(kSceneKeys));
    cfg.explicit_keys.push_back("scene." + key);
}

void set_amp(FileConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "T_max") cfg.amp.max_iterations = parse_int(value, line, key);
    else if (key == "conv_tol") cfg.amp.conv_tol = parse_num(value, line, key);
    else if (key == "damping") cfg.amp.damping = parse_num(value, line, key);
    else if (key == "phi_min") cfg.amp.phi_min = parse_num(value, line, key);
    else if (key == "phi_max") cfg.amp.phi_max = parse_num(value, line, key);
    else if (key == "activity_threshold") cfg.amp.activity_threshold = parse_num(value, line, key);
    else if (key == "em_lambda_divisor") {
        if (value == "ports") cfg.amp.lambda_over_users = false;
        else if (value == "users") cfg.amp.lambda_over_users = true;
        else fail(line, "em_lambda_divisor expects 'ports' or 'users'");
    } else if (key == "em_mu_update") {
        if (value == "rowwise") cfg.amp.mu_update_printed = false;
        else if (value == "printed") cfg.amp.mu_update_printed = true;
        else fail(line, "em_mu_update expects 'rowwise' or 'printed'");
    } else if (key == "em_variance") {
        if (value == "rowwise") cfg.amp.variance_per_entry = false;
        else if (value == "per_entry") cfg.amp.variance_per_entry = true;
        else fail(line, "em_variance expects 'rowwise' or 'per_entry'");
    } else {
        fail(line, "unknown [amp] key '" + key + "'; valid keys: " + key_list(kAmpKeys));
    }
    cfg.explicit_keys.push_back("amp." + key);
}

void set_experiment(FileConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "snr_db") cfg.snr_db = parse_num(value, line, key);
    else if (key == "snr_grid_db") cfg.snr_grid_db = parse_list(value, line, key);
    else if (key == "no_grid") cfg.port_grid = parse_list(value, line, key);
    else if (key == "kr_grid") cfg.kr_grid = parse_list(value, line, key);
    else if (key == "algorithms") {
        std::vector<harness::Algorithm> algs;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto a = harness::algorithm_from_name(trim(item));
            if (!a)
                fail(line, "unknown algorithm '" + trim(item) + "'");
            algs.push_back(*a);
        }
        if (algs.empty())
            fail(line, "algorithms expects a comma-separated list");
        cfg.algorithms = algs;
    } else if (key == "mean_lsfc") {
        if (value == "realized") cfg.analytic_mean_lsfc = false;
        else if (value == "analytic") cfg.analytic_mean_lsfc = true;
        else fail(line, "mean_lsfc expects 'realized' or 'analytic'");
    } else if (key == "nmse") {
        if (value == "ratio_of_sums") cfg.nmse_per_user_mean = false;
        else if (value == "per_user_mean") cfg.nmse_per_user_mean = true;
        else fail(line, "nmse expects 'ratio_of_sums' or 'per_user_mean'");
    } else if (key == "aoa_sparsity") {
        cfg.aoa_sparsity = parse_int(value, line, key);
    } else {
        fail(line, "unknown [experiment] key '" + key + "'; valid keys: " + key_list(kExperimentKeys));
    }
    cfg.explicit_keys.push_back("experiment." + key);
}

void set_key(FileConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value, int line) {
    if (section == "scene") set_scene(cfg, key, value, line);
    else if (section == "amp") set_amp(cfg, key, value, line);
    else if (section == "experiment") set_experiment(cfg, key, value, line);
    else fail(line, "unknown section [" + section + "]; valid sections: scene, amp, experiment");
}

} // namespace

FileConfig parse_config(const std::string& text) {
    FileConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            fail(line_no, "key '" + key + "' appears before any [section] header");
        set_key(cfg, section, key, value, line_no);
    }
    return cfg;
}

void apply_override(FileConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' must be section.key=value");
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + assignment + "' must be section.key=value");
    set_key(cfg, path.substr(0, dot), path.substr(dot + 1), value, 0);
}

harness::ExperimentPlan build_plan(harness::ExperimentKind kind, const FileConfig& cfg) {
    auto plan = harness::default_plan(kind, cfg.scene, cfg.amp, cfg.explicit_keys);
    plan.analytic_mean_lsfc = cfg.analytic_mean_lsfc;
    plan.nmse_per_user_mean = cfg.nmse_per_user_mean;
    plan.aoa_samples = cfg.aoa_samples;
    plan.aoa_sparsity = cfg.aoa_sparsity;
    if (cfg.snr_db.has_value())
        plan.snr_db = *cfg.snr_db;
    if (cfg.algorithms.has_value())
        plan.algorithms = *cfg.algorithms;
    switch (kind) {
    case harness::ExperimentKind::convergence:
        if (cfg.kr_grid.has_value())
            plan.grid = *cfg.kr_grid;
        break;
    case harness::ExperimentKind::vs_snr:
        if (cfg.snr_grid_db.has_value())
            plan.grid = *cfg.snr_grid_db;
        break;
    case harness::ExperimentKind::vs_ports:
        if (cfg.port_grid.has_value())
            plan.grid = *cfg.port_grid;
        break;
    }
    plan.scene.validate();
    plan.amp.validate();
    return plan;
}

std::uint64_t config_digest(const FileConfig& cfg) {
    std::stringstream canon;
    canon << cfg.scene.users << '|' << cfg.scene.active_users << '|' << cfg.scene.pilot_len << '|'
          << cfg.scene.ports << '|' << cfg.scene.aperture_const << '|' << cfg.scene.paths << '|'
          << io::format_double(cfg.scene.rician_k) << '|' << io::format_double(cfg.scene.d_ref)
          << '|' << io::format_double(cfg.scene.d_max) << '|'
          << io::format_double(cfg.scene.theta_min_deg) << '|'
          << io::format_double(cfg.scene.theta_max_deg) << '|'
          << io::format_double(cfg.scene.path_loss_exp) << '|' << cfg.aoa_samples << '|'
          << cfg.amp.max_iterations << '|' << io::format_double(cfg.amp.conv_tol) << '|'
          << io::format_double(cfg.amp.damping) << '|' << io::format_double(cfg.amp.phi_min) << '|'
          << io::format_double(cfg.amp.phi_max) << '|' << cfg.amp.lambda_over_users << '|'
          << cfg.amp.mu_update_printed << '|' << cfg.amp.variance_per_entry << '|'
          << cfg.analytic_mean_lsfc << '|' << cfg.nmse_per_user_mean << '|' << cfg.aoa_sparsity;
    if (cfg.snr_db)
        canon << "|snr:" << io::format_double(*cfg.snr_db);
    for (const auto& grid : {cfg.snr_grid_db, cfg.port_grid, cfg.kr_grid}) {
        canon << "|g:";
        if (grid)
            for (double v : *grid)
                canon << io::format_double(v) << ',';
    }
    if (cfg.algorithms) {
        canon << "|a:";
        for (auto a : *cfg.algorithms)
            canon << harness::algorithm_name(a) << ',';
    }

    const std::string s = canon.str();
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

} // namespace fas::cli
