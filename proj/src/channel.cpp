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

#include "fas/channel.hpp"

#include "fas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace fas::chan {

namespace {
constexpr std::uint64_t kGeometryTag = 0x67656f6d;
constexpr std::uint64_t kActivityTag = 0x61637469;
} // namespace

void SceneConfig::validate() const {
    if (users < 1 || pilot_len < 1 || ports < 1 || paths < 1)
        throw std::invalid_argument("scene: K, G, N_o, L_s must all be >= 1");
    if (active_users < 0 || active_users > users)
        throw std::invalid_argument("scene: require 0 <= K_a <= K");
    if (!(d_ref > 0.0) || !(d_ref < d_max))
        throw std::invalid_argument("scene: require 0 < d_ref < d_max");
    if (!(theta_min_deg < theta_max_deg))
        throw std::invalid_argument("scene: require theta_min < theta_max");
    if (rician_k < 0.0)
        throw std::invalid_argument("scene: Rician factor must be >= 0");
    if (rician_k > 0.0 && paths < 2)
        throw std::invalid_argument("scene: K_r > 0 needs L_s >= 2 (LOS plus at least one NLOS path)");
    if (aperture_const < 1)
        throw std::invalid_argument("scene: aperture constant M must be >= 1");
}

double SceneConfig::lsfc_floor() const { return lsfc(d_max, path_loss_exp); }
double SceneConfig::lsfc_ceil() const { return lsfc(d_ref, path_loss_exp); }

double SceneConfig::mean_lsfc_analytic() const {
    // E d^-e for d ~ U[d_ref, d_max]
    const double e = path_loss_exp;
    const double span = d_max - d_ref;
    if (std::abs(e - 1.0) < 1e-12)
        return std::log(d_max / d_ref) / span;
    return (std::pow(d_ref, 1.0 - e) - std::pow(d_max, 1.0 - e)) / ((e - 1.0) * span);
}

Eigen::MatrixXcd raw_codebook_matrix(int pilot_len, int users, std::uint64_t seed) {
    if (pilot_len < 1 || users < 1)
        throw std::invalid_argument("codebook: dimensions must be positive");
    rng::Rng gen(seed);
    const double scale = std::sqrt(1.0 / pilot_len);
    Eigen::MatrixXcd raw(pilot_len, users);
    for (int k = 0; k < users; ++k)
        for (int g = 0; g < pilot_len; ++g)
            raw(g, k) = scale * gen.cnormal();
    return raw;
}

PilotCodebook build_codebook(int pilot_len, int users, std::uint64_t seed) {
    Eigen::MatrixXcd A = raw_codebook_matrix(pilot_len, users, seed);
    for (int k = 0; k < users; ++k)
        A.col(k) /= A.col(k).norm();
    return PilotCodebook{std::move(A)};
}

Eigen::VectorXcd steering_vector(double theta_deg, int ports, int aperture_const) {
    if (ports < 1)
        throw std::invalid_argument("steering: port count must be >= 1");
    Eigen::VectorXcd s(ports);
    const double amp = 1.0 / std::sqrt(static_cast<double>(ports));
    if (ports == 1) {
        s(0) = amp;
        return s;
    }
    const double aperture_wavelengths = 0.5 * (aperture_const - 1); // W / lambda
    const double cos_theta = std::cos(theta_deg * std::numbers::pi / 180.0);
    const double step = -2.0 * std::numbers::pi * aperture_wavelengths * cos_theta / (ports - 1);
    for (int n = 0; n < ports; ++n)
        s(n) = std::polar(amp, step * n);
    return s;
}

std::vector<UserGeometry> draw_geometry(const SceneConfig& config, std::uint64_t seed) {
    config.validate();
    rng::Rng gen(seed);
    const double omega = static_cast<double>(config.ports);
    const double kr = config.rician_k;

    std::vector<UserGeometry> users(config.users);
    for (auto& u : users) {
        u.distance = gen.uniform(config.d_ref, config.d_max);
        u.aoas_deg.resize(config.paths);
        for (double& th : u.aoas_deg)
            th = gen.uniform(config.theta_min_deg, config.theta_max_deg);
        u.path_gains.resize(config.paths);
        if (kr > 0.0) {
            u.los_phase = gen.uniform(0.0, 2.0 * std::numbers::pi);
            u.path_gains[0] = std::polar(std::sqrt(kr * omega / (kr + 1.0)), u.los_phase);
            const double nlos_var = omega / ((kr + 1.0) * (config.paths - 1));
            for (int l = 1; l < config.paths; ++l)
                u.path_gains[l] = std::sqrt(nlos_var) * gen.cnormal();
        } else {
            const double var = omega / config.paths;
            for (int l = 0; l < config.paths; ++l)
                u.path_gains[l] = std::sqrt(var) * gen.cnormal();
        }
    }
    return users;
}

Eigen::VectorXcd small_scale(const UserGeometry& geom, int ports, int aperture_const) {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(ports);
    for (std::size_t l = 0; l < geom.path_gains.size(); ++l)
        s += geom.path_gains[l] * steering_vector(geom.aoas_deg[l], ports, aperture_const);
    return s;
}

double lsfc(double distance, double exponent) {
    if (!(distance > 0.0))
        throw std::invalid_argument("lsfc: distance must be positive");
    return std::pow(distance, -exponent);
}

ChannelScene assemble_scene(const SceneConfig& config, std::uint64_t seed) {
    config.validate();
    ChannelScene scene;
    scene.geometry = draw_geometry(config, rng::mix(seed, kGeometryTag));

    scene.lsfc.resize(config.users);
    scene.H.resize(config.users, config.ports);
    for (int k = 0; k < config.users; ++k) {
        scene.lsfc[k] = lsfc(scene.geometry[k].distance, config.path_loss_exp);
        scene.H.row(k) = std::sqrt(scene.lsfc[k]) *
                         small_scale(scene.geometry[k], config.ports, config.aperture_const).transpose();
    }

    // Activity set: K_a indices without replacement (partial Fisher-Yates).
    rng::Rng gen(rng::mix(seed, kActivityTag));
    std::vector<int> pool(config.users);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < config.active_users; ++i) {
        const auto j = i + static_cast<int>(gen.bounded(config.users - i));
        std::swap(pool[i], pool[j]);
    }
    scene.activity.assign(pool.begin(), pool.begin() + config.active_users);
    std::sort(scene.activity.begin(), scene.activity.end());

    scene.X = Eigen::MatrixXcd::Zero(config.users, config.ports);
    for (int k : scene.activity)
        scene.X.row(k) = scene.H.row(k);
    return scene;
}

double noise_variance_for_snr(double snr_linear, double mean_lsfc, int pilot_len) {
    if (!(snr_linear > 0.0) || !(mean_lsfc > 0.0) || pilot_len < 1)
        throw std::invalid_argument("snr calibration: snr, mean LSFC and G must be positive");
    return mean_lsfc / (pilot_len * snr_linear);
}

Eigen::MatrixXcd synthesize_rx(const PilotCodebook& codebook, const ChannelScene& scene,
                               double noise_var, std::uint64_t seed) {
    if (codebook.users() != scene.X.rows())
        throw std::invalid_argument("synthesize_rx: codebook/scene user count mismatch");
    if (noise_var < 0.0)
        throw std::invalid_argument("synthesize_rx: noise variance must be >= 0");
    Eigen::MatrixXcd Y = codebook.A * scene.X;
    if (noise_var > 0.0) {
        rng::Rng gen(seed);
        const double amp = std::sqrt(noise_var);
        for (Eigen::Index n = 0; n < Y.cols(); ++n)
            for (Eigen::Index g = 0; g < Y.rows(); ++g)
                Y(g, n) += amp * gen.cnormal();
    }
    return Y;
}

} // namespace fas::chan
