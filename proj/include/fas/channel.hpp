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

#ifndef FAS_CHANNEL_HPP
#define FAS_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace fas::chan {

using cxd = std::complex<double>;

// Geometry and fading parameters of one Monte-Carlo scene. Angles are in
// degrees, distances in meters. The aperture constant M fixes the array
// length as W = lambda * (M - 1) / 2, so only the ratio W/lambda enters the
// steering phases.
struct SceneConfig {
    int users = 1000;            // K
    int active_users = 150;      // K_a
    int pilot_len = 400;         // G
    int ports = 8;               // N_o
    int aperture_const = 64;     // M
    int paths = 3;               // L_s
    double rician_k = 2.0;       // K_r
    double d_ref = 50.0;
    double d_max = 500.0;
    double theta_min_deg = 30.0;
    double theta_max_deg = 150.0;
    double path_loss_exp = 2.0;  // f(d) = d^-exp

    void validate() const; // throws std::invalid_argument on violation

    double lsfc_floor() const;   // f(d_max), smallest large-scale coefficient
    double lsfc_ceil() const;    // f(d_ref), largest
    double mean_lsfc_analytic() const; // E f(d) under d ~ U[d_ref, d_max]
};

struct UserGeometry {
    double distance = 0.0;              // meters
    std::vector<double> aoas_deg;       // L_s angles of arrival
    std::vector<cxd> path_gains;        // L_s path strengths; [0] is LOS when K_r > 0
    double los_phase = 0.0;             // radians, used only when K_r > 0
};

struct PilotCodebook {
    Eigen::MatrixXcd A; // G x K, unit-norm columns

    int pilot_len() const { return static_cast<int>(A.rows()); }
    int users() const { return static_cast<int>(A.cols()); }
};

struct ChannelScene {
    std::vector<UserGeometry> geometry; // K entries
    Eigen::MatrixXcd H;                 // K x N_o, row k = sqrt(lsfc_k) * s_k
    std::vector<int> activity;          // K_a sorted user indices
    Eigen::MatrixXcd X;                 // K x N_o, row k = alpha_k * h_k
    std::vector<double> lsfc;           // K large-scale coefficients
};

// Pilot matrix with entries drawn i.i.d. CN(0, 1/G), each column then
// rescaled to exact unit 2-norm.
PilotCodebook build_codebook(int pilot_len, int users, std::uint64_t seed);

// Raw Gaussian draw used by build_codebook, before column normalization.
// Exposed so tests can check the pre-normalization column-norm statistics.
Eigen::MatrixXcd raw_codebook_matrix(int pilot_len, int users, std::uint64_t seed);

// Normalized array response: entry n (0-based) is
// exp(-j 2 pi n ((M-1)/2) cos(theta) / (N_o-1)) / sqrt(N_o).
// A single port has no spatial aperture; the phase term is then zero.
Eigen::VectorXcd steering_vector(double theta_deg, int ports, int aperture_const);

// Distances uniform on [d_ref, d_max], AoAs i.i.d. uniform on the configured
// sector, path strengths per the Rician split with total power Omega = N_o.
std::vector<UserGeometry> draw_geometry(const SceneConfig& config, std::uint64_t seed);

// Small-scale fading s_k = sum_l sigma_l * steering(theta_l).
Eigen::VectorXcd small_scale(const UserGeometry& geom, int ports, int aperture_const);

// Large-scale fading coefficient f(d) = d^-exponent.
double lsfc(double distance, double exponent);

// Full scene: geometry, channel rows, uniformly drawn activity set, and the
// row-sparse transmit matrix X.
ChannelScene assemble_scene(const SceneConfig& config, std::uint64_t seed);

// Noise variance that realizes SNR = mean_lsfc / (G * psi).
double noise_variance_for_snr(double snr_linear, double mean_lsfc, int pilot_len);

// Y = A X + Z with Z i.i.d. CN(0, noise_var); noise_var = 0 is exactly noiseless.
Eigen::MatrixXcd synthesize_rx(const PilotCodebook& codebook, const ChannelScene& scene,
                               double noise_var, std::uint64_t seed);

} // namespace fas::chan

#endif
