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
//
// Independent reference computations: brute-force quadrature, dense-grid
// searches, and a high-precision literal transcription of the estimator's
// update rules. Everything here is deliberately written from the defining
// formulas, not by calling the production code paths it is used to check.

#ifndef FAS_REFERENCE_CHECKS_HPP
#define FAS_REFERENCE_CHECKS_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fas::ref {

using cxd = std::complex<double>;

struct Moments {
    cxd mean{0.0, 0.0};
    double var = 0.0;
};

// Posterior moments of the noise-free output by 2-D Simpson quadrature of
// the normalized product density on a 401x401 grid (window located by a
// coarse scan, +-8 std of the narrower factor).
Moments output_posterior_quadrature(cxd y, cxd mu_r, double phi_r, double psi);

// Posterior moments of one BG-prior entry by quadrature of the slab product
// plus the explicit point-mass weight (1-lambda) CN(0; mu_x_hat, phi_x_hat).
Moments input_posterior_quadrature(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu,
                                   double phi);

// Normalizer of the BG posterior: quadrature of the defining integral and
// the two-term closed form.
double zeta_quadrature(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu, double phi);
double zeta_closed_form(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu, double phi);

// EM variance surrogate sum_n [pi_n ln(phi) + V_n / phi].
double em_variance_objective(const std::vector<double>& pi, const std::vector<double>& big_v,
                             double phi);

// Argmin of the surrogate over a log-spaced grid of `points` values spanning
// [lo, hi]; ties resolve to the smaller grid value.
double em_variance_grid_argmin(const std::vector<double>& pi, const std::vector<double>& big_v,
                               double lo, double hi, int points);

// Dense-grid evaluation of the sparsity-rate initializer over a in (0, 10].
double sparsity_init_grid(int pilot_len, int users, int points);

// Literal transcription of the estimator at 200 decimal digits. Matches the
// resolved update rules: portwise activity average, row-shared prior mean
// and variance, variance clamped (geographical) or floored (conventional).
struct TranscriptionSweep {
    Eigen::MatrixXd phi_r_hat, phi_r_tilde, phi_s_hat, phi_x_hat;
    Eigen::MatrixXcd mu_r_hat, mu_r_tilde, s_hat, mu_x_hat;
    Eigen::MatrixXcd gamma;
    Eigen::MatrixXd nu, beta, pi;
    Eigen::MatrixXd x_var_new;
    Eigen::MatrixXcd x_mean_new;
    Eigen::VectorXd lambda_new;
    Eigen::MatrixXcd prior_mean_new;
    Eigen::MatrixXd big_v, prior_var_new;
};

struct TranscriptionResult {
    double lambda1 = 0.0;
    Eigen::MatrixXd prior_var1; // per entry after I2 (with fallback/clamp)
    Eigen::MatrixXcd x_mean1;
    Eigen::MatrixXd x_var1;
    std::vector<TranscriptionSweep> sweeps;
};

TranscriptionResult transcribe(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& A,
                               double noise_var, int iterations, bool geographical,
                               double phi_min, double phi_max);

// Minimum-norm least squares at 200 digits via pivoted normal equations
// (reference only; the production path never forms normal equations).
Eigen::MatrixXcd ls_reference(const Eigen::MatrixXcd& a_sub, const Eigen::MatrixXcd& y);

} // namespace fas::ref

#endif
