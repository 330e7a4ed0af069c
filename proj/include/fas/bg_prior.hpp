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

#ifndef FAS_BG_PRIOR_HPP
#define FAS_BG_PRIOR_HPP

#include <complex>
#include <utility>

namespace fas::bg {

using cxd = std::complex<double>;

// Numerical guards applied to variances. The floor sits far below the
// smallest physical large-scale coefficient in play (4e-6); the ceiling
// keeps an unclamped EM variance finite when a starved row drives the
// update ratio toward overflow (the row then carries an effectively flat
// prior and stays inert).
inline constexpr double kPhiFloor = 1e-18;
inline constexpr double kPhiCeil = 1e18;

// Bernoulli-Gaussian prior of one entry:
// (1 - lambda) delta(x) + lambda CN(x; mean, var).
struct BGParams {
    double lambda = 0.0;
    cxd mean{0.0, 0.0};
    double var = 1.0;

    void validate() const; // throws std::invalid_argument
};

// Posterior of one entry under the BG prior and a Gaussian pseudo-channel
// CN(x; mu_x_hat, phi_x_hat). Again Bernoulli-Gaussian, with activity pi and
// slab CN(gamma, nu); beta is the unnormalized active-hypothesis density.
struct InputPosterior {
    double pi = 0.0;
    cxd gamma{0.0, 0.0};
    double nu = 0.0;
    double beta = 0.0;
    cxd mean{0.0, 0.0};
    double var = 0.0;
};

// Gaussian-times-Gaussian fusion of a noisy observation y with the
// pseudo-prior CN(mu_r, phi_r) under observation noise psi.
struct OutputPosterior {
    cxd mean{0.0, 0.0};
    double var = 0.0;
};

// ln CN(x; mu, var) for the circular complex Gaussian density.
double log_cgauss(cxd x, cxd mu, double var);

// mean = (phi_r y + psi mu_r) / (phi_r + psi), var = phi_r psi / (phi_r + psi).
OutputPosterior output_posterior(cxd y, cxd mu_r, double phi_r, double psi);

// Full BG posterior update. The activity odds are formed in the log domain
// so the result is valid even when the raw densities under/overflow.
InputPosterior input_posterior(cxd mu_x_hat, double phi_x_hat, const BGParams& prior);

// Full-domain prior moments: mean = lambda mu, var = lambda(phi + |mu|^2) - |lambda mu|^2.
std::pair<cxd, double> prior_moments(const BGParams& prior);

// Initial activity estimate from the (G, K) aspect ratio: the sparsity-rate
// bound lambda = (G/K) max_{a>0} of the phase-transition ratio, located by
// golden-section search on (0, 10] to |da| <= 1e-6, clipped to (0, 1].
double sparsity_init(int pilot_len, int users);

} // namespace fas::bg

#endif
