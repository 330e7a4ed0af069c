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

#include "fas/bg_prior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fas::bg {

void BGParams::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("bg prior: lambda must lie in [0, 1]");
    if (!(var > 0.0))
        throw std::invalid_argument("bg prior: variance must be positive");
}

double log_cgauss(cxd x, cxd mu, double var) {
    return -std::norm(x - mu) / var - std::log(std::numbers::pi * var);
}

OutputPosterior output_posterior(cxd y, cxd mu_r, double phi_r, double psi) {
    if (!(phi_r > 0.0) || !(psi > 0.0))
        throw std::invalid_argument("output posterior: variances must be positive");
    const double denom = phi_r + psi;
    return OutputPosterior{(phi_r * y + psi * mu_r) / denom, phi_r * psi / denom};
}

InputPosterior input_posterior(cxd mu_x_hat, double phi_x_hat, const BGParams& prior) {
    prior.validate();
    if (!(phi_x_hat > 0.0))
        throw std::invalid_argument("input posterior: pseudo-channel variance must be positive");

    InputPosterior post;
    const double denom = phi_x_hat + prior.var;
    // Convex-combination form: stays finite even when one variance is
    // astronomically larger than the other (unclamped EM can produce that).
    const double weight = prior.var / denom;
    post.gamma = weight * mu_x_hat + (1.0 - weight) * prior.mean;
    post.nu = phi_x_hat * weight;

    const double log_active = std::log(prior.lambda) + log_cgauss(mu_x_hat, prior.mean, denom);
    post.beta = prior.lambda > 0.0 ? std::exp(log_active) : 0.0;

    if (prior.lambda <= 0.0) {
        post.pi = 0.0;
    } else if (prior.lambda >= 1.0) {
        post.pi = 1.0;
    } else {
        const double log_null =
            std::log1p(-prior.lambda) + log_cgauss(cxd{0.0, 0.0}, mu_x_hat, phi_x_hat);
        const double d = log_active - log_null;
        if (d >= 0.0) {
            post.pi = 1.0 / (1.0 + std::exp(-d));
        } else {
            const double e = std::exp(d);
            post.pi = e / (1.0 + e);
        }
    }

    post.mean = post.pi * post.gamma;
    // Equals pi (nu + |gamma|^2) - |pi gamma|^2 but cannot go negative.
    post.var = post.pi * post.nu + post.pi * (1.0 - post.pi) * std::norm(post.gamma);
    return post;
}

std::pair<cxd, double> prior_moments(const BGParams& prior) {
    prior.validate();
    const cxd mean = prior.lambda * prior.mean;
    const double second = prior.lambda * (prior.var + std::norm(prior.mean));
    return {mean, second - std::norm(mean)};
}

namespace {

// (1 + a^2) Phi(-a) - a N(a; 0, 1)
double tail_term(double a) {
    const double cdf_neg = 0.5 * std::erfc(a / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    return (1.0 + a * a) * cdf_neg - a * pdf;
}

double transition_ratio(double a, double users_over_pilots) {
    const double q = tail_term(a);
    const double num = 1.0 - 2.0 * users_over_pilots * q;
    const double den = 1.0 + a * a - 2.0 * q;
    return num / den;
}

} // namespace

double sparsity_init(int pilot_len, int users) {
    if (pilot_len < 1 || users < 1)
        throw std::invalid_argument("sparsity init: G and K must be >= 1");
    const double ratio = static_cast<double>(users) / pilot_len;

    // Golden-section maximization; the maximand is unimodal on the bracket.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 1e-6, hi = 10.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = transition_ratio(x1, ratio);
    double f2 = transition_ratio(x2, ratio);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = transition_ratio(x2, ratio);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = transition_ratio(x1, ratio);
        }
    }
    const double best = transition_ratio(0.5 * (lo + hi), ratio);
    const double lambda = best / ratio; // (G/K) * max ratio
    return std::min(1.0, std::max(lambda, std::numeric_limits<double>::min()));
}

} // namespace fas::bg
