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

#include "fas/amp.hpp"

#include "fas/bg_prior.hpp"
#include "fas/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fas::amp {

using bg::kPhiFloor;

void AmpConfig::validate() const {
    if (max_iterations < 1)
        throw std::invalid_argument("amp config: max_iterations must be >= 1");
    if (!(phi_min > 0.0) || !(phi_min <= phi_max))
        throw std::invalid_argument("amp config: require 0 < phi_min <= phi_max");
    if (!(damping > 0.0) || damping > 1.0)
        throw std::invalid_argument("amp config: damping must lie in (0, 1]");
    if (!(conv_tol >= 0.0))
        throw std::invalid_argument("amp config: conv_tol must be >= 0");
    if (activity_rule == ActivityRule::top_ka && known_active < 0)
        throw std::invalid_argument("amp config: top_ka rule needs known_active >= 0");
}

namespace {

void ensure_finite(const Eigen::MatrixXd& m, const char* label) {
    if (!m.allFinite())
        throw std::runtime_error(std::string("non-finite value at line ") + label);
}

void ensure_finite(const Eigen::MatrixXcd& m, const char* label) {
    if (!m.allFinite())
        throw std::runtime_error(std::string("non-finite value at line ") + label);
}

struct LinearOperator {
    const Eigen::MatrixXcd& A;
    Eigen::MatrixXd abs2; // |A(g,k)|^2

    explicit LinearOperator(const Eigen::MatrixXcd& mat) : A(mat), abs2(mat.cwiseAbs2()) {}
};

void iteration_impl(AmpState& state, const Eigen::MatrixXcd& Y, const LinearOperator& op,
                    double noise_var, const AmpConfig& config, MacCounter* mac,
                    IterationTrace* tap) {
    const auto pilots = Y.rows();
    const auto ports = Y.cols();
    const auto users = state.x_mean.rows();

    // A1: pseudo-observation variances.
    Eigen::MatrixXd phi_r_hat = (op.abs2 * state.x_var).cwiseMax(kPhiFloor);
    ensure_finite(phi_r_hat, "A1");

    // A2: Onsager-corrected pseudo-observation means.
    Eigen::MatrixXcd mu_r_hat =
        op.A * state.x_mean - phi_r_hat.cast<cxd>().cwiseProduct(state.s_hat);
    ensure_finite(mu_r_hat, "A2");

    // A3/A4: Gaussian fusion with the observation.
    Eigen::MatrixXcd mu_r_tilde(pilots, ports);
    Eigen::MatrixXd phi_r_tilde(pilots, ports);
    for (Eigen::Index n = 0; n < ports; ++n) {
        for (Eigen::Index g = 0; g < pilots; ++g) {
            const auto post = bg::output_posterior(Y(g, n), mu_r_hat(g, n), phi_r_hat(g, n), noise_var);
            mu_r_tilde(g, n) = post.mean;
            phi_r_tilde(g, n) = post.var;
        }
    }
    ensure_finite(mu_r_tilde, "A3");
    ensure_finite(phi_r_tilde, "A4");

    // A5/A6: residual memory update.
    Eigen::MatrixXd phi_s_hat =
        ((phi_r_hat - phi_r_tilde).cwiseQuotient(phi_r_hat.cwiseProduct(phi_r_hat))).cwiseMax(kPhiFloor);
    ensure_finite(phi_s_hat, "A5");
    Eigen::MatrixXcd s_hat_new = (mu_r_tilde - mu_r_hat).cwiseQuotient(phi_r_hat.cast<cxd>());
    ensure_finite(s_hat_new, "A6");
    state.s_hat = s_hat_new;

    // A7: pseudo-channel variances.
    Eigen::MatrixXd phi_x_hat = (op.abs2.transpose() * phi_s_hat).cwiseMax(kPhiFloor).cwiseInverse();
    ensure_finite(phi_x_hat, "A7");

    // A8: pseudo-channel means.
    Eigen::MatrixXcd mu_x_hat =
        state.x_mean + phi_x_hat.cast<cxd>().cwiseProduct(op.A.adjoint() * state.s_hat);
    ensure_finite(mu_x_hat, "A8");

    // B1-B4 and A9/A10: per-entry BG denoiser.
    state.pi.resize(users, ports);
    state.gamma.resize(users, ports);
    state.nu.resize(users, ports);
    Eigen::MatrixXcd x_mean_new(users, ports);
    Eigen::MatrixXd x_var_new(users, ports);
    Eigen::MatrixXd beta(users, ports);
    for (Eigen::Index k = 0; k < users; ++k) {
        const double lam = state.lambda(k);
        for (Eigen::Index n = 0; n < ports; ++n) {
            bg::BGParams prior{lam, state.prior_mean(k, n), std::max(state.prior_var(k, n), kPhiFloor)};
            const auto post = bg::input_posterior(mu_x_hat(k, n), phi_x_hat(k, n), prior);
            state.pi(k, n) = post.pi;
            state.gamma(k, n) = post.gamma;
            state.nu(k, n) = post.nu;
            beta(k, n) = post.beta;
            x_mean_new(k, n) = post.mean;
            x_var_new(k, n) = post.var;
        }
    }
    ensure_finite(state.gamma, "B1");
    ensure_finite(state.nu, "B2");
    ensure_finite(beta, "B3");
    ensure_finite(state.pi, "B4");
    ensure_finite(x_var_new, "A9");
    ensure_finite(x_mean_new, "A10");

    if (config.damping < 1.0) {
        const double d = config.damping;
        x_mean_new = d * x_mean_new + (1.0 - d) * state.x_mean;
        x_var_new = d * x_var_new + (1.0 - d) * state.x_var;
    }
    state.x_mean = x_mean_new;
    state.x_var = x_var_new;

    if (mac) {
        const std::uint64_t kgn = static_cast<std::uint64_t>(users) * pilots * ports;
        const std::uint64_t gn = static_cast<std::uint64_t>(pilots) * ports;
        const std::uint64_t kn = static_cast<std::uint64_t>(users) * ports;
        mac->linear += 4 * kgn + 2 * gn + 2 * kn; // A1, A2(+Onsager), A7(+inverse), A8(+scale)
        mac->denoise += 4 * gn + 3 * gn + gn;     // A3/A4 fusion, A5, A6
        mac->denoise += 8 * kn;                   // B1-B4, A9, A10 scalar updates
    }

    if (tap) {
        tap->phi_r_hat = phi_r_hat;
        tap->mu_r_hat = mu_r_hat;
        tap->mu_r_tilde = mu_r_tilde;
        tap->phi_r_tilde = phi_r_tilde;
        tap->phi_s_hat = phi_s_hat;
        tap->s_hat = state.s_hat;
        tap->phi_x_hat = phi_x_hat;
        tap->mu_x_hat = mu_x_hat;
        tap->gamma = state.gamma;
        tap->nu = state.nu;
        tap->beta = beta;
        tap->pi = state.pi;
        tap->x_var_new = state.x_var;
        tap->x_mean_new = state.x_mean;
    }
}

} // namespace

AmpState init_state(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook,
                    double noise_var, const AmpConfig& config, MacCounter* mac) {
    config.validate();
    if (!(noise_var > 0.0))
        throw std::invalid_argument("amp init: noise variance must be positive");
    if (codebook.pilot_len() != Y.rows())
        throw std::invalid_argument("amp init: codebook/observation dimension mismatch");

    const int users = codebook.users();
    const int pilots = codebook.pilot_len();
    const auto ports = Y.cols();

    AmpState state;
    state.noise_var = noise_var;
    state.lambda = Eigen::VectorXd::Constant(users, bg::sparsity_init(pilots, users));

    // Per-column signal-energy estimate; the noise energy G psi is removed.
    const double weight_sum = codebook.A.cwiseAbs2().sum() * state.lambda(0);
    state.prior_var.resize(users, ports);
    for (Eigen::Index n = 0; n < ports; ++n) {
        const double energy = Y.col(n).squaredNorm() - pilots * noise_var;
        double phi = energy > 0.0 ? energy / weight_sum : config.phi_min;
        phi = std::max(phi, kPhiFloor);
        if (config.variant == Variant::geographical)
            phi = std::clamp(phi, config.phi_min, config.phi_max);
        state.prior_var.col(n).setConstant(phi);
    }
    state.prior_mean = Eigen::MatrixXcd::Zero(users, ports);

    // Prior moments with zero mean: estimate zero, spread lambda * phi.
    state.x_mean = Eigen::MatrixXcd::Zero(users, ports);
    state.x_var = state.lambda(0) * state.prior_var;
    state.s_hat = Eigen::MatrixXcd::Zero(pilots, ports);

    if (mac)
        mac->linear += static_cast<std::uint64_t>(pilots) * ports +
                       static_cast<std::uint64_t>(pilots) * users;
    return state;
}

void amp_iteration(AmpState& state, const Eigen::MatrixXcd& Y,
                   const chan::PilotCodebook& codebook, double noise_var,
                   const AmpConfig& config, MacCounter* mac, IterationTrace* tap) {
    LinearOperator op(codebook.A);
    iteration_impl(state, Y, op, noise_var, config, mac, tap);
}

void em_update(AmpState& state, const AmpConfig& config, MacCounter* mac, IterationTrace* tap) {
    const auto users = state.pi.rows();
    const auto ports = state.pi.cols();
    if (users == 0)
        throw std::logic_error("em update: no completed sweep in state");

    const Eigen::MatrixXcd prior_mean_old = state.prior_mean;

    // E1: per-user activity from the port average (or the printed /K form).
    const double divisor = config.lambda_over_users ? static_cast<double>(users)
                                                    : static_cast<double>(ports);
    Eigen::VectorXd row_pi = state.pi.rowwise().sum();
    Eigen::VectorXd lambda_new =
        (row_pi / divisor).cwiseMin(1.0).cwiseMax(0.0);

    // E2: prior means.
    Eigen::MatrixXcd prior_mean_new(users, ports);
    const Eigen::MatrixXcd weighted = state.pi.cast<cxd>().cwiseProduct(state.gamma);
    if (config.mu_update_printed) {
        // Printed form: sum over users per port, scaled by lambda_k K.
        const Eigen::RowVectorXcd col_sum = weighted.colwise().sum();
        for (Eigen::Index k = 0; k < users; ++k) {
            const double scale = lambda_new(k) * static_cast<double>(users);
            if (scale > 0.0)
                prior_mean_new.row(k) = col_sum / scale;
            else
                prior_mean_new.row(k) = prior_mean_old.row(k);
        }
    } else {
        // Portwise reading: pi-weighted row average, shared across the row.
        for (Eigen::Index k = 0; k < users; ++k) {
            if (row_pi(k) > 0.0)
                prior_mean_new.row(k).setConstant(weighted.row(k).sum() / row_pi(k));
            else
                prior_mean_new.row(k) = prior_mean_old.row(k);
        }
    }

    // E3: prior variances from V = |x_new - mu_old|^2 - phi_new, floored at 0.
    Eigen::MatrixXd big_v(users, ports);
    for (Eigen::Index k = 0; k < users; ++k) {
        for (Eigen::Index n = 0; n < ports; ++n) {
            const cxd x_new = state.pi(k, n) * state.gamma(k, n);
            const double post_var = state.pi(k, n) * (state.nu(k, n) + std::norm(state.gamma(k, n))) -
                                    std::norm(x_new);
            big_v(k, n) = std::max(0.0, std::norm(x_new - prior_mean_old(k, n)) - post_var);
        }
    }

    Eigen::MatrixXd prior_var_new(users, ports);
    auto apply_range = [&](double phi) {
        if (config.variant == Variant::geographical)
            return std::clamp(phi, config.phi_min, config.phi_max);
        return std::clamp(phi, kPhiFloor, bg::kPhiCeil);
    };
    if (config.variance_per_entry) {
        for (Eigen::Index k = 0; k < users; ++k)
            for (Eigen::Index n = 0; n < ports; ++n)
                prior_var_new(k, n) = apply_range(big_v(k, n));
    } else {
        for (Eigen::Index k = 0; k < users; ++k) {
            if (row_pi(k) > 0.0)
                prior_var_new.row(k).setConstant(apply_range(big_v.row(k).sum() / row_pi(k)));
            else
                prior_var_new.row(k) = state.prior_var.row(k); // no information
        }
    }

    state.lambda = lambda_new;
    state.prior_mean = prior_mean_new;
    state.prior_var = prior_var_new;

    if (mac) {
        const std::uint64_t kn = static_cast<std::uint64_t>(users) * ports;
        mac->em += 3 * kn + 2 * static_cast<std::uint64_t>(users);
    }

    if (tap) {
        tap->lambda_new = state.lambda;
        tap->prior_mean_new = state.prior_mean;
        tap->big_v = big_v;
        tap->prior_var_new = state.prior_var;
    }
}

EstimateResult run(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook,
                   double noise_var, const AmpConfig& config, const Eigen::MatrixXcd* x_true) {
    config.validate();
    MacCounter mac;
    AmpState state = init_state(Y, codebook, noise_var, config, &mac);
    LinearOperator op(codebook.A);

    const double truth_energy = x_true ? x_true->squaredNorm() : 0.0;

    EstimateResult result;
    result.mac_init = mac.total();
    for (int t = 0; t < config.max_iterations; ++t) {
        const Eigen::MatrixXcd x_prev = state.x_mean;
        iteration_impl(state, Y, op, noise_var, config, &mac, nullptr);
        em_update(state, config, &mac, nullptr);
        result.iterations_used = t + 1;

        const double change = (state.x_mean - x_prev).squaredNorm();
        const double prev_energy = x_prev.squaredNorm();
        const double rel_change = prev_energy > 0.0 ? change / prev_energy : change;

        double traced;
        if (x_true)
            traced = truth_energy > 0.0 ? (state.x_mean - *x_true).squaredNorm() / truth_energy
                                        : state.x_mean.squaredNorm();
        else
            traced = rel_change;
        result.nmse_trace.push_back(traced);
        result.mean_lambda_trace.push_back(state.lambda.mean());
        result.mean_phi_trace.push_back(state.prior_var.mean());
        result.mac_trace.push_back(mac.total());

        if (rel_change < config.conv_tol)
            break;
    }

    result.x_hat = state.x_mean;
    result.lambda = state.lambda;
    result.mac_count = mac.total();
    if (config.activity_rule == ActivityRule::top_ka)
        result.detected = detect_activity(result.lambda, ActivityRule::top_ka, config.known_active);
    else
        result.detected = detect_activity(result.lambda, ActivityRule::threshold, std::nullopt,
                                          config.activity_threshold);
    return result;
}

std::vector<int> detect_activity(const Eigen::VectorXd& lambda, ActivityRule rule,
                                 std::optional<int> k_a, double threshold) {
    const int users = static_cast<int>(lambda.size());
    std::vector<int> out;
    if (rule == ActivityRule::top_ka) {
        if (!k_a.has_value())
            throw std::invalid_argument("detect_activity: top_ka rule needs k_a");
        if (*k_a > users)
            throw std::invalid_argument("detect_activity: k_a exceeds user count");
        std::vector<int> order(users);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (lambda(a) != lambda(b))
                return lambda(a) > lambda(b);
            return a < b;
        });
        out.assign(order.begin(), order.begin() + *k_a);
        std::sort(out.begin(), out.end());
    } else {
        for (int k = 0; k < users; ++k)
            if (lambda(k) > threshold)
                out.push_back(k);
    }
    return out;
}

void write_iteration_trace_csv(const EstimateResult& result, std::ostream& out) {
    out << "t,nmse_proxy,mean_lambda,mean_phi,mac_cumulative\n";
    for (std::size_t t = 0; t < result.nmse_trace.size(); ++t) {
        out << (t + 1) << ',' << io::format_double(result.nmse_trace[t]) << ','
            << io::format_double(result.mean_lambda_trace[t]) << ','
            << io::format_double(result.mean_phi_trace[t]) << ',' << result.mac_trace[t] << '\n';
    }
}

} // namespace fas::amp
