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

#include "fas/reference_checks.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fas::ref {

namespace {

// ---------------------------------------------------------------- quadrature

struct Axis {
    double lo = 0.0;
    double step = 0.0;
    std::vector<double> node;
    std::vector<double> weight; // composite Simpson
};

// Locates the peak of the 1-D log-density sum by coarse scan, then lays a
// 401-node Simpson rule over peak +- 8 sigma_narrow.
Axis make_axis(double center_a, double var_a, double center_b, double var_b) {
    const double sd_a = std::sqrt(0.5 * var_a); // per real axis
    const double sd_b = std::sqrt(0.5 * var_b);
    const double lo = std::min(center_a, center_b) - 8.0 * std::max(sd_a, sd_b);
    const double hi = std::max(center_a, center_b) + 8.0 * std::max(sd_a, sd_b);

    auto log_density = [&](double t) {
        const double da = t - center_a;
        const double db = t - center_b;
        return -da * da / var_a - db * db / var_b;
    };
    const int scan = 4001;
    double best = lo, best_val = log_density(lo);
    for (int i = 1; i < scan; ++i) {
        const double t = lo + (hi - lo) * i / (scan - 1);
        const double v = log_density(t);
        if (v > best_val) {
            best_val = v;
            best = t;
        }
    }

    const double half = 8.0 * std::min(sd_a, sd_b);
    Axis axis;
    constexpr int n = 401; // odd => valid Simpson rule
    axis.lo = best - half;
    axis.step = 2.0 * half / (n - 1);
    axis.node.resize(n);
    axis.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        axis.node[i] = axis.lo + i * axis.step;
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        axis.weight[i] = w * axis.step / 3.0;
    }
    return axis;
}

struct RawMoments {
    double mass = 0.0;
    cxd first{0.0, 0.0};
    double second = 0.0;
};

// Tensor-grid integration of w(x) = exp(-|x-a|^2/va - |x-b|^2/vb) against
// {1, x, |x|^2}; `scale` multiplies the analytic normalizers back in.
RawMoments integrate_product(cxd a, double va, cxd b, double vb, double scale) {
    const Axis re = make_axis(a.real(), va, b.real(), vb);
    const Axis im = make_axis(a.imag(), va, b.imag(), vb);

    RawMoments acc;
    for (std::size_t i = 0; i < re.node.size(); ++i) {
        const double dre_a = re.node[i] - a.real();
        const double dre_b = re.node[i] - b.real();
        const double log_re = -dre_a * dre_a / va - dre_b * dre_b / vb;
        for (std::size_t j = 0; j < im.node.size(); ++j) {
            const double dim_a = im.node[j] - a.imag();
            const double dim_b = im.node[j] - b.imag();
            const double w =
                std::exp(log_re - dim_a * dim_a / va - dim_b * dim_b / vb) * re.weight[i] *
                im.weight[j];
            acc.mass += w;
            acc.first += w * cxd{re.node[i], im.node[j]};
            acc.second += w * (re.node[i] * re.node[i] + im.node[j] * im.node[j]);
        }
    }
    acc.mass *= scale;
    acc.first *= scale;
    acc.second *= scale;
    return acc;
}

double gauss_norm(double var) { return 1.0 / (std::numbers::pi * var); }

} // namespace

Moments output_posterior_quadrature(cxd y, cxd mu_r, double phi_r, double psi) {
    const double scale = gauss_norm(psi) * gauss_norm(phi_r);
    const auto raw = integrate_product(y, psi, mu_r, phi_r, scale);
    Moments m;
    m.mean = raw.first / raw.mass;
    m.var = raw.second / raw.mass - std::norm(m.mean);
    return m;
}

Moments input_posterior_quadrature(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu,
                                   double phi) {
    const double point_mass =
        (1.0 - lambda) * gauss_norm(phi_x_hat) * std::exp(-std::norm(mu_x_hat) / phi_x_hat);
    const double scale = lambda * gauss_norm(phi) * gauss_norm(phi_x_hat);
    const auto slab = integrate_product(mu, phi, mu_x_hat, phi_x_hat, scale);

    const double mass = point_mass + slab.mass;
    Moments m;
    m.mean = slab.first / mass; // the point mass sits at x = 0
    m.var = slab.second / mass - std::norm(m.mean);
    return m;
}

double zeta_quadrature(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu, double phi) {
    const double point_mass =
        (1.0 - lambda) * gauss_norm(phi_x_hat) * std::exp(-std::norm(mu_x_hat) / phi_x_hat);
    const double scale = lambda * gauss_norm(phi) * gauss_norm(phi_x_hat);
    return point_mass + integrate_product(mu, phi, mu_x_hat, phi_x_hat, scale).mass;
}

double zeta_closed_form(cxd mu_x_hat, double phi_x_hat, double lambda, cxd mu, double phi) {
    const double null_term = gauss_norm(phi_x_hat) * std::exp(-std::norm(mu_x_hat) / phi_x_hat);
    const double sum_var = phi_x_hat + phi;
    const double slab_term = gauss_norm(sum_var) * std::exp(-std::norm(mu_x_hat - mu) / sum_var);
    return (1.0 - lambda) * null_term + lambda * slab_term;
}

double em_variance_objective(const std::vector<double>& pi, const std::vector<double>& big_v,
                             double phi) {
    double acc = 0.0;
    for (std::size_t n = 0; n < pi.size(); ++n)
        acc += pi[n] * std::log(phi) + big_v[n] / phi;
    return acc;
}

double em_variance_grid_argmin(const std::vector<double>& pi, const std::vector<double>& big_v,
                               double lo, double hi, int points) {
    // The objective collapses to (sum pi) ln(phi) + (sum V)/phi; evaluating
    // the reduced form keeps the 1e5-point sweep cheap without changing it.
    double sum_pi = 0.0, sum_v = 0.0;
    for (std::size_t n = 0; n < pi.size(); ++n) {
        sum_pi += pi[n];
        sum_v += big_v[n];
    }
    const double log_lo = std::log(lo), log_hi = std::log(hi);
    double best_phi = lo, best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double phi = std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
        const double val = sum_pi * std::log(phi) + sum_v / phi;
        if (val < best_val) {
            best_val = val;
            best_phi = phi;
        }
    }
    return best_phi;
}

double sparsity_init_grid(int pilot_len, int users, int points) {
    const double ratio = static_cast<double>(users) / pilot_len;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= points; ++i) {
        const double a = 10.0 * i / points;
        const double cdf_neg = 0.5 * std::erfc(a / std::numbers::sqrt2);
        const double pdf = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
        const double q = (1.0 + a * a) * cdf_neg - a * pdf;
        const double val = (1.0 - 2.0 * ratio * q) / (1.0 + a * a - 2.0 * q);
        best = std::max(best, val);
    }
    return std::min(1.0, best / ratio);
}

// ------------------------------------------------- high-precision reference

namespace {

using hp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

struct hpc {
    hp re{0};
    hp im{0};
};

hpc operator+(const hpc& a, const hpc& b) { return {a.re + b.re, a.im + b.im}; }
hpc operator-(const hpc& a, const hpc& b) { return {a.re - b.re, a.im - b.im}; }
hpc operator*(const hpc& a, const hpc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
hpc operator*(const hp& s, const hpc& a) { return {s * a.re, s * a.im}; }
hpc operator/(const hpc& a, const hp& s) { return {a.re / s, a.im / s}; }
hp norm2(const hpc& a) { return a.re * a.re + a.im * a.im; }

hp hp_pi() { return boost::math::constants::pi<hp>(); }

hp cgauss(const hpc& x, const hpc& mu, const hp& var) {
    return exp(-norm2(x - mu) / var) / (hp_pi() * var);
}

cxd to_cxd(const hpc& a) {
    return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

hpc to_hpc(cxd a) { return {hp(a.real()), hp(a.imag())}; }

using HpMat = std::vector<std::vector<hp>>;
using HpcMat = std::vector<std::vector<hpc>>;

// Sparsity-rate maximization at full precision.
hp hp_sparsity_init(int pilot_len, int users) {
    const hp ratio = hp(users) / pilot_len;
    auto value = [&](const hp& a) {
        const hp cdf_neg = erfc(a / sqrt(hp(2))) / 2;
        const hp pdf = exp(-a * a / 2) / sqrt(2 * hp_pi());
        const hp q = (1 + a * a) * cdf_neg - a * pdf;
        return (1 - 2 * ratio * q) / (1 + a * a - 2 * q);
    };
    // Same declared search contract as the implementation (bracket shrunk to
    // |da| <= 1e-6), carried out in 200-digit arithmetic. Refining further
    // would diverge from the specified algorithm whenever the maximizer sits
    // at the bracket edge (G = K).
    const hp inv_phi = (sqrt(hp(5)) - 1) / 2;
    hp lo = hp(1) / 1000000, hi = 10;
    hp x1 = hi - inv_phi * (hi - lo);
    hp x2 = lo + inv_phi * (hi - lo);
    hp f1 = value(x1), f2 = value(x2);
    while (hi - lo > hp(1) / 1000000) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = value(x1);
        }
    }
    hp lambda = value((lo + hi) / 2) / ratio;
    if (lambda > 1)
        lambda = 1;
    return lambda;
}

} // namespace

TranscriptionResult transcribe(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& A,
                               double noise_var, int iterations, bool geographical,
                               double phi_min, double phi_max) {
    const int pilots = static_cast<int>(Y.rows());
    const int ports = static_cast<int>(Y.cols());
    const int users = static_cast<int>(A.cols());
    const hp psi(noise_var);
    const hp floor_hp(1e-18); // the exact double used by the implementation
    const hp hp_min(phi_min), hp_max(phi_max);

    const hp ceil_hp(1e18);
    auto clamp_var = [&](hp v) {
        if (geographical) {
            if (v < hp_min)
                return hp_min;
            if (v > hp_max)
                return hp_max;
            return v;
        }
        if (v < floor_hp)
            return floor_hp;
        return v > ceil_hp ? ceil_hp : v;
    };

    HpcMat a(pilots, std::vector<hpc>(users));
    HpMat a_abs2(pilots, std::vector<hp>(users));
    for (int g = 0; g < pilots; ++g)
        for (int k = 0; k < users; ++k) {
            a[g][k] = to_hpc(A(g, k));
            a_abs2[g][k] = norm2(a[g][k]);
        }
    HpcMat y(pilots, std::vector<hpc>(ports));
    for (int g = 0; g < pilots; ++g)
        for (int n = 0; n < ports; ++n)
            y[g][n] = to_hpc(Y(g, n));

    TranscriptionResult out;

    // I1
    const hp lambda1 = hp_sparsity_init(pilots, users);
    out.lambda1 = static_cast<double>(lambda1);
    std::vector<hp> lambda(users, lambda1);

    // I2 with sigma_n^2 == psi, applied per column
    hp weight_sum = 0;
    for (int g = 0; g < pilots; ++g)
        for (int k = 0; k < users; ++k)
            weight_sum += a_abs2[g][k];
    weight_sum *= lambda1;

    HpMat prior_var(users, std::vector<hp>(ports));
    HpcMat prior_mean(users, std::vector<hpc>(ports));
    for (int n = 0; n < ports; ++n) {
        hp energy = 0;
        for (int g = 0; g < pilots; ++g)
            energy += norm2(y[g][n]);
        energy -= hp(pilots) * psi;
        hp phi = energy > 0 ? energy / weight_sum : hp_min;
        if (phi < floor_hp)
            phi = floor_hp;
        if (geographical)
            phi = clamp_var(phi);
        for (int k = 0; k < users; ++k)
            prior_var[k][n] = phi;
    }

    // I3/I4: full-domain prior moments with zero prior mean
    HpcMat x_mean(users, std::vector<hpc>(ports));
    HpMat x_var(users, std::vector<hp>(ports));
    for (int k = 0; k < users; ++k)
        for (int n = 0; n < ports; ++n)
            x_var[k][n] = lambda1 * prior_var[k][n];

    out.prior_var1.resize(users, ports);
    out.x_mean1 = Eigen::MatrixXcd::Zero(users, ports);
    out.x_var1.resize(users, ports);
    for (int k = 0; k < users; ++k)
        for (int n = 0; n < ports; ++n) {
            out.prior_var1(k, n) = static_cast<double>(prior_var[k][n]);
            out.x_var1(k, n) = static_cast<double>(x_var[k][n]);
        }

    // I5
    HpcMat s_hat(pilots, std::vector<hpc>(ports));

    for (int t = 0; t < iterations; ++t) {
        TranscriptionSweep sweep;
        sweep.phi_r_hat.resize(pilots, ports);
        sweep.mu_r_hat.resize(pilots, ports);
        sweep.mu_r_tilde.resize(pilots, ports);
        sweep.phi_r_tilde.resize(pilots, ports);
        sweep.phi_s_hat.resize(pilots, ports);
        sweep.s_hat.resize(pilots, ports);
        sweep.phi_x_hat.resize(users, ports);
        sweep.mu_x_hat.resize(users, ports);
        sweep.gamma.resize(users, ports);
        sweep.nu.resize(users, ports);
        sweep.beta.resize(users, ports);
        sweep.pi.resize(users, ports);
        sweep.x_var_new.resize(users, ports);
        sweep.x_mean_new.resize(users, ports);
        sweep.lambda_new.resize(users);
        sweep.prior_mean_new.resize(users, ports);
        sweep.big_v.resize(users, ports);
        sweep.prior_var_new.resize(users, ports);

        HpMat phi_r_hat(pilots, std::vector<hp>(ports));
        HpcMat mu_r_hat(pilots, std::vector<hpc>(ports));
        HpMat phi_s(pilots, std::vector<hp>(ports));
        for (int g = 0; g < pilots; ++g)
            for (int n = 0; n < ports; ++n) {
                hp acc = 0;
                for (int k = 0; k < users; ++k)
                    acc += a_abs2[g][k] * x_var[k][n]; // A1
                if (acc < floor_hp)
                    acc = floor_hp;
                phi_r_hat[g][n] = acc;

                hpc m{};
                for (int k = 0; k < users; ++k)
                    m = m + a[g][k] * x_mean[k][n];
                m = m - phi_r_hat[g][n] * s_hat[g][n]; // A2
                mu_r_hat[g][n] = m;

                const hp denom = acc + psi;
                const hpc mu_t = (acc * y[g][n] + psi * mu_r_hat[g][n]) / denom; // A3 (mean)
                const hp phi_t = acc * psi / denom;                              // A4 (variance)
                hp ps = (acc - phi_t) / (acc * acc);                             // A5
                if (ps < floor_hp)
                    ps = floor_hp;
                phi_s[g][n] = ps;
                s_hat[g][n] = (mu_t - mu_r_hat[g][n]) / acc; // A6

                sweep.phi_r_hat(g, n) = static_cast<double>(acc);
                sweep.mu_r_hat(g, n) = to_cxd(mu_r_hat[g][n]);
                sweep.mu_r_tilde(g, n) = to_cxd(mu_t);
                sweep.phi_r_tilde(g, n) = static_cast<double>(phi_t);
                sweep.phi_s_hat(g, n) = static_cast<double>(ps);
                sweep.s_hat(g, n) = to_cxd(s_hat[g][n]);
            }

        HpMat pi_mat(users, std::vector<hp>(ports));
        HpcMat gamma_mat(users, std::vector<hpc>(ports));
        HpMat nu_mat(users, std::vector<hp>(ports));
        HpcMat x_mean_new(users, std::vector<hpc>(ports));
        HpMat x_var_new(users, std::vector<hp>(ports));
        for (int k = 0; k < users; ++k)
            for (int n = 0; n < ports; ++n) {
                hp acc = 0;
                for (int g = 0; g < pilots; ++g)
                    acc += a_abs2[g][k] * phi_s[g][n];
                if (acc < floor_hp)
                    acc = floor_hp;
                const hp phi_x_hat = 1 / acc; // A7

                hpc corr{};
                for (int g = 0; g < pilots; ++g) {
                    const hpc conj_a{a[g][k].re, -a[g][k].im};
                    corr = corr + conj_a * s_hat[g][n];
                }
                const hpc mu_x_hat = x_mean[k][n] + phi_x_hat * corr; // A8

                const hp inv_sum = 1 / phi_x_hat + 1 / prior_var[k][n];
                const hpc gamma = (mu_x_hat / phi_x_hat + prior_mean[k][n] / prior_var[k][n]) / inv_sum; // B1
                const hp nu = 1 / inv_sum;                                                              // B2
                const hp beta =
                    lambda[k] * cgauss(mu_x_hat, prior_mean[k][n], phi_x_hat + prior_var[k][n]); // B3
                const hp null_density = (1 - lambda[k]) * cgauss(hpc{}, mu_x_hat, phi_x_hat);
                const hp pi = beta / (beta + null_density); // B4

                const hp var_new = pi * (nu + norm2(gamma)) - norm2(pi * gamma); // A9
                const hpc mean_new = pi * gamma;                                 // A10

                pi_mat[k][n] = pi;
                gamma_mat[k][n] = gamma;
                nu_mat[k][n] = nu;
                x_mean_new[k][n] = mean_new;
                x_var_new[k][n] = var_new;

                sweep.phi_x_hat(k, n) = static_cast<double>(phi_x_hat);
                sweep.mu_x_hat(k, n) = to_cxd(mu_x_hat);
                sweep.gamma(k, n) = to_cxd(gamma);
                sweep.nu(k, n) = static_cast<double>(nu);
                sweep.beta(k, n) = static_cast<double>(beta);
                sweep.pi(k, n) = static_cast<double>(pi);
                sweep.x_var_new(k, n) = static_cast<double>(var_new);
                sweep.x_mean_new(k, n) = to_cxd(mean_new);
            }

        // EM step: E1 portwise average, E2 row-shared mean, E3 row-shared
        // variance from V floored at zero.
        for (int k = 0; k < users; ++k) {
            hp row_pi = 0;
            hpc row_weighted{};
            for (int n = 0; n < ports; ++n) {
                row_pi += pi_mat[k][n];
                row_weighted = row_weighted + pi_mat[k][n] * gamma_mat[k][n];
            }
            hp lambda_new = row_pi / ports;
            if (lambda_new > 1)
                lambda_new = 1;

            std::vector<hpc> mu_new(ports);
            for (int n = 0; n < ports; ++n)
                mu_new[n] = row_pi > 0 ? row_weighted / row_pi : prior_mean[k][n];

            hp row_v = 0;
            std::vector<hp> v_entries(ports);
            for (int n = 0; n < ports; ++n) {
                const hpc x_new = x_mean_new[k][n];
                const hp post_var =
                    pi_mat[k][n] * (nu_mat[k][n] + norm2(gamma_mat[k][n])) - norm2(x_new);
                hp v = norm2(x_new - prior_mean[k][n]) - post_var;
                if (v < 0)
                    v = 0;
                v_entries[n] = v;
                row_v += v;
            }
            const hp var_new = row_pi > 0 ? clamp_var(row_v / row_pi) : prior_var[k][0];

            lambda[k] = lambda_new;
            sweep.lambda_new(k) = static_cast<double>(lambda_new);
            for (int n = 0; n < ports; ++n) {
                prior_mean[k][n] = mu_new[n];
                prior_var[k][n] = var_new;
                sweep.prior_mean_new(k, n) = to_cxd(mu_new[n]);
                sweep.big_v(k, n) = static_cast<double>(v_entries[n]);
                sweep.prior_var_new(k, n) = static_cast<double>(var_new);
            }
        }

        x_mean = x_mean_new;
        x_var = x_var_new;
        out.sweeps.push_back(std::move(sweep));
    }
    return out;
}

Eigen::MatrixXcd ls_reference(const Eigen::MatrixXcd& a_sub, const Eigen::MatrixXcd& y) {
    const int rows = static_cast<int>(a_sub.rows());
    const int cols = static_cast<int>(a_sub.cols());
    const int rhs = static_cast<int>(y.cols());
    if (y.rows() != rows)
        throw std::invalid_argument("ls_reference: shape mismatch");

    // Normal equations M x = b at 200 digits with partial pivoting.
    HpcMat m(cols, std::vector<hpc>(cols));
    HpcMat b(cols, std::vector<hpc>(rhs));
    for (int i = 0; i < cols; ++i) {
        for (int j = 0; j < cols; ++j) {
            hpc acc{};
            for (int g = 0; g < rows; ++g) {
                const hpc conj_i{hp(a_sub(g, i).real()), hp(-a_sub(g, i).imag())};
                acc = acc + conj_i * to_hpc(a_sub(g, j));
            }
            m[i][j] = acc;
        }
        for (int j = 0; j < rhs; ++j) {
            hpc acc{};
            for (int g = 0; g < rows; ++g) {
                const hpc conj_i{hp(a_sub(g, i).real()), hp(-a_sub(g, i).imag())};
                acc = acc + conj_i * to_hpc(y(g, j));
            }
            b[i][j] = acc;
        }
    }

    for (int col = 0; col < cols; ++col) {
        int pivot = col;
        for (int r = col + 1; r < cols; ++r)
            if (norm2(m[r][col]) > norm2(m[pivot][col]))
                pivot = r;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        const hp piv_norm = norm2(m[col][col]);
        if (piv_norm == 0)
            throw std::invalid_argument("ls_reference: singular system");
        for (int r = 0; r < cols; ++r) {
            if (r == col)
                continue;
            const hpc conj_piv{m[col][col].re, -m[col][col].im};
            const hpc factor = (m[r][col] * conj_piv) / piv_norm;
            for (int c = col; c < cols; ++c)
                m[r][c] = m[r][c] - factor * m[col][c];
            for (int c = 0; c < rhs; ++c)
                b[r][c] = b[r][c] - factor * b[col][c];
        }
    }

    Eigen::MatrixXcd x(cols, rhs);
    for (int r = 0; r < cols; ++r) {
        const hp piv_norm = norm2(m[r][r]);
        const hpc conj_piv{m[r][r].re, -m[r][r].im};
        for (int c = 0; c < rhs; ++c)
            x(r, c) = to_cxd((b[r][c] * conj_piv) / piv_norm);
    }
    return x;
}

} // namespace fas::ref
