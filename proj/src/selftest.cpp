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

#include "fas/selftest.hpp"

#include "fas/amp.hpp"
#include "fas/baselines.hpp"
#include "fas/bg_prior.hpp"
#include "fas/channel.hpp"
#include "fas/reference_checks.hpp"
#include "fas/rng.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace fas::cli {

namespace {

double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

double rel_err(std::complex<double> got, std::complex<double> want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

SuiteResult quadrature_suite(double fault) {
    SuiteResult suite{"posterior-quadrature", true, ""};
    rng::Rng gen(20260107);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const std::complex<double> y = 3.0 * gen.cnormal();
        const std::complex<double> mu_r = 3.0 * gen.cnormal();
        const double phi_r = std::exp(gen.uniform(-1.5, 1.5));
        const double psi = std::exp(gen.uniform(-1.5, 1.5));
        const auto got = bg::output_posterior(y, mu_r, phi_r, psi);
        const auto want = ref::output_posterior_quadrature(y, mu_r, phi_r, psi);
        worst = std::max(worst, rel_err(got.mean + fault, want.mean));
        worst = std::max(worst, rel_err(got.var, want.var));

        bg::BGParams prior{gen.uniform(0.05, 0.95), 2.0 * gen.cnormal(),
                           std::exp(gen.uniform(-1.5, 1.5))};
        const std::complex<double> mu_x_hat = 3.0 * gen.cnormal();
        const double phi_x_hat = std::exp(gen.uniform(-1.5, 1.5));
        const auto post = bg::input_posterior(mu_x_hat, phi_x_hat, prior);
        const auto ref_post = ref::input_posterior_quadrature(mu_x_hat, phi_x_hat, prior.lambda,
                                                              prior.mean, prior.var);
        worst = std::max(worst, rel_err(post.mean + fault, ref_post.mean));
        worst = std::max(worst, rel_err(post.var, ref_post.var));
    }
    std::ostringstream detail;
    detail << "worst relative error " << worst << " (tolerance 1e-4)";
    suite.detail = detail.str();
    suite.passed = worst <= 1e-4;
    return suite;
}

SuiteResult em_argmin_suite() {
    SuiteResult suite{"em-variance-argmin", true, ""};
    rng::Rng gen(8315);
    const double lo = 4e-7, hi = 4e-3;
    const int points = 100000;
    const double log_step = std::log(hi / lo) / (points - 1);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        std::vector<double> pi(8), big_v(8);
        const double target = std::exp(gen.uniform(std::log(4e-6), std::log(4e-4)));
        for (int n = 0; n < 8; ++n) {
            pi[n] = gen.uniform(0.02, 1.0);
            big_v[n] = pi[n] * target * std::exp(gen.uniform(-0.5, 0.5));
        }
        double sum_pi = 0.0, sum_v = 0.0;
        for (int n = 0; n < 8; ++n) {
            sum_pi += pi[n];
            sum_v += big_v[n];
        }
        const double closed = sum_v / sum_pi;
        const double grid = ref::em_variance_grid_argmin(pi, big_v, lo, hi, points);
        worst = std::max(worst, std::abs(std::log(grid / closed)) / log_step);
    }
    std::ostringstream detail;
    detail << "worst offset " << worst << " grid steps (tolerance 1)";
    suite.detail = detail.str();
    suite.passed = worst <= 1.0;
    return suite;
}

SuiteResult transcription_suite() {
    SuiteResult suite{"tiny-instance-transcription", true, ""};
    rng::Rng gen(4242);
    Eigen::MatrixXcd A(2, 2);
    for (int g = 0; g < 2; ++g)
        for (int k = 0; k < 2; ++k)
            A(g, k) = gen.cnormal() / std::sqrt(2.0);
    A.col(0) /= A.col(0).norm();
    A.col(1) /= A.col(1).norm();
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2, 1);
    X(0, 0) = std::complex<double>(0.9, -0.4) * 1.5e-2;
    const double psi = 1e-5;
    Eigen::MatrixXcd Y = A * X;
    Y(0, 0) += std::sqrt(psi) * gen.cnormal();
    Y(1, 0) += std::sqrt(psi) * gen.cnormal();

    amp::AmpConfig config;
    config.variant = amp::Variant::geographical;
    config.phi_min = 1e-5;
    config.phi_max = 1e-3;
    config.max_iterations = 2;

    const auto want = ref::transcribe(Y, A, psi, 2, true, config.phi_min, config.phi_max);

    chan::PilotCodebook codebook{A};
    auto state = amp::init_state(Y, codebook, psi, config);
    double worst = rel_err(state.lambda(0), want.lambda1);
    worst = std::max(worst, rel_err(state.prior_var(0, 0), want.prior_var1(0, 0)));
    for (int t = 0; t < 2; ++t) {
        amp::IterationTrace tap;
        amp::amp_iteration(state, Y, codebook, psi, config, nullptr, &tap);
        amp::em_update(state, config, nullptr, &tap);
        const auto& sweep = want.sweeps[t];
        worst = std::max(worst, (tap.pi - sweep.pi).cwiseAbs().maxCoeff());
        worst = std::max(worst, rel_err(tap.mu_x_hat(0, 0), sweep.mu_x_hat(0, 0)));
        worst = std::max(worst, rel_err(tap.x_mean_new(0, 0), sweep.x_mean_new(0, 0)));
        worst = std::max(worst, rel_err(tap.prior_var_new(0, 0), sweep.prior_var_new(0, 0)));
        worst = std::max(worst, rel_err(tap.lambda_new(0), sweep.lambda_new(0)));
    }
    std::ostringstream detail;
    detail << "worst relative error " << worst << " (tolerance 1e-10)";
    suite.detail = detail.str();
    suite.passed = worst <= 1e-10;
    return suite;
}

SuiteResult somp_suite() {
    SuiteResult suite{"somp-noiseless-recovery", true, ""};
    int exact = 0;
    const int trials = 20;
    for (int seed = 1; seed <= trials; ++seed) {
        chan::SceneConfig config;
        config.users = 100;
        config.active_users = 5;
        config.pilot_len = 50;
        config.ports = 8;
        const auto scene = chan::assemble_scene(config, seed);
        const auto codebook = chan::build_codebook(config.pilot_len, config.users, seed + 1000);
        const auto Y = chan::synthesize_rx(codebook, scene, 0.0, 0);
        auto result = baseline::somp(Y, codebook, baseline::SompStop::k_known(5));
        std::sort(result.support.begin(), result.support.end());
        if (result.support == scene.activity)
            ++exact;
    }
    std::ostringstream detail;
    detail << exact << "/" << trials << " exact recoveries (need all)";
    suite.detail = detail.str();
    suite.passed = exact == trials;
    return suite;
}

} // namespace

std::vector<SuiteResult> run_selftest_suites(const SelftestOptions& options) {
    std::vector<SuiteResult> suites;
    suites.push_back(quadrature_suite(options.inject_fault));
    suites.push_back(em_argmin_suite());
    suites.push_back(transcription_suite());
    suites.push_back(somp_suite());
    return suites;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out) {
    const auto suites = run_selftest_suites(options);
    bool all_passed = true;
    for (const auto& suite : suites) {
        out << (suite.passed ? "[PASS] " : "[FAIL] ") << suite.name << ": " << suite.detail
            << '\n';
        all_passed = all_passed && suite.passed;
    }
    return all_passed ? 0 : 3;
}

} // namespace fas::cli
