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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

using namespace fas;

TEST_CASE("codebook: single entry has modulus one") {
    const auto cb = chan::build_codebook(1, 1, 7);
    CHECK(std::abs(std::abs(cb.A(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("codebook: full-size columns are unit norm") {
    const auto cb = chan::build_codebook(400, 1000, 42);
    for (int k = 0; k < 1000; ++k)
        CHECK(std::abs(cb.A.col(k).squaredNorm() - 1.0) <= 1e-12);
}

TEST_CASE("codebook: raw column norms concentrate at 1 with variance 1/G") {
    // Sample-moment oracle over the unnormalized CN(0, 1/G) draw.
    const int pilots = 400, users = 1000;
    const auto raw = chan::raw_codebook_matrix(pilots, users, 91);
    double mean = 0.0, second = 0.0;
    for (int k = 0; k < users; ++k) {
        const double e = raw.col(k).squaredNorm();
        mean += e;
        second += e * e;
    }
    mean /= users;
    second /= users;
    const double variance = second - mean * mean;
    CHECK(std::abs(mean - 1.0) < 0.02);
    CHECK(std::abs(variance - 1.0 / pilots) < 0.25 / pilots);
}

TEST_CASE("codebook: invalid dimensions throw") {
    CHECK_THROWS_AS(chan::build_codebook(0, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(chan::build_codebook(5, 0, 1), std::invalid_argument);
}

TEST_CASE("steering: broadside gives constant entries") {
    const auto s = chan::steering_vector(90.0, 8, 64);
    for (int n = 0; n < 8; ++n) {
        CHECK(s(n).real() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-13));
        CHECK(std::abs(s(n).imag()) < 1e-13); // cos(pi/2) is ~6e-17, not exactly 0
    }
}

TEST_CASE("steering: two-port value frozen from direct evaluation") {
    // Half-aperture ratio 31.5, cos(60 deg) = 0.5, phase -31.5 pi == +pi/2.
    const auto s = chan::steering_vector(60.0, 2, 64);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(s(0).real() == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(std::abs(s(0).imag()) < 1e-12);
    CHECK(std::abs(s(1).real()) < 1e-9);
    CHECK(s(1).imag() == doctest::Approx(inv_sqrt2).epsilon(1e-9));
}

TEST_CASE("steering: always unit norm, single port bypasses the aperture") {
    rng::Rng gen(5);
    for (int i = 0; i < 50; ++i) {
        const double theta = gen.uniform(0.0, 180.0);
        CHECK(std::abs(chan::steering_vector(theta, 8, 64).squaredNorm() - 1.0) <= 1e-12);
        const auto single = chan::steering_vector(theta, 1, 64);
        CHECK(single(0) == std::complex<double>(1.0, 0.0));
    }
}

TEST_CASE("geometry: power split identity on configured variances") {
    chan::SceneConfig config;
    config.users = 1;
    config.active_users = 1;
    config.ports = 8;
    config.rician_k = 2.0;
    config.paths = 3;
    // |los|^2 + (L_s - 1) * nlos_var must equal Omega = N_o analytically.
    const double omega = 8.0;
    const double los_power = config.rician_k * omega / (config.rician_k + 1.0);
    const double nlos_var = omega / ((config.rician_k + 1.0) * (config.paths - 1));
    CHECK(los_power + (config.paths - 1) * nlos_var == doctest::Approx(omega).epsilon(1e-14));

    const auto users = chan::draw_geometry(config, 3);
    CHECK(std::norm(users[0].path_gains[0]) == doctest::Approx(los_power).epsilon(1e-12));
}

TEST_CASE("geometry: sample moments of the Rician split") {
    chan::SceneConfig config;
    config.users = 100000;
    config.ports = 8;
    config.rician_k = 2.0;
    config.paths = 3;
    const auto users = chan::draw_geometry(config, 11);

    double nlos1 = 0.0, nlos2 = 0.0;
    int los_dominant = 0;
    for (const auto& u : users) {
        CHECK(std::norm(u.path_gains[0]) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
        nlos1 += std::norm(u.path_gains[1]);
        nlos2 += std::norm(u.path_gains[2]);
        if (std::abs(u.path_gains[0]) > std::abs(u.path_gains[1]) &&
            std::abs(u.path_gains[0]) > std::abs(u.path_gains[2]))
            ++los_dominant;
    }
    nlos1 /= config.users;
    nlos2 /= config.users;
    CHECK(std::abs(nlos1 - 4.0 / 3.0) < 0.02 * (4.0 / 3.0));
    CHECK(std::abs(nlos2 - 4.0 / 3.0) < 0.02 * (4.0 / 3.0));
    CHECK(los_dominant >= static_cast<int>(0.95 * config.users));
}

TEST_CASE("geometry: NLOS-only total power is Omega = N_o") {
    chan::SceneConfig config;
    config.users = 100000;
    config.ports = 8;
    config.rician_k = 0.0;
    config.paths = 3;
    const auto users = chan::draw_geometry(config, 17);
    double total = 0.0;
    for (const auto& u : users)
        for (const auto& g : u.path_gains)
            total += std::norm(g);
    total /= config.users;
    CHECK(std::abs(total - 8.0) < 0.02 * 8.0);
}

TEST_CASE("geometry: bounds respected") {
    chan::SceneConfig config;
    config.users = 2000;
    const auto users = chan::draw_geometry(config, 23);
    for (const auto& u : users) {
        CHECK(u.distance >= config.d_ref);
        CHECK(u.distance <= config.d_max);
        for (double th : u.aoas_deg) {
            CHECK(th >= config.theta_min_deg);
            CHECK(th <= config.theta_max_deg);
        }
    }
}

TEST_CASE("small_scale: single path at broadside") {
    chan::UserGeometry geom;
    geom.aoas_deg = {90.0};
    geom.path_gains = {std::sqrt(8.0)};
    const auto s = chan::small_scale(geom, 8, 64);
    for (int n = 0; n < 8; ++n)
        CHECK(s(n).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.squaredNorm() == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("small_scale: linear in the path gains") {
    chan::UserGeometry geom;
    geom.aoas_deg = {72.0, 72.0};
    geom.path_gains = {1.0, 1.0};
    const auto sum = chan::small_scale(geom, 8, 64);
    const auto one = chan::steering_vector(72.0, 8, 64);
    CHECK((sum - 2.0 * one).norm() < 1e-14);
}

TEST_CASE("small_scale: mean energy matches the port count") {
    chan::SceneConfig config;
    config.users = 10000;
    config.ports = 8;
    config.rician_k = 0.0;
    config.paths = 3;
    const auto users = chan::draw_geometry(config, 31);
    double energy = 0.0;
    for (const auto& u : users)
        energy += chan::small_scale(u, config.ports, config.aperture_const).squaredNorm();
    energy /= config.users;
    CHECK(std::abs(energy - 8.0) < 0.03 * 8.0);
}

TEST_CASE("lsfc: values and domain") {
    CHECK(chan::lsfc(50.0, 2.0) == doctest::Approx(4e-4).epsilon(1e-14));
    CHECK(chan::lsfc(500.0, 2.0) == doctest::Approx(4e-6).epsilon(1e-14));
    CHECK(chan::lsfc(1.0, 3.7) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(chan::lsfc(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(chan::lsfc(-2.0, 2.0), std::invalid_argument);
}

TEST_CASE("scene: row sparsity matches the activity set") {
    chan::SceneConfig config;
    config.users = 200;
    config.active_users = 30;
    config.pilot_len = 50;
    const auto scene = chan::assemble_scene(config, 3);
    CHECK(scene.activity.size() == 30);
    const std::set<int> active(scene.activity.begin(), scene.activity.end());
    int zero_rows = 0;
    for (int k = 0; k < config.users; ++k) {
        if (active.count(k)) {
            CHECK((scene.X.row(k) - scene.H.row(k)).norm() == 0.0);
        } else {
            CHECK(scene.X.row(k).norm() == 0.0);
            ++zero_rows;
        }
    }
    CHECK(zero_rows == config.users - config.active_users);
}

TEST_CASE("scene: everyone active / nobody active") {
    chan::SceneConfig config;
    config.users = 40;
    config.active_users = 40;
    auto scene = chan::assemble_scene(config, 9);
    for (int k = 0; k < 40; ++k)
        CHECK(scene.X.row(k).norm() > 0.0);

    config.active_users = 0;
    scene = chan::assemble_scene(config, 9);
    CHECK(scene.X.norm() == 0.0);
}

TEST_CASE("scene: channel rows carry the large-scale coefficient") {
    chan::SceneConfig config;
    config.users = 10000;
    config.ports = 8;
    const auto scene = chan::assemble_scene(config, 13);
    // Sample mean of ||h_k||^2 / lsfc_k approximates N_o.
    double acc = 0.0;
    for (int k = 0; k < config.users; ++k)
        acc += scene.H.row(k).squaredNorm() / scene.lsfc[k];
    acc /= config.users;
    CHECK(std::abs(acc - 8.0) < 0.03 * 8.0);
}

TEST_CASE("scene: pure function of (config, seed)") {
    chan::SceneConfig config;
    config.users = 100;
    config.active_users = 10;
    const auto a = chan::assemble_scene(config, 77);
    const auto b = chan::assemble_scene(config, 77);
    CHECK(a.X == b.X);
    CHECK(a.activity == b.activity);
    const auto c = chan::assemble_scene(config, 78);
    CHECK(a.X != c.X);
}

TEST_CASE("scene config: invariant violations throw") {
    chan::SceneConfig config;
    config.active_users = config.users + 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.d_ref = 600.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.rician_k = 1.0;
    config.paths = 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("noise variance: inverts the SNR definition") {
    CHECK(chan::noise_variance_for_snr(1.0, 4e-4, 400) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(chan::noise_variance_for_snr(1e12, 4e-4, 400) < 1e-15);
    const double snr = std::pow(10.0, -14.0 / 10.0);
    const double mean_lsfc = 3.1e-5;
    CHECK(chan::noise_variance_for_snr(snr, mean_lsfc, 400) ==
          doctest::Approx(mean_lsfc * std::pow(10.0, 1.4) / 400.0).epsilon(1e-12));
}

TEST_CASE("synthesize: noiseless output is the exact product") {
    chan::SceneConfig config;
    config.users = 50;
    config.active_users = 5;
    config.pilot_len = 20;
    const auto scene = chan::assemble_scene(config, 5);
    const auto cb = chan::build_codebook(20, 50, 6);
    const auto y1 = chan::synthesize_rx(cb, scene, 0.0, 123);
    const auto y2 = chan::synthesize_rx(cb, scene, 0.0, 456);
    CHECK(y1 == y2);
    CHECK((y1 - cb.A * scene.X).norm() == 0.0);
}

TEST_CASE("synthesize: noise sample variance matches psi") {
    chan::SceneConfig config;
    config.users = 10;
    config.active_users = 0; // X = 0, so Y is pure noise
    config.pilot_len = 10000;
    config.ports = 10;
    const auto scene = chan::assemble_scene(config, 1);
    const auto cb = chan::build_codebook(config.pilot_len, config.users, 2);
    const auto y = chan::synthesize_rx(cb, scene, 1.0, 3);
    const double var = y.squaredNorm() / (y.rows() * y.cols());
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("synthesize: scalar case and dimension guard") {
    chan::SceneConfig config;
    config.users = 1;
    config.active_users = 1;
    config.pilot_len = 1;
    config.ports = 1;
    const auto scene = chan::assemble_scene(config, 4);
    const auto cb = chan::build_codebook(1, 1, 5);
    const auto y = chan::synthesize_rx(cb, scene, 0.0, 0);
    CHECK(std::abs(y(0, 0) - cb.A(0, 0) * scene.H(0, 0)) < 1e-15);

    const auto wrong = chan::build_codebook(1, 2, 5);
    CHECK_THROWS_AS(chan::synthesize_rx(wrong, scene, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(chan::synthesize_rx(cb, scene, -1.0, 0), std::invalid_argument);
}
