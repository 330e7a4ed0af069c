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

#include "fas/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fas::baseline {

SompResult somp(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook, SompStop stop) {
    const int pilots = codebook.pilot_len();
    const int users = codebook.users();
    const auto ports = Y.cols();
    if (Y.rows() != pilots)
        throw std::invalid_argument("somp: observation/codebook dimension mismatch");
    if (stop.kind == SompStop::Kind::k_known && (stop.k_a < 0 || stop.k_a > pilots))
        throw std::invalid_argument("somp: k_known needs 0 <= K_a <= G");

    SompResult result;
    Eigen::MatrixXcd residual = Y;
    Eigen::MatrixXcd basis(pilots, 0); // orthonormal span of the selected columns
    std::vector<char> selected(users, 0);

    const int max_steps = stop.kind == SompStop::Kind::k_known ? stop.k_a : users;
    const std::uint64_t kgn = static_cast<std::uint64_t>(users) * pilots * ports;

    for (int step = 0; step < max_steps; ++step) {
        if (stop.kind == SompStop::Kind::residual_tol && residual.norm() <= stop.tol)
            break;

        // Pooled correlation scores across ports.
        const Eigen::MatrixXcd corr = codebook.A.adjoint() * residual;
        result.mac_count += kgn;
        int best = -1;
        double best_score = -1.0;
        for (int k = 0; k < users; ++k) {
            if (selected[k])
                continue;
            const double score = corr.row(k).squaredNorm();
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        if (best < 0)
            break;

        // Two-pass Gram-Schmidt against the current basis.
        Eigen::VectorXcd q = codebook.A.col(best);
        const int span = static_cast<int>(basis.cols());
        for (int pass = 0; pass < 2 && span > 0; ++pass) {
            q -= basis * (basis.adjoint() * q);
            result.mac_count += 2ull * pilots * span;
        }
        const double qn = q.norm();
        if (qn <= 1e-12) {
            result.rank_deficient = true;
            break;
        }
        q /= qn;

        selected[best] = 1;
        result.support.push_back(best);
        basis.conservativeResize(Eigen::NoChange, span + 1);
        basis.col(span) = q;

        residual -= q * (q.adjoint() * residual);
        result.mac_count += 2ull * pilots * ports;
        result.residual_norms.push_back(residual.norm());
    }
    return result;
}

LsResult ls_estimate(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook,
                     const std::vector<int>& support) {
    const int pilots = codebook.pilot_len();
    const auto ports = Y.cols();
    const int span = static_cast<int>(support.size());
    if (span > pilots)
        throw std::invalid_argument("ls_estimate: support larger than pilot length");

    LsResult result;
    result.X = Eigen::MatrixXcd::Zero(codebook.users(), ports);
    if (span == 0)
        return result;

    Eigen::MatrixXcd sub(pilots, span);
    for (int i = 0; i < span; ++i)
        sub.col(i) = codebook.A.col(support[i]);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sub);
    result.rank_deficient = cod.rank() < span;
    const Eigen::MatrixXcd solution = cod.solve(Y);
    for (int i = 0; i < span; ++i)
        result.X.row(support[i]) = solution.row(i);

    result.mac_count += static_cast<std::uint64_t>(pilots) * span * span +
                        static_cast<std::uint64_t>(pilots) * span * ports +
                        static_cast<std::uint64_t>(span) * span * ports;
    return result;
}

AoaDictionary build_aoa_dictionary(int samples, int ports, int aperture_const,
                                   double theta_min_deg, double theta_max_deg) {
    if (samples < 2)
        throw std::invalid_argument("aoa dictionary: need at least two samples");
    AoaDictionary dict;
    dict.theta_min_deg = theta_min_deg;
    dict.theta_max_deg = theta_max_deg;
    dict.D.resize(ports, samples);
    const double step = (theta_max_deg - theta_min_deg) / (samples - 1);
    for (int j = 0; j < samples; ++j)
        dict.D.col(j) = chan::steering_vector(theta_min_deg + j * step, ports, aperture_const);
    return dict;
}

Eigen::MatrixXcd aoa_codebook_estimate(const Eigen::MatrixXcd& Y,
                                       const chan::PilotCodebook& codebook,
                                       const std::vector<int>& support,
                                       const AoaDictionary& dict, int sparsity,
                                       std::uint64_t* mac_count) {
    if (sparsity < 1 || sparsity > dict.samples())
        throw std::invalid_argument("aoa estimate: sparsity must lie in [1, N_s]");

    LsResult ls = ls_estimate(Y, codebook, support);
    std::uint64_t macs = ls.mac_count;
    const auto ports = Y.cols();

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(codebook.users(), ports);
    for (int user : support) {
        const Eigen::VectorXcd row = ls.X.row(user).transpose();
        Eigen::VectorXcd res = row;
        std::vector<int> picked;
        std::vector<char> used(dict.samples(), 0);
        Eigen::VectorXcd coeff;
        Eigen::MatrixXcd atoms(ports, 0);

        for (int it = 0; it < sparsity; ++it) {
            if (res.norm() <= 1e-14 * std::max(1.0, row.norm()))
                break;
            int best = -1;
            double best_score = -1.0;
            const Eigen::VectorXcd corr = dict.D.adjoint() * res;
            macs += static_cast<std::uint64_t>(dict.samples()) * ports;
            for (int j = 0; j < dict.samples(); ++j) {
                if (used[j])
                    continue;
                const double score = std::norm(corr(j));
                if (score > best_score) {
                    best_score = score;
                    best = j;
                }
            }
            if (best < 0)
                break;
            used[best] = 1;
            picked.push_back(best);
            atoms.conservativeResize(Eigen::NoChange, atoms.cols() + 1);
            atoms.col(atoms.cols() - 1) = dict.D.col(best);

            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(atoms);
            coeff = cod.solve(row);
            res = row - atoms * coeff;
            macs += static_cast<std::uint64_t>(ports) * picked.size() * picked.size() +
                    static_cast<std::uint64_t>(ports) * picked.size();
        }
        if (!picked.empty())
            out.row(user) = (atoms * coeff).transpose();
    }
    if (mac_count)
        *mac_count = macs;
    return out;
}

} // namespace fas::baseline
