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

#ifndef FAS_BASELINES_HPP
#define FAS_BASELINES_HPP

#include "fas/channel.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace fas::baseline {

// Angular dictionary: steering vectors at uniformly spaced angles.
struct AoaDictionary {
    Eigen::MatrixXcd D; // N_o x N_s, unit-norm columns
    double theta_min_deg = 0.0;
    double theta_max_deg = 0.0;

    int samples() const { return static_cast<int>(D.cols()); }
    double spacing_deg() const {
        return (theta_max_deg - theta_min_deg) / (samples() - 1);
    }
};

struct SompStop {
    enum class Kind { k_known, residual_tol };
    Kind kind = Kind::k_known;
    int k_a = 0;
    double tol = 0.0;

    static SompStop k_known(int k_a) { return {Kind::k_known, k_a, 0.0}; }
    static SompStop residual_tol(double tol) { return {Kind::residual_tol, 0, tol}; }
};

struct SompResult {
    std::vector<int> support;           // selection order
    std::vector<double> residual_norms; // Frobenius norm after each selection
    bool rank_deficient = false;        // stopped early on a dependent column
    std::uint64_t mac_count = 0;
};

struct LsResult {
    Eigen::MatrixXcd X; // K x N_o, zero off the support
    bool rank_deficient = false;
    std::uint64_t mac_count = 0;
};

// Simultaneous orthogonal matching pursuit over the N_o port measurements:
// scores are the row norms of A^H R, the residual is refreshed by exact
// orthogonal projection of Y onto the selected columns.
SompResult somp(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook, SompStop stop);

// Minimum-norm least squares on the selected columns (rank-revealing
// orthogonal factorization, no normal equations).
LsResult ls_estimate(const Eigen::MatrixXcd& Y, const chan::PilotCodebook& codebook,
                     const std::vector<int>& support);

AoaDictionary build_aoa_dictionary(int samples, int ports, int aperture_const,
                                   double theta_min_deg, double theta_max_deg);

// LS rows on the support, then each detected user's row is re-expressed with
// a greedy pursuit of `sparsity` dictionary angles.
Eigen::MatrixXcd aoa_codebook_estimate(const Eigen::MatrixXcd& Y,
                                       const chan::PilotCodebook& codebook,
                                       const std::vector<int>& support,
                                       const AoaDictionary& dict, int sparsity,
                                       std::uint64_t* mac_count = nullptr);

} // namespace fas::baseline

#endif
