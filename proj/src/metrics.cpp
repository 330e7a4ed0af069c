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

#include "fas/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace fas::harness {

std::vector<int> intersect_sorted(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

double ade(const std::vector<int>& truth, const std::vector<int>& detected, int k_a) {
    if (k_a <= 0)
        throw std::invalid_argument("ade: k_a must be positive");
    const auto common = intersect_sorted(truth, detected);
    return 1.0 - static_cast<double>(common.size()) / k_a;
}

std::optional<double> nmse(const Eigen::MatrixXcd& h_true, const Eigen::MatrixXcd& h_est,
                           const std::vector<int>& users, bool per_user_mean) {
    if (users.empty())
        return std::nullopt;
    if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols())
        throw std::invalid_argument("nmse: shape mismatch");

    if (per_user_mean) {
        double acc = 0.0;
        for (int k : users) {
            const double den = h_true.row(k).squaredNorm();
            if (den <= 0.0)
                throw std::invalid_argument("nmse: zero-energy reference row");
            acc += (h_true.row(k) - h_est.row(k)).squaredNorm() / den;
        }
        return acc / static_cast<double>(users.size());
    }

    double num = 0.0, den = 0.0;
    for (int k : users) {
        num += (h_true.row(k) - h_est.row(k)).squaredNorm();
        den += h_true.row(k).squaredNorm();
    }
    if (den <= 0.0)
        throw std::invalid_argument("nmse: zero-energy reference");
    return num / den;
}

} // namespace fas::harness
