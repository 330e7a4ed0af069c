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

#ifndef FAS_METRICS_HPP
#define FAS_METRICS_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace fas::harness {

// 1 - |truth ∩ detected| / k_a. Inputs need not be sorted.
double ade(const std::vector<int>& truth, const std::vector<int>& detected, int k_a);

// Channel-estimation error over the given users. Default is the
// ratio-of-sums form sum ||h - h_hat||^2 / sum ||h||^2; the per-user-mean
// variant averages the per-user ratios instead. An empty user set carries no
// information and yields nullopt, never zero.
std::optional<double> nmse(const Eigen::MatrixXcd& h_true, const Eigen::MatrixXcd& h_est,
                           const std::vector<int>& users, bool per_user_mean = false);

// Sorted intersection helper shared by the metrics and the harness.
std::vector<int> intersect_sorted(std::vector<int> a, std::vector<int> b);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace fas::harness

#endif
