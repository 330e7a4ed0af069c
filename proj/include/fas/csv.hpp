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

#ifndef FAS_CSV_HPP
#define FAS_CSV_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace fas::io {

// Shortest decimal form that round-trips to the exact same double.
std::string format_double(double value);

// Parses what format_double produced (also accepts inf/-inf/nan).
double parse_double(const std::string& text);

// Complex matrix as CSV: a "rows,cols" header line, then one row per line
// with each entry serialized as adjacent "re,im" columns.
void write_complex_csv(const Eigen::MatrixXcd& m, std::ostream& out);
Eigen::MatrixXcd read_complex_csv(std::istream& in);

} // namespace fas::io

#endif
