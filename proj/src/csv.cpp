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

#include "fas/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fas::io {

std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + text + "'");
    return value;
}

void write_complex_csv(const Eigen::MatrixXcd& m, std::ostream& out) {
    out << m.rows() << ',' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0)
                out << ',';
            out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
}

Eigen::MatrixXcd read_complex_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("complex csv: missing header");
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::stringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        return fields;
    };
    const auto header = split(line);
    if (header.size() != 2)
        throw std::invalid_argument("complex csv: header must be rows,cols");
    const auto rows = static_cast<Eigen::Index>(std::stoll(header[0]));
    const auto cols = static_cast<Eigen::Index>(std::stoll(header[1]));

    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!std::getline(in, line))
            throw std::invalid_argument("complex csv: truncated body");
        const auto fields = split(line);
        if (static_cast<Eigen::Index>(fields.size()) != 2 * cols)
            throw std::invalid_argument("complex csv: wrong field count");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = {parse_double(fields[2 * c]), parse_double(fields[2 * c + 1])};
    }
    return m;
}

} // namespace fas::io
