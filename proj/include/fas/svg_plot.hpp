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

#ifndef FAS_SVG_PLOT_HPP
#define FAS_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace fas::io {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y; // non-finite points are skipped
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

// Static line plot, one panel stacked under the next. Output is a pure
// function of the inputs.
std::string render_svg(const std::vector<Panel>& panels, int width = 860, int panel_height = 320);

} // namespace fas::io

#endif
