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

#include "fas/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fas::io {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void take(double v) {
        if (!std::isfinite(v))
            return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) { // nothing finite
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

} // namespace

std::string render_svg(const std::vector<Panel>& panels, int width, int panel_height) {
    const int total_height = panel_height * static_cast<int>(panels.size());
    const double ml = 72, mr = 180, mt = 36, mb = 48;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << total_height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << total_height << "\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double top = p * panel_height;
        const double plot_w = width - ml - mr;
        const double plot_h = panel_height - mt - mb;

        Range xr, yr;
        for (const auto& s : panel.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                xr.take(s.x[i]);
                if (std::isfinite(s.y[i]))
                    yr.take(s.y[i]);
            }
        xr.pad();
        yr.pad();

        auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
        auto py = [&](double y) { return top + mt + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

        svg << "<g>\n";
        svg << "<text x=\"" << ml << "\" y=\"" << top + 20 << "\" font-weight=\"bold\">"
            << panel.title << "</text>\n";
        svg << "<rect x=\"" << ml << "\" y=\"" << top + mt << "\" width=\"" << plot_w
            << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

        for (int tick = 0; tick <= 5; ++tick) {
            const double fx = xr.lo + tick * (xr.hi - xr.lo) / 5.0;
            const double fy = yr.lo + tick * (yr.hi - yr.lo) / 5.0;
            svg << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << top + mt + plot_h << "\" x2=\""
                << num(px(fx)) << "\" y2=\"" << top + mt + plot_h + 5 << "\" stroke=\"#444\"/>\n";
            svg << "<text x=\"" << num(px(fx)) << "\" y=\"" << top + mt + plot_h + 18
                << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
            svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << ml
                << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#444\"/>\n";
            svg << "<text x=\"" << ml - 8 << "\" y=\"" << num(py(fy) + 4)
                << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
        }
        svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << top + panel_height - 12
            << "\" text-anchor=\"middle\">" << panel.x_label << "</text>\n";
        svg << "<text x=\"18\" y=\"" << top + mt + plot_h / 2
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + mt + plot_h / 2
            << ")\">" << panel.y_label << "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const auto& series = panel.series[s];
            const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
            std::ostringstream points;
            bool open = false;
            std::string path;
            for (std::size_t i = 0; i < series.x.size(); ++i) {
                if (!std::isfinite(series.y[i])) {
                    open = false;
                    continue;
                }
                path += open ? " L " : " M ";
                path += num(px(series.x[i])) + " " + num(py(series.y[i]));
                open = true;
                svg << "<circle cx=\"" << num(px(series.x[i])) << "\" cy=\""
                    << num(py(series.y[i])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            }
            if (!path.empty())
                svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\"/>\n";

            const double ly = top + mt + 16 + 18.0 * s;
            svg << "<line x1=\"" << width - mr + 12 << "\" y1=\"" << ly << "\" x2=\""
                << width - mr + 36 << "\" y2=\"" << ly << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << width - mr + 42 << "\" y=\"" << ly + 4 << "\">" << series.label
                << "</text>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace fas::io
