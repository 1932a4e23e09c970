/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <rbvq/experiment.hpp>
#include <rbvq/plot.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rbvq {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') {
            cell.pop_back();
        }
        out.push_back(cell);
    }
    return out;
}

double to_double(const std::string& cell, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) {
            throw std::invalid_argument(cell);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(fmt::format("line {}: '{}' is not a number", line, cell), line);
    }
}

std::string escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr std::array<std::string_view, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

Series read_metric_series(const std::filesystem::path& csv, const std::string& metric) {
    std::ifstream in(csv);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", csv.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(fmt::format("{}: empty file", csv.string()), 1);
    }
    const auto header = split_commas(line);
    const auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ParseError(fmt::format("{}: no column '{}'", csv.string(), name), 1);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t xcol = find_col("iteration");
    const std::size_t ycol = find_col(metric);
    Series s;
    s.label = csv.stem().string();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw ParseError(fmt::format("{} line {}: expected {} cells, found {}", csv.string(), line_no,
                                         header.size(), cells.size()),
                             line_no);
        }
        s.x.push_back(to_double(cells[xcol], line_no));
        s.y.push_back(to_double(cells[ycol], line_no));
    }
    if (s.x.empty()) {
        throw ParseError(fmt::format("{}: no data rows", csv.string()), line_no);
    }
    return s;
}

std::string render_svg(const std::vector<Series>& series, const PlotOptions& options) {
    if (series.empty()) {
        throw InvalidInput("nothing to plot");
    }
    const double left = 70.0, right = 170.0, top = 40.0, bottom = 50.0;
    const double pw = options.width - left - right;
    const double ph = options.height - top - bottom;

    auto ty = [&](double v) { return options.log_y ? std::log10(v) : v; };
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (options.log_y && !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) {
        // Nothing plottable (e.g. all zero on a log axis).
        xmin = 0.0; xmax = 1.0; ymin = 0.0; ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        options.width, options.height, options.width, options.height);
    const std::string title = options.title.empty() ? options.metric : options.title;
    svg += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, escape(title));
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                       left, top, pw, ph);
    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 4.0;
        const double fy = ymin + (ymax - ymin) * k / 4.0;
        const double label_y = options.log_y ? std::pow(10.0, fy) : fy;
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
                           left + pw * k / 4.0, top + ph + 18, fx);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n",
                           left - 6, top + ph * (1.0 - k / 4.0) + 4, label_y);
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n",
                       left + pw / 2, options.height - 10);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const auto color = kColors[i % kColors.size()];
        std::string points;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (options.log_y && !(s.y[k] > 0.0)) continue;
            points += fmt::format("{:.2f},{:.2f} ", px(s.x[k]), py(s.y[k]));
        }
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                           points);
        const double ly = top + 16.0 * static_cast<double>(i) + 8.0;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           left + pw + 10, ly, left + pw + 30, ly, color);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           left + pw + 36, ly + 4, escape(s.label));
    }
    svg += "</svg>\n";
    return svg;
}

void plot_metrics(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& out,
                  const PlotOptions& options) {
    if (csvs.empty()) {
        throw InvalidInput("plot needs at least one metrics file");
    }
    std::vector<Series> series;
    for (const auto& path : csvs) {
        series.push_back(read_metric_series(path, options.metric));
    }
    // out/okrb/metrics.csv and out/ngrb/metrics.csv share a stem.
    std::vector<std::string> stems;
    for (const auto& s : series) {
        stems.push_back(s.label);
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const bool clash = std::count(stems.begin(), stems.end(), stems[i]) > 1;
        if (clash && csvs[i].has_parent_path()) {
            series[i].label = (csvs[i].parent_path().filename() / csvs[i].stem()).generic_string();
        }
    }
    write_text_file(out, render_svg(series, options));
}

}  // namespace rbvq
