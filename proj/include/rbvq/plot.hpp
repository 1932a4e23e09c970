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
#ifndef RBVQ_PLOT_HPP
#define RBVQ_PLOT_HPP

#include <rbvq/streams.hpp>

#include <filesystem>

namespace rbvq {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string metric = "mse";
    bool log_y = false;
    std::string title;
    int width = 800;
    int height = 480;
};

// Reads the iteration column and one metric column from a metrics CSV.
// Throws ParseError for malformed files or a missing column.
Series read_metric_series(const std::filesystem::path& csv, const std::string& metric);

// One polyline per series; non-positive values are dropped on a log axis.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& options);

void plot_metrics(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& out,
                  const PlotOptions& options);

}  // namespace rbvq

#endif  // RBVQ_PLOT_HPP
