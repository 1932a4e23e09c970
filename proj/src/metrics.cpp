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
#include <rbvq/metrics.hpp>

#include <fmt/core.h>

#include <algorithm>

namespace rbvq {

namespace {

void require_points(PointsView points, const Codebook& cb) {
    if (points.empty()) {
        throw InvalidInput("metric needs at least one point");
    }
    if (points.dim != cb.dim()) {
        throw InvalidInput(fmt::format("points have dimension {}, codebook {}", points.dim, cb.dim()));
    }
}

}  // namespace

double mse(PointsView points, const Codebook& cb) {
    require_points(points, cb);
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto x = points.point(i);
        total += squared_distance(x, cb.weight(find_winner(x, cb)));
    }
    return total / static_cast<double>(points.size());
}

std::vector<std::size_t> assignment_counts(PointsView points, const Codebook& cb) {
    require_points(points, cb);
    std::vector<std::size_t> counts(cb.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        ++counts[find_winner(points.point(i), cb)];
    }
    return counts;
}

std::size_t dead_units(PointsView points, const Codebook& cb) {
    const auto counts = assignment_counts(points, cb);
    return static_cast<std::size_t>(std::count(counts.begin(), counts.end(), std::size_t{0}));
}

double avg_degree(const Graph& graph) {
    if (graph.size() == 0) {
        throw InvalidInput("graph has no units");
    }
    return 2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(graph.size());
}

double avg_clustering(const Graph& graph) {
    if (graph.size() == 0) {
        throw InvalidInput("graph has no units");
    }
    double total = 0.0;
    for (const auto& nbrs : graph.adjacency) {
        const std::size_t k = nbrs.size();
        if (k < 2) {
            continue;
        }
        std::size_t links = 0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                if (graph.has_edge(nbrs[i], nbrs[j])) {
                    ++links;
                }
            }
        }
        total += 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
    }
    return total / static_cast<double>(graph.size());
}

EvalWindow::EvalWindow(std::size_t capacity, std::size_t dim) : capacity_(capacity), dim_(dim) {
    if (capacity == 0 || dim == 0) {
        throw InvalidInput("evaluation window needs positive capacity and dimension");
    }
    buffer_.reserve(capacity * dim);
}

void EvalWindow::push(std::span<const double> x) {
    if (x.size() != dim_) {
        throw InvalidInput(fmt::format("window expects dimension {}, got {}", dim_, x.size()));
    }
    if (buffer_.size() < capacity_ * dim_) {
        buffer_.insert(buffer_.end(), x.begin(), x.end());
    } else {
        std::copy(x.begin(), x.end(), buffer_.begin() + static_cast<std::ptrdiff_t>(next_ * dim_));
        next_ = (next_ + 1) % capacity_;
    }
}

void EvalWindow::record_rb(std::size_t t) {
    events_.push_back(t);
    // Anything at or before t - W is outside every later window.
    while (!events_.empty() && events_.front() + capacity_ <= t) {
        events_.pop_front();
    }
}

std::size_t EvalWindow::rb_frequency(std::size_t t) const {
    std::size_t count = 0;
    for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
        if (*it > t) {
            continue;
        }
        if (*it + capacity_ <= t) {
            break;
        }
        ++count;
    }
    return count;
}

std::string format_record(const MetricsRecord& r) {
    return fmt::format("{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g}", r.iteration, r.mse, r.dead_units,
                       r.avg_degree, r.avg_clustering, r.rb_count);
}

MetricsRecord evaluate(std::size_t iteration, PointsView points, const Codebook& cb, const Graph& graph,
                       std::size_t rb_count) {
    require_points(points, cb);
    std::vector<std::size_t> counts(cb.size(), 0);
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto x = points.point(i);
        const std::size_t s = find_winner(x, cb);
        ++counts[s];
        total += squared_distance(x, cb.weight(s));
    }
    MetricsRecord r;
    r.iteration = iteration;
    r.mse = total / static_cast<double>(points.size());
    r.dead_units = static_cast<double>(std::count(counts.begin(), counts.end(), std::size_t{0}));
    r.avg_degree = avg_degree(graph);
    r.avg_clustering = avg_clustering(graph);
    r.rb_count = static_cast<double>(rb_count);
    return r;
}

}  // namespace rbvq
