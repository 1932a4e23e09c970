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
#ifndef RBVQ_METRICS_HPP
#define RBVQ_METRICS_HPP

#include <rbvq/streams.hpp>

#include <deque>

namespace rbvq {

// Mean squared nearest-unit distance.
double mse(PointsView points, const Codebook& cb);

// Points assigned to each unit under nearest-unit assignment (ties to lowest id).
std::vector<std::size_t> assignment_counts(PointsView points, const Codebook& cb);

// Units with no assigned point.
std::size_t dead_units(PointsView points, const Codebook& cb);

// 2 |E| / N
double avg_degree(const Graph& graph);

// Mean of 2 t_n / (k_n (k_n - 1)), with 0 for k_n < 2.
double avg_clustering(const Graph& graph);

// Sliding buffer of the last W inputs plus RB event timestamps.
class EvalWindow {
public:
    EvalWindow(std::size_t capacity, std::size_t dim);

    void push(std::span<const double> x);
    void record_rb(std::size_t t);

    // Events with timestamps in (t - W, t].
    std::size_t rb_frequency(std::size_t t) const;

    PointsView points() const { return {buffer_, dim_}; }
    std::size_t size() const { return buffer_.size() / dim_; }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::size_t dim_;
    std::size_t next_ = 0;
    std::vector<double> buffer_;
    std::deque<std::size_t> events_;
};

struct MetricsRecord {
    std::size_t iteration = 0;
    double mse = 0.0;
    double dead_units = 0.0;  // real so that run averages stay exact
    double avg_degree = 0.0;
    double avg_clustering = 0.0;
    double rb_count = 0.0;
};

inline constexpr std::string_view kMetricsHeader = "iteration,mse,dead_units,avg_degree,avg_clustering,rb_count";

std::string format_record(const MetricsRecord& r);
MetricsRecord evaluate(std::size_t iteration, PointsView points, const Codebook& cb, const Graph& graph,
                       std::size_t rb_count);

}  // namespace rbvq

#endif  // RBVQ_METRICS_HPP
