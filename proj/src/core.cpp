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
#include <rbvq/core.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rbvq {

std::size_t Rng::index(std::size_t n) {
    if (n == 0) {
        throw InvalidInput("Rng::index: empty range");
    }
    const std::uint64_t range = n;
    const std::uint64_t threshold = (0 - range) % range;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r < threshold);
    return static_cast<std::size_t>(r % range);
}

double Rng::normal(double mean, double stddev) {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return mean + stddev * z;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return mean + stddev * radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

Codebook::Codebook(std::size_t units, std::size_t dim)
    : dim_(dim), weights_(units * dim, 0.0), counts_(units, 0.0) {
    if (units == 0 || dim == 0) {
        throw InvalidInput("Codebook needs at least one unit and one dimension");
    }
}

void RBParams::validate() const {
    if (!enabled()) {
        return;
    }
    if (!(th_rb > 0.0 && th_rb <= 1.0)) {
        throw InvalidInput(fmt::format("th_rb must lie in (0, 1], got {}", th_rb));
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw InvalidInput(fmt::format("beta must lie in (0, 1), got {}", beta));
    }
}

std::size_t Graph::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& row : adjacency) {
        degree_sum += row.size();
    }
    return degree_sum / 2;
}

void Graph::add_edge(std::size_t a, std::size_t b) {
    auto insert = [](std::vector<std::size_t>& row, std::size_t v) {
        auto it = std::lower_bound(row.begin(), row.end(), v);
        if (it == row.end() || *it != v) {
            row.insert(it, v);
        }
    };
    insert(adjacency[a], b);
    insert(adjacency[b], a);
}

bool Graph::has_edge(std::size_t a, std::size_t b) const {
    return std::binary_search(adjacency[a].begin(), adjacency[a].end(), b);
}

std::vector<std::size_t> unit_indices(std::size_t units) {
    std::vector<std::size_t> out(units);
    for (std::size_t n = 0; n < units; ++n) {
        out[n] = n;
    }
    return out;
}

void check_dimension(std::span<const double> x, const Codebook& cb) {
    if (x.size() != cb.dim()) {
        throw InvalidInput(fmt::format("input has dimension {}, codebook expects {}", x.size(), cb.dim()));
    }
}

std::size_t find_winner(std::span<const double> x, const Codebook& cb) {
    check_dimension(x, cb);
    std::size_t best = 0;
    double best_sq = squared_distance(x, cb.weight(0));
    for (std::size_t n = 1; n < cb.size(); ++n) {
        const double sq = squared_distance(x, cb.weight(n));
        if (sq < best_sq) {
            best_sq = sq;
            best = n;
        }
    }
    return best;
}

NearestTwo find_nearest_two(std::span<const double> x, const Codebook& cb) {
    check_dimension(x, cb);
    if (cb.size() < 2) {
        throw InvalidInput("runner-up requires at least two units");
    }
    NearestTwo out{0, 1, squared_distance(x, cb.weight(0)), squared_distance(x, cb.weight(1))};
    if (out.second_sq < out.first_sq) {
        std::swap(out.first, out.second);
        std::swap(out.first_sq, out.second_sq);
    }
    for (std::size_t n = 2; n < cb.size(); ++n) {
        const double sq = squared_distance(x, cb.weight(n));
        if (sq < out.first_sq) {
            out.second = out.first;
            out.second_sq = out.first_sq;
            out.first = n;
            out.first_sq = sq;
        } else if (sq < out.second_sq) {
            out.second = n;
            out.second_sq = sq;
        }
    }
    return out;
}

void decay_counts(Codebook& cb, double beta) {
    for (std::size_t n = 0; n < cb.size(); ++n) {
        cb.count(n) -= beta * cb.count(n);
    }
}

std::optional<std::vector<double>> win_metric(const Codebook& cb) {
    const auto counts = cb.counts();
    const double max_count = *std::max_element(counts.begin(), counts.end());
    if (!(max_count > 0.0)) {
        return std::nullopt;
    }
    std::vector<double> metric(counts.size());
    for (std::size_t n = 0; n < counts.size(); ++n) {
        metric[n] = counts[n] / max_count;
    }
    return metric;
}

std::optional<RbPair> rb_triggered(const Codebook& cb, double th_rb,
                                   std::span<const std::size_t> eligible_max) {
    if (eligible_max.empty()) {
        return std::nullopt;
    }
    std::size_t n_max = eligible_max.front();
    for (const std::size_t n : eligible_max) {
        if (cb.count(n) > cb.count(n_max) || (cb.count(n) == cb.count(n_max) && n < n_max)) {
            n_max = n;
        }
    }
    std::size_t n_min = 0;
    for (std::size_t n = 1; n < cb.size(); ++n) {
        if (cb.count(n) < cb.count(n_min)) {
            n_min = n;
        }
    }
    const double c_max = cb.count(n_max);
    if (!(c_max > 0.0) || n_min == n_max) {
        return std::nullopt;
    }
    if (cb.count(n_min) / c_max < th_rb) {
        return RbPair{n_min, n_max};
    }
    return std::nullopt;
}

std::optional<RbPair> rb_triggered(const Codebook& cb, double th_rb) {
    return rb_triggered(cb, th_rb, unit_indices(cb.size()));
}

Codebook init_random_codebook(std::size_t units, std::size_t dim, Rng& rng) {
    Codebook cb(units, dim);
    for (std::size_t n = 0; n < units; ++n) {
        for (double& v : cb.weight(n)) {
            v = rng.uniform();
        }
    }
    return cb;
}

std::optional<std::size_t> nearest_unit_to(const Codebook& cb, std::size_t anchor,
                                           std::span<const std::size_t> excluded) {
    std::optional<std::size_t> best;
    double best_sq = 0.0;
    const auto anchor_w = cb.weight(anchor);
    for (std::size_t n = 0; n < cb.size(); ++n) {
        if (std::find(excluded.begin(), excluded.end(), n) != excluded.end()) {
            continue;
        }
        const double sq = squared_distance(cb.weight(n), anchor_w);
        if (!best || sq < best_sq) {
            best = n;
            best_sq = sq;
        }
    }
    return best;
}

void warn(const std::string& message) {
    fmt::print(stderr, "warning: {}\n", message);
}

}  // namespace rbvq
