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
#include <rbvq/ngrb.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <numeric>

namespace rbvq {

std::optional<int> GasGraph::age(std::size_t a, std::size_t b) const {
    const int value = ages_[a * units_ + b];
    if (value < 0) {
        return std::nullopt;
    }
    return value;
}

void GasGraph::connect(std::size_t a, std::size_t b) {
    if (a == b) {
        throw InvalidInput(fmt::format("self-edge on unit {}", a));
    }
    cell(a, b) = 0;
    cell(b, a) = 0;
}

void GasGraph::disconnect(std::size_t a, std::size_t b) {
    cell(a, b) = -1;
    cell(b, a) = -1;
}

void GasGraph::isolate(std::size_t n) {
    for (std::size_t m = 0; m < units_; ++m) {
        disconnect(n, m);
    }
}

void GasGraph::age_edges_of(std::size_t n) {
    for (std::size_t m = 0; m < units_; ++m) {
        if (cell(n, m) >= 0) {
            ++cell(n, m);
            ++cell(m, n);
        }
    }
}

std::size_t GasGraph::prune_edges_of(std::size_t n, int a_max) {
    std::size_t removed = 0;
    for (std::size_t m = 0; m < units_; ++m) {
        if (cell(n, m) > a_max) {
            disconnect(n, m);
            ++removed;
        }
    }
    return removed;
}

std::size_t GasGraph::prune(int a_max) {
    std::size_t removed = 0;
    for (std::size_t n = 0; n < units_; ++n) {
        removed += prune_edges_of(n, a_max);
    }
    return removed;
}

std::vector<std::size_t> GasGraph::neighbors(std::size_t n) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < units_; ++m) {
        if (connected(n, m)) {
            out.push_back(m);
        }
    }
    return out;
}

std::size_t GasGraph::degree(std::size_t n) const {
    std::size_t k = 0;
    for (std::size_t m = 0; m < units_; ++m) {
        k += connected(n, m) ? 1 : 0;
    }
    return k;
}

std::size_t GasGraph::edge_count() const {
    std::size_t total = 0;
    for (std::size_t n = 0; n < units_; ++n) {
        for (std::size_t m = n + 1; m < units_; ++m) {
            total += connected(n, m) ? 1 : 0;
        }
    }
    return total;
}

int GasGraph::max_age() const {
    return ages_.empty() ? -1 : *std::max_element(ages_.begin(), ages_.end());
}

Graph GasGraph::graph() const {
    Graph g(units_);
    for (std::size_t n = 0; n < units_; ++n) {
        g.adjacency[n] = neighbors(n);
    }
    return g;
}

bool GasGraph::consistent() const {
    for (std::size_t n = 0; n < units_; ++n) {
        if (ages_[n * units_ + n] != -1) {
            return false;
        }
        for (std::size_t m = n + 1; m < units_; ++m) {
            if (ages_[n * units_ + m] != ages_[m * units_ + n] || ages_[n * units_ + m] < -1) {
                return false;
            }
        }
    }
    return true;
}

void NgrbParams::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InvalidInput(fmt::format("epsilon must lie in (0, 1], got {}", epsilon));
    }
    if (!(lambda > 0.0)) {
        throw InvalidInput(fmt::format("lambda must be positive, got {}", lambda));
    }
    if (a_max < 1) {
        throw InvalidInput(fmt::format("a_max must be at least 1, got {}", a_max));
    }
    rb.validate();
}

namespace {

std::vector<std::size_t> distance_order(std::span<const double> x, const Codebook& cb) {
    std::vector<double> sq(cb.size());
    for (std::size_t n = 0; n < cb.size(); ++n) {
        sq[n] = squared_distance(x, cb.weight(n));
    }
    std::vector<std::size_t> order(cb.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sq[a] < sq[b]; });
    return order;
}

}  // namespace

std::vector<std::size_t> rank_units(std::span<const double> x, const Codebook& cb) {
    check_dimension(x, cb);
    const auto order = distance_order(x, cb);
    std::vector<std::size_t> rank(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        rank[order[k]] = k;
    }
    return rank;
}

StepReport ngrb_step(std::span<const double> x, Codebook& cb, GasGraph& graph,
                     const NgrbParams& params, ErrorUtilityState* eb) {
    check_dimension(x, cb);
    if (cb.size() < 2) {
        throw InvalidInput("neural gas needs at least two units");
    }
    if (graph.size() != cb.size()) {
        throw InvalidInput("graph and codebook sizes differ");
    }
    if (params.rb.metric == RbMetric::error_utility) {
        if (eb == nullptr) {
            throw InvalidInput("ngrb_step: error-utility metric needs state");
        }
        accumulate_error_utility(x, cb, *eb);
    }

    const auto order = distance_order(x, cb);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double rate = params.epsilon * ng_neighborhood(k, params.lambda);
        auto w = cb.weight(order[k]);
        for (std::size_t d = 0; d < w.size(); ++d) {
            w[d] += rate * (x[d] - w[d]);
        }
    }

    const std::size_t n0 = order[0];
    const std::size_t n1 = order[1];
    graph.connect(n0, n1);
    graph.age_edges_of(n0);
    graph.prune_edges_of(n0, params.a_max);

    StepReport report{n0};
    if (!params.rb.enabled()) {
        return report;
    }

    cb.count(n0) += 1.0;
    const auto all = unit_indices(cb.size());
    if (const auto pair = select_rb_pair(cb, params.rb, eb, all)) {
        if (const auto birth = rb_update_ngrb(cb, graph, *pair)) {
            report.rb_fired = true;
            report.rb = pair;
            if (eb != nullptr) {
                eb->inherit(*birth);
            }
        }
    }
    decay_counts(cb, params.rb.beta);
    return report;
}

std::optional<Birth> rb_update_ngrb(Codebook& cb, GasGraph& graph, RbPair pair) {
    const auto [n_min, n_max] = pair;
    if (cb.size() < 3) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            warn("remove-birth skipped: fewer than three units");
        }
        return std::nullopt;
    }
    if (n_min == n_max) {
        throw InvalidInput("rb_update_ngrb: n_min equals n_max");
    }

    graph.isolate(n_min);

    std::optional<std::size_t> f;
    for (std::size_t m = 0; m < graph.size(); ++m) {
        if (graph.connected(n_max, m) && (!f || cb.count(m) > cb.count(*f))) {
            f = m;
        }
    }
    if (!f) {
        const std::array<std::size_t, 2> excluded{n_max, n_min};
        f = nearest_unit_to(cb, n_max, excluded);
    }

    const auto w_max = cb.weight(n_max);
    const auto w_f = cb.weight(*f);
    auto w_new = cb.weight(n_min);
    for (std::size_t d = 0; d < w_new.size(); ++d) {
        w_new[d] = (w_max[d] + w_f[d]) / 2.0;
    }
    cb.count(n_min) = (cb.count(n_max) + cb.count(*f)) / 2.0;

    graph.connect(n_min, n_max);
    if (*f != n_max) {
        graph.connect(n_min, *f);
    }
    return Birth{n_min, {n_max, *f}};
}

Ngrb::Ngrb(Codebook initial, NgrbParams params)
    : codebook_(std::move(initial)), graph_(codebook_.size()), params_(params) {
    params_.validate();
    if (params_.rb.metric == RbMetric::error_utility) {
        eb_.emplace(codebook_.size(), params_.rb.beta);
    }
}

StepReport Ngrb::step(std::span<const double> x) {
    return ngrb_step(x, codebook_, graph_, params_, eb_ ? &*eb_ : nullptr);
}

}  // namespace rbvq
