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
#include <rbvq/somrb.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace rbvq {

namespace {

constexpr std::array<LatticePoint, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

LatticePoint offset(LatticePoint p, LatticePoint step) {
    return {p.row + step.row, p.col + step.col};
}

void insert_sorted(std::vector<std::size_t>& row, std::size_t v) {
    row.insert(std::lower_bound(row.begin(), row.end(), v), v);
}

void erase_value(std::vector<std::size_t>& row, std::size_t v) {
    row.erase(std::remove(row.begin(), row.end(), v), row.end());
}

}  // namespace

std::uint64_t GridMap::key(LatticePoint p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.row)) << 32) |
           static_cast<std::uint32_t>(p.col);
}

GridMap::GridMap(const std::vector<LatticePoint>& positions)
    : positions_(positions.size()), placed_(positions.size(), false), adjacency_(positions.size()) {
    for (std::size_t id = 0; id < positions.size(); ++id) {
        place(id, positions[id]);
    }
}

std::optional<std::size_t> GridMap::occupant(LatticePoint p) const {
    const auto it = occupied_.find(key(p));
    if (it == occupied_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<LatticePoint> GridMap::empty_neighbors(std::size_t id) const {
    std::vector<LatticePoint> out;
    for (const auto step : kSteps) {
        const auto p = offset(positions_[id], step);
        if (!occupant(p)) {
            out.push_back(p);
        }
    }
    return out;
}

void GridMap::remove(std::size_t id) {
    if (!placed_[id]) {
        return;
    }
    for (const std::size_t other : adjacency_[id]) {
        erase_value(adjacency_[other], id);
    }
    adjacency_[id].clear();
    occupied_.erase(key(positions_[id]));
    placed_[id] = false;
}

void GridMap::place(std::size_t id, LatticePoint p) {
    if (placed_[id]) {
        throw InvalidInput(fmt::format("unit {} is already on the lattice", id));
    }
    if (occupant(p)) {
        throw InvalidInput(fmt::format("lattice vertex ({}, {}) is occupied", p.row, p.col));
    }
    positions_[id] = p;
    placed_[id] = true;
    occupied_.emplace(key(p), id);
    for (const auto step : kSteps) {
        if (const auto other = occupant(offset(p, step))) {
            insert_sorted(adjacency_[id], *other);
            insert_sorted(adjacency_[*other], id);
        }
    }
}

Graph GridMap::graph() const {
    Graph g(size());
    g.adjacency = adjacency_;
    return g;
}

std::size_t GridMap::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& row : adjacency_) {
        degree_sum += row.size();
    }
    return degree_sum / 2;
}

bool GridMap::consistent() const {
    std::unordered_map<std::uint64_t, std::size_t> rebuilt;
    for (std::size_t id = 0; id < size(); ++id) {
        if (!placed_[id]) {
            continue;
        }
        if (!rebuilt.emplace(key(positions_[id]), id).second) {
            return false;
        }
    }
    if (rebuilt != occupied_) {
        return false;
    }
    for (std::size_t id = 0; id < size(); ++id) {
        std::vector<std::size_t> expected;
        if (placed_[id]) {
            for (const auto step : kSteps) {
                const auto it = rebuilt.find(key(offset(positions_[id], step)));
                if (it != rebuilt.end()) {
                    expected.push_back(it->second);
                }
            }
        }
        std::sort(expected.begin(), expected.end());
        if (expected != adjacency_[id] || expected.size() > 4) {
            return false;
        }
    }
    return true;
}

void SomrbParams::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InvalidInput(fmt::format("epsilon must lie in (0, 1], got {}", epsilon));
    }
    if (!(sigma > 0.0)) {
        throw InvalidInput(fmt::format("sigma must be positive, got {}", sigma));
    }
    rb.validate();
}

std::pair<Codebook, GridMap> init_grid(std::size_t units, std::size_t dim) {
    if (units < 4) {
        throw InvalidInput("a SOM lattice needs at least four units");
    }
    if (dim < 2) {
        throw InvalidInput("a SOM needs D >= 2 for its grid embedding");
    }
    const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(units)));
    Codebook cb(units, dim);
    std::vector<LatticePoint> positions(units);
    for (std::size_t n = 0; n < units; ++n) {
        const std::size_t row = n / side;
        const std::size_t col = n % side;
        positions[n] = {static_cast<int>(row), static_cast<int>(col)};
        auto w = cb.weight(n);
        w[0] = static_cast<double>(row) / static_cast<double>(side);
        w[1] = static_cast<double>(col) / static_cast<double>(side);
    }
    return {std::move(cb), GridMap(positions)};
}

StepReport somrb_step(std::span<const double> x, Codebook& cb, GridMap& grid,
                      const SomrbParams& params, Rng& rng, ErrorUtilityState* eb) {
    check_dimension(x, cb);
    if (params.rb.metric == RbMetric::error_utility) {
        if (eb == nullptr) {
            throw InvalidInput("somrb_step: error-utility metric needs state");
        }
        accumulate_error_utility(x, cb, *eb);
    }

    const std::size_t winner = find_winner(x, cb);
    const LatticePoint centre = grid.position(winner);
    for (std::size_t n = 0; n < cb.size(); ++n) {
        const LatticePoint p = grid.position(n);
        const double dr = p.row - centre.row;
        const double dc = p.col - centre.col;
        const double rate = params.epsilon * som_neighborhood(std::sqrt(dr * dr + dc * dc), params.sigma);
        auto w = cb.weight(n);
        for (std::size_t d = 0; d < w.size(); ++d) {
            w[d] += rate * (x[d] - w[d]);
        }
    }

    StepReport report{winner};
    if (!params.rb.enabled()) {
        return report;
    }

    cb.count(winner) += 1.0;
    std::vector<std::size_t> open;
    open.reserve(cb.size());
    for (std::size_t n = 0; n < cb.size(); ++n) {
        if (grid.degree(n) < 4) {
            open.push_back(n);
        }
    }
    if (const auto pair = select_rb_pair(cb, params.rb, eb, open)) {
        if (const auto birth = rb_update_somrb(cb, grid, *pair, rng)) {
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

std::optional<Birth> rb_update_somrb(Codebook& cb, GridMap& grid, RbPair pair, Rng& rng) {
    const auto [n_min, n_max] = pair;
    if (n_min == n_max) {
        throw InvalidInput("rb_update_somrb: n_min equals n_max");
    }

    const LatticePoint old_site = grid.position(n_min);
    grid.remove(n_min);
    const auto sites = grid.empty_neighbors(n_max);
    if (sites.empty()) {
        grid.place(n_min, old_site);
        throw InvalidInput(fmt::format("unit {} has no empty neighbouring vertex", n_max));
    }
    grid.place(n_min, sites[rng.index(sites.size())]);

    Birth birth{n_min, {}};
    const auto around_new = grid.neighbors(n_min);
    if (around_new.size() > 1) {
        birth.donors.assign(around_new.begin(), around_new.end());
    } else {
        for (const std::size_t m : grid.neighbors(n_max)) {
            if (m != n_min) {
                birth.donors.push_back(m);
            }
        }
        birth.donors.push_back(n_max);
        if (birth.donors.size() == 1) {
            const std::array<std::size_t, 2> excluded{n_max, n_min};
            if (const auto f = nearest_unit_to(cb, n_max, excluded)) {
                birth.donors.push_back(*f);
            }
        }
    }

    auto w_new = cb.weight(n_min);
    std::fill(w_new.begin(), w_new.end(), 0.0);
    double c_new = 0.0;
    for (const std::size_t m : birth.donors) {
        const auto w = cb.weight(m);
        for (std::size_t d = 0; d < w_new.size(); ++d) {
            w_new[d] += w[d];
        }
        c_new += cb.count(m);
    }
    const double k = static_cast<double>(birth.donors.size());
    for (double& v : w_new) {
        v /= k;
    }
    cb.count(n_min) = c_new / k;
    return birth;
}

Somrb::Somrb(std::size_t units, std::size_t dim, SomrbParams params, std::uint64_t seed)
    : codebook_(1, 1), params_(params), rng_(seed) {
    params_.validate();
    auto [cb, grid] = init_grid(units, dim);
    codebook_ = std::move(cb);
    grid_ = std::move(grid);
    if (params_.rb.metric == RbMetric::error_utility) {
        eb_.emplace(codebook_.size(), params_.rb.beta);
    }
}

StepReport Somrb::step(std::span<const double> x) {
    return somrb_step(x, codebook_, grid_, params_, rng_, eb_ ? &*eb_ : nullptr);
}

}  // namespace rbvq
