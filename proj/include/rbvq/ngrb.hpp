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
#ifndef RBVQ_NGRB_HPP
#define RBVQ_NGRB_HPP

#include <rbvq/error_rb.hpp>
#include <rbvq/quantizer.hpp>

#include <cmath>

namespace rbvq {

// Symmetric edge set with an age per edge, stored as a dense N x N matrix
// (age -1 means no edge).
class GasGraph {
public:
    explicit GasGraph(std::size_t units = 0) : units_(units), ages_(units * units, -1) {}

    std::size_t size() const { return units_; }

    bool connected(std::size_t a, std::size_t b) const { return ages_[a * units_ + b] >= 0; }
    std::optional<int> age(std::size_t a, std::size_t b) const;

    // Creates the edge or resets an existing one to age 0.
    void connect(std::size_t a, std::size_t b);
    void disconnect(std::size_t a, std::size_t b);
    void isolate(std::size_t n);

    void age_edges_of(std::size_t n);
    // Drops edges of n older than a_max; returns the number removed.
    std::size_t prune_edges_of(std::size_t n, int a_max);
    std::size_t prune(int a_max);

    std::vector<std::size_t> neighbors(std::size_t n) const;
    std::size_t degree(std::size_t n) const;
    std::size_t edge_count() const;
    int max_age() const;
    Graph graph() const;

    // Symmetric, no self-edges.
    bool consistent() const;

private:
    int& cell(std::size_t a, std::size_t b) { return ages_[a * units_ + b]; }

    std::size_t units_;
    std::vector<int> ages_;
};

struct NgrbParams {
    double epsilon = 0.3;
    double lambda = 0.5;
    int a_max = 75;
    RBParams rb{0.01, 0.005};

    void validate() const;
};

// rank[n] = position of unit n when units are sorted by distance to x
// (ties by id).
std::vector<std::size_t> rank_units(std::span<const double> x, const Codebook& cb);

inline double ng_neighborhood(std::size_t rank, double lambda) {
    return std::exp(-static_cast<double>(rank) / lambda);
}

StepReport ngrb_step(std::span<const double> x, Codebook& cb, GasGraph& graph,
                     const NgrbParams& params, ErrorUtilityState* eb = nullptr);

// Isolates n_min, then rebirths it between n_max and f, where f is n_max's
// highest-count neighbour or, if n_max is isolated, its nearest unit.
std::optional<Birth> rb_update_ngrb(Codebook& cb, GasGraph& graph, RbPair pair);

class Ngrb final : public Quantizer {
public:
    Ngrb(Codebook initial, NgrbParams params);

    StepReport step(std::span<const double> x) override;
    const Codebook& codebook() const override { return codebook_; }
    Graph graph() const override { return graph_.graph(); }

    const GasGraph& gas_graph() const { return graph_; }

private:
    Codebook codebook_;
    GasGraph graph_;
    NgrbParams params_;
    std::optional<ErrorUtilityState> eb_;
};

}  // namespace rbvq

#endif  // RBVQ_NGRB_HPP
