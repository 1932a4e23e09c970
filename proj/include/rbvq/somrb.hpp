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
#ifndef RBVQ_SOMRB_HPP
#define RBVQ_SOMRB_HPP

#include <rbvq/error_rb.hpp>
#include <rbvq/quantizer.hpp>

#include <cmath>
#include <unordered_map>

namespace rbvq {

struct LatticePoint {
    int row = 0;
    int col = 0;

    bool operator==(const LatticePoint&) const = default;
};

// Units on an unbounded integer lattice, one unit per vertex. Edges join
// exactly the occupied 4-neighbour pairs, so every degree is at most 4.
class GridMap {
public:
    GridMap() = default;
    explicit GridMap(const std::vector<LatticePoint>& positions);

    std::size_t size() const { return positions_.size(); }
    LatticePoint position(std::size_t id) const { return positions_[id]; }
    bool placed(std::size_t id) const { return placed_[id]; }

    std::optional<std::size_t> occupant(LatticePoint p) const;
    std::span<const std::size_t> neighbors(std::size_t id) const { return adjacency_[id]; }
    std::size_t degree(std::size_t id) const { return adjacency_[id].size(); }

    // Free 4-neighbour vertices in the order up, down, left, right.
    std::vector<LatticePoint> empty_neighbors(std::size_t id) const;

    // Vacates the unit's vertex and drops its edges.
    void remove(std::size_t id);
    // Occupies an empty vertex and links every occupied 4-neighbour.
    void place(std::size_t id, LatticePoint p);

    Graph graph() const;
    std::size_t edge_count() const;

    // Rebuilds occupancy and edges from positions alone and compares.
    bool consistent() const;

private:
    static std::uint64_t key(LatticePoint p);

    std::vector<LatticePoint> positions_;
    std::vector<bool> placed_;
    std::unordered_map<std::uint64_t, std::size_t> occupied_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

struct SomrbParams {
    double epsilon = 0.2;
    double sigma = 0.5;
    RBParams rb{0.1, 0.0001};

    void validate() const;
};

// Units n = 0..N-1 at (n / L, n % L) with L = floor(sqrt(N)); reference
// vectors (row / L, col / L, 0, ...). Requires N >= 4 and D >= 2.
std::pair<Codebook, GridMap> init_grid(std::size_t units, std::size_t dim);

inline double som_neighborhood(double d, double sigma) {
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

StepReport somrb_step(std::span<const double> x, Codebook& cb, GridMap& grid,
                      const SomrbParams& params, Rng& rng, ErrorUtilityState* eb = nullptr);

// Moves n_min to a random empty vertex next to n_max and sets its reference
// vector and counter from the new neighbourhood.
std::optional<Birth> rb_update_somrb(Codebook& cb, GridMap& grid, RbPair pair, Rng& rng);

class Somrb final : public Quantizer {
public:
    Somrb(std::size_t units, std::size_t dim, SomrbParams params, std::uint64_t seed);

    StepReport step(std::span<const double> x) override;
    const Codebook& codebook() const override { return codebook_; }
    Graph graph() const override { return grid_.graph(); }

    const GridMap& grid() const { return grid_; }

private:
    Codebook codebook_;
    GridMap grid_;
    SomrbParams params_;
    Rng rng_;
    std::optional<ErrorUtilityState> eb_;
};

}  // namespace rbvq

#endif  // RBVQ_SOMRB_HPP
