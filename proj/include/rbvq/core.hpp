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
#ifndef RBVQ_CORE_HPP
#define RBVQ_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbvq {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Seeded 64-bit Mersenne Twister. Draw helpers avoid the standard
// distributions where their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53 bits of mantissa.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);

    // Box-Muller; the spare deviate is cached.
    double normal(double mean, double stddev);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

// splitmix64 over the combined inputs; used to fan a master seed out to
// independent runs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

double squared_distance(std::span<const double> a, std::span<const double> b);

// N reference vectors stored row-major plus one decayed win counter per unit.
// Unit ids are slot indices; remove-birth reuses the slot of the removed unit.
class Codebook {
public:
    Codebook(std::size_t units, std::size_t dim);

    std::size_t size() const { return counts_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<double> weight(std::size_t n) { return {weights_.data() + n * dim_, dim_}; }
    std::span<const double> weight(std::size_t n) const { return {weights_.data() + n * dim_, dim_}; }

    double& count(std::size_t n) { return counts_[n]; }
    double count(std::size_t n) const { return counts_[n]; }

    std::span<const double> counts() const { return counts_; }
    std::span<const double> weights() const { return weights_; }

    bool operator==(const Codebook&) const = default;

private:
    std::size_t dim_;
    std::vector<double> weights_;
    std::vector<double> counts_;
};

enum class RbMetric {
    none,            // remove-birth disabled (static baselines)
    win_probability, // c_min / c_max
    error_utility,   // U_min / E_max
};

struct RBParams {
    double th_rb = 0.01;
    double beta = 0.005;
    RbMetric metric = RbMetric::win_probability;

    bool enabled() const { return metric != RbMetric::none; }
    void validate() const;
};

struct RbPair {
    std::size_t n_min;
    std::size_t n_max;

    bool operator==(const RbPair&) const = default;
};

// Units whose values were averaged to produce a reborn unit. Lets auxiliary
// per-unit state (error/utility) follow the same birth rule as the counters.
struct Birth {
    std::size_t reborn;
    std::vector<std::size_t> donors;
};

struct StepReport {
    std::size_t winner;
    bool rb_fired = false;
    std::optional<RbPair> rb{};
};

// Undirected graph over unit ids as sorted adjacency lists.
struct Graph {
    std::vector<std::vector<std::size_t>> adjacency;

    explicit Graph(std::size_t units = 0) : adjacency(units) {}

    std::size_t size() const { return adjacency.size(); }
    std::size_t edge_count() const;
    void add_edge(std::size_t a, std::size_t b);
    bool has_edge(std::size_t a, std::size_t b) const;
};

// 0, 1, ..., units - 1
std::vector<std::size_t> unit_indices(std::size_t units);

void check_dimension(std::span<const double> x, const Codebook& cb);

// Nearest unit in Euclidean distance; ties go to the lowest id.
std::size_t find_winner(std::span<const double> x, const Codebook& cb);

struct NearestTwo {
    std::size_t first;
    std::size_t second;
    double first_sq;
    double second_sq;
};

// Winner and runner-up. Requires at least two units.
NearestTwo find_nearest_two(std::span<const double> x, const Codebook& cb);

void decay_counts(Codebook& cb, double beta);

// c_n / max c; nullopt when every counter is zero.
std::optional<std::vector<double>> win_metric(const Codebook& cb);

// n_max over `eligible_max`, n_min over all units. Fires when
// c_min / c_max < th_rb with c_max > 0 and n_min != n_max.
std::optional<RbPair> rb_triggered(const Codebook& cb, double th_rb,
                                   std::span<const std::size_t> eligible_max);
std::optional<RbPair> rb_triggered(const Codebook& cb, double th_rb);

Codebook init_random_codebook(std::size_t units, std::size_t dim, Rng& rng);

// Unit closest to `anchor` in reference space, skipping `excluded`.
std::optional<std::size_t> nearest_unit_to(const Codebook& cb, std::size_t anchor,
                                           std::span<const std::size_t> excluded);

void warn(const std::string& message);

}  // namespace rbvq

#endif  // RBVQ_CORE_HPP
