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
#ifndef RBVQ_TUNING_HPP
#define RBVQ_TUNING_HPP

#include <rbvq/quantizer.hpp>
#include <rbvq/streams.hpp>

#include <functional>

namespace rbvq {

// Mean unsquared nearest-unit distance.
double tune_mse(PointsView points, const Codebook& cb);

struct ParamAxis {
    std::string name;
    std::vector<double> values;
};

// Cartesian product of axes; combo index enumerates with the first axis
// varying slowest.
struct ParamGrid {
    Method method = Method::okrb;
    std::vector<ParamAxis> axes;

    std::size_t size() const;
    std::vector<double> values(std::size_t combo) const;
    MethodConfig config(std::size_t combo) const;
    void validate() const;
};

ParamGrid default_grid(Method method);

struct ComboScore {
    std::size_t index = 0;
    std::vector<double> values;  // one per axis
    std::vector<double> mse;     // run-averaged tune_mse, one per dataset
    double nmse = 0.0;
};

struct TuneResult {
    Method method = Method::okrb;
    std::vector<std::string> axis_names;
    std::vector<std::string> dataset_names;
    std::vector<ComboScore> table;  // in combo order
    std::size_t best = 0;           // index into table

    const ComboScore& best_score() const { return table[best]; }
};

struct TuneOptions {
    std::size_t runs = 10;
    std::size_t iterations = 50000;
    std::uint64_t seed = 0;
    std::size_t units = 100;
    std::size_t dataset_size = 1000;
    std::size_t threads = 0;  // 0: hardware concurrency
};

// Blobs, circles and moons with dataset_size points each.
std::vector<Dataset> tuning_datasets(const TuneOptions& options);

TuneResult grid_search(const ParamGrid& grid, const TuneOptions& options);
TuneResult grid_search(const ParamGrid& grid, const std::vector<Dataset>& datasets, const TuneOptions& options);

// Header plus one row per combo, ascending NMSE (ties by combo order).
std::string tune_result_csv(const TuneResult& result);

// Runs fn(i) for i in [0, count) on a small worker pool.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace rbvq

#endif  // RBVQ_TUNING_HPP
