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
#include <rbvq/tuning.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace rbvq {

double tune_mse(PointsView points, const Codebook& cb) {
    if (points.empty()) {
        throw InvalidInput("tune_mse needs at least one point");
    }
    if (points.dim != cb.dim()) {
        throw InvalidInput(fmt::format("points have dimension {}, codebook {}", points.dim, cb.dim()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto x = points.point(i);
        total += std::sqrt(squared_distance(x, cb.weight(find_winner(x, cb))));
    }
    return total / static_cast<double>(points.size());
}

std::size_t ParamGrid::size() const {
    std::size_t n = 1;
    for (const auto& axis : axes) {
        n *= axis.values.size();
    }
    return n;
}

std::vector<double> ParamGrid::values(std::size_t combo) const {
    std::vector<double> out(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t len = axes[a].values.size();
        out[a] = axes[a].values[combo % len];
        combo /= len;
    }
    return out;
}

MethodConfig ParamGrid::config(std::size_t combo) const {
    MethodConfig cfg = MethodConfig::defaults(method);
    const auto vals = values(combo);
    for (std::size_t a = 0; a < axes.size(); ++a) {
        cfg.set(axes[a].name, vals[a]);
    }
    return cfg;
}

void ParamGrid::validate() const {
    const auto known = MethodConfig::defaults(method).parameter_names();
    for (const auto& axis : axes) {
        if (axis.values.empty()) {
            throw InvalidInput(fmt::format("grid axis '{}' has no values", axis.name));
        }
        if (std::find(known.begin(), known.end(), axis.name) == known.end()) {
            throw InvalidInput(
                fmt::format("method {} has no parameter '{}'", method_name(method), axis.name));
        }
    }
    for (std::size_t c = 0; c < size(); ++c) {
        config(c).validate();
    }
}

ParamGrid default_grid(Method method) {
    const ParamAxis th{"th_rb", {0.01, 0.05, 0.1, 0.5}};
    const ParamAxis beta{"beta", {0.005, 0.001, 0.0005, 0.0001}};
    const ParamAxis gas_lambda{"lambda", {0.5, 1, 2, 4}};
    const ParamAxis gas_eps{"epsilon", {0.05, 0.1, 0.2, 0.3}};
    const ParamAxis gas_age{"a_max", {25, 50, 75, 100}};
    switch (method) {
    case Method::okrb:
    case Method::okrb_eb:
        return {method, {{"epsilon", {0.05, 0.1, 0.2, 0.3}}, th, beta}};
    case Method::somrb:
    case Method::somrb_eb:
        return {method, {{"epsilon", {0.05, 0.1, 0.2, 0.3}}, {"sigma", {0.5, 0.75, 1, 2}}, th, beta}};
    case Method::ngrb:
    case Method::ngrb_eb:
        return {method, {gas_lambda, gas_eps, gas_age, th, beta}};
    case Method::okmeans:
        return {method, {{"epsilon", {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}}}};
    case Method::som:
        return {method, {{"epsilon", {0.05, 0.1, 0.2, 0.3, 0.4}}, {"sigma", {0.5, 0.75, 1, 2, 3}}}};
    case Method::ng:
        return {method, {gas_lambda, gas_eps, gas_age}};
    }
    throw InvalidInput("unknown method");
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<Dataset> tuning_datasets(const TuneOptions& options) {
    std::vector<Dataset> out;
    const char* names[] = {"blobs", "circles", "moons"};
    for (std::uint64_t m = 0; m < 3; ++m) {
        out.push_back(make_builtin(names[m], options.dataset_size, derive_seed(options.seed, m, 0xd47a)));
    }
    return out;
}

TuneResult grid_search(const ParamGrid& grid, const TuneOptions& options) {
    return grid_search(grid, tuning_datasets(options), options);
}

TuneResult grid_search(const ParamGrid& grid, const std::vector<Dataset>& datasets, const TuneOptions& options) {
    grid.validate();
    if (datasets.empty()) {
        throw InvalidInput("grid search needs at least one dataset");
    }
    if (options.runs == 0 || options.iterations == 0) {
        throw InvalidInput("grid search needs runs >= 1 and iterations >= 1");
    }
    const std::size_t combos = grid.size();
    const std::size_t sets = datasets.size();
    const std::size_t runs = options.runs;

    // One slot per (combo, run, dataset); merged in index order afterwards.
    std::vector<double> scores(combos * runs * sets);
    parallel_for(scores.size(), options.threads, [&](std::size_t task) {
        const std::size_t m = task % sets;
        const std::size_t run = (task / sets) % runs;
        const std::size_t combo = task / (sets * runs);
        const std::uint64_t run_seed = derive_seed(options.seed, combo, run);
        const Dataset& ds = datasets[m];
        auto q = make_quantizer(grid.config(combo), options.units, ds.dim(), derive_seed(run_seed, m, 1));
        Rng draws(derive_seed(run_seed, m, 2));
        for (std::size_t t = 0; t < options.iterations; ++t) {
            q->step(ds.point(draws.index(ds.size())));
        }
        scores[task] = tune_mse(ds.view(), q->codebook());
    });

    TuneResult result;
    result.method = grid.method;
    for (const auto& axis : grid.axes) {
        result.axis_names.push_back(axis.name);
    }
    for (const auto& ds : datasets) {
        result.dataset_names.push_back(ds.name());
    }
    std::vector<double> worst(sets, 0.0);
    for (std::size_t c = 0; c < combos; ++c) {
        ComboScore score;
        score.index = c;
        score.values = grid.values(c);
        score.mse.assign(sets, 0.0);
        for (std::size_t m = 0; m < sets; ++m) {
            for (std::size_t r = 0; r < runs; ++r) {
                score.mse[m] += scores[(c * runs + r) * sets + m];
            }
            score.mse[m] /= static_cast<double>(runs);
            worst[m] = std::max(worst[m], score.mse[m]);
        }
        result.table.push_back(std::move(score));
    }
    for (auto& score : result.table) {
        score.nmse = 0.0;
        for (std::size_t m = 0; m < sets; ++m) {
            // All-zero column: every combo is equally worst.
            score.nmse += worst[m] > 0.0 ? score.mse[m] / worst[m] : 1.0;
        }
    }
    for (std::size_t c = 1; c < combos; ++c) {
        if (result.table[c].nmse < result.table[result.best].nmse) {
            result.best = c;
        }
    }
    return result;
}

std::string tune_result_csv(const TuneResult& result) {
    std::string out;
    for (const auto& name : result.axis_names) {
        out += name + ",";
    }
    for (const auto& name : result.dataset_names) {
        out += "mse_" + name + ",";
    }
    out += "nmse\n";
    std::vector<std::size_t> order(result.table.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return result.table[a].nmse < result.table[b].nmse; });
    for (const std::size_t i : order) {
        const auto& s = result.table[i];
        for (const double v : s.values) {
            out += fmt::format("{},", v);
        }
        for (const double v : s.mse) {
            out += fmt::format("{:.10g},", v);
        }
        out += fmt::format("{:.10g}\n", s.nmse);
    }
    return out;
}

}  // namespace rbvq
