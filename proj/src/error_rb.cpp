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
#include <rbvq/error_rb.hpp>

#include <numeric>

namespace rbvq {

void ErrorUtilityState::inherit(const Birth& birth) {
    if (birth.donors.empty()) {
        return;
    }
    double e = 0.0;
    double u = 0.0;
    for (const std::size_t d : birth.donors) {
        e += error[d];
        u += utility[d];
    }
    const double k = static_cast<double>(birth.donors.size());
    error[birth.reborn] = e / k;
    utility[birth.reborn] = u / k;
}

NearestTwo accumulate_error_utility(std::span<const double> x, const Codebook& cb,
                                    ErrorUtilityState& state) {
    if (state.size() != cb.size()) {
        throw InvalidInput("error/utility state does not match the codebook size");
    }
    const NearestTwo nearest = find_nearest_two(x, cb);
    state.error[nearest.first] += nearest.first_sq;
    state.utility[nearest.first] += nearest.second_sq - nearest.first_sq;
    for (std::size_t n = 0; n < state.size(); ++n) {
        state.error[n] -= state.beta * state.error[n];
        state.utility[n] -= state.beta * state.utility[n];
    }
    return nearest;
}

std::optional<RbPair> error_rb_triggered(const ErrorUtilityState& state, double th_rb,
                                         std::span<const std::size_t> eligible_anchor) {
    if (eligible_anchor.empty() || state.size() == 0) {
        return std::nullopt;
    }
    std::size_t q = eligible_anchor.front();
    for (const std::size_t n : eligible_anchor) {
        if (state.error[n] > state.error[q] || (state.error[n] == state.error[q] && n < q)) {
            q = n;
        }
    }
    std::size_t n_low = 0;
    for (std::size_t n = 1; n < state.size(); ++n) {
        if (state.utility[n] < state.utility[n_low]) {
            n_low = n;
        }
    }
    if (!(state.error[q] > 0.0) || n_low == q) {
        return std::nullopt;
    }
    if (state.utility[n_low] / state.error[q] < th_rb) {
        return RbPair{n_low, q};
    }
    return std::nullopt;
}

std::optional<RbPair> error_rb_triggered(const ErrorUtilityState& state, double th_rb) {
    std::vector<std::size_t> all(state.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return error_rb_triggered(state, th_rb, all);
}

std::optional<RbPair> select_rb_pair(const Codebook& cb, const RBParams& rb,
                                     const ErrorUtilityState* eb,
                                     std::span<const std::size_t> eligible_max) {
    switch (rb.metric) {
    case RbMetric::none:
        return std::nullopt;
    case RbMetric::win_probability:
        return rb_triggered(cb, rb.th_rb, eligible_max);
    case RbMetric::error_utility:
        if (eb == nullptr) {
            throw InvalidInput("error-utility remove-birth needs an ErrorUtilityState");
        }
        return error_rb_triggered(*eb, rb.th_rb, eligible_max);
    }
    return std::nullopt;
}

}  // namespace rbvq
