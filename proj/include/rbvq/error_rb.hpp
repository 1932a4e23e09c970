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
#ifndef RBVQ_ERROR_RB_HPP
#define RBVQ_ERROR_RB_HPP

#include <rbvq/core.hpp>

namespace rbvq {

// Error/utility bookkeeping for the distance-based remove-birth trigger.
// E_n accumulates the winner's squared error, U_n the squared-error increase
// that removing the winner would cause. Both decay by (1 - beta) per step.
struct ErrorUtilityState {
    std::vector<double> error;
    std::vector<double> utility;
    double beta;

    ErrorUtilityState(std::size_t units, double beta_)
        : error(units, 0.0), utility(units, 0.0), beta(beta_) {}

    std::size_t size() const { return error.size(); }

    // Reborn unit takes the mean error/utility of its donors.
    void inherit(const Birth& birth);
};

// Charges E/U to the winner using the current reference vectors, then decays
// every unit. Returns the winner/runner-up it used.
NearestTwo accumulate_error_utility(std::span<const double> x, const Codebook& cb,
                                    ErrorUtilityState& state);

// n = argmin U over all units, q = argmax E over `eligible_anchor`.
std::optional<RbPair> error_rb_triggered(const ErrorUtilityState& state, double th_rb,
                                         std::span<const std::size_t> eligible_anchor);
std::optional<RbPair> error_rb_triggered(const ErrorUtilityState& state, double th_rb);

// Dispatches on rb.metric. `eligible_max` restricts the birth anchor.
std::optional<RbPair> select_rb_pair(const Codebook& cb, const RBParams& rb,
                                     const ErrorUtilityState* eb,
                                     std::span<const std::size_t> eligible_max);

}  // namespace rbvq

#endif  // RBVQ_ERROR_RB_HPP
