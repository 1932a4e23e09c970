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
#include <rbvq/okrb.hpp>

#include <fmt/core.h>

#include <array>
#include <atomic>

namespace rbvq {

void OkrbParams::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InvalidInput(fmt::format("epsilon must lie in (0, 1], got {}", epsilon));
    }
    rb.validate();
}

StepReport okrb_step(std::span<const double> x, Codebook& cb, const OkrbParams& params,
                     ErrorUtilityState* eb) {
    check_dimension(x, cb);
    if (params.rb.metric == RbMetric::error_utility) {
        if (eb == nullptr) {
            throw InvalidInput("okrb_step: error-utility metric needs state");
        }
        accumulate_error_utility(x, cb, *eb);
    }

    const std::size_t winner = find_winner(x, cb);
    auto w = cb.weight(winner);
    for (std::size_t d = 0; d < w.size(); ++d) {
        w[d] += params.epsilon * (x[d] - w[d]);
    }

    StepReport report{winner};
    if (!params.rb.enabled()) {
        return report;
    }

    cb.count(winner) += 1.0;
    const auto all = unit_indices(cb.size());
    if (const auto pair = select_rb_pair(cb, params.rb, eb, all)) {
        if (const auto birth = rb_update_okrb(cb, *pair)) {
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

std::optional<Birth> rb_update_okrb(Codebook& cb, RbPair pair) {
    const auto [n_min, n_max] = pair;
    if (cb.size() < 3) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            warn("remove-birth skipped: fewer than three units");
        }
        return std::nullopt;
    }
    if (n_min == n_max) {
        throw InvalidInput("rb_update_okrb: n_min equals n_max");
    }

    const std::array<std::size_t, 2> excluded{n_max, n_min};
    const std::size_t f = *nearest_unit_to(cb, n_max, excluded);

    const auto w_max = cb.weight(n_max);
    const auto w_f = cb.weight(f);
    auto w_new = cb.weight(n_min);
    for (std::size_t d = 0; d < w_new.size(); ++d) {
        w_new[d] = (w_max[d] + w_f[d]) / 2.0;
    }
    cb.count(n_min) = (cb.count(n_max) + cb.count(f)) / 2.0;
    return Birth{n_min, {n_max, f}};
}

Okrb::Okrb(Codebook initial, OkrbParams params)
    : codebook_(std::move(initial)), params_(params) {
    params_.validate();
    if (params_.rb.metric == RbMetric::error_utility) {
        eb_.emplace(codebook_.size(), params_.rb.beta);
    }
}

StepReport Okrb::step(std::span<const double> x) {
    return okrb_step(x, codebook_, params_, eb_ ? &*eb_ : nullptr);
}

}  // namespace rbvq
