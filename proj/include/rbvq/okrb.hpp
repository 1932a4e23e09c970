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
#ifndef RBVQ_OKRB_HPP
#define RBVQ_OKRB_HPP

#include <rbvq/error_rb.hpp>
#include <rbvq/quantizer.hpp>

namespace rbvq {

struct OkrbParams {
    double epsilon = 0.1;
    RBParams rb{0.01, 0.005};

    void validate() const;
};

// One online k-means step with remove-birth updating:
//   move winner by epsilon, count its win, check/apply RB, decay counters.
// `eb` is required when rb.metric is error_utility.
StepReport okrb_step(std::span<const double> x, Codebook& cb, const OkrbParams& params,
                     ErrorUtilityState* eb = nullptr);

// Rebirth n_min at the midpoint of n_max and its nearest unit f
// (f excludes both n_max and n_min). Skips with a warning when N < 3.
std::optional<Birth> rb_update_okrb(Codebook& cb, RbPair pair);

class Okrb final : public Quantizer {
public:
    Okrb(Codebook initial, OkrbParams params);

    StepReport step(std::span<const double> x) override;
    const Codebook& codebook() const override { return codebook_; }

private:
    Codebook codebook_;
    OkrbParams params_;
    std::optional<ErrorUtilityState> eb_;
};

}  // namespace rbvq

#endif  // RBVQ_OKRB_HPP
