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
#include <rbvq/baselines.hpp>

#include <fmt/core.h>

namespace rbvq {

StepReport okmeans_step(std::span<const double> x, Codebook& cb, double epsilon) {
    const std::size_t s = find_winner(x, cb);
    auto w = cb.weight(s);
    for (std::size_t d = 0; d < w.size(); ++d) {
        w[d] += epsilon * (x[d] - w[d]);
    }
    return StepReport{s};
}

OnlineKMeans::OnlineKMeans(Codebook initial, double epsilon)
    : codebook_(std::move(initial)), epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InvalidInput(fmt::format("epsilon must lie in (0, 1], got {}", epsilon));
    }
}

StepReport OnlineKMeans::step(std::span<const double> x) {
    return okmeans_step(x, codebook_, epsilon_);
}

SomrbParams som_baseline_params(double epsilon, double sigma) {
    SomrbParams p;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.rb.metric = RbMetric::none;
    return p;
}

NgrbParams ng_baseline_params(double epsilon, double lambda, int a_max) {
    NgrbParams p;
    p.epsilon = epsilon;
    p.lambda = lambda;
    p.a_max = a_max;
    p.rb.metric = RbMetric::none;
    return p;
}

}  // namespace rbvq
