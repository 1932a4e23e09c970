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
#ifndef RBVQ_BASELINES_HPP
#define RBVQ_BASELINES_HPP

#include <rbvq/ngrb.hpp>
#include <rbvq/somrb.hpp>

namespace rbvq {

// Plain online k-means with a static learning rate: only the winner moves.
StepReport okmeans_step(std::span<const double> x, Codebook& cb, double epsilon);

class OnlineKMeans final : public Quantizer {
public:
    OnlineKMeans(Codebook initial, double epsilon);

    StepReport step(std::span<const double> x) override;
    const Codebook& codebook() const override { return codebook_; }

private:
    Codebook codebook_;
    double epsilon_;
};

// Static-parameter SOM and NG are the RB variants with remove-birth switched
// off.
SomrbParams som_baseline_params(double epsilon = 0.4, double sigma = 0.5);
NgrbParams ng_baseline_params(double epsilon = 0.3, double lambda = 2.0, int a_max = 75);

}  // namespace rbvq

#endif  // RBVQ_BASELINES_HPP
