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
#ifndef RBVQ_QUANTIZER_HPP
#define RBVQ_QUANTIZER_HPP

#include <rbvq/core.hpp>

#include <memory>
#include <string_view>
#include <utility>

namespace rbvq {

// The contract the benchmark harness drives: one input per step.
class Quantizer {
public:
    virtual ~Quantizer() = default;

    virtual StepReport step(std::span<const double> x) = 0;
    virtual const Codebook& codebook() const = 0;

    // Topology for graph metrics; edgeless unless the method keeps one.
    virtual Graph graph() const { return Graph(codebook().size()); }
};

enum class Method { okrb, somrb, ngrb, okrb_eb, somrb_eb, ngrb_eb, okmeans, som, ng };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

// Flat parameter bundle covering every method. Fields a method does not use
// are ignored. Defaults come from the tuned configurations.
struct MethodConfig {
    Method method = Method::okrb;
    double epsilon = 0.1;
    double sigma = 0.5;
    double lambda = 0.5;
    int a_max = 75;
    double th_rb = 0.01;
    double beta = 0.005;

    static MethodConfig defaults(Method method);

    // Parameter names understood by set()/get(): epsilon, sigma, lambda,
    // a_max, th_rb, beta.
    void set(std::string_view name, double value);
    double get(std::string_view name) const;
    std::vector<std::string_view> parameter_names() const;

    RBParams rb() const;
    void validate() const;
};

std::unique_ptr<Quantizer> make_quantizer(const MethodConfig& config, std::size_t units,
                                          std::size_t dim, std::uint64_t seed);

}  // namespace rbvq

#endif  // RBVQ_QUANTIZER_HPP
