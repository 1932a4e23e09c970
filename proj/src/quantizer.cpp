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
#include <rbvq/okrb.hpp>
#include <rbvq/quantizer.hpp>

#include <fmt/core.h>

#include <array>
#include <cmath>

namespace rbvq {

namespace {

struct MethodEntry {
    Method method;
    std::string_view name;
};

constexpr std::array<MethodEntry, 9> kMethods{{
    {Method::okrb, "okrb"},
    {Method::somrb, "somrb"},
    {Method::ngrb, "ngrb"},
    {Method::okrb_eb, "okrb_eb"},
    {Method::somrb_eb, "somrb_eb"},
    {Method::ngrb_eb, "ngrb_eb"},
    {Method::okmeans, "okmeans"},
    {Method::som, "som"},
    {Method::ng, "ng"},
}};

bool is_eb(Method m) {
    return m == Method::okrb_eb || m == Method::somrb_eb || m == Method::ngrb_eb;
}

bool is_static(Method m) {
    return m == Method::okmeans || m == Method::som || m == Method::ng;
}

bool uses_sigma(Method m) {
    return m == Method::somrb || m == Method::somrb_eb || m == Method::som;
}

bool uses_gas(Method m) {
    return m == Method::ngrb || m == Method::ngrb_eb || m == Method::ng;
}

}  // namespace

std::string_view method_name(Method method) {
    for (const auto& entry : kMethods) {
        if (entry.method == method) {
            return entry.name;
        }
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (const auto& entry : kMethods) {
        if (entry.name == name) {
            return entry.method;
        }
    }
    return std::nullopt;
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = [] {
        std::vector<Method> out;
        for (const auto& entry : kMethods) {
            out.push_back(entry.method);
        }
        return out;
    }();
    return methods;
}

MethodConfig MethodConfig::defaults(Method method) {
    MethodConfig c;
    c.method = method;
    switch (method) {
    case Method::okrb:
        c.epsilon = 0.1; c.th_rb = 0.01; c.beta = 0.005;
        break;
    case Method::okrb_eb:
        c.epsilon = 0.3; c.th_rb = 0.01; c.beta = 0.005;
        break;
    case Method::okmeans:
        c.epsilon = 0.5;
        break;
    case Method::somrb:
        c.epsilon = 0.2; c.sigma = 0.5; c.th_rb = 0.1; c.beta = 0.0001;
        break;
    case Method::somrb_eb:
        c.epsilon = 0.3; c.sigma = 0.5; c.th_rb = 0.5; c.beta = 0.0005;
        break;
    case Method::som:
        c.epsilon = 0.4; c.sigma = 0.5;
        break;
    case Method::ngrb:
        c.epsilon = 0.3; c.lambda = 0.5; c.a_max = 75; c.th_rb = 0.01; c.beta = 0.005;
        break;
    case Method::ngrb_eb:
        c.epsilon = 0.3; c.lambda = 1.0; c.a_max = 100; c.th_rb = 0.01; c.beta = 0.005;
        break;
    case Method::ng:
        c.epsilon = 0.3; c.lambda = 2.0; c.a_max = 75;
        break;
    }
    return c;
}

void MethodConfig::set(std::string_view name, double value) {
    if (name == "epsilon") {
        epsilon = value;
    } else if (name == "sigma") {
        sigma = value;
    } else if (name == "lambda") {
        lambda = value;
    } else if (name == "a_max") {
        if (value != std::floor(value)) {
            throw InvalidInput(fmt::format("a_max must be an integer, got {}", value));
        }
        a_max = static_cast<int>(value);
    } else if (name == "th_rb") {
        th_rb = value;
    } else if (name == "beta") {
        beta = value;
    } else {
        throw InvalidInput(fmt::format("unknown parameter '{}'", name));
    }
}

double MethodConfig::get(std::string_view name) const {
    if (name == "epsilon") return epsilon;
    if (name == "sigma") return sigma;
    if (name == "lambda") return lambda;
    if (name == "a_max") return a_max;
    if (name == "th_rb") return th_rb;
    if (name == "beta") return beta;
    throw InvalidInput(fmt::format("unknown parameter '{}'", name));
}

std::vector<std::string_view> MethodConfig::parameter_names() const {
    std::vector<std::string_view> names{"epsilon"};
    if (uses_sigma(method)) {
        names.push_back("sigma");
    }
    if (uses_gas(method)) {
        names.push_back("lambda");
        names.push_back("a_max");
    }
    if (!is_static(method)) {
        names.push_back("th_rb");
        names.push_back("beta");
    }
    return names;
}

RBParams MethodConfig::rb() const {
    RBParams p{th_rb, beta};
    if (is_static(method)) {
        p.metric = RbMetric::none;
    } else if (is_eb(method)) {
        p.metric = RbMetric::error_utility;
    }
    return p;
}

void MethodConfig::validate() const {
    switch (method) {
    case Method::okrb:
    case Method::okrb_eb:
        OkrbParams{epsilon, rb()}.validate();
        break;
    case Method::okmeans:
        if (!(epsilon > 0.0 && epsilon <= 1.0)) {
            throw InvalidInput(fmt::format("epsilon must lie in (0, 1], got {}", epsilon));
        }
        break;
    case Method::somrb:
    case Method::somrb_eb:
    case Method::som:
        SomrbParams{epsilon, sigma, rb()}.validate();
        break;
    case Method::ngrb:
    case Method::ngrb_eb:
    case Method::ng:
        NgrbParams{epsilon, lambda, a_max, rb()}.validate();
        break;
    }
}

std::unique_ptr<Quantizer> make_quantizer(const MethodConfig& config, std::size_t units,
                                          std::size_t dim, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    switch (config.method) {
    case Method::okrb:
    case Method::okrb_eb:
        return std::make_unique<Okrb>(init_random_codebook(units, dim, rng),
                                      OkrbParams{config.epsilon, config.rb()});
    case Method::okmeans:
        return std::make_unique<OnlineKMeans>(init_random_codebook(units, dim, rng), config.epsilon);
    case Method::somrb:
    case Method::somrb_eb:
    case Method::som:
        return std::make_unique<Somrb>(units, dim, SomrbParams{config.epsilon, config.sigma, config.rb()},
                                       seed);
    case Method::ngrb:
    case Method::ngrb_eb:
    case Method::ng:
        return std::make_unique<Ngrb>(init_random_codebook(units, dim, rng),
                                      NgrbParams{config.epsilon, config.lambda, config.a_max, config.rb()});
    }
    throw InvalidInput("unknown method");
}

}  // namespace rbvq
