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
#include <rbvq/streams.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rbvq {

namespace {

struct Shape {
    std::vector<double> xs;
    std::vector<double> ys;
    Rng rng;

    explicit Shape(std::uint64_t seed) : rng(seed) {}

    void add(double x, double y) {
        xs.push_back(x);
        ys.push_back(y);
    }

    // Uniform inside an axis-aligned ellipse.
    void ellipse(std::size_t n, double cx, double cy, double rx, double ry) {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::sqrt(rng.uniform());
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            add(cx + rx * r * std::cos(a), cy + ry * r * std::sin(a));
        }
    }

    void gaussian(std::size_t n, double cx, double cy, double sd) {
        for (std::size_t i = 0; i < n; ++i) {
            add(rng.normal(cx, sd), rng.normal(cy, sd));
        }
    }

    // Annulus sector between angles a0 and a1.
    void arc(std::size_t n, double cx, double cy, double r0, double r1, double a0, double a1) {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::sqrt(rng.uniform(r0 * r0, r1 * r1));
            const double a = rng.uniform(a0, a1);
            add(cx + r * std::cos(a), cy + r * std::sin(a));
        }
    }

    void box(std::size_t n, double x0, double y0, double x1, double y1) {
        for (std::size_t i = 0; i < n; ++i) {
            add(rng.uniform(x0, x1), rng.uniform(y0, y1));
        }
    }

    void sine_band(std::size_t n, double x0, double x1, double y, double amp, double periods, double width) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = rng.uniform(x0, x1);
            const double phase = 2.0 * std::numbers::pi * periods * (x - x0) / (x1 - x0);
            add(x, y + amp * std::sin(phase) + rng.uniform(-width, width));
        }
    }
};

struct Moments {
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    m.lo = *lo;
    m.hi = *hi;
    for (const double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (const double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size());
    return m;
}

// Map x onto [lo, hi] exactly, then pick a scale and offset for y inside the
// same interval so the flattened std lands on the target.
Dataset fit_to_reference(const std::string& name, Shape& shape) {
    const auto ref = reference_characteristics(name);
    const double lo = *ref->min;
    const double hi = *ref->max;
    const double width = hi - lo;

    const Moments mx = moments(shape.xs);
    const Moments my = moments(shape.ys);
    const double ax = width / (mx.hi - mx.lo);
    const double mean_x = (mx.mean - mx.lo) * ax + lo;
    const double var_x = mx.var * ax * ax;

    // y normalised to [0, 1].
    const double ny_mean = (my.mean - my.lo) / (my.hi - my.lo);
    const double ny_var = my.var / ((my.hi - my.lo) * (my.hi - my.lo));

    const double target = *ref->stddev;
    double best_err = std::numeric_limits<double>::infinity();
    double best_scale = 1.0;
    double best_offset = 0.0;
    constexpr int kSteps = 1500;
    for (int i = 1; i <= kSteps; ++i) {
        const double scale = width * i / kSteps;
        for (int j = 0; j <= kSteps; ++j) {
            const double offset = lo + (width - scale) * j / kSteps;
            const double mean_y = offset + scale * ny_mean;
            const double var_y = ny_var * scale * scale;
            const double d = (mean_x - mean_y) / 2.0;
            const double sd = std::sqrt((var_x + var_y) / 2.0 + d * d);
            const double err = std::abs(sd - target);
            if (err < best_err) {
                best_err = err;
                best_scale = scale;
                best_offset = offset;
            }
        }
    }

    std::vector<double> values;
    values.reserve(2 * shape.xs.size());
    for (std::size_t i = 0; i < shape.xs.size(); ++i) {
        values.push_back((shape.xs[i] - mx.lo) * ax + lo);
        values.push_back((shape.ys[i] - my.lo) / (my.hi - my.lo) * best_scale + best_offset);
    }
    return Dataset(name, 2, std::move(values));
}

Dataset aggregation() {
    Shape s(0xa66e6a7e);
    s.ellipse(45, 10.5, 22.5, 2.2, 2.2);
    s.ellipse(170, 9.5, 10.0, 4.5, 6.0);
    s.ellipse(102, 21.0, 22.5, 4.2, 4.2);
    s.ellipse(273, 32.0, 22.0, 4.2, 6.5);
    s.ellipse(34, 21.0, 8.5, 2.0, 2.0);
    s.ellipse(130, 31.0, 8.0, 4.5, 4.5);
    s.ellipse(34, 20.5, 3.8, 1.6, 1.6);
    return fit_to_reference("aggregation", s);
}

Dataset compound() {
    Shape s(0xc0490d);
    s.ellipse(50, 10.0, 15.0, 1.2, 1.2);
    s.arc(42, 10.0, 15.0, 3.0, 4.0, 0.0, 2.0 * std::numbers::pi);
    s.ellipse(45, 19.0, 8.0, 2.5, 2.5);
    s.ellipse(38, 24.0, 9.0, 1.5, 2.0);
    s.ellipse(66, 33.0, 18.0, 1.8, 3.5);
    s.box(158, 28.0, 6.0, 42.0, 24.0);
    return fit_to_reference("compound", s);
}

Dataset t48k() {
    Shape s(0x7048);
    s.sine_band(1400, 40.0, 600.0, 80.0, 35.0, 1.5, 8.0);
    s.ellipse(900, 120.0, 230.0, 60.0, 40.0);
    s.ellipse(700, 300.0, 240.0, 30.0, 55.0);
    s.arc(1100, 480.0, 230.0, 50.0, 75.0, 0.0, 1.6 * std::numbers::pi);
    s.box(800, 380.0, 130.0, 400.0, 300.0);
    s.gaussian(800, 200.0, 140.0, 14.0);
    s.ellipse(1500, 560.0, 110.0, 45.0, 20.0);
    s.box(800, 14.0, 20.0, 635.0, 320.0);
    return fit_to_reference("t4.8k", s);
}

Dataset t710k() {
    // Mostly thin curves and stripes, unlike the filled shapes of t4.8k.
    Shape s(0x7710);
    s.arc(1500, 120.0, 280.0, 70.0, 76.0, 0.2 * std::numbers::pi, 1.1 * std::numbers::pi);
    s.arc(1500, 190.0, 240.0, 70.0, 76.0, 1.2 * std::numbers::pi, 2.1 * std::numbers::pi);
    s.box(1100, 330.0, 40.0, 338.0, 420.0);
    s.box(900, 430.0, 50.0, 438.0, 420.0);
    s.arc(1400, 560.0, 330.0, 80.0, 86.0, 0.0, 2.0 * std::numbers::pi);
    s.sine_band(1500, 470.0, 690.0, 130.0, 40.0, 1.0, 3.0);
    s.box(1100, 20.0, 440.0, 680.0, 446.0);
    s.box(1000, 0.8, 10.0, 696.0, 470.0);
    return fit_to_reference("t7.10k", s);
}

}  // namespace

const std::vector<std::string>& surrogate_names() {
    static const std::vector<std::string> names{"aggregation", "compound", "t4.8k", "t7.10k"};
    return names;
}

Dataset make_surrogate(std::string_view name) {
    if (name == "aggregation") return aggregation();
    if (name == "compound") return compound();
    if (name == "t4.8k") return t48k();
    if (name == "t7.10k") return t710k();
    throw InvalidInput(fmt::format("no surrogate for dataset '{}'", name));
}

}  // namespace rbvq
