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
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

namespace rbvq {

Dataset::Dataset(std::string name, std::size_t dim, std::vector<double> values)
    : name_(std::move(name)), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) {
        throw InvalidInput(fmt::format("dataset '{}' has dimension 0", name_));
    }
    if (values_.empty() || values_.size() % dim_ != 0) {
        throw InvalidInput(fmt::format("dataset '{}' is empty or ragged", name_));
    }
    for (const double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidInput(fmt::format("dataset '{}' contains a non-finite value", name_));
        }
    }
}

Dataset make_blobs(std::size_t n, Rng& rng, const BlobsOptions& options) {
    if (n == 0 || options.centers == 0) {
        throw InvalidInput("make_blobs needs n >= 1 and at least one centre");
    }
    std::vector<std::array<double, 2>> centers(options.centers);
    for (auto& c : centers) {
        c[0] = rng.uniform(options.center_lo, options.center_hi);
        c[1] = rng.uniform(options.center_lo, options.center_hi);
    }
    std::vector<double> values;
    values.reserve(2 * n);
    for (std::size_t k = 0; k < options.centers; ++k) {
        // Remainder points go to the first centres.
        const std::size_t count = n / options.centers + (k < n % options.centers ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            values.push_back(rng.normal(centers[k][0], options.cluster_std));
            values.push_back(rng.normal(centers[k][1], options.cluster_std));
        }
    }
    return Dataset("blobs", 2, std::move(values));
}

Dataset make_circles(std::size_t n, Rng& rng, double noise, double factor) {
    if (n == 0) {
        throw InvalidInput("make_circles needs n >= 1");
    }
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    std::vector<double> values;
    values.reserve(2 * n);
    auto ring = [&](std::size_t count, double radius) {
        for (std::size_t i = 0; i < count; ++i) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
            values.push_back(radius * std::cos(angle));
            values.push_back(radius * std::sin(angle));
        }
    };
    ring(n_out, 1.0);
    ring(n_in, factor);
    if (noise > 0.0) {
        for (double& v : values) {
            v += rng.normal(0.0, noise);
        }
    }
    return Dataset("circles", 2, std::move(values));
}

Dataset make_moons(std::size_t n, Rng& rng, double noise) {
    if (n == 0) {
        throw InvalidInput("make_moons needs n >= 1");
    }
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    auto angle = [](std::size_t i, std::size_t count) {
        return count < 2 ? 0.0
                         : std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1);
    };
    std::vector<double> values;
    values.reserve(2 * n);
    for (std::size_t i = 0; i < n_out; ++i) {
        values.push_back(std::cos(angle(i, n_out)));
        values.push_back(std::sin(angle(i, n_out)));
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        values.push_back(1.0 - std::cos(angle(i, n_in)));
        values.push_back(1.0 - std::sin(angle(i, n_in)) - 0.5);
    }
    if (noise > 0.0) {
        for (double& v : values) {
            v += rng.normal(0.0, noise);
        }
    }
    return Dataset("moons", 2, std::move(values));
}

Dataset make_builtin(std::string_view name, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    if (name == "blobs") {
        return make_blobs(n == 0 ? 1000 : n, rng);
    }
    if (name == "circles") {
        return make_circles(n == 0 ? 1000 : n, rng);
    }
    if (name == "moons") {
        return make_moons(n == 0 ? 1000 : n, rng);
    }
    const auto& names = surrogate_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) {
        return make_surrogate(name);
    }
    throw InvalidInput(fmt::format("unknown builtin dataset '{}'", name));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        return fields;
    }
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto begin = line.find_first_not_of(" \t\r", pos);
        if (begin == std::string_view::npos) {
            break;
        }
        const auto end = line.find_first_of(" \t\r", begin);
        fields.push_back(line.substr(begin, end - begin));
        pos = end == std::string_view::npos ? line.size() : end;
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(fmt::format("line {}: '{}' is not a number", line_no, field), line_no);
    }
    if (!std::isfinite(value)) {
        throw ParseError(fmt::format("line {}: non-finite value '{}'", line_no, field), line_no);
    }
    return value;
}

}  // namespace

Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open dataset file {}", path.string()));
    }
    std::vector<double> values;
    std::size_t columns = 0;
    std::size_t line_no = 0;
    bool header_pending = options.has_header;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) {
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        auto fields = split_fields(content);
        if (options.drop_last_column) {
            if (fields.size() < 2) {
                throw ParseError(fmt::format("line {}: nothing left after dropping the label column", line_no),
                                 line_no);
            }
            fields.pop_back();
        }
        if (columns == 0) {
            columns = fields.size();
        } else if (fields.size() != columns) {
            throw ParseError(
                fmt::format("line {}: expected {} columns, found {}", line_no, columns, fields.size()),
                line_no);
        }
        for (const auto field : fields) {
            values.push_back(parse_number(field, line_no));
        }
    }
    if (values.empty()) {
        throw ParseError(fmt::format("{}: no data rows", path.string()), line_no);
    }
    return Dataset(path.stem().string(), columns, std::move(values));
}

DatasetStats compute_stats(const Dataset& ds) {
    DatasetStats s;
    s.n = ds.size();
    s.dim = ds.dim();
    const auto& v = ds.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.min = *lo;
    s.max = *hi;
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (const double x : v) {
        var += (x - mean) * (x - mean);
    }
    s.stddev = std::sqrt(var / static_cast<double>(v.size()));
    return s;
}

const std::vector<ReferenceCharacteristics>& reference_table() {
    static const std::vector<ReferenceCharacteristics> table{
        {"blobs", 1000, 2, std::nullopt, std::nullopt, std::nullopt},
        {"circles", 1000, 2, std::nullopt, std::nullopt, std::nullopt},
        {"moons", 1000, 2, std::nullopt, std::nullopt, std::nullopt},
        {"aggregation", 788, 2, 9.44, 36.6, 1.95},
        {"compound", 399, 2, 8.69, 42.9, 5.75},
        {"t4.8k", 8000, 2, 147.0, 635.0, 14.6},
        {"t7.10k", 10000, 2, 170.0, 696.0, 0.797},
        {"iris", 150, 4, 1.97, 7.9, 0.1},
        {"wine", 178, 13, 216.0, 1680.0, 0.13},
        {"digits", 1797, 64, 6.02, 16.0, 0.0},
    };
    return table;
}

std::optional<ReferenceCharacteristics> reference_characteristics(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& ref : reference_table()) {
        if (ref.name == lower) {
            return ref;
        }
    }
    return std::nullopt;
}

std::vector<std::string> validate_dataset(const Dataset& ds, const ReferenceCharacteristics& ref) {
    // Published values carry three significant figures.
    auto close = [](double actual, double expected) {
        return std::abs(actual - expected) <= 0.006 * std::abs(expected) + 0.005;
    };
    std::vector<std::string> problems;
    const auto stats = compute_stats(ds);
    if (stats.n != ref.n) {
        problems.push_back(fmt::format("N = {}, expected {}", stats.n, ref.n));
    }
    if (stats.dim != ref.dim) {
        problems.push_back(fmt::format("D = {}, expected {}", stats.dim, ref.dim));
    }
    if (ref.stddev && !close(stats.stddev, *ref.stddev)) {
        problems.push_back(fmt::format("STD = {:.4g}, expected {}", stats.stddev, *ref.stddev));
    }
    if (ref.max && !close(stats.max, *ref.max)) {
        problems.push_back(fmt::format("MAX = {:.4g}, expected {}", stats.max, *ref.max));
    }
    if (ref.min && !close(stats.min, *ref.min)) {
        problems.push_back(fmt::format("MIN = {:.4g}, expected {}", stats.min, *ref.min));
    }
    return problems;
}

std::string_view drift_kind_name(DriftKind kind) {
    switch (kind) {
    case DriftKind::none: return "static";
    case DriftKind::sudden: return "sudden";
    case DriftKind::gradual: return "gradual";
    case DriftKind::recurring: return "recurring";
    }
    return "unknown";
}

std::optional<DriftKind> parse_drift_kind(std::string_view name) {
    if (name == "static" || name == "none") return DriftKind::none;
    if (name == "sudden") return DriftKind::sudden;
    if (name == "gradual") return DriftKind::gradual;
    if (name == "recurring") return DriftKind::recurring;
    return std::nullopt;
}

double gradual_p_old(std::size_t t, std::size_t drift_start, std::size_t t_dur) {
    const double p = (static_cast<double>(drift_start) + static_cast<double>(t_dur) - static_cast<double>(t)) /
                     static_cast<double>(t_dur);
    return std::clamp(p, 0.0, 1.0);
}

DriftSchedule::DriftSchedule(std::vector<std::shared_ptr<const Dataset>> segments, DriftKind kind,
                             std::size_t segment_length, std::size_t t_dur, std::uint64_t seed)
    : segments_(std::move(segments)), kind_(kind), segment_length_(segment_length), t_dur_(t_dur), rng_(seed) {
    if (segments_.empty()) {
        throw InvalidInput("drift schedule has no segments");
    }
    for (const auto& s : segments_) {
        if (!s) {
            throw InvalidInput("drift schedule has a null segment");
        }
        if (s->dim() != segments_.front()->dim()) {
            throw InvalidInput("drift schedule segments differ in dimension");
        }
    }
    if (segment_length_ == 0) {
        throw InvalidInput("segment_length must be positive");
    }
    if (kind_ == DriftKind::gradual && (t_dur_ == 0 || t_dur_ > segment_length_)) {
        throw InvalidInput("gradual drift needs 0 < t_dur <= segment_length");
    }
    if (kind_ == DriftKind::recurring && segments_.size() < 2) {
        throw InvalidInput("recurring drift needs two segments");
    }
}

std::size_t DriftSchedule::base_segment(std::size_t t) const {
    const std::size_t period = t / segment_length_;
    switch (kind_) {
    case DriftKind::none:
        return 0;
    case DriftKind::recurring:
        return period % 2;
    case DriftKind::sudden:
    case DriftKind::gradual:
        return std::min(period, segments_.size() - 1);
    }
    return 0;
}

std::optional<DriftSchedule::Mixing> DriftSchedule::mixing(std::size_t t) const {
    if (kind_ != DriftKind::gradual) {
        return std::nullopt;
    }
    // Window k covers [k * length - t_dur, k * length) for k = 1..S-1.
    const std::size_t k = t / segment_length_ + 1;
    if (k >= segments_.size()) {
        return std::nullopt;
    }
    const std::size_t boundary = k * segment_length_;
    const std::size_t start = boundary - t_dur_;
    if (t < start) {
        return std::nullopt;
    }
    return Mixing{k - 1, k, gradual_p_old(t, start, t_dur_)};
}

Draw DriftSchedule::next_input(std::size_t t) {
    std::size_t segment = base_segment(t);
    if (const auto mix = mixing(t)) {
        segment = rng_.bernoulli(mix->p_old) ? mix->old_segment : mix->new_segment;
    }
    const Dataset& ds = *segments_[segment];
    return Draw{ds.point(rng_.index(ds.size())), segment};
}

}  // namespace rbvq
