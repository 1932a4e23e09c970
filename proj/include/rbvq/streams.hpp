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
#ifndef RBVQ_STREAMS_HPP
#define RBVQ_STREAMS_HPP

#include <rbvq/core.hpp>

#include <filesystem>
#include <memory>
#include <string_view>

namespace rbvq {

// Non-owning row-major view over M points of dimension dim.
struct PointsView {
    std::span<const double> values;
    std::size_t dim = 0;

    std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
    bool empty() const { return size() == 0; }
    std::span<const double> point(std::size_t i) const { return values.subspan(i * dim, dim); }
};

class Dataset {
public:
    Dataset(std::string name, std::size_t dim, std::vector<double> values);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return values_.size() / dim_; }
    std::span<const double> point(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    const std::vector<double>& values() const { return values_; }
    PointsView view() const { return {values_, dim_}; }

private:
    std::string name_;
    std::size_t dim_;
    std::vector<double> values_;
};

struct BlobsOptions {
    std::size_t centers = 3;
    double cluster_std = 1.0;
    double center_lo = -10.0;
    double center_hi = 10.0;
};

// Isotropic Gaussian clusters with centres drawn uniformly in the box.
Dataset make_blobs(std::size_t n, Rng& rng, const BlobsOptions& options = {});
// Two concentric circles (radii 1 and `factor`) with Gaussian noise.
Dataset make_circles(std::size_t n, Rng& rng, double noise = 0.05, double factor = 0.5);
// Two interleaved unit half-circles with Gaussian noise.
Dataset make_moons(std::size_t n, Rng& rng, double noise = 0.05);

// Deterministic 2-D stand-ins for the shape benchmarks (aggregation,
// compound, t4.8k, t7.10k) with the same point counts and value ranges. Used
// when the original files are not on disk.
Dataset make_surrogate(std::string_view name);
const std::vector<std::string>& surrogate_names();

// Builtin synthetic sets by name: blobs, circles, moons, or a surrogate name.
Dataset make_builtin(std::string_view name, std::size_t n, std::uint64_t seed);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error(message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct CsvOptions {
    bool has_header = false;
    bool drop_last_column = false;
};

// Comma-separated numeric columns; lines without commas are split on
// whitespace so the tab/space separated originals load as well.
Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options = {});

struct DatasetStats {
    std::size_t n = 0;
    std::size_t dim = 0;
    double stddev = 0.0;  // population std over every coordinate
    double max = 0.0;
    double min = 0.0;
};

DatasetStats compute_stats(const Dataset& ds);

struct ReferenceCharacteristics {
    std::string name;
    std::size_t n;
    std::size_t dim;
    std::optional<double> stddev;
    std::optional<double> max;
    std::optional<double> min;
};

std::optional<ReferenceCharacteristics> reference_characteristics(std::string_view name);
const std::vector<ReferenceCharacteristics>& reference_table();

// Mismatches against the published characteristics; empty when it matches.
std::vector<std::string> validate_dataset(const Dataset& ds, const ReferenceCharacteristics& ref);

enum class DriftKind { none, sudden, gradual, recurring };

std::string_view drift_kind_name(DriftKind kind);
std::optional<DriftKind> parse_drift_kind(std::string_view name);

// (drift_start + t_dur - t) / t_dur clamped to [0, 1].
double gradual_p_old(std::size_t t, std::size_t drift_start, std::size_t t_dur);

struct Draw {
    std::span<const double> point;
    std::size_t segment;
};

// Yields one input per iteration from an ordered list of datasets.
// Iterations are 0-based; segment k spans [k * length, (k + 1) * length).
class DriftSchedule {
public:
    DriftSchedule(std::vector<std::shared_ptr<const Dataset>> segments, DriftKind kind,
                  std::size_t segment_length, std::size_t t_dur, std::uint64_t seed);

    Draw next_input(std::size_t t);

    // Dataset active at t when no mixing applies (for gradual, the new one
    // once the window closes).
    std::size_t base_segment(std::size_t t) const;

    struct Mixing {
        std::size_t old_segment;
        std::size_t new_segment;
        double p_old;
    };
    std::optional<Mixing> mixing(std::size_t t) const;

    std::size_t dim() const { return segments_.front()->dim(); }
    const Dataset& segment(std::size_t k) const { return *segments_[k]; }
    std::size_t segment_count() const { return segments_.size(); }
    DriftKind kind() const { return kind_; }

private:
    std::vector<std::shared_ptr<const Dataset>> segments_;
    DriftKind kind_;
    std::size_t segment_length_;
    std::size_t t_dur_;
    Rng rng_;
};

}  // namespace rbvq

#endif  // RBVQ_STREAMS_HPP
