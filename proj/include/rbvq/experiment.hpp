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
#ifndef RBVQ_EXPERIMENT_HPP
#define RBVQ_EXPERIMENT_HPP

#include <rbvq/metrics.hpp>
#include <rbvq/quantizer.hpp>
#include <rbvq/streams.hpp>

#include <filesystem>

namespace rbvq {

// Raised for invalid run configurations; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SegmentSpec {
    std::string builtin;  // blobs, circles, moons or a surrogate name
    std::size_t n = 1000;
    std::optional<std::uint64_t> seed;  // defaults to the stream data_seed
    std::filesystem::path csv;          // used when builtin is empty
    bool header = false;
    bool drop_last = false;
};

struct StreamSpec {
    DriftKind kind = DriftKind::none;
    std::vector<SegmentSpec> segments;
    std::size_t segment_length = 100000;
    std::size_t t_dur = 10000;
    std::uint64_t data_seed = 0;
};

// dataset: metrics over the whole active dataset; window: over the last W
// inputs.
enum class EvalMode { dataset, window };

struct RunConfig {
    std::string name = "run";
    MethodConfig method;
    std::size_t units = 100;
    std::size_t iterations = 50000;
    std::size_t eval_stride = 100;
    std::size_t window = 1000;
    std::optional<EvalMode> eval_mode;  // default: dataset for static streams, window otherwise
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    std::size_t threads = 0;
    std::filesystem::path output = "out";
    bool export_graph = false;
    StreamSpec stream;

    EvalMode effective_eval_mode() const;
    void validate() const;
};

// JSON document; relative csv paths resolve against base_dir.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

std::vector<std::shared_ptr<const Dataset>> load_segments(const StreamSpec& stream);

struct RunOutcome {
    std::vector<MetricsRecord> records;
    std::vector<std::size_t> rb_events;  // iteration stamps
    std::unique_ptr<Quantizer> quantizer;
};

// Iteration t counts processed inputs; records are taken at every multiple of
// eval_stride and at the final iteration.
RunOutcome run_single(const RunConfig& config, const std::vector<std::shared_ptr<const Dataset>>& segments,
                      std::uint64_t seed);

// Pointwise mean; all runs must share the iteration axis.
std::vector<MetricsRecord> average_records(const std::vector<std::vector<MetricsRecord>>& runs);

struct ExperimentResult {
    std::vector<std::uint64_t> seeds;
    std::vector<RunOutcome> runs;
    std::vector<MetricsRecord> mean;
};

// Runs seeds seed .. seed + runs - 1, in parallel, merged by seed order.
ExperimentResult run_experiment(const RunConfig& config);

std::string metrics_csv(const std::vector<MetricsRecord>& records);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// metrics.csv plus run_<seed>.csv (and graph exports when requested).
void write_experiment(const RunConfig& config, const ExperimentResult& result);

// Edge list (ids, plus age for the gas graph) and a unit table with lattice
// positions where present.
std::string edge_list_text(const Quantizer& q);
std::string unit_table_csv(const Quantizer& q);

}  // namespace rbvq

#endif  // RBVQ_EXPERIMENT_HPP
