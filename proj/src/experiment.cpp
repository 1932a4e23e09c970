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
#include <rbvq/experiment.hpp>
#include <rbvq/ngrb.hpp>
#include <rbvq/somrb.hpp>
#include <rbvq/tuning.hpp>

#include <fmt/core.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace rbvq {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
}

std::size_t get_count(const json& obj, const std::string& key, std::string_view where, std::size_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(fmt::format("{}.{}: expected a non-negative integer", where, key));
    }
    return v.get<std::size_t>();
}

std::uint64_t get_seed(const json& v, std::string_view field) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer", field));
    }
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& key, std::string_view where, bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_boolean()) {
        throw ConfigError(fmt::format("{}.{}: expected true or false", where, key));
    }
    return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& key, std::string_view where) {
    if (!obj.at(key).is_string()) {
        throw ConfigError(fmt::format("{}.{}: expected a string", where, key));
    }
    return obj.at(key).get<std::string>();
}

SegmentSpec parse_segment(const json& j, std::size_t index, const std::filesystem::path& base_dir) {
    const std::string where = fmt::format("stream.segments[{}]", index);
    if (!j.is_object()) {
        throw ConfigError(fmt::format("{}: expected an object", where));
    }
    reject_unknown(j, where, {"builtin", "n", "seed", "csv", "header", "drop_last"});
    SegmentSpec s;
    const bool has_builtin = j.contains("builtin");
    const bool has_csv = j.contains("csv");
    if (has_builtin == has_csv) {
        throw ConfigError(fmt::format("{}: give exactly one of 'builtin' or 'csv'", where));
    }
    if (has_builtin) {
        s.builtin = get_string(j, "builtin", where);
    } else {
        s.csv = get_string(j, "csv", where);
        if (s.csv.is_relative() && !base_dir.empty()) {
            s.csv = base_dir / s.csv;
        }
    }
    s.n = get_count(j, "n", where, s.n);
    if (j.contains("seed")) {
        s.seed = get_seed(j.at("seed"), where + ".seed");
    }
    s.header = get_bool(j, "header", where, false);
    s.drop_last = get_bool(j, "drop_last", where, false);
    return s;
}

}  // namespace

EvalMode RunConfig::effective_eval_mode() const {
    if (eval_mode) {
        return *eval_mode;
    }
    return stream.kind == DriftKind::none ? EvalMode::dataset : EvalMode::window;
}

void RunConfig::validate() const {
    try {
        method.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(fmt::format("params: {}", e.what()));
    }
    if (iterations == 0) throw ConfigError("iterations: must be at least 1");
    if (eval_stride == 0) throw ConfigError("eval_stride: must be at least 1");
    if (window == 0) throw ConfigError("window: must be at least 1");
    if (runs == 0) throw ConfigError("runs: must be at least 1");
    if (units < 2) throw ConfigError("units: must be at least 2");
    const bool lattice = method.method == Method::somrb || method.method == Method::somrb_eb ||
                         method.method == Method::som;
    if (lattice && units < 4) throw ConfigError("units: lattice methods need at least 4");
    if (stream.segments.empty()) throw ConfigError("stream.segments: at least one segment is required");
    if (stream.kind == DriftKind::none && stream.segments.size() != 1) {
        throw ConfigError("stream.segments: a static stream takes exactly one segment");
    }
    if (stream.kind == DriftKind::recurring && stream.segments.size() < 2) {
        throw ConfigError("stream.segments: recurring drift needs at least two segments");
    }
    if (stream.segment_length == 0) throw ConfigError("stream.segment_length: must be at least 1");
    if (stream.kind == DriftKind::gradual && (stream.t_dur == 0 || stream.t_dur > stream.segment_length)) {
        throw ConfigError("stream.t_dur: must lie in [1, segment_length]");
    }
    for (std::size_t i = 0; i < stream.segments.size(); ++i) {
        const auto& s = stream.segments[i];
        if (s.builtin.empty()) {
            if (!std::filesystem::exists(s.csv)) {
                throw ConfigError(fmt::format("stream.segments[{}].csv: file not found: {}", i, s.csv.string()));
            }
        } else if (s.n == 0) {
            throw ConfigError(fmt::format("stream.segments[{}].n: must be at least 1", i));
        }
    }
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    reject_unknown(j, "config",
                   {"name", "method", "params", "units", "iterations", "eval_stride", "window", "eval_mode", "seed",
                    "runs", "threads", "output", "export_graph", "stream"});
    RunConfig c;
    if (!j.contains("method")) {
        throw ConfigError("method: required");
    }
    const auto method = parse_method(get_string(j, "method", "config"));
    if (!method) {
        throw ConfigError(fmt::format("method: unknown method '{}'", j.at("method").get<std::string>()));
    }
    c.method = MethodConfig::defaults(*method);
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (!p.is_object()) {
            throw ConfigError("params: expected an object");
        }
        const auto names = c.method.parameter_names();
        for (const auto& [key, value] : p.items()) {
            if (std::find(names.begin(), names.end(), key) == names.end()) {
                throw ConfigError(fmt::format("params.{}: not a parameter of {}", key, method_name(*method)));
            }
            if (!value.is_number()) {
                throw ConfigError(fmt::format("params.{}: expected a number", key));
            }
            try {
                c.method.set(key, value.get<double>());
            } catch (const InvalidInput& e) {
                throw ConfigError(fmt::format("params.{}: {}", key, e.what()));
            }
        }
    }
    if (j.contains("name")) c.name = get_string(j, "name", "config");
    c.units = get_count(j, "units", "config", c.units);
    c.iterations = get_count(j, "iterations", "config", c.iterations);
    c.eval_stride = get_count(j, "eval_stride", "config", c.eval_stride);
    c.window = get_count(j, "window", "config", c.window);
    c.runs = get_count(j, "runs", "config", c.runs);
    c.threads = get_count(j, "threads", "config", c.threads);
    if (j.contains("seed")) c.seed = get_seed(j.at("seed"), "seed");
    if (j.contains("output")) c.output = get_string(j, "output", "config");
    c.export_graph = get_bool(j, "export_graph", "config", false);
    if (j.contains("eval_mode")) {
        const auto mode = get_string(j, "eval_mode", "config");
        if (mode == "dataset") {
            c.eval_mode = EvalMode::dataset;
        } else if (mode == "window") {
            c.eval_mode = EvalMode::window;
        } else {
            throw ConfigError(fmt::format("eval_mode: expected 'dataset' or 'window', got '{}'", mode));
        }
    }
    if (!j.contains("stream")) {
        throw ConfigError("stream: required");
    }
    const auto& s = j.at("stream");
    if (!s.is_object()) {
        throw ConfigError("stream: expected an object");
    }
    reject_unknown(s, "stream", {"kind", "segments", "segment_length", "t_dur", "data_seed"});
    if (s.contains("kind")) {
        const auto kind_name = get_string(s, "kind", "stream");
        const auto kind = parse_drift_kind(kind_name);
        if (!kind) {
            throw ConfigError(fmt::format("stream.kind: unknown drift kind '{}'", kind_name));
        }
        c.stream.kind = *kind;
    }
    c.stream.segment_length = get_count(s, "segment_length", "stream", c.stream.segment_length);
    c.stream.t_dur = get_count(s, "t_dur", "stream", c.stream.t_dur);
    if (s.contains("data_seed")) c.stream.data_seed = get_seed(s.at("data_seed"), "stream.data_seed");
    if (!s.contains("segments") || !s.at("segments").is_array()) {
        throw ConfigError("stream.segments: expected an array");
    }
    for (std::size_t i = 0; i < s.at("segments").size(); ++i) {
        c.stream.segments.push_back(parse_segment(s.at("segments")[i], i, base_dir));
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open config {}", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path.parent_path());
}

std::vector<std::shared_ptr<const Dataset>> load_segments(const StreamSpec& stream) {
    std::vector<std::shared_ptr<const Dataset>> out;
    for (std::size_t i = 0; i < stream.segments.size(); ++i) {
        const auto& s = stream.segments[i];
        if (!s.builtin.empty()) {
            const std::uint64_t seed = s.seed.value_or(derive_seed(stream.data_seed, i));
            try {
                out.push_back(std::make_shared<const Dataset>(make_builtin(s.builtin, s.n, seed)));
            } catch (const InvalidInput& e) {
                throw ConfigError(fmt::format("stream.segments[{}].builtin: {}", i, e.what()));
            }
        } else {
            out.push_back(std::make_shared<const Dataset>(load_csv_dataset(s.csv, {s.header, s.drop_last})));
        }
    }
    return out;
}

RunOutcome run_single(const RunConfig& config, const std::vector<std::shared_ptr<const Dataset>>& segments,
                      std::uint64_t seed) {
    DriftSchedule schedule(segments, config.stream.kind, config.stream.segment_length, config.stream.t_dur,
                           derive_seed(seed, 0x57ea));
    RunOutcome out;
    out.quantizer = make_quantizer(config.method, config.units, schedule.dim(), seed);
    Quantizer& q = *out.quantizer;
    EvalWindow window(config.window, schedule.dim());
    const bool whole_dataset = config.effective_eval_mode() == EvalMode::dataset;
    for (std::size_t t = 1; t <= config.iterations; ++t) {
        const Draw draw = schedule.next_input(t - 1);
        const StepReport report = q.step(draw.point);
        window.push(draw.point);
        if (report.rb_fired) {
            window.record_rb(t);
            out.rb_events.push_back(t);
        }
        if (t % config.eval_stride == 0 || t == config.iterations) {
            const PointsView points =
                whole_dataset ? schedule.segment(schedule.base_segment(t - 1)).view() : window.points();
            out.records.push_back(evaluate(t, points, q.codebook(), q.graph(), window.rb_frequency(t)));
        }
    }
    return out;
}

std::vector<MetricsRecord> average_records(const std::vector<std::vector<MetricsRecord>>& runs) {
    if (runs.empty()) {
        return {};
    }
    std::vector<MetricsRecord> mean = runs.front();
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].size() != mean.size()) {
            throw InvalidInput("runs differ in record count");
        }
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const auto& x = runs[r][i];
            if (x.iteration != mean[i].iteration) {
                throw InvalidInput("runs differ in evaluation iterations");
            }
            mean[i].mse += x.mse;
            mean[i].dead_units += x.dead_units;
            mean[i].avg_degree += x.avg_degree;
            mean[i].avg_clustering += x.avg_clustering;
            mean[i].rb_count += x.rb_count;
        }
    }
    const double n = static_cast<double>(runs.size());
    for (auto& m : mean) {
        m.mse /= n;
        m.dead_units /= n;
        m.avg_degree /= n;
        m.avg_clustering /= n;
        m.rb_count /= n;
    }
    return mean;
}

ExperimentResult run_experiment(const RunConfig& config) {
    config.validate();
    const auto segments = load_segments(config.stream);
    ExperimentResult result;
    result.runs.resize(config.runs);
    for (std::size_t r = 0; r < config.runs; ++r) {
        result.seeds.push_back(config.seed + r);
    }
    parallel_for(config.runs, config.threads,
                 [&](std::size_t r) { result.runs[r] = run_single(config, segments, result.seeds[r]); });
    std::vector<std::vector<MetricsRecord>> records;
    for (const auto& run : result.runs) {
        records.push_back(run.records);
    }
    result.mean = average_records(records);
    return result;
}

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << text;
    if (!out) {
        throw std::runtime_error(fmt::format("write failed for {}", path.string()));
    }
}

void write_experiment(const RunConfig& config, const ExperimentResult& result) {
    write_text_file(config.output / "metrics.csv", metrics_csv(result.mean));
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const auto seed = result.seeds[r];
        write_text_file(config.output / fmt::format("run_{}.csv", seed), metrics_csv(result.runs[r].records));
        if (config.export_graph) {
            const Quantizer& q = *result.runs[r].quantizer;
            write_text_file(config.output / fmt::format("edges_{}.txt", seed), edge_list_text(q));
            write_text_file(config.output / fmt::format("units_{}.csv", seed), unit_table_csv(q));
        }
    }
}

std::string edge_list_text(const Quantizer& q) {
    std::string out;
    if (const auto* ng = dynamic_cast<const Ngrb*>(&q)) {
        const auto& g = ng->gas_graph();
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (const std::size_t b : g.neighbors(a)) {
                if (a < b) {
                    out += fmt::format("{} {} {}\n", a, b, *g.age(a, b));
                }
            }
        }
        return out;
    }
    const Graph g = q.graph();
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (const std::size_t b : g.adjacency[a]) {
            if (a < b) {
                out += fmt::format("{} {}\n", a, b);
            }
        }
    }
    return out;
}

std::string unit_table_csv(const Quantizer& q) {
    const Codebook& cb = q.codebook();
    const auto* som = dynamic_cast<const Somrb*>(&q);
    std::string out = "id";
    if (som) {
        out += ",row,col";
    }
    for (std::size_t d = 0; d < cb.dim(); ++d) {
        out += fmt::format(",w{}", d);
    }
    out += ",count\n";
    for (std::size_t n = 0; n < cb.size(); ++n) {
        out += fmt::format("{}", n);
        if (som) {
            const auto p = som->grid().position(n);
            out += fmt::format(",{},{}", p.row, p.col);
        }
        for (const double w : cb.weight(n)) {
            out += fmt::format(",{:.10g}", w);
        }
        out += fmt::format(",{:.10g}\n", cb.count(n));
    }
    return out;
}

}  // namespace rbvq
