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
#include <rbvq/tuning.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <sstream>

using namespace rbvq;

namespace {

std::vector<Dataset> small_datasets() {
    TuneOptions o;
    o.dataset_size = 200;
    o.seed = 3;
    return tuning_datasets(o);
}

TuneOptions small_options(std::size_t threads = 1) {
    TuneOptions o;
    o.runs = 2;
    o.iterations = 1500;
    o.units = 12;
    o.seed = 11;
    o.threads = threads;
    return o;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(TuneMse, Examples) {
    Codebook one(1, 2);
    one.weight(0)[0] = 1;
    const std::vector<double> pts{0, 0, 2, 0};
    EXPECT_DOUBLE_EQ(tune_mse({pts, 2}, one), 1.0);
    Codebook two(2, 2);
    two.weight(1)[0] = 3;
    const std::vector<double> pts2{0, 0, 4, 0};
    EXPECT_DOUBLE_EQ(tune_mse({pts2, 2}, two), 0.5);
    two.weight(1)[0] = 4;
    EXPECT_DOUBLE_EQ(tune_mse({pts2, 2}, two), 0.0);
    const std::vector<double> none;
    EXPECT_THROW(tune_mse({none, 2}, two), InvalidInput);
}

TEST(TuneMse, IsUnsquared) {
    Codebook cb(1, 2);
    const std::vector<double> pts{3, 4};
    EXPECT_DOUBLE_EQ(tune_mse({pts, 2}, cb), 5.0);
}

TEST(ParamGrid, ComboOrderFirstAxisSlowest) {
    const ParamGrid g{Method::okrb, {{"epsilon", {0.1, 0.2}}, {"th_rb", {0.01, 0.05, 0.1}}}};
    EXPECT_EQ(g.size(), 6u);
    EXPECT_EQ(g.values(0), (std::vector<double>{0.1, 0.01}));
    EXPECT_EQ(g.values(1), (std::vector<double>{0.1, 0.05}));
    EXPECT_EQ(g.values(3), (std::vector<double>{0.2, 0.01}));
    EXPECT_EQ(g.values(5), (std::vector<double>{0.2, 0.1}));
    const auto c = g.config(4);
    EXPECT_DOUBLE_EQ(c.epsilon, 0.2);
    EXPECT_DOUBLE_EQ(c.th_rb, 0.05);
    EXPECT_DOUBLE_EQ(c.beta, MethodConfig::defaults(Method::okrb).beta);
}

TEST(ParamGrid, Validation) {
    EXPECT_THROW((ParamGrid{Method::okrb, {{"sigma", {1.0}}}}.validate()), InvalidInput);
    EXPECT_THROW((ParamGrid{Method::okrb, {{"epsilon", {}}}}.validate()), InvalidInput);
    EXPECT_THROW((ParamGrid{Method::okrb, {{"epsilon", {0.0}}}}.validate()), InvalidInput);
    EXPECT_NO_THROW((ParamGrid{Method::okrb, {{"epsilon", {0.5}}}}.validate()));
    EXPECT_NO_THROW((ParamGrid{Method::okrb, {}}.validate()));
}

TEST(DefaultGrid, OkrbAxes) {
    const auto g = default_grid(Method::okrb);
    ASSERT_EQ(g.axes.size(), 3u);
    EXPECT_EQ(g.axes[0].name, "epsilon");
    EXPECT_EQ(g.axes[0].values, (std::vector<double>{0.05, 0.1, 0.2, 0.3}));
    EXPECT_EQ(g.axes[1].name, "th_rb");
    EXPECT_EQ(g.axes[1].values, (std::vector<double>{0.01, 0.05, 0.1, 0.5}));
    EXPECT_EQ(g.axes[2].name, "beta");
    EXPECT_EQ(g.axes[2].values, (std::vector<double>{0.005, 0.001, 0.0005, 0.0001}));
    EXPECT_EQ(g.size(), 64u);
}

TEST(DefaultGrid, OtherMethods) {
    const auto som = default_grid(Method::somrb);
    EXPECT_EQ(som.axes[1].name, "sigma");
    EXPECT_EQ(som.axes[1].values, (std::vector<double>{0.5, 0.75, 1, 2}));
    const auto ng = default_grid(Method::ngrb);
    EXPECT_EQ(ng.axes[0].values, (std::vector<double>{0.5, 1, 2, 4}));
    EXPECT_EQ(ng.axes[2].values, (std::vector<double>{25, 50, 75, 100}));
    EXPECT_EQ(ng.size(), 1024u);
    EXPECT_EQ(default_grid(Method::okmeans).axes[0].values, (std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5}));
    const auto plain_som = default_grid(Method::som);
    EXPECT_EQ(plain_som.axes[0].values, (std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4}));
    EXPECT_EQ(plain_som.axes[1].values, (std::vector<double>{0.5, 0.75, 1, 2, 3}));
    for (Method m : {Method::okrb, Method::okrb_eb, Method::somrb, Method::somrb_eb, Method::ngrb, Method::ngrb_eb,
                     Method::okmeans, Method::som, Method::ng}) {
        EXPECT_NO_THROW(default_grid(m).validate());
    }
}

TEST(TuningDatasets, ThreeNamedSets) {
    const auto ds = tuning_datasets(TuneOptions{});
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds[0].name(), "blobs");
    EXPECT_EQ(ds[1].name(), "circles");
    EXPECT_EQ(ds[2].name(), "moons");
    for (const auto& d : ds) EXPECT_EQ(d.size(), 1000u);
}

TEST(GridSearch, SingleComboHasNmseThree) {
    const ParamGrid g{Method::okrb, {{"epsilon", {0.1}}}};
    const auto r = grid_search(g, small_datasets(), small_options());
    ASSERT_EQ(r.table.size(), 1u);
    EXPECT_EQ(r.best, 0u);
    EXPECT_EQ(r.best_score().nmse, 3.0);
}

TEST(GridSearch, ReturnsExhaustiveMinimum) {
    const ParamGrid g{Method::okrb, {{"epsilon", {0.05, 0.3}}, {"th_rb", {0.01, 0.5}}, {"beta", {0.005, 0.0001}}}};
    const auto r = grid_search(g, small_datasets(), small_options());
    ASSERT_EQ(r.table.size(), 8u);
    // Recompute NMSE from the per-dataset table.
    std::vector<double> worst(3, 0.0);
    for (const auto& row : r.table)
        for (std::size_t m = 0; m < 3; ++m) worst[m] = std::max(worst[m], row.mse[m]);
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        const auto& row = r.table[i];
        EXPECT_EQ(row.index, i);
        EXPECT_EQ(row.values, g.values(i));
        double nmse = 0;
        for (std::size_t m = 0; m < 3; ++m) nmse += row.mse[m] / worst[m];
        EXPECT_NEAR(row.nmse, nmse, 1e-12);
        EXPECT_GT(row.nmse, 0.0);
        EXPECT_LE(row.nmse, 3.0 + 1e-12);
        if (nmse < best) { best = nmse; arg = i; }
    }
    EXPECT_EQ(r.best, arg);
    for (const auto& row : r.table) EXPECT_LE(r.best_score().nmse, row.nmse);
}

TEST(GridSearch, DeterministicAndThreadIndependent) {
    const ParamGrid g{Method::ngrb, {{"lambda", {0.5, 2}}, {"a_max", {25, 100}}}};
    const auto ds = small_datasets();
    const auto a = grid_search(g, ds, small_options(1));
    const auto b = grid_search(g, ds, small_options(1));
    const auto c = grid_search(g, ds, small_options(4));
    EXPECT_EQ(tune_result_csv(a), tune_result_csv(b));
    EXPECT_EQ(tune_result_csv(a), tune_result_csv(c));
    for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i].mse, c.table[i].mse);
}

TEST(GridSearch, SeedChangesResults) {
    const ParamGrid g{Method::okrb, {{"epsilon", {0.1, 0.3}}}};
    const auto ds = small_datasets();
    auto o = small_options();
    const auto a = grid_search(g, ds, o);
    o.seed = 12;
    const auto b = grid_search(g, ds, o);
    EXPECT_NE(a.table[0].mse, b.table[0].mse);
}

TEST(TuneResultCsv, SortedByNmse) {
    const ParamGrid g{Method::okmeans, {{"epsilon", {0.05, 0.5}}}};
    const auto r = grid_search(g, small_datasets(), small_options());
    const auto rows = lines(tune_result_csv(r));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "epsilon,mse_blobs,mse_circles,mse_moons,nmse");
    std::vector<double> nmse;
    for (std::size_t i = 1; i < rows.size(); ++i) nmse.push_back(std::stod(rows[i].substr(rows[i].rfind(',') + 1)));
    EXPECT_TRUE(std::is_sorted(nmse.begin(), nmse.end()));
    EXPECT_EQ(rows[1].substr(0, rows[1].find(',')), r.best_score().values[0] == 0.05 ? "0.05" : "0.5");
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (std::size_t threads : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}

TEST(ParallelFor, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(10, 4, [](std::size_t i) {
                     if (i == 7) throw InvalidInput("boom");
                 }),
                 InvalidInput);
}
