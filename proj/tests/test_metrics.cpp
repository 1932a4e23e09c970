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
#include <rbvq/metrics.hpp>
#include <rbvq/somrb.hpp>
#include <rbvq/tuning.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace rbvq;

namespace {

Codebook make_cb(const std::vector<std::vector<double>>& rows) {
    Codebook cb(rows.size(), rows.front().size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        std::copy(rows[n].begin(), rows[n].end(), cb.weight(n).begin());
    }
    return cb;
}

PointsView view(const std::vector<double>& v, std::size_t dim) { return {v, dim}; }

Graph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g(n);
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

// Nearest unit by a plain double loop; ties to the lowest id.
std::size_t oracle_nearest(const std::vector<double>& pts, std::size_t i, const std::vector<double>& w,
                           std::size_t dim, double& best) {
    std::size_t arg = 0;
    best = INFINITY;
    for (std::size_t n = 0; n < w.size() / dim; ++n) {
        double d = 0;
        for (std::size_t k = 0; k < dim; ++k) d += (pts[i * dim + k] - w[n * dim + k]) * (pts[i * dim + k] - w[n * dim + k]);
        if (d < best) { best = d; arg = n; }
    }
    return arg;
}

// Clustering by enumerating every vertex triple.
double oracle_clustering(const Graph& g) {
    const std::size_t n = g.size();
    double total = 0;
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t k = 0, t = 0;
        for (std::size_t a = 0; a < n; ++a) k += g.has_edge(v, a);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                t += g.has_edge(v, a) && g.has_edge(v, b) && g.has_edge(a, b);
        if (k >= 2) total += 2.0 * static_cast<double>(t) / static_cast<double>(k * (k - 1));
    }
    return total / static_cast<double>(n);
}

}  // namespace

TEST(Mse, Examples) {
    const std::vector<double> p1{0, 0, 2, 0};
    EXPECT_DOUBLE_EQ(mse(view(p1, 2), make_cb({{1, 0}})), 1.0);
    EXPECT_DOUBLE_EQ(mse(view(p1, 2), make_cb({{0, 0}, {2, 0}})), 0.0);
    const std::vector<double> p2{0, 0, 4, 0};
    EXPECT_DOUBLE_EQ(mse(view(p2, 2), make_cb({{0, 0}, {3, 0}})), 0.5);
}

TEST(Mse, EmptyPointsThrow) {
    const std::vector<double> none;
    EXPECT_THROW(mse(view(none, 2), make_cb({{0, 0}})), InvalidInput);
    EXPECT_THROW(dead_units(view(none, 2), make_cb({{0, 0}})), InvalidInput);
}

TEST(DeadUnits, Examples) {
    const std::vector<double> near0{0, 0, 0.1, 0, -0.2, 0};
    EXPECT_EQ(dead_units(view(near0, 2), make_cb({{0, 0}, {5, 5}})), 1u);
    const std::vector<double> both{0, 0, 5, 5};
    EXPECT_EQ(dead_units(view(both, 2), make_cb({{0, 0}, {5, 5}})), 0u);
    const std::vector<double> one{3, 3};
    EXPECT_EQ(dead_units(view(one, 2), make_cb({{0, 0}, {1, 1}, {2, 2}, {9, 9}})), 3u);
}

TEST(DeadUnits, TieGoesToLowestId) {
    const std::vector<double> mid{1, 0};
    const auto counts = assignment_counts(view(mid, 2), make_cb({{0, 0}, {2, 0}}));
    EXPECT_EQ(counts, (std::vector<std::size_t>{1, 0}));
}

TEST(Mse, MatchesBruteForceOracle) {
    Rng rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng.index(20), m = 1 + rng.index(200), dim = 1 + rng.index(4);
        std::vector<double> w(n * dim), pts(m * dim);
        for (auto& v : w) v = rng.uniform(-3, 3);
        for (auto& v : pts) v = rng.uniform(-3, 3);
        // Occasionally duplicate a unit to exercise ties.
        if (n > 1 && rng.bernoulli(0.3)) std::copy_n(w.begin(), dim, w.begin() + dim);
        Codebook cb(n, dim);
        for (std::size_t k = 0; k < n; ++k) std::copy_n(w.begin() + k * dim, dim, cb.weight(k).begin());
        double sq = 0, lin = 0;
        std::vector<std::size_t> hits(n, 0);
        for (std::size_t i = 0; i < m; ++i) {
            double best;
            ++hits[oracle_nearest(pts, i, w, dim, best)];
            sq += best;
            lin += std::sqrt(best);
        }
        const std::size_t dead = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 0u));
        const double expected = sq / static_cast<double>(m);
        EXPECT_NEAR(mse(view(pts, dim), cb), expected, 1e-9 * std::max(1.0, expected));
        EXPECT_NEAR(tune_mse(view(pts, dim), cb), lin / static_cast<double>(m), 1e-9 * std::max(1.0, lin));
        EXPECT_EQ(dead_units(view(pts, dim), cb), dead);
        EXPECT_EQ(assignment_counts(view(pts, dim), cb), hits);

        // Permuting units leaves both quantities unchanged.
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        Codebook shuffled(n, dim);
        for (std::size_t k = 0; k < n; ++k)
            std::copy_n(w.begin() + perm[k] * dim, dim, shuffled.weight(k).begin());
        EXPECT_NEAR(mse(view(pts, dim), shuffled), expected, 1e-9 * std::max(1.0, expected));
        EXPECT_EQ(dead_units(view(pts, dim), shuffled), dead);
    }
}

TEST(AvgDegree, Examples) {
    EXPECT_DOUBLE_EQ(avg_degree(Graph(5)), 0.0);
    EXPECT_DOUBLE_EQ(avg_degree(make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})), 3.0);
    EXPECT_THROW(avg_degree(Graph(0)), InvalidInput);
}

TEST(AvgDegree, InitialLatticeOf100) {
    Somrb q(100, 2, SomrbParams{}, 1);
    EXPECT_DOUBLE_EQ(avg_degree(q.graph()), 3.6);
}

TEST(AvgClustering, Examples) {
    EXPECT_DOUBLE_EQ(avg_clustering(make_graph(3, {{0, 1}, {1, 2}, {0, 2}})), 1.0);
    EXPECT_DOUBLE_EQ(avg_clustering(make_graph(4, {{0, 1}, {0, 2}, {0, 3}})), 0.0);
    // Triangle plus a pendant: c = (1, 1, 1/3, 0) / 4.
    EXPECT_DOUBLE_EQ(avg_clustering(make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})), (2.0 + 1.0 / 3.0) / 4.0);
}

TEST(AvgClustering, MatchesTripleEnumeration) {
    Rng rng(23);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        const double p = rng.uniform();
        Graph g(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (rng.bernoulli(p)) g.add_edge(a, b);
        const double c = avg_clustering(g);
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
        EXPECT_NEAR(c, oracle_clustering(g), 1e-9);
        EXPECT_DOUBLE_EQ(avg_degree(g), 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n));
    }
}

TEST(EvalWindow, RbFrequencyHalfOpen) {
    EvalWindow w(1000, 2);
    EXPECT_EQ(w.rb_frequency(5000), 0u);
    w.record_rb(4000);
    w.record_rb(4001);
    w.record_rb(4500);
    w.record_rb(5000);
    // 4000 == t - W is excluded.
    EXPECT_EQ(w.rb_frequency(5000), 3u);
}

TEST(EvalWindow, BufferKeepsLastW) {
    EvalWindow w(3, 1);
    for (double v : {1.0, 2.0, 3.0, 4.0, 5.0}) {
        const std::vector<double> x{v};
        w.push(x);
        EXPECT_LE(w.size(), 3u);
    }
    auto vals = std::vector<double>(w.points().values.begin(), w.points().values.end());
    std::sort(vals.begin(), vals.end());
    EXPECT_EQ(vals, (std::vector<double>{3, 4, 5}));
}

TEST(MetricsRecord, CsvRow) {
    const MetricsRecord r{100, 0.5, 2, 3.6, 0.25, 4};
    EXPECT_EQ(format_record(r), "100,0.5,2,3.6,0.25,4");
    EXPECT_EQ(kMetricsHeader, "iteration,mse,dead_units,avg_degree,avg_clustering,rb_count");
}

TEST(Evaluate, CombinesMetrics) {
    const std::vector<double> pts{0, 0, 4, 0};
    const auto cb = make_cb({{0, 0}, {3, 0}, {10, 10}});
    const auto g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto r = evaluate(7, view(pts, 2), cb, g, 5);
    EXPECT_EQ(r.iteration, 7u);
    EXPECT_DOUBLE_EQ(r.mse, 0.5);
    EXPECT_EQ(r.dead_units, 1.0);
    EXPECT_DOUBLE_EQ(r.avg_degree, 2.0);
    EXPECT_DOUBLE_EQ(r.avg_clustering, 1.0);
    EXPECT_EQ(r.rb_count, 5.0);
}
