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
#include <rbvq/ngrb.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace rbvq;

namespace {

Codebook make_cb(const std::vector<std::vector<double>>& rows, const std::vector<double>& counts = {}) {
    Codebook cb(rows.size(), rows.front().size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        std::copy(rows[n].begin(), rows[n].end(), cb.weight(n).begin());
        if (!counts.empty()) cb.count(n) = counts[n];
    }
    return cb;
}

void expect_gas_invariants(const GasGraph& g, int a_max) {
    for (std::size_t a = 0; a < g.size(); ++a) {
        ASSERT_FALSE(g.connected(a, a));
        for (std::size_t b = 0; b < g.size(); ++b) {
            ASSERT_EQ(g.connected(a, b), g.connected(b, a));
            ASSERT_EQ(g.age(a, b).has_value(), g.connected(a, b));
            if (const auto age = g.age(a, b)) {
                ASSERT_GE(*age, 0);
                ASSERT_LE(*age, a_max);
                ASSERT_EQ(*age, *g.age(b, a));
            }
        }
    }
    ASSERT_TRUE(g.consistent());
}

}  // namespace

TEST(RankUnits, SortsByDistance) {
    const auto cb = make_cb({{0, 0.1}, {0, 0.3}, {0, 0.2}});
    const std::vector<double> x{0, 0};
    EXPECT_EQ(rank_units(x, cb), (std::vector<std::size_t>{0, 2, 1}));
}

TEST(RankUnits, TiesFollowIdOrder) {
    const auto cb = make_cb({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    const std::vector<double> x{0, 0};
    EXPECT_EQ(rank_units(x, cb), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(RankUnits, IsPermutation) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(30);
        const auto cb = init_random_codebook(n, 3, rng);
        const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
        auto ranks = rank_units(x, cb);
        // Oracle: every closer unit sits at a lower rank.
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const double da = squared_distance(x, cb.weight(a));
                const double db = squared_distance(x, cb.weight(b));
                if (da < db || (da == db && a < b)) EXPECT_LT(ranks[a], ranks[b]);
            }
        }
        std::sort(ranks.begin(), ranks.end());
        std::vector<std::size_t> expected(n);
        std::iota(expected.begin(), expected.end(), 0);
        EXPECT_EQ(ranks, expected);
    }
}

TEST(NgNeighborhood, Values) {
    EXPECT_DOUBLE_EQ(ng_neighborhood(0, 0.5), 1.0);
    EXPECT_NEAR(ng_neighborhood(2, 2.0), 0.3678794412, 1e-10);
    for (std::size_t k = 0; k < 20; ++k) EXPECT_GT(ng_neighborhood(k, 1.3), ng_neighborhood(k + 1, 1.3));
}

TEST(NgrbStep, RankBasedUpdate) {
    auto cb = make_cb({{0, 0}, {0, 2}, {0, 1}});
    const Codebook before = cb;
    GasGraph g(3);
    const std::vector<double> x{0, 0};
    NgrbParams p{0.3, 1.0, 75, RBParams{0.01, 0.005, RbMetric::none}};
    const auto r = ngrb_step(x, cb, g, p);
    EXPECT_EQ(r.winner, 0u);
    EXPECT_DOUBLE_EQ(cb.weight(2)[1], 1.0 + 0.3 * std::exp(-1.0) * (0.0 - 1.0));
    EXPECT_DOUBLE_EQ(cb.weight(1)[1], 2.0 + 0.3 * std::exp(-2.0) * (0.0 - 2.0));
    EXPECT_EQ(cb.weight(0)[1], before.weight(0)[1]);
    EXPECT_TRUE(g.connected(0, 2));
    // Connected at age 0, then aged as an edge of the winner.
    EXPECT_EQ(g.age(0, 2), 1);
}

TEST(NgrbStep, EdgeRefreshResetsAge) {
    auto cb = make_cb({{0, 0}, {5, 5}, {1, 0}});
    GasGraph g(3);
    NgrbParams p{0.1, 0.5, 75, RBParams{0.01, 0.005, RbMetric::none}};
    g.connect(0, 1);
    for (int i = 0; i < 10; ++i) g.age_edges_of(0);
    ASSERT_EQ(g.age(0, 1), 10);
    const std::vector<double> x{0.1, 0};
    ngrb_step(x, cb, g, p);
    // 0-2 refreshed then aged once; 0-1 aged to 11.
    EXPECT_EQ(g.age(0, 2), 1);
    EXPECT_EQ(g.age(0, 1), 11);
}

TEST(NgrbStep, EdgePastLifetimeIsPruned) {
    auto cb = make_cb({{0, 0}, {5, 5}, {1, 0}});
    GasGraph g(3);
    const int a_max = 4;
    g.connect(0, 1);
    for (int i = 0; i < a_max; ++i) g.age_edges_of(0);
    ASSERT_EQ(g.age(0, 1), a_max);
    NgrbParams p{0.1, 0.5, a_max, RBParams{0.01, 0.005, RbMetric::none}};
    const std::vector<double> x{0.1, 0};
    ngrb_step(x, cb, g, p);
    EXPECT_FALSE(g.connected(0, 1));
    EXPECT_TRUE(g.connected(0, 2));
}

TEST(NgrbStep, TunedConfiguration) {
    const auto m = MethodConfig::defaults(Method::ngrb);
    EXPECT_DOUBLE_EQ(m.epsilon, 0.3);
    EXPECT_DOUBLE_EQ(m.lambda, 0.5);
    EXPECT_EQ(m.a_max, 75);
    EXPECT_DOUBLE_EQ(m.th_rb, 0.01);
    EXPECT_DOUBLE_EQ(m.beta, 0.005);
}

TEST(RbUpdateNgrb, PartnerIsStrongestNeighbour) {
    auto cb = make_cb({{0, 0}, {1, 0}, {9, 9}, {-1, 0}, {4, 4}}, {10, 3, 7, 0, 1});
    GasGraph g(5);
    g.connect(0, 1);
    g.connect(0, 2);
    g.connect(3, 4);
    const auto birth = rb_update_ngrb(cb, g, RbPair{3, 0});
    ASSERT_TRUE(birth);
    EXPECT_DOUBLE_EQ(cb.weight(3)[0], 4.5);
    EXPECT_DOUBLE_EQ(cb.weight(3)[1], 4.5);
    EXPECT_DOUBLE_EQ(cb.count(3), 8.5);
    EXPECT_FALSE(g.connected(3, 4));
    EXPECT_EQ(g.age(3, 0), 0);
    EXPECT_EQ(g.age(3, 2), 0);
    EXPECT_EQ(g.degree(3), 2u);
}

TEST(RbUpdateNgrb, IsolatedMaxFallsBackToNearest) {
    auto cb = make_cb({{0, 0}, {0.5, 0}, {3, 0}, {10, 0}}, {8, 0, 2, 5});
    GasGraph g(4);
    // n_min = 1 is the nearest but is excluded.
    ASSERT_TRUE(rb_update_ngrb(cb, g, RbPair{1, 0}));
    EXPECT_DOUBLE_EQ(cb.weight(1)[0], 1.5);
    EXPECT_DOUBLE_EQ(cb.count(1), 5.0);
    EXPECT_TRUE(g.connected(1, 0));
    EXPECT_TRUE(g.connected(1, 2));
}

TEST(RbUpdateNgrb, MidpointExample) {
    auto cb = make_cb({{2, 0}, {0, 0}, {7, 7}}, {10, 2, 0});
    GasGraph g(3);
    g.connect(0, 1);
    ASSERT_TRUE(rb_update_ngrb(cb, g, RbPair{2, 0}));
    EXPECT_DOUBLE_EQ(cb.weight(2)[0], 1.0);
    EXPECT_DOUBLE_EQ(cb.weight(2)[1], 0.0);
    EXPECT_DOUBLE_EQ(cb.count(2), 6.0);
}

TEST(RbUpdateNgrb, MinNeighbourOfMaxIsNotPartner) {
    // n_min is n_max's only neighbour; after isolation n_max has none.
    auto cb = make_cb({{0, 0}, {1, 0}, {4, 0}}, {9, 0, 1});
    GasGraph g(3);
    g.connect(0, 1);
    ASSERT_TRUE(rb_update_ngrb(cb, g, RbPair{1, 0}));
    EXPECT_DOUBLE_EQ(cb.weight(1)[0], 2.0);
    EXPECT_TRUE(g.connected(1, 2));
}

TEST(RbUpdateNgrb, TwoUnitsSkip) {
    auto cb = make_cb({{0, 0}, {1, 1}}, {0, 3});
    GasGraph g(2);
    g.connect(0, 1);
    const Codebook before = cb;
    EXPECT_FALSE(rb_update_ngrb(cb, g, RbPair{0, 1}));
    EXPECT_EQ(cb, before);
    EXPECT_TRUE(g.connected(0, 1));
}

TEST(GasGraph, RejectsSelfEdge) {
    GasGraph g(3);
    EXPECT_THROW(g.connect(1, 1), InvalidInput);
}

TEST(Ngrb, InvariantsHoldEveryStep) {
    Rng rng(12);
    const int a_max = 25;
    Ngrb q(init_random_codebook(40, 2, rng), NgrbParams{0.3, 0.5, a_max, RBParams{0.01, 0.005}});
    Rng data(13);
    std::vector<double> x(2);
    std::size_t fired = 0;
    for (int t = 0; t < 10000; ++t) {
        const double k = static_cast<double>(data.index(4));
        x[0] = data.normal(5.0 * k, 0.7);
        x[1] = data.normal(20.0 - 3.0 * k, 0.7);
        const auto r = q.step(x);
        fired += r.rb_fired;
        ASSERT_NO_FATAL_FAILURE(expect_gas_invariants(q.gas_graph(), a_max)) << "step " << t;
        ASSERT_EQ(q.codebook().size(), 40u);
        if (r.rb) {
            // The reborn unit carries only its fresh edges.
            ASSERT_LE(q.gas_graph().degree(r.rb->n_min), 2u);
        }
    }
    EXPECT_GT(fired, 0u);
}

TEST(Ngrb, EbVariantKeepsInvariants) {
    Rng rng(21);
    Ngrb q(init_random_codebook(30, 3, rng), NgrbParams{0.3, 1.0, 100, RBParams{0.01, 0.005, RbMetric::error_utility}});
    Rng data(22);
    std::vector<double> x(3);
    for (int t = 0; t < 5000; ++t) {
        for (auto& v : x) v = data.uniform(-10, 10);
        q.step(x);
        ASSERT_NO_FATAL_FAILURE(expect_gas_invariants(q.gas_graph(), 100));
    }
}

TEST(NgrbParams, Validation) {
    EXPECT_THROW((NgrbParams{0.3, 0.0, 75, RBParams{}}.validate()), InvalidInput);
    EXPECT_THROW((NgrbParams{0.3, 1.0, 0, RBParams{}}.validate()), InvalidInput);
    EXPECT_NO_THROW((NgrbParams{0.3, 1.0, 1, RBParams{}}.validate()));
}
