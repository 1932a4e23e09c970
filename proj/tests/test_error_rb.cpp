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
#include <rbvq/error_rb.hpp>
#include <rbvq/okrb.hpp>

#include <gtest/gtest.h>

using namespace rbvq;

namespace {

Codebook make_cb(const std::vector<std::vector<double>>& rows) {
    Codebook cb(rows.size(), rows.front().size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        std::copy(rows[n].begin(), rows[n].end(), cb.weight(n).begin());
    }
    return cb;
}

}  // namespace

TEST(AccumulateErrorUtility, ChargesWinner) {
    const auto cb = make_cb({{0, 0}, {1, 1}});
    // beta tiny enough that the decay is visible but separable.
    ErrorUtilityState s(2, 0.5);
    const std::vector<double> x{1, 0};
    const auto nt = accumulate_error_utility(x, cb, s);
    EXPECT_EQ(nt.first, 0u);
    EXPECT_EQ(nt.second, 1u);
    // Delta E = 1, delta U = 1 - 1 = 0, then halved by the decay.
    EXPECT_DOUBLE_EQ(s.error[0], 0.5);
    EXPECT_DOUBLE_EQ(s.utility[0], 0.0);
    EXPECT_EQ(s.error[1], 0.0);
}

TEST(AccumulateErrorUtility, ZeroWinnerDistance) {
    const auto cb = make_cb({{2, 2}, {4, 5}, {9, 9}});
    ErrorUtilityState s(3, 0.005);
    const std::vector<double> x{2, 2};
    accumulate_error_utility(x, cb, s);
    EXPECT_EQ(s.error[0], 0.0);
    EXPECT_DOUBLE_EQ(s.utility[0], 13.0 * 0.995);
}

TEST(AccumulateErrorUtility, DecayOnly) {
    const auto cb = make_cb({{0, 0}, {1, 1}});
    ErrorUtilityState s(2, 0.005);
    s.error[1] = 1.0;
    const std::vector<double> x{0, 0};
    accumulate_error_utility(x, cb, s);
    EXPECT_DOUBLE_EQ(s.error[1], 0.995);
}

TEST(AccumulateErrorUtility, StaysNonNegative) {
    Rng rng(6);
    auto cb = init_random_codebook(15, 3, rng);
    ErrorUtilityState s(15, 0.01);
    std::vector<double> x(3);
    for (int t = 0; t < 5000; ++t) {
        for (auto& v : x) v = rng.uniform(-1, 2);
        accumulate_error_utility(x, cb, s);
        for (std::size_t n = 0; n < 15; ++n) {
            ASSERT_GE(s.error[n], 0.0);
            ASSERT_GE(s.utility[n], 0.0);
        }
    }
}

TEST(ErrorRbTriggered, Fires) {
    ErrorUtilityState s(2, 0.005);
    s.utility = {0, 5};
    s.error = {1, 10};
    const auto p = error_rb_triggered(s, 0.01);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->n_min, 0u);
    EXPECT_EQ(p->n_max, 1u);
}

TEST(ErrorRbTriggered, RatioTooLarge) {
    ErrorUtilityState s(2, 0.005);
    s.utility = {5, 5};
    s.error = {10, 10};
    EXPECT_FALSE(error_rb_triggered(s, 0.01));
}

TEST(ErrorRbTriggered, ZeroErrorGuard) {
    ErrorUtilityState s(3, 0.005);
    EXPECT_FALSE(error_rb_triggered(s, 1.0));
}

TEST(ErrorRbTriggered, AnchorRestrictedToEligible) {
    ErrorUtilityState s(3, 0.005);
    s.utility = {0, 4, 4};
    s.error = {1, 10, 6};
    const std::vector<std::size_t> eligible{0, 2};
    const auto p = error_rb_triggered(s, 0.5, eligible);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->n_max, 2u);
}

TEST(ErrorUtilityState, InheritAveragesDonors) {
    ErrorUtilityState s(3, 0.005);
    s.error = {2, 4, 100};
    s.utility = {1, 3, 100};
    s.inherit(Birth{2, {0, 1}});
    EXPECT_DOUBLE_EQ(s.error[2], 3.0);
    EXPECT_DOUBLE_EQ(s.utility[2], 2.0);
}

TEST(SelectRbPair, ErrorMetricNeedsState) {
    const Codebook cb(3, 2);
    const std::vector<std::size_t> all{0, 1, 2};
    EXPECT_THROW(select_rb_pair(cb, RBParams{0.1, 0.1, RbMetric::error_utility}, nullptr, all), InvalidInput);
    EXPECT_FALSE(select_rb_pair(cb, RBParams{0.1, 0.1, RbMetric::none}, nullptr, all));
}

// Scaling inputs and codebook by s multiplies E and U by s^2 while the
// trigger ratio, and so every decision, is unchanged.
TEST(ErrorUtilityScaling, MagnitudesScaleRatioDoesNot) {
    Rng init(31);
    const Codebook base = init_random_codebook(10, 2, init);
    std::vector<double> inputs;
    Rng data(32);
    for (int t = 0; t < 4000; ++t) {
        inputs.push_back(data.normal(4.0, 1.0));
        inputs.push_back(data.normal(-2.0, 1.0));
    }
    auto run = [&](double s) {
        Codebook cb = base;
        for (std::size_t n = 0; n < cb.size(); ++n)
            for (auto& w : cb.weight(n)) w *= s;
        ErrorUtilityState st(cb.size(), 0.005);
        OkrbParams p{0.3, RBParams{0.01, 0.005, RbMetric::error_utility}};
        std::vector<std::size_t> events;
        std::vector<double> x(2);
        for (std::size_t t = 0; t < inputs.size() / 2; ++t) {
            x[0] = s * inputs[2 * t];
            x[1] = s * inputs[2 * t + 1];
            if (okrb_step(x, cb, p, &st).rb_fired) events.push_back(t);
        }
        return std::make_pair(st, events);
    };
    const auto [ref, ref_events] = run(1.0);
    ASSERT_FALSE(ref_events.empty());
    for (double s : {0.5, 4.0}) {
        const auto [st, events] = run(s);
        EXPECT_EQ(events, ref_events);
        for (std::size_t n = 0; n < st.size(); ++n) {
            EXPECT_NEAR(st.error[n], s * s * ref.error[n], 1e-9 * std::max(1.0, s * s * ref.error[n]));
            EXPECT_NEAR(st.utility[n], s * s * ref.utility[n], 1e-9 * std::max(1.0, s * s * ref.utility[n]));
        }
    }
}
