// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polsim/montecarlo.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "polsim/error.h"
#include "test_util.h"

using namespace polsim;

namespace {

constexpr double PI = std::numbers::pi;

void expect_code(ErrorCode code, auto &&fn) {
    try {
        fn();
        FAIL() << "expected " << error_code_name(code);
    } catch (const SimError &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

std::vector<double> etas_of(std::span<const MeasurementSetting> settings) {
    std::vector<double> out;
    for (const auto &s : settings) {
        out.push_back(s.eta);
    }
    return out;
}

}  // namespace

TEST(sample_run, sharp_h_always_plus) {
    std::vector<MeasurementSetting> s(3, {BlochVector::z(), PI / 4});
    auto records = collect_records(states::H, s, SelectionSpec::none(), 1000, {5, 0});
    for (const auto &r : records) {
        EXPECT_EQ(r.outcomes.str(), "+++");
        EXPECT_TRUE(r.selected);
    }
}

TEST(sample_run, sharp_d_is_fair) {
    std::vector<MeasurementSetting> s{{BlochVector::z(), PI / 4}};
    const uint64_t shots = 100000;
    auto tally = run_shards(states::D(), s, SelectionSpec::none(), shots, {6, 0}, 1);
    double f = static_cast<double>(tally.selected[0]) / shots;
    EXPECT_NEAR(f, 0.5, 5 * std::sqrt(0.25 / shots));
    EXPECT_EQ(tally.selected[0] + tally.selected[1], shots);
}

TEST(sample_run, matches_index_form) {
    test::Gen gen(61);
    auto s = gen.settings(4);
    PolState psi = gen.state();
    RunSampler sampler(psi, s, SelectionSpec::reselect());
    for (uint64_t shot = 0; shot < 200; shot++) {
        PhiloxStream a(shot_stream({9, 0}, shot));
        PhiloxStream b(shot_stream({9, 0}, shot));
        auto record = sampler.sample(a);
        bool selected = false;
        EXPECT_EQ(sampler.sample_index(b, selected), record.outcomes.index());
        EXPECT_EQ(selected, record.selected);
    }
}

TEST(collect_records, deterministic) {
    test::Gen gen(62);
    auto s = gen.settings(3);
    PolState psi = gen.state();
    auto a = collect_records(psi, s, SelectionSpec::none(), 500, {123, 0});
    auto b = collect_records(psi, s, SelectionSpec::none(), 500, {123, 0});
    auto c = collect_records(psi, s, SelectionSpec::none(), 500, {124, 0});
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(run_shards, independent_of_sharding_and_threads) {
    test::Gen gen(63);
    auto s = gen.settings(3);
    PolState psi = gen.state();
    auto sel = SelectionSpec::postselect(gen.state());
    auto one = run_shards(psi, s, sel, 20001, {77, 0}, 1, 1);
    auto four = run_shards(psi, s, sel, 20001, {77, 0}, 4, 1);
    auto threaded = run_shards(psi, s, sel, 20001, {77, 0}, 7, 4);
    EXPECT_EQ(one, four);
    EXPECT_EQ(one, threaded);
    EXPECT_EQ(one.shots, 20001u);
}

TEST(run_shards, agrees_with_records) {
    test::Gen gen(64);
    auto s = gen.settings(2);
    PolState psi = gen.state();
    auto records = collect_records(psi, s, SelectionSpec::reselect(), 3000, {3, 0});
    auto tally = run_shards(psi, s, SelectionSpec::reselect(), 3000, {3, 0}, 3);
    Tally rebuilt(2);
    for (const auto &r : records) {
        rebuilt.shots++;
        (r.selected ? rebuilt.selected : rebuilt.rejected)[r.outcomes.index()]++;
    }
    EXPECT_EQ(tally, rebuilt);

    std::vector<size_t> both{0, 1};
    auto etas = etas_of(s);
    Estimate from_records = estimate_correlation(records, both, etas);
    Estimate from_tally = estimate_correlation(tally, both, etas);
    EXPECT_EQ(from_records.count, from_tally.count);
    EXPECT_NEAR(from_records.mean, from_tally.mean, 1e-12);
    EXPECT_NEAR(from_records.standard_error, from_tally.standard_error, 1e-12);
}

TEST(estimate_correlation, errors) {
    std::vector<MeasurementSetting> s{{BlochVector::z(), 0.2}};
    std::vector<size_t> first{0};
    std::vector<double> etas{0.2};
    Tally empty(1);
    expect_code(ErrorCode::EmptySample, [&] { estimate_correlation(empty, first, etas); });
    auto tally = run_shards(states::H, s, SelectionSpec::none(), 10, {1, 0}, 1);
    std::vector<double> blind{0.0};
    expect_code(ErrorCode::ZeroSharpness, [&] { estimate_correlation(tally, first, blind); });
    expect_code(ErrorCode::TooManyLevels, [] { Tally t(N_MAX + 1); });
}

TEST(estimate_correlation, stderr_grows_as_measurement_weakens) {
    const uint64_t shots = 20000;
    std::vector<size_t> first{0};
    double previous = 0;
    for (double eta : {0.6, 0.4, 0.2, 0.1, 0.05}) {
        std::vector<MeasurementSetting> s{{BlochVector::z(), eta}};
        auto tally = run_shards(states::D(), s, SelectionSpec::none(), shots, {8, 0}, 1);
        std::vector<double> etas{eta};
        auto e = estimate_correlation(tally, first, etas);
        EXPECT_GT(e.standard_error, previous);
        // For D every outcome is equally likely, so the spread is exactly 1/sin 2η.
        EXPECT_NEAR(e.standard_error * std::sqrt(static_cast<double>(shots)), 1 / std::sin(2 * eta), 0.02 / std::sin(2 * eta));
        previous = e.standard_error;
    }
}

TEST(estimate_correlation, property_consistent_with_exact) {
    test::Gen gen(65);
    for (int trial = 0; trial < 20; trial++) {
        size_t n = gen.index(1, 3);
        auto s = gen.settings(n, 0.2, PI / 4);
        PolState psi = gen.state();
        std::vector<size_t> subset{gen.index(0, n - 1)};
        auto tally = run_shards(psi, s, SelectionSpec::none(), 20000, {1000 + static_cast<uint64_t>(trial), 0}, 2);
        auto etas = etas_of(s);
        auto e = estimate_correlation(tally, subset, etas);
        EXPECT_EQ(e.count, 20000u);
        EXPECT_EQ(e.acceptance, 1);
        EXPECT_NEAR(e.mean, correlation(psi, s, subset), 5 * e.standard_error) << trial;
    }
}

TEST(estimate_correlation, selected_acceptance) {
    std::vector<MeasurementSetting> s(2, {BlochVector::z(), 0.05});
    auto tally = run_shards(states::D(), s, SelectionSpec::reselect(), 200000, {11, 0}, 4);
    std::vector<size_t> both{0, 1};
    std::vector<double> etas{0.05, 0.05};
    auto e = estimate_correlation(tally, both, etas);
    double p = 0.99501664446031;
    EXPECT_NEAR(e.acceptance, p, 5 * std::sqrt(p * (1 - p) / 200000));
    EXPECT_EQ(e.count, tally.accepted_total());
    EXPECT_NEAR(e.mean, 0.5025041568738691, 5 * e.standard_error);
}
