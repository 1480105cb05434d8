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

#include "polsim/ppbs.h"

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

double path_norm(std::span<const PathState> paths) {
    double total = 0;
    for (const auto &p : paths) {
        total += p.amplitude.norm_sq();
    }
    return total;
}

}  // namespace

TEST(ppbs_unitary, extremes) {
    PpbsElement transmit;
    EXPECT_EQ(ppbs_unitary(transmit, Polarization::H), Operator2::identity());

    PpbsElement reflect{0, 0};
    Operator2 u = ppbs_unitary(reflect, Polarization::V);
    EXPECT_LT(u.max_abs_diff(Operator2{{0, 1, -1, 0}}), 1e-15);

    PpbsElement half{0.5, 0.5};
    double r = 1 / std::sqrt(2.0);
    EXPECT_LT(ppbs_unitary(half, Polarization::H).max_abs_diff(Operator2{{r, r, -r, r}}), 1e-15);
}

TEST(ppbs_unitary, coefficient_range) {
    expect_code(ErrorCode::CoefficientRange, [] { ppbs_unitary({1.5, 0.5}, Polarization::H); });
    expect_code(ErrorCode::CoefficientRange, [] { ppbs_unitary({0.5, -0.1}, Polarization::V); });
}

TEST(ppbs_unitary, property_unitary_with_phases) {
    test::Gen gen(41);
    for (int trial = 0; trial < 1000; trial++) {
        PpbsElement e{
            gen.uniform(0, 1),
            gen.uniform(0, 1),
            gen.uniform(-PI, PI),
            gen.uniform(-PI, PI),
            gen.uniform(-PI, PI),
            gen.uniform(-PI, PI)};
        for (auto pol : {Polarization::H, Polarization::V}) {
            Operator2 u = ppbs_unitary(e, pol);
            EXPECT_LT((u.adjoint() * u).max_abs_diff(Operator2::identity()), 1e-12);
        }
    }
}

TEST(chi_to_coefficients, values) {
    auto sharp = chi_to_coefficients(0);
    EXPECT_NEAR(sharp.t_h, 1, 1e-15);
    EXPECT_NEAR(sharp.t_v, 0, 1e-15);
    EXPECT_NEAR(sharp.r_h, 0, 1e-15);
    EXPECT_NEAR(sharp.r_v, 1, 1e-15);

    auto blind = chi_to_coefficients(PI / 4);
    EXPECT_NEAR(blind.t_h, 0.5, 1e-15);
    EXPECT_NEAR(blind.t_v, 0.5, 1e-15);

    auto eighth = chi_to_coefficients(PI / 8);
    EXPECT_NEAR(eighth.t_h, 0.8535533905932737, 1e-15);
    EXPECT_NEAR(eighth.r_h, 0.14644660940672624, 1e-15);
    EXPECT_NEAR(eighth.r_v, eighth.t_h, 1e-15);
    EXPECT_NEAR(eighth.t_v, eighth.r_h, 1e-15);

    expect_code(ErrorCode::ChiRange, [] { chi_to_coefficients(-0.01); });
    expect_code(ErrorCode::ChiRange, [] { chi_to_coefficients(1.0); });
}

TEST(build_tree, z_setting_has_no_wave_plates) {
    std::vector<MeasurementSetting> s{{BlochVector::z(), 0.3}};
    auto tree = build_tree(s);
    ASSERT_EQ(tree.num_levels(), 1u);
    EXPECT_EQ(tree.num_leaves(), 2u);
    double c = std::cos(PI / 4 - 0.3);
    EXPECT_NEAR(tree.levels[0].ppbs.t_h, c * c, 1e-15);
    EXPECT_NEAR(tree.levels[0].ppbs.r_v(), c * c, 1e-15);
    EXPECT_EQ(tree.levels[0].pre_rotation, Operator2::identity());
    EXPECT_EQ(tree.levels[0].post_rotation, Operator2::identity());
}

TEST(build_tree, x_setting_wave_plates) {
    std::vector<MeasurementSetting> s{{BlochVector::x(), 0.3}};
    auto tree = build_tree(s);
    Operator2 u = bloch_rotation(BlochVector::x());
    EXPECT_LT(tree.levels[0].post_rotation.max_abs_diff(u), 1e-15);
    EXPECT_LT(tree.levels[0].pre_rotation.max_abs_diff(u.adjoint()), 1e-15);
}

TEST(build_tree, too_many_levels) {
    std::vector<MeasurementSetting> many(N_MAX + 1);
    expect_code(ErrorCode::TooManyLevels, [&] { build_tree(many); });
}

TEST(propagate, polarizing_beam_splitter) {
    std::vector<MeasurementSetting> s{{BlochVector::z(), PI / 4}};
    auto leaves = propagate(build_tree(s), states::D());
    ASSERT_EQ(leaves.size(), 2u);
    EXPECT_EQ(leaves[0].label.str(), "+");
    EXPECT_EQ(leaves[1].label.str(), "-");
    double r = 1 / std::sqrt(2.0);
    EXPECT_TRUE(same_up_to_phase(leaves[0].amplitude, PolState{r, 0}, 1e-15));
    EXPECT_TRUE(same_up_to_phase(leaves[1].amplitude, PolState{0, r}, 1e-15));
}

TEST(propagate, partial_split_of_h) {
    double chi = 0.37;
    std::vector<MeasurementSetting> s{MeasurementSetting::from_chi(BlochVector::z(), chi)};
    auto leaves = propagate(build_tree(s), states::H);
    EXPECT_TRUE(same_up_to_phase(leaves[0].amplitude, PolState{std::cos(chi), 0}, 1e-15));
    EXPECT_TRUE(same_up_to_phase(leaves[1].amplitude, PolState{std::sin(chi), 0}, 1e-15));
}

TEST(propagate, two_levels) {
    std::vector<MeasurementSetting> s{
        MeasurementSetting::from_chi(BlochVector::z(), 0.2), MeasurementSetting::from_chi(BlochVector::z(), 0.5)};
    auto leaves = propagate(build_tree(s), states::H);
    ASSERT_EQ(leaves.size(), 4u);
    EXPECT_EQ(leaves[0].label.str(), "++");
    EXPECT_EQ(leaves[3].label.str(), "--");
    EXPECT_NEAR(leaves[0].amplitude.norm_sq(), std::pow(std::cos(0.2) * std::cos(0.5), 2), 1e-15);
    EXPECT_NEAR(leaves[2].amplitude.norm_sq(), std::pow(std::sin(0.2) * std::cos(0.5), 2), 1e-15);
}

TEST(propagate, property_matches_operators) {
    test::Gen gen(42);
    for (int trial = 0; trial < 200; trial++) {
        size_t n = gen.index(1, 6);
        auto settings = gen.settings(n);
        PolState psi = gen.state();
        auto tree = build_tree(settings);
        auto leaves = propagate(tree, psi);
        auto dist = outcome_distribution(psi, settings);
        auto leaf_dist = leaf_probabilities(tree, psi, settings);
        ASSERT_EQ(leaves.size(), dist.size());
        for (size_t i = 0; i < leaves.size(); i++) {
            EXPECT_EQ(leaves[i].label.index(), i);
            EXPECT_NEAR(leaf_dist.probabilities[i], dist.probabilities[i], 1e-12);
            PolState expected = sequential_operator(settings, leaves[i].label) * psi;
            EXPECT_TRUE(same_up_to_phase(leaves[i].amplitude, expected, 1e-12)) << trial << " " << i;
        }
    }
}

TEST(propagate, property_norm_per_level) {
    test::Gen gen(43);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = gen.index(1, 6);
        auto tree = build_tree(gen.settings(n));
        PolState psi = gen.state();
        for (size_t depth = 0; depth <= n; depth++) {
            auto paths = propagate_to_level(tree, psi, depth);
            EXPECT_EQ(paths.size(), size_t{1} << depth);
            EXPECT_NEAR(path_norm(paths), 1, 1e-12);
        }
    }
}

TEST(split_at_level, classical_intensities) {
    // Splitting an H or V photon divides its intensity as T : R.
    test::Gen gen(44);
    for (int trial = 0; trial < 100; trial++) {
        double chi = gen.uniform(0, PI / 4);
        std::vector<MeasurementSetting> s{MeasurementSetting::from_chi(BlochVector::z(), chi)};
        auto tree = build_tree(s);
        auto coeff = chi_to_coefficients(chi);
        auto h = split_at_level(tree.levels[0], states::H);
        EXPECT_NEAR(h[0].norm_sq(), coeff.t_h, 1e-12);
        EXPECT_NEAR(h[1].norm_sq(), coeff.r_h, 1e-12);
        auto v = split_at_level(tree.levels[0], states::V);
        EXPECT_NEAR(v[0].norm_sq(), coeff.t_v, 1e-12);
        EXPECT_NEAR(v[1].norm_sq(), coeff.r_v, 1e-12);
    }
}

TEST(closed_form_z_probability, example) {
    std::vector<double> chis{0.1, 0.3, 0.5};
    Complex alpha = 0.6;
    Complex beta = 0.8;
    auto outcomes = OutcomeString::parse("+-+");
    EXPECT_NEAR(closed_form_z_probability(alpha, beta, chis, outcomes), 0.025310004498655544, 1e-15);

    std::vector<MeasurementSetting> s;
    for (double chi : chis) {
        s.push_back(MeasurementSetting::from_chi(BlochVector::z(), chi));
    }
    auto leaves = leaf_probabilities(build_tree(s), {alpha, beta}, s);
    EXPECT_NEAR(leaves.probability(outcomes), 0.025310004498655544, 1e-12);
}

TEST(closed_form_z_probability, property_matches_tree) {
    test::Gen gen(45);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = gen.index(1, 6);
        std::vector<double> chis;
        std::vector<MeasurementSetting> s;
        for (size_t k = 0; k < n; k++) {
            chis.push_back(gen.uniform(0, PI / 4));
            s.push_back(MeasurementSetting::from_chi(BlochVector::z(), chis.back()));
        }
        PolState psi = gen.state();
        auto leaves = leaf_probabilities(build_tree(s), psi, s);
        for (uint64_t i = 0; i < leaves.size(); i++) {
            auto label = OutcomeString::from_index(i, n);
            EXPECT_NEAR(leaves.probabilities[i], closed_form_z_probability(psi.alpha, psi.beta, chis, label), 1e-12);
        }
    }
}
