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

#include <fmt/format.h>

#include "polsim/error.h"

namespace polsim {

namespace {

void check_coefficient(double t, const char *name) {
    if (!(t >= 0 && t <= 1)) {
        throw_error(ErrorCode::CoefficientRange, fmt::format("{} = {} is outside [0, 1]", name, t));
    }
}

}  // namespace

Operator2 ppbs_unitary(const PpbsElement &element, Polarization pol) {
    bool h = pol == Polarization::H;
    double t = h ? element.t_h : element.t_v;
    check_coefficient(t, h ? "T_H" : "T_V");
    double phi = h ? element.phi_h : element.phi_v;
    double psi = h ? element.psi_h : element.psi_v;
    double st = std::sqrt(t);
    double sr = std::sqrt(1 - t);
    return {{
        std::polar(st, phi),
        std::polar(sr, psi),
        -std::polar(sr, -psi),
        std::polar(st, -phi),
    }};
}

SplitCoefficients chi_to_coefficients(double chi) {
    if (!(chi >= 0 && chi <= QUARTER_PI + 1e-12)) {
        throw_error(ErrorCode::ChiRange, fmt::format("chi = {} is outside [0, pi/4]", chi));
    }
    double c2 = std::cos(chi) * std::cos(chi);
    double s2 = std::sin(chi) * std::sin(chi);
    return {c2, s2, s2, c2};
}

MeasurementTree build_tree(std::span<const MeasurementSetting> settings) {
    if (settings.size() > N_MAX) {
        throw_error(
            ErrorCode::TooManyLevels, fmt::format("{} levels exceeds the tree limit {}", settings.size(), N_MAX));
    }
    MeasurementTree tree;
    tree.levels.reserve(settings.size());
    for (const auto &s : settings) {
        auto coeffs = chi_to_coefficients(s.chi());
        TreeLevel level;
        level.ppbs.t_h = coeffs.t_h;
        level.ppbs.t_v = coeffs.t_v;
        level.post_rotation = bloch_rotation(s.n);
        level.pre_rotation = level.post_rotation.adjoint();
        tree.levels.push_back(level);
    }
    return tree;
}

std::array<PolState, 2> split_at_level(const TreeLevel &level, const PolState &incoming) {
    PolState rotated = level.pre_rotation * incoming;
    // The photon enters on port a, so only the first column of each path unitary contributes.
    Operator2 uh = ppbs_unitary(level.ppbs, Polarization::H);
    Operator2 uv = ppbs_unitary(level.ppbs, Polarization::V);
    PolState on_a{uh(0, 0) * rotated.alpha, uv(0, 0) * rotated.beta};
    PolState on_b{uh(1, 0) * rotated.alpha, uv(1, 0) * rotated.beta};
    return {level.post_rotation * on_a, level.post_rotation * on_b};
}

std::vector<PathState> propagate_to_level(const MeasurementTree &tree, const PolState &input, size_t depth) {
    if (tree.num_levels() > N_MAX) {
        throw_error(ErrorCode::TooManyLevels, fmt::format("{} levels exceeds {}", tree.num_levels(), N_MAX));
    }
    if (depth > tree.num_levels()) {
        throw_error(
            ErrorCode::LengthMismatch, fmt::format("depth {} beyond a {}-level tree", depth, tree.num_levels()));
    }
    std::vector<PathState> paths{PathState{OutcomeString{}, input}};
    for (size_t k = 0; k < depth; k++) {
        std::vector<PathState> next;
        next.reserve(paths.size() * 2);
        for (const auto &path : paths) {
            auto [a, b] = split_at_level(tree.levels[k], path.amplitude);
            PathState transmitted{path.label, a};
            transmitted.label.push_back(+1);
            PathState reflected{path.label, b};
            reflected.label.push_back(-1);
            next.push_back(std::move(transmitted));
            next.push_back(std::move(reflected));
        }
        paths = std::move(next);
    }
    return paths;
}

std::vector<PathState> propagate(const MeasurementTree &tree, const PolState &input) {
    return propagate_to_level(tree, input, tree.num_levels());
}

OutcomeDistribution leaf_probabilities(
    const MeasurementTree &tree, const PolState &input, std::span<const MeasurementSetting> settings) {
    if (settings.size() != tree.num_levels()) {
        throw_error(
            ErrorCode::LengthMismatch,
            fmt::format("{} settings for a {}-level tree", settings.size(), tree.num_levels()));
    }
    auto leaves = propagate(tree, input);
    OutcomeDistribution dist;
    dist.settings.assign(settings.begin(), settings.end());
    dist.probabilities.reserve(leaves.size());
    for (const auto &leaf : leaves) {
        dist.probabilities.push_back(leaf.amplitude.norm_sq());
    }
    return dist;
}

double closed_form_z_probability(
    Complex alpha, Complex beta, std::span<const double> chis, const OutcomeString &outcomes) {
    if (chis.size() != outcomes.size()) {
        throw_error(
            ErrorCode::LengthMismatch, fmt::format("{} chis but {} outcomes", chis.size(), outcomes.size()));
    }
    double h_weight = 1;
    double v_weight = 1;
    for (size_t k = 0; k < chis.size(); k++) {
        double c2 = std::cos(chis[k]) * std::cos(chis[k]);
        double s2 = std::sin(chis[k]) * std::sin(chis[k]);
        bool transmitted = outcomes[k] > 0;
        h_weight *= transmitted ? c2 : s2;
        v_weight *= transmitted ? s2 : c2;
    }
    return std::norm(alpha) * h_weight + std::norm(beta) * v_weight;
}

}  // namespace polsim
