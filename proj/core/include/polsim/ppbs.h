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

#ifndef POLSIM_PPBS_H
#define POLSIM_PPBS_H

#include <span>
#include <vector>

#include "polsim/measurement.h"
#include "polsim/qubit.h"

namespace polsim {

/// Partially polarizing beam splitter. Reflection coefficients are R = 1 - T.
struct PpbsElement {
    double t_h = 1;
    double t_v = 1;
    double phi_h = 0;
    double psi_h = 0;
    double phi_v = 0;
    double psi_v = 0;

    double r_h() const {
        return 1 - t_h;
    }
    double r_v() const {
        return 1 - t_v;
    }
};

enum class Polarization { H, V };

/// Path-mode unitary for one polarization component, acting on amplitudes over (|a⟩, |b⟩):
///
///     [  √T e^{iφ}    √R e^{iψ}  ]
///     [ -√R e^{-iψ}   √T e^{-iφ} ]
///
/// Throws CoefficientRange unless T ∈ [0, 1].
Operator2 ppbs_unitary(const PpbsElement &element, Polarization pol);

struct SplitCoefficients {
    double t_h;
    double r_h;
    double t_v;
    double r_v;
};

/// T_H = R_V = cos²χ, R_H = T_V = sin²χ. Throws ChiRange unless χ ∈ [0, π/4].
SplitCoefficients chi_to_coefficients(double chi);

/// One level of the tree: wave plates merged into the PPBS as pre/post polarization rotations.
struct TreeLevel {
    PpbsElement ppbs;
    Operator2 pre_rotation = Operator2::identity();
    Operator2 post_rotation = Operator2::identity();
};

/// N-level binary tree. Every PPBS on a level is identical, so the tree is stored per level and
/// paths are enumerated on demand.
struct MeasurementTree {
    std::vector<TreeLevel> levels;

    size_t num_levels() const {
        return levels.size();
    }
    size_t num_leaves() const {
        return size_t{1} << levels.size();
    }
};

/// Photon amplitude travelling on the path labelled by an outcome prefix. Port b of every PPBS
/// carries vacuum, so one (unnormalized) polarization amplitude per path suffices.
struct PathState {
    OutcomeString label;
    PolState amplitude;
};

/// Level k gets a PPBS with the coefficients of χ_k = π/4 - η_k, zero phases, and the rotations
/// U(n_k)† before and U(n_k) after. Throws TooManyLevels past N_MAX.
MeasurementTree build_tree(std::span<const MeasurementSetting> settings);

/// Sends the photon through a single level: path a (transmission) becomes outcome +, path b
/// (reflection) outcome -. Returns {a, b} amplitudes.
std::array<PolState, 2> split_at_level(const TreeLevel &level, const PolState &incoming);

/// Propagates the input through every level and returns the 2^N leaves in outcome-index order.
std::vector<PathState> propagate(const MeasurementTree &tree, const PolState &input);

/// Intermediate path states after `depth` levels (depth ≤ N), in outcome-index order.
std::vector<PathState> propagate_to_level(const MeasurementTree &tree, const PolState &input, size_t depth);

/// Squared norms of the leaves, packaged as an OutcomeDistribution over `settings`.
OutcomeDistribution leaf_probabilities(
    const MeasurementTree &tree, const PolState &input, std::span<const MeasurementSetting> settings);

/// Product formula for an all-σ_z tree:
///   |α|² ∏ cos^{2t_k}χ_k sin^{2(1-t_k)}χ_k + |β|² ∏ cos^{2(1-t_k)}χ_k sin^{2t_k}χ_k,
/// with t_k = 1 for ν_k = +1 and 0 otherwise.
double closed_form_z_probability(
    Complex alpha, Complex beta, std::span<const double> chis, const OutcomeString &outcomes);

}  // namespace polsim

#endif
