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

#ifndef POLSIM_SELECTION_H
#define POLSIM_SELECTION_H

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polsim/measurement.h"
#include "polsim/qubit.h"

namespace polsim {

enum class SelectionMode { None, Postselect, Reselect };

std::string_view selection_mode_name(SelectionMode mode);
std::optional<SelectionMode> parse_selection_mode(std::string_view name);

/// Final projective filter. For Reselect the final state is the initial state and
/// `final_state` is ignored.
struct SelectionSpec {
    SelectionMode mode = SelectionMode::None;
    PolState final_state = states::H;

    static SelectionSpec none() {
        return {};
    }
    static SelectionSpec postselect(const PolState &f) {
        return {SelectionMode::Postselect, f};
    }
    static SelectionSpec reselect() {
        return {SelectionMode::Reselect, states::H};
    }

    /// The state the final projective stage must yield. Meaningless for None.
    PolState target(const PolState &initial) const {
        return mode == SelectionMode::Reselect ? initial : final_state;
    }
};

/// Normalized state orthogonal to f, phase-fixed so its first nonzero component is real positive.
PolState orthogonal_complement(const PolState &f);

/// Sharp (η = π/4) measurement of |f⟩⟨f| - |f⊥⟩⟨f⊥|; outcome + means the photon was found in |f⟩.
MeasurementSetting projective_setting(const PolState &f);

/// ⟨f|σ_n|i⟩ / ⟨f|i⟩. Throws OrthogonalSelection when |⟨f|i⟩|² ≤ 1e-30.
Complex weak_value(const PolState &initial, const PolState &final_state, const BlochVector &n);

/// Mean calibrated value of one unsharp σ_n measurement given a successful postselection on |f⟩:
///     Re w / (cos²η + |w|² sin²η),   w = weak value.
double postselected_mean(const PolState &initial, const PolState &final_state, const BlochVector &n, double eta);

/// Second-order correlation of two identical unsharp σ_n measurements under reselection of |i⟩:
///     (1 + ⟨σ⟩²) / (2 - sin²(2η)(1 - ⟨σ⟩²)).
double reselected_correlation(const PolState &initial, const BlochVector &n, double eta);

struct ConditionalStatistics {
    double mean;
    double acceptance;
};

/// Appends the selection's projective stage to `settings`, enumerates the joint distribution,
/// and conditions on the final outcome +. Returns the calibrated product mean over `subset`
/// (zero-based, unsharp stages only) and the acceptance probability.
ConditionalStatistics conditional_statistics(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    std::span<const size_t> subset);

/// `settings` followed by the projective stage for `selection` (unchanged when mode is None).
std::vector<MeasurementSetting> with_selection_stage(
    const PolState &state, std::span<const MeasurementSetting> settings, const SelectionSpec &selection);

}  // namespace polsim

#endif
