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

#include "polsim/selection.h"

#include <cmath>

#include <fmt/format.h>

#include "polsim/error.h"

namespace polsim {

std::string_view selection_mode_name(SelectionMode mode) {
    switch (mode) {
        case SelectionMode::None:
            return "none";
        case SelectionMode::Postselect:
            return "postselect";
        case SelectionMode::Reselect:
            return "reselect";
    }
    return "none";
}

std::optional<SelectionMode> parse_selection_mode(std::string_view name) {
    if (name == "none") {
        return SelectionMode::None;
    }
    if (name == "postselect") {
        return SelectionMode::Postselect;
    }
    if (name == "reselect") {
        return SelectionMode::Reselect;
    }
    return std::nullopt;
}

PolState orthogonal_complement(const PolState &f) {
    PolState unit = make_state(f.alpha, f.beta);
    PolState perp{-std::conj(unit.beta), std::conj(unit.alpha)};
    Complex lead = std::abs(perp.alpha) > 1e-15 ? perp.alpha : perp.beta;
    return perp * (std::conj(lead) / std::abs(lead));
}

MeasurementSetting projective_setting(const PolState &f) {
    return {bloch_vector_of(f), QUARTER_PI};
}

Complex weak_value(const PolState &initial, const PolState &final_state, const BlochVector &n) {
    Complex overlap = inner(final_state, initial);
    if (!(std::norm(overlap) > 1e-30)) {
        throw_error(
            ErrorCode::OrthogonalSelection,
            fmt::format("|<f|i>|^2 = {} leaves the weak value undefined", std::norm(overlap)));
    }
    return inner(final_state, bloch_observable(n) * initial) / overlap;
}

double postselected_mean(const PolState &initial, const PolState &final_state, const BlochVector &n, double eta) {
    calibrate(+1, eta);
    Complex w = weak_value(initial, final_state, n);
    double c = std::cos(eta);
    double s = std::sin(eta);
    return w.real() / (c * c + std::norm(w) * s * s);
}

double reselected_correlation(const PolState &initial, const BlochVector &n, double eta) {
    calibrate(+1, eta);
    double mean = expectation(initial, bloch_observable(n));
    double m2 = mean * mean;
    double s2 = std::sin(2 * eta);
    return (1 + m2) / (2 - s2 * s2 * (1 - m2));
}

std::vector<MeasurementSetting> with_selection_stage(
    const PolState &state, std::span<const MeasurementSetting> settings, const SelectionSpec &selection) {
    std::vector<MeasurementSetting> out(settings.begin(), settings.end());
    if (selection.mode != SelectionMode::None) {
        out.push_back(projective_setting(selection.target(state)));
    }
    return out;
}

ConditionalStatistics conditional_statistics(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    std::span<const size_t> subset) {
    validate_subset(subset, settings.size());
    for (size_t k : subset) {
        calibrate(+1, settings[k].eta);
    }
    if (selection.mode == SelectionMode::None) {
        return {correlation(state, settings, subset), 1.0};
    }

    auto extended = with_selection_stage(state, settings, selection);
    auto dist = outcome_distribution(state, extended);
    size_t n = extended.size();
    double accepted = 0;
    double weighted = 0;
    // Final outcome + is the least significant index bit being clear.
    for (uint64_t i = 0; i < dist.size(); i += 2) {
        double p = dist.probabilities[i];
        accepted += p;
        weighted += p * calibrated_product(i, n, subset, extended);
    }
    if (!(accepted >= 1e-30)) {
        throw_error(
            ErrorCode::OrthogonalSelection, fmt::format("selection acceptance {} is numerically zero", accepted));
    }
    return {weighted / accepted, accepted};
}

}  // namespace polsim
