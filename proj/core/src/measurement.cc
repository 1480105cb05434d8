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

#include "polsim/measurement.h"

#include <cmath>

#include <fmt/format.h>

#include "polsim/error.h"

namespace polsim {

namespace {

void check_outcome(Outcome nu) {
    if (nu != 1 && nu != -1) {
        throw_error(ErrorCode::RangeError, fmt::format("outcome must be +1 or -1, got {}", nu));
    }
}

void check_levels(size_t n) {
    if (n > N_MAX) {
        throw_error(ErrorCode::TooManyLevels, fmt::format("{} levels exceeds the enumeration limit {}", n, N_MAX));
    }
}

}  // namespace

MeasurementSetting MeasurementSetting::from_eta(const BlochVector &n, double eta) {
    if (!(eta >= 0 && eta <= QUARTER_PI + 1e-12)) {
        throw_error(ErrorCode::RangeError, fmt::format("sharpness eta = {} is outside [0, pi/4]", eta));
    }
    double len = n.norm();
    if (!std::isfinite(len) || std::abs(len - 1) > INPUT_TOL) {
        throw_error(ErrorCode::NonUnitBloch, fmt::format("|n| = {} is not 1", len));
    }
    return {n, std::min(eta, QUARTER_PI)};
}

MeasurementSetting MeasurementSetting::from_chi(const BlochVector &n, double chi) {
    if (!(chi >= 0 && chi <= QUARTER_PI + 1e-12)) {
        throw_error(ErrorCode::ChiRange, fmt::format("unsharpness chi = {} is outside [0, pi/4]", chi));
    }
    return from_eta(n, std::max(0.0, QUARTER_PI - chi));
}

OutcomeString::OutcomeString(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
    for (Outcome nu : outcomes_) {
        check_outcome(nu);
    }
}

OutcomeString OutcomeString::from_index(uint64_t index, size_t length) {
    std::vector<Outcome> out(length);
    for (size_t k = 0; k < length; k++) {
        out[k] = ((index >> (length - 1 - k)) & 1) ? -1 : +1;
    }
    OutcomeString s;
    s.outcomes_ = std::move(out);
    return s;
}

OutcomeString OutcomeString::parse(std::string_view text) {
    if (text.empty()) {
        throw_error(ErrorCode::SchemaError, "empty outcome string");
    }
    std::vector<Outcome> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '+') {
            out.push_back(+1);
        } else if (c == '-') {
            out.push_back(-1);
        } else {
            throw_error(ErrorCode::SchemaError, fmt::format("bad character '{}' in outcome string \"{}\"", c, text));
        }
    }
    OutcomeString s;
    s.outcomes_ = std::move(out);
    return s;
}

uint64_t OutcomeString::index() const {
    uint64_t result = 0;
    for (Outcome nu : outcomes_) {
        result = (result << 1) | (nu < 0 ? 1 : 0);
    }
    return result;
}

std::string OutcomeString::str() const {
    std::string out;
    out.reserve(outcomes_.size());
    for (Outcome nu : outcomes_) {
        out.push_back(nu > 0 ? '+' : '-');
    }
    return out;
}

void OutcomeString::push_back(Outcome nu) {
    check_outcome(nu);
    outcomes_.push_back(nu);
}

double OutcomeDistribution::probability(const OutcomeString &outcomes) const {
    if (outcomes.size() != num_levels()) {
        throw_error(
            ErrorCode::LengthMismatch,
            fmt::format("outcome string of length {} for {} levels", outcomes.size(), num_levels()));
    }
    return probabilities[outcomes.index()];
}

double OutcomeDistribution::total() const {
    double t = 0;
    for (double p : probabilities) {
        t += p;
    }
    return t;
}

Operator2 measurement_operator(const MeasurementSetting &setting, Outcome nu) {
    check_outcome(nu);
    Operator2 sigma = bloch_observable(setting.n);
    return (Operator2::identity() * std::cos(setting.eta) + sigma * (nu * std::sin(setting.eta))) *
           (std::numbers::sqrt2 / 2);
}

Operator2 effect(const MeasurementSetting &setting, Outcome nu) {
    check_outcome(nu);
    Operator2 sigma = bloch_observable(setting.n);
    return (Operator2::identity() + sigma * (nu * std::sin(2 * setting.eta))) * 0.5;
}

MeasurementResult apply_measurement(const PolState &state, const MeasurementSetting &setting, Outcome nu) {
    double p = expectation(state, effect(setting, nu));
    if (!(p >= 1e-30)) {
        throw_error(
            ErrorCode::ImpossibleOutcome,
            fmt::format("outcome {:+d} has probability {} in state {}", nu, p, state.str()));
    }
    PolState branch = measurement_operator(setting, nu) * state;
    return {branch * (1 / std::sqrt(p)), std::min(p, 1.0)};
}

Operator2 sequential_operator(std::span<const MeasurementSetting> settings, const OutcomeString &outcomes) {
    if (settings.empty() || settings.size() != outcomes.size()) {
        throw_error(
            ErrorCode::LengthMismatch,
            fmt::format("{} settings but {} outcomes", settings.size(), outcomes.size()));
    }
    Operator2 total = Operator2::identity();
    for (size_t k = 0; k < settings.size(); k++) {
        total = measurement_operator(settings[k], outcomes[k]) * total;
    }
    return total;
}

double joint_probability(
    const PolState &state, std::span<const MeasurementSetting> settings, const OutcomeString &outcomes) {
    return (sequential_operator(settings, outcomes) * state).norm_sq();
}

OutcomeDistribution outcome_distribution(const PolState &state, std::span<const MeasurementSetting> settings) {
    check_levels(settings.size());
    std::vector<PolState> branches{state};
    for (const auto &setting : settings) {
        Operator2 plus = measurement_operator(setting, +1);
        Operator2 minus = measurement_operator(setting, -1);
        std::vector<PolState> next(branches.size() * 2);
        for (size_t i = 0; i < branches.size(); i++) {
            next[2 * i] = plus * branches[i];
            next[2 * i + 1] = minus * branches[i];
        }
        branches = std::move(next);
    }
    OutcomeDistribution dist;
    dist.settings.assign(settings.begin(), settings.end());
    dist.probabilities.reserve(branches.size());
    for (const auto &b : branches) {
        dist.probabilities.push_back(b.norm_sq());
    }
    return dist;
}

double calibrate(Outcome nu, double eta) {
    check_outcome(nu);
    if (!(eta > ETA_MIN)) {
        throw_error(
            ErrorCode::ZeroSharpness,
            fmt::format("calibration diverges for eta = {} (must exceed {})", eta, ETA_MIN));
    }
    return nu / std::sin(2 * eta);
}

void validate_subset(std::span<const size_t> subset, size_t num_levels) {
    if (subset.empty()) {
        throw_error(ErrorCode::InvalidSubset, "correlation subset is empty");
    }
    std::vector<bool> seen(num_levels, false);
    for (size_t k : subset) {
        if (k >= num_levels) {
            throw_error(
                ErrorCode::InvalidSubset, fmt::format("subset index {} out of range for {} levels", k, num_levels));
        }
        if (seen[k]) {
            throw_error(ErrorCode::InvalidSubset, fmt::format("subset index {} repeated", k));
        }
        seen[k] = true;
    }
}

double calibrated_product(
    uint64_t outcome_index,
    size_t num_levels,
    std::span<const size_t> subset,
    std::span<const MeasurementSetting> settings) {
    double value = 1;
    for (size_t k : subset) {
        Outcome nu = ((outcome_index >> (num_levels - 1 - k)) & 1) ? -1 : +1;
        value *= calibrate(nu, settings[k].eta);
    }
    return value;
}

double correlation(
    const PolState &state, std::span<const MeasurementSetting> settings, std::span<const size_t> subset) {
    check_levels(settings.size());
    validate_subset(subset, settings.size());
    for (size_t k : subset) {
        calibrate(+1, settings[k].eta);
    }
    auto dist = outcome_distribution(state, settings);
    size_t n = settings.size();
    double total = 0;
    for (uint64_t i = 0; i < dist.size(); i++) {
        total += dist.probabilities[i] * calibrated_product(i, n, subset, settings);
    }
    return total;
}

double nested_anticommutator_correlation(const PolState &state, std::span<const BlochVector> directions) {
    if (directions.empty()) {
        throw_error(ErrorCode::LengthMismatch, "need at least one Bloch vector");
    }
    // Innermost bracket is {σ_N, 1} = 2σ_N; each outer level wraps another anticommutator.
    Operator2 acc = Operator2::identity();
    for (size_t k = directions.size(); k-- > 0;) {
        acc = anticommutator(bloch_observable(directions[k]), acc) * 0.5;
    }
    return expectation(state, acc);
}

double correlation_closed_form(const PolState &state, std::span<const BlochVector> directions) {
    if (directions.empty()) {
        throw_error(ErrorCode::LengthMismatch, "need at least one Bloch vector");
    }
    size_t n = directions.size();
    double value = 1;
    size_t first_pair = 0;
    if (n % 2 == 1) {
        value = expectation(state, bloch_observable(directions[0]));
        first_pair = 1;
    }
    for (size_t k = first_pair; k + 1 < n; k += 2) {
        value *= directions[k].dot(directions[k + 1]);
    }
    double nested = nested_anticommutator_correlation(state, directions);
    if (std::abs(nested - value) > 1e-12) {
        throw_error(
            ErrorCode::InternalInconsistency,
            fmt::format("Bloch-vector form {} disagrees with nested anticommutators {}", value, nested));
    }
    return value;
}

}  // namespace polsim
