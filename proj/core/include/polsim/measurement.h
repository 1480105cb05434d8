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

#ifndef POLSIM_MEASUREMENT_H
#define POLSIM_MEASUREMENT_H

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polsim/qubit.h"

namespace polsim {

inline constexpr double QUARTER_PI = std::numbers::pi / 4;
/// Calibration ν / sin(2η) is refused at or below this sharpness.
inline constexpr double ETA_MIN = 1e-9;
/// Largest number of levels enumerated exactly (2^N_MAX outcome strings).
inline constexpr size_t N_MAX = 20;

/// One unsharp polarization measurement: the measured direction and the sharpness η ∈ [0, π/4].
/// The unsharpness χ = π/4 - η is always derived, never stored.
struct MeasurementSetting {
    BlochVector n;
    double eta = QUARTER_PI;

    /// Validates η ∈ [0, π/4] (RangeError) and |n| = 1 (NonUnitBloch).
    static MeasurementSetting from_eta(const BlochVector &n, double eta);
    static MeasurementSetting from_chi(const BlochVector &n, double chi);

    double chi() const {
        return QUARTER_PI - eta;
    }
    bool operator==(const MeasurementSetting &other) const = default;
};

/// Outcome ν ∈ {+1, -1}.
using Outcome = int;

/// Sequence of ±1 outcomes ν_1…ν_N, rendered as "+-+".
///
/// Strings are indexed lexicographically with '+' before '-' and ν_1 most significant, so
/// index 0 is "++…+" and bit (N-1-k) of the index is set iff ν_{k+1} = -1.
class OutcomeString {
   public:
    OutcomeString() = default;
    explicit OutcomeString(std::vector<Outcome> outcomes);

    static OutcomeString from_index(uint64_t index, size_t length);
    /// Parses "+-+"; throws SchemaError on any other character or an empty string.
    static OutcomeString parse(std::string_view text);

    size_t size() const {
        return outcomes_.size();
    }
    Outcome operator[](size_t k) const {
        return outcomes_[k];
    }
    const std::vector<Outcome> &values() const {
        return outcomes_;
    }
    uint64_t index() const;
    std::string str() const;

    void push_back(Outcome nu);
    bool operator==(const OutcomeString &other) const = default;

   private:
    std::vector<Outcome> outcomes_;
};

/// All 2^N joint probabilities p_{ν1…νN} for a fixed list of settings, in OutcomeString index order.
struct OutcomeDistribution {
    std::vector<MeasurementSetting> settings;
    std::vector<double> probabilities;

    size_t num_levels() const {
        return settings.size();
    }
    size_t size() const {
        return probabilities.size();
    }
    double probability(const OutcomeString &outcomes) const;
    double total() const;
};

/// M_ν = (cos η + ν sin η σ_n) / √2.
Operator2 measurement_operator(const MeasurementSetting &setting, Outcome nu);

/// E_ν = (1 + ν sin 2η σ_n) / 2.
Operator2 effect(const MeasurementSetting &setting, Outcome nu);

struct MeasurementResult {
    PolState state;
    double probability;
};

/// Born probability ⟨ψ|E_ν|ψ⟩ and the collapsed state M_ν|ψ⟩/√p. Throws ImpossibleOutcome when
/// p < 1e-30.
MeasurementResult apply_measurement(const PolState &state, const MeasurementSetting &setting, Outcome nu);

/// M_{νN}…M_{ν1}; the first measurement acts first (rightmost).
Operator2 sequential_operator(std::span<const MeasurementSetting> settings, const OutcomeString &outcomes);

/// ‖M_{ν1…νN}|ψ⟩‖².
double joint_probability(
    const PolState &state, std::span<const MeasurementSetting> settings, const OutcomeString &outcomes);

/// Enumerates every outcome string. Throws TooManyLevels beyond N_MAX.
OutcomeDistribution outcome_distribution(const PolState &state, std::span<const MeasurementSetting> settings);

/// Calibrated measured value ν / sin(2η). Throws ZeroSharpness when η ≤ ETA_MIN.
double calibrate(Outcome nu, double eta);

/// Product ∏_{k∈subset} ν_k / sin(2η_k) for the outcome string with the given index.
/// subset holds zero-based level indices.
double calibrated_product(
    uint64_t outcome_index,
    size_t num_levels,
    std::span<const size_t> subset,
    std::span<const MeasurementSetting> settings);

/// Checks that subset is nonempty, strictly within [0, num_levels) and free of duplicates.
void validate_subset(std::span<const size_t> subset, size_t num_levels);

/// Correlation function of the calibrated values over `subset` (zero-based level indices),
/// computed by exact enumeration of all 2^N outcome strings.
double correlation(
    const PolState &state, std::span<const MeasurementSetting> settings, std::span<const size_t> subset);

/// 2^{-N}⟨ψ|{σ_1,{σ_2,…{σ_N, 1}…}}|ψ⟩, the sharpness-free form of the full-order correlation.
double nested_anticommutator_correlation(const PolState &state, std::span<const BlochVector> directions);

/// Full-order correlation from Bloch vectors alone:
///   even N: (n_1·n_2)(n_3·n_4)…
///   odd N:  ⟨ψ|σ_1|ψ⟩(n_2·n_3)…
/// Cross-checked against nested_anticommutator_correlation; throws InternalInconsistency if the
/// two routes differ by more than 1e-12.
double correlation_closed_form(const PolState &state, std::span<const BlochVector> directions);

}  // namespace polsim

#endif
