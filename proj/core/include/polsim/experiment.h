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

#ifndef POLSIM_EXPERIMENT_H
#define POLSIM_EXPERIMENT_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polsim/measurement.h"
#include "polsim/montecarlo.h"
#include "polsim/selection.h"

namespace polsim {

/// Deviation above which the optical tree and the operator formalism are declared inconsistent.
inline constexpr double CROSS_CHECK_TOL = 1e-10;

struct SamplingSpec {
    uint64_t shots = 0;
    uint64_t seed = 0;
    uint32_t shards = 1;
};

struct OutputSpec {
    /// Zero-based level indices; the JSON file uses 1-based indices.
    std::vector<std::vector<size_t>> subsets;
    bool emit_distribution = false;
};

struct ExperimentConfig {
    PolState initial_state;
    std::vector<MeasurementSetting> settings;
    SelectionSpec selection;
    SamplingSpec sampling;
    OutputSpec outputs;
};

/// Parses and validates a JSON experiment description.
///
/// Malformed JSON, unknown or missing keys, wrong types and eta/chi given together raise
/// SchemaError (with line/column or the offending field path). Out-of-range values raise
/// RangeError: eta or chi outside [0, π/4], Bloch vectors more than 1e-6 from unit length
/// (closer ones are renormalized), negative shots, subset indices outside 1..N, or more levels
/// than can be enumerated.
ExperimentConfig parse_experiment(std::string_view text);

/// Inverse of parse_experiment; floating-point values use 17 significant digits.
std::string serialize_experiment(const ExperimentConfig &config);

struct DistributionRow {
    std::string outcomes;
    double probability = 0;
    /// Joint probability of this string together with a successful selection.
    std::optional<double> selected;
};

struct CorrelationResult {
    /// Zero-based.
    std::vector<size_t> subset;
    double exact = 0;
    std::optional<Estimate> monte_carlo;
};

struct ResultsReport {
    size_t num_levels = 0;
    SelectionMode selection_mode = SelectionMode::None;
    /// Exact probability that the selection stage accepts the photon (1 without selection).
    double acceptance = 1;
    double tree_cross_check = 0;
    std::optional<SamplingSpec> sampling;
    std::optional<std::vector<DistributionRow>> distribution;
    std::vector<CorrelationResult> correlations;
};

struct RunOptions {
    bool monte_carlo = true;
    unsigned max_threads = 1;
};

/// Exact distribution, correlations or selected statistics per subset, the tree/operator
/// cross-check, and (when enabled and shots > 0) Monte Carlo estimates. Throws
/// CrossCheckFailure if the two probability routes disagree by more than CROSS_CHECK_TOL.
ResultsReport run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Max |p_tree - p_operators| over all leaves, including the selection stage if any.
double tree_cross_check(const ExperimentConfig &config);

enum class ReportFormat { Json, Csv };

/// Stable field order, 17 significant digits for reals, outcome strings as "+-" text.
std::string serialize_results(const ResultsReport &report, ReportFormat format);

/// Reads back a JSON report produced by serialize_results.
ResultsReport parse_report(std::string_view text);

/// Built-in configurations demonstrating the anomalous reselected correlation and the
/// anomalous postselected mean.
ExperimentConfig reselection_demo_config();
ExperimentConfig postselection_demo_config();

}  // namespace polsim

#endif
