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

#ifndef POLSIM_MONTECARLO_H
#define POLSIM_MONTECARLO_H

#include <cstdint>
#include <span>
#include <vector>

#include "polsim/measurement.h"
#include "polsim/rng.h"
#include "polsim/selection.h"

namespace polsim {

/// Outcomes of one photon. `selected` is the final projective result when a selection stage is
/// active and always true otherwise.
struct OutcomeRecord {
    OutcomeString outcomes;
    bool selected = true;

    bool operator==(const OutcomeRecord &other) const = default;
};

struct Estimate {
    double mean = 0;
    double standard_error = 0;
    uint64_t count = 0;
    double acceptance = 0;
};

/// Per-outcome-string counts, split by whether the selection stage accepted the photon.
struct Tally {
    size_t num_levels = 0;
    uint64_t shots = 0;
    std::vector<uint64_t> selected;
    std::vector<uint64_t> rejected;

    explicit Tally(size_t levels = 0);

    uint64_t accepted_total() const;
    void merge(const Tally &other);
    bool operator==(const Tally &other) const = default;
};

/// Stage-by-stage sampler. Each unsharp outcome is drawn from its conditional Born law given the
/// collapsed state so far; the optional projective selection stage is drawn last.
class RunSampler {
   public:
    RunSampler(const PolState &state, std::span<const MeasurementSetting> settings, const SelectionSpec &selection);

    size_t num_levels() const {
        return stages_.size();
    }

    OutcomeRecord sample(PhiloxStream &rng) const;

    /// Same draw sequence as sample() but returns the outcome index (N ≤ 63).
    uint64_t sample_index(PhiloxStream &rng, bool &selected) const;

   private:
    struct Stage {
        Operator2 plus;
        Operator2 minus;
        Operator2 effect_plus;
    };

    template <typename Emit>
    bool run(PhiloxStream &rng, Emit &&emit) const;

    PolState initial_;
    std::vector<Stage> stages_;
    bool has_selection_ = false;
    PolState target_;
};

OutcomeRecord sample_run(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    PhiloxStream &rng);

/// Stream used for global shot `shot` of a run seeded with `base`.
inline RngSpec shot_stream(const RngSpec &base, uint64_t shot) {
    return {base.seed, base.stream + shot};
}

/// Draws `shots` records in shot order. Shot j uses shot_stream(base, j).
std::vector<OutcomeRecord> collect_records(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    uint64_t shots,
    const RngSpec &base);

/// Splits `shots` into `shards` contiguous shot ranges, samples them on up to `max_threads`
/// workers and folds the per-shard tallies in shard order. Because every shot owns its own
/// stream, the merged tally depends only on (base, shots). Throws TooManyLevels past N_MAX.
Tally run_shards(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    uint64_t shots,
    const RngSpec &base,
    uint32_t shards,
    unsigned max_threads = 1);

/// Mean of ∏_{k∈subset} ν_k / sin(2η_k) over the selected records, with the i.i.d. standard
/// error. Throws EmptySample when nothing was selected and ZeroSharpness for η_k ≤ ETA_MIN.
Estimate estimate_correlation(
    std::span<const OutcomeRecord> records, std::span<const size_t> subset, std::span<const double> etas);

/// Same estimator evaluated from tallied counts.
Estimate estimate_correlation(const Tally &tally, std::span<const size_t> subset, std::span<const double> etas);

}  // namespace polsim

#endif
