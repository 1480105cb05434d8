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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "polsim/error.h"

namespace polsim {

Tally::Tally(size_t levels) : num_levels(levels) {
    if (levels > N_MAX) {
        throw_error(ErrorCode::TooManyLevels, fmt::format("cannot tally {} levels (limit {})", levels, N_MAX));
    }
    selected.assign(size_t{1} << levels, 0);
    rejected.assign(size_t{1} << levels, 0);
}

uint64_t Tally::accepted_total() const {
    uint64_t total = 0;
    for (uint64_t c : selected) {
        total += c;
    }
    return total;
}

void Tally::merge(const Tally &other) {
    if (other.num_levels != num_levels) {
        throw_error(
            ErrorCode::LengthMismatch,
            fmt::format("cannot merge a {}-level tally into a {}-level one", other.num_levels, num_levels));
    }
    shots += other.shots;
    for (size_t i = 0; i < selected.size(); i++) {
        selected[i] += other.selected[i];
        rejected[i] += other.rejected[i];
    }
}

RunSampler::RunSampler(
    const PolState &state, std::span<const MeasurementSetting> settings, const SelectionSpec &selection)
    : initial_(make_state(state.alpha, state.beta)),
      has_selection_(selection.mode != SelectionMode::None) {
    stages_.reserve(settings.size());
    for (const auto &s : settings) {
        stages_.push_back({measurement_operator(s, +1), measurement_operator(s, -1), effect(s, +1)});
    }
    if (has_selection_) {
        PolState t = selection.target(initial_);
        target_ = make_state(t.alpha, t.beta);
    }
}

template <typename Emit>
bool RunSampler::run(PhiloxStream &rng, Emit &&emit) const {
    PolState psi = initial_;
    for (const auto &stage : stages_) {
        double p_plus = inner(psi, stage.effect_plus * psi).real();
        bool plus = rng.uniform() < p_plus;
        emit(plus ? +1 : -1);
        PolState branch = (plus ? stage.plus : stage.minus) * psi;
        psi = branch * (1 / std::sqrt(branch.norm_sq()));
    }
    if (!has_selection_) {
        return true;
    }
    double p_accept = std::norm(inner(target_, psi));
    return rng.uniform() < p_accept;
}

OutcomeRecord RunSampler::sample(PhiloxStream &rng) const {
    OutcomeRecord record;
    record.selected = run(rng, [&](Outcome nu) { record.outcomes.push_back(nu); });
    return record;
}

uint64_t RunSampler::sample_index(PhiloxStream &rng, bool &selected) const {
    uint64_t index = 0;
    selected = run(rng, [&](Outcome nu) { index = (index << 1) | (nu < 0 ? 1 : 0); });
    return index;
}

OutcomeRecord sample_run(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    PhiloxStream &rng) {
    return RunSampler(state, settings, selection).sample(rng);
}

std::vector<OutcomeRecord> collect_records(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    uint64_t shots,
    const RngSpec &base) {
    RunSampler sampler(state, settings, selection);
    std::vector<OutcomeRecord> records;
    records.reserve(shots);
    for (uint64_t j = 0; j < shots; j++) {
        PhiloxStream rng(shot_stream(base, j));
        records.push_back(sampler.sample(rng));
    }
    return records;
}

Tally run_shards(
    const PolState &state,
    std::span<const MeasurementSetting> settings,
    const SelectionSpec &selection,
    uint64_t shots,
    const RngSpec &base,
    uint32_t shards,
    unsigned max_threads) {
    shards = std::max<uint32_t>(shards, 1);
    RunSampler sampler(state, settings, selection);
    std::vector<Tally> partial(shards, Tally(settings.size()));

    auto run_shard = [&](uint32_t s) {
        uint64_t begin = shots / shards * s + std::min<uint64_t>(s, shots % shards);
        uint64_t end = begin + shots / shards + (s < shots % shards ? 1 : 0);
        Tally &t = partial[s];
        for (uint64_t j = begin; j < end; j++) {
            PhiloxStream rng(shot_stream(base, j));
            bool selected;
            uint64_t index = sampler.sample_index(rng, selected);
            (selected ? t.selected : t.rejected)[index]++;
        }
        t.shots = end - begin;
    };

    unsigned workers = std::clamp<unsigned>(max_threads, 1, shards);
    if (workers == 1) {
        for (uint32_t s = 0; s < shards; s++) {
            run_shard(s);
        }
    } else {
        std::atomic<uint32_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back([&, w] {
                try {
                    for (uint32_t s = next++; s < shards; s = next++) {
                        run_shard(s);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    Tally merged(settings.size());
    for (const auto &t : partial) {
        merged.merge(t);
    }
    return merged;
}

namespace {

void check_subset_etas(std::span<const size_t> subset, size_t num_levels, std::span<const double> etas) {
    validate_subset(subset, num_levels);
    if (etas.size() != num_levels) {
        throw_error(
            ErrorCode::LengthMismatch, fmt::format("{} sharpness values for {} levels", etas.size(), num_levels));
    }
    for (size_t k : subset) {
        calibrate(+1, etas[k]);
    }
}

double product_of(const OutcomeString &outcomes, std::span<const size_t> subset, std::span<const double> etas) {
    double v = 1;
    for (size_t k : subset) {
        v *= calibrate(outcomes[k], etas[k]);
    }
    return v;
}

}  // namespace

Estimate estimate_correlation(
    std::span<const OutcomeRecord> records, std::span<const size_t> subset, std::span<const double> etas) {
    if (records.empty()) {
        throw_error(ErrorCode::EmptySample, "no records to estimate from");
    }
    size_t n = records.front().outcomes.size();
    check_subset_etas(subset, n, etas);

    uint64_t count = 0;
    double sum = 0;
    for (const auto &r : records) {
        if (r.outcomes.size() != n) {
            throw_error(ErrorCode::LengthMismatch, "records of differing length");
        }
        if (r.selected) {
            sum += product_of(r.outcomes, subset, etas);
            count++;
        }
    }
    if (count == 0) {
        throw_error(ErrorCode::EmptySample, "no record passed the selection");
    }
    Estimate e;
    e.count = count;
    e.mean = sum / static_cast<double>(count);
    e.acceptance = static_cast<double>(count) / static_cast<double>(records.size());
    if (count > 1) {
        double ss = 0;
        for (const auto &r : records) {
            if (r.selected) {
                double d = product_of(r.outcomes, subset, etas) - e.mean;
                ss += d * d;
            }
        }
        e.standard_error = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    return e;
}

Estimate estimate_correlation(const Tally &tally, std::span<const size_t> subset, std::span<const double> etas) {
    check_subset_etas(subset, tally.num_levels, etas);
    uint64_t count = tally.accepted_total();
    if (count == 0) {
        throw_error(ErrorCode::EmptySample, "no record passed the selection");
    }
    std::vector<double> values(tally.selected.size());
    double sum = 0;
    for (uint64_t i = 0; i < values.size(); i++) {
        values[i] = product_of(OutcomeString::from_index(i, tally.num_levels), subset, etas);
        sum += static_cast<double>(tally.selected[i]) * values[i];
    }
    Estimate e;
    e.count = count;
    e.mean = sum / static_cast<double>(count);
    e.acceptance = static_cast<double>(count) / static_cast<double>(tally.shots);
    if (count > 1) {
        double ss = 0;
        for (uint64_t i = 0; i < values.size(); i++) {
            double d = values[i] - e.mean;
            ss += static_cast<double>(tally.selected[i]) * d * d;
        }
        e.standard_error = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    return e;
}

}  // namespace polsim
