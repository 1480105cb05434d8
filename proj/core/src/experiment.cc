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

#include "polsim/experiment.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"
#include "polsim/error.h"
#include "polsim/ppbs.h"

namespace polsim {

namespace {

using nlohmann::json;

/// Walks a parsed document while tracking the field path for diagnostics.
class Field {
   public:
    Field(const json &value, std::string path) : value_(value), path_(std::move(path)) {
    }

    const json &value() const {
        return value_;
    }
    const std::string &path() const {
        return path_;
    }

    [[noreturn]] void schema_error(const std::string &what) const {
        throw_error(ErrorCode::SchemaError, fmt::format("{}: {}", path_, what));
    }
    [[noreturn]] void range_error(const std::string &what) const {
        throw_error(ErrorCode::RangeError, fmt::format("{}: {}", path_, what));
    }

    void expect_object(std::initializer_list<std::string_view> allowed) const {
        if (!value_.is_object()) {
            schema_error("expected an object");
        }
        for (const auto &[key, _] : value_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                schema_error(fmt::format("unknown key \"{}\"", key));
            }
        }
    }

    bool has(std::string_view key) const {
        return value_.contains(key);
    }

    Field operator[](std::string_view key) const {
        std::string child = path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
        if (!value_.contains(key)) {
            throw_error(ErrorCode::SchemaError, fmt::format("{}: missing required field", child));
        }
        return Field(value_.at(std::string(key)), child);
    }

    Field at(size_t index) const {
        return Field(value_.at(index), fmt::format("{}[{}]", path_, index));
    }

    size_t array_size() const {
        if (!value_.is_array()) {
            schema_error("expected an array");
        }
        return value_.size();
    }

    double number() const {
        if (!value_.is_number()) {
            schema_error("expected a number");
        }
        double v = value_.get<double>();
        if (!std::isfinite(v)) {
            range_error("value is not finite");
        }
        return v;
    }

    /// Integer value; negative values are reported as RangeError.
    uint64_t non_negative_integer() const {
        if (!value_.is_number_integer()) {
            schema_error("expected an integer");
        }
        if (value_.is_number_unsigned()) {
            return value_.get<uint64_t>();
        }
        int64_t v = value_.get<int64_t>();
        if (v < 0) {
            range_error(fmt::format("must be non-negative, got {}", v));
        }
        return static_cast<uint64_t>(v);
    }

    bool boolean() const {
        if (!value_.is_boolean()) {
            schema_error("expected true or false");
        }
        return value_.get<bool>();
    }

    std::string string() const {
        if (!value_.is_string()) {
            schema_error("expected a string");
        }
        return value_.get<std::string>();
    }

    /// [re, im] pair or a bare real number.
    Complex complex() const {
        if (value_.is_number()) {
            return {number(), 0};
        }
        if (!value_.is_array() || value_.size() != 2) {
            schema_error("expected a complex number as [re, im]");
        }
        return {at(0).number(), at(1).number()};
    }

   private:
    const json &value_;
    std::string path_;
};

PolState read_state(const Field &f) {
    f.expect_object({"alpha", "beta"});
    Complex alpha = f["alpha"].complex();
    Complex beta = f["beta"].complex();
    if (std::norm(alpha) + std::norm(beta) < 1e-30) {
        f.range_error("state vector is zero");
    }
    return make_state(alpha, beta);
}

MeasurementSetting read_setting(const Field &f) {
    f.expect_object({"bloch", "eta", "chi"});
    Field b = f["bloch"];
    if (b.array_size() != 3) {
        b.schema_error("expected [nx, ny, nz]");
    }
    double nx = b.at(0).number();
    double ny = b.at(1).number();
    double nz = b.at(2).number();
    double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (std::abs(len - 1) > 1e-6) {
        b.range_error(fmt::format("Bloch vector has norm {}, expected 1 (tolerance 1e-6)", len));
    }
    BlochVector n = BlochVector::normalized(nx, ny, nz, 1e-6);

    bool has_eta = f.has("eta");
    bool has_chi = f.has("chi");
    if (has_eta == has_chi) {
        f.schema_error("exactly one of \"eta\" and \"chi\" is required");
    }
    if (has_eta) {
        double eta = f["eta"].number();
        if (!(eta >= 0 && eta <= QUARTER_PI)) {
            f["eta"].range_error(fmt::format("eta = {} is outside [0, pi/4]", eta));
        }
        return {n, eta};
    }
    double chi = f["chi"].number();
    if (!(chi >= 0 && chi <= QUARTER_PI)) {
        f["chi"].range_error(fmt::format("chi = {} is outside [0, pi/4]", chi));
    }
    return {n, QUARTER_PI - chi};
}

std::string locate(std::string_view text, size_t byte) {
    size_t line = 1;
    size_t col = 1;
    for (size_t i = 0; i < std::min(byte, text.size()); i++) {
        if (text[i] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
    }
    return fmt::format("line {}, column {}", line, col);
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // nlohmann reports the byte just past the offending character.
        size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw_error(ErrorCode::SchemaError, fmt::format("malformed JSON at {}: {}", locate(text, byte), e.what()));
    }

    Field root(doc, "");
    root.expect_object({"initial_state", "settings", "selection", "sampling", "outputs"});

    ExperimentConfig config;
    config.initial_state = read_state(root["initial_state"]);

    Field settings = root["settings"];
    size_t n = settings.array_size();
    if (n == 0) {
        settings.schema_error("at least one measurement setting is required");
    }
    for (size_t k = 0; k < n; k++) {
        config.settings.push_back(read_setting(settings.at(k)));
    }

    if (root.has("selection")) {
        Field sel = root["selection"];
        sel.expect_object({"mode", "final_state"});
        Field mode_field = sel["mode"];
        auto mode = parse_selection_mode(mode_field.string());
        if (!mode) {
            mode_field.schema_error("expected \"none\", \"postselect\" or \"reselect\"");
        }
        config.selection.mode = *mode;
        if (*mode == SelectionMode::Postselect) {
            config.selection.final_state = read_state(sel["final_state"]);
        } else if (sel.has("final_state")) {
            sel.schema_error(fmt::format("final_state is only allowed with mode \"postselect\""));
        }
    }

    size_t levels = n + (config.selection.mode == SelectionMode::None ? 0 : 1);
    if (levels > N_MAX) {
        settings.range_error(fmt::format(
            "{} settings{} exceed the enumeration limit of {} levels",
            n,
            config.selection.mode == SelectionMode::None ? "" : " plus the selection stage",
            N_MAX));
    }

    if (root.has("sampling")) {
        Field s = root["sampling"];
        s.expect_object({"shots", "seed", "shards"});
        if (s.has("shots")) {
            config.sampling.shots = s["shots"].non_negative_integer();
        }
        if (s.has("seed")) {
            config.sampling.seed = s["seed"].non_negative_integer();
        }
        if (s.has("shards")) {
            uint64_t shards = s["shards"].non_negative_integer();
            if (shards < 1 || shards > 1u << 16) {
                s["shards"].range_error("shards must lie in [1, 65536]");
            }
            config.sampling.shards = static_cast<uint32_t>(shards);
        }
    }

    if (root.has("outputs")) {
        Field o = root["outputs"];
        o.expect_object({"subsets", "emit_distribution"});
        if (o.has("emit_distribution")) {
            config.outputs.emit_distribution = o["emit_distribution"].boolean();
        }
        if (o.has("subsets")) {
            Field subsets = o["subsets"];
            for (size_t i = 0; i < subsets.array_size(); i++) {
                Field subset = subsets.at(i);
                size_t m = subset.array_size();
                if (m == 0) {
                    subset.schema_error("subset must not be empty");
                }
                std::vector<size_t> indices;
                std::set<size_t> seen;
                for (size_t j = 0; j < m; j++) {
                    Field idx = subset.at(j);
                    uint64_t k = idx.non_negative_integer();
                    if (k < 1 || k > n) {
                        idx.range_error(fmt::format("index {} outside 1..{}", k, n));
                    }
                    if (!seen.insert(k).second) {
                        idx.range_error(fmt::format("index {} repeated", k));
                    }
                    indices.push_back(k - 1);
                }
                config.outputs.subsets.push_back(std::move(indices));
            }
        }
    }
    return config;
}

double tree_cross_check(const ExperimentConfig &config) {
    auto stages = with_selection_stage(config.initial_state, config.settings, config.selection);
    auto tree = build_tree(stages);
    auto optical = leaf_probabilities(tree, config.initial_state, stages);
    auto algebraic = outcome_distribution(config.initial_state, stages);
    double worst = 0;
    for (size_t i = 0; i < optical.size(); i++) {
        worst = std::max(worst, std::abs(optical.probabilities[i] - algebraic.probabilities[i]));
    }
    return worst;
}

ResultsReport run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    const auto &state = config.initial_state;
    const auto &settings = config.settings;
    const auto &selection = config.selection;
    size_t n = settings.size();

    ResultsReport report;
    report.num_levels = n;
    report.selection_mode = selection.mode;

    report.tree_cross_check = tree_cross_check(config);
    if (!(report.tree_cross_check <= CROSS_CHECK_TOL)) {
        throw_error(
            ErrorCode::CrossCheckFailure,
            fmt::format(
                "optical tree and measurement operators disagree by {} (tolerance {})",
                report.tree_cross_check,
                CROSS_CHECK_TOL));
    }

    auto stages = with_selection_stage(state, settings, selection);
    auto joint = outcome_distribution(state, stages);
    bool selecting = selection.mode != SelectionMode::None;
    if (selecting) {
        double accepted = 0;
        for (size_t i = 0; i < joint.size(); i += 2) {
            accepted += joint.probabilities[i];
        }
        report.acceptance = accepted;
    }

    if (config.outputs.emit_distribution) {
        auto marginal = outcome_distribution(state, settings);
        std::vector<DistributionRow> rows;
        rows.reserve(marginal.size());
        for (uint64_t i = 0; i < marginal.size(); i++) {
            DistributionRow row{OutcomeString::from_index(i, n).str(), marginal.probabilities[i], std::nullopt};
            if (selecting) {
                row.selected = joint.probabilities[2 * i];
            }
            rows.push_back(std::move(row));
        }
        report.distribution = std::move(rows);
    }

    for (const auto &subset : config.outputs.subsets) {
        CorrelationResult r;
        r.subset = subset;
        try {
            r.exact = conditional_statistics(state, settings, selection, subset).mean;
        } catch (const SimError &e) {
            throw SimError(
                e.code(), fmt::format("subset {}: {}", fmt::join(subset, ","), e.what()));
        }
        report.correlations.push_back(std::move(r));
    }

    if (options.monte_carlo && config.sampling.shots > 0) {
        report.sampling = config.sampling;
        RngSpec base{config.sampling.seed, 0};
        Tally tally = run_shards(
            state, settings, selection, config.sampling.shots, base, config.sampling.shards, options.max_threads);
        std::vector<double> etas;
        for (const auto &s : settings) {
            etas.push_back(s.eta);
        }
        for (auto &r : report.correlations) {
            try {
                r.monte_carlo = estimate_correlation(tally, r.subset, etas);
            } catch (const SimError &e) {
                throw SimError(
                    e.code(), fmt::format("Monte Carlo estimate for subset {}: {}", fmt::join(r.subset, ","), e.what()));
            }
        }
    }
    return report;
}

ExperimentConfig reselection_demo_config() {
    ExperimentConfig c;
    c.initial_state = states::D();
    c.settings = {{BlochVector::z(), 0.05}, {BlochVector::z(), 0.05}};
    c.selection = SelectionSpec::reselect();
    c.sampling = {10'000'000, 20260101, 4};
    c.outputs.subsets = {{0, 1}};
    c.outputs.emit_distribution = true;
    return c;
}

ExperimentConfig postselection_demo_config() {
    ExperimentConfig c;
    c.initial_state = states::H;
    c.settings = {{BlochVector::x(), 0.1}};
    c.selection = SelectionSpec::postselect(make_state(std::sin(0.1), std::cos(0.1)));
    c.sampling = {10'000'000, 20260102, 4};
    c.outputs.subsets = {{0}};
    c.outputs.emit_distribution = true;
    return c;
}

}  // namespace polsim
