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

#include <cmath>

#include <fmt/format.h>

#include "json.hpp"
#include "polsim/error.h"
#include "polsim/experiment.h"

namespace polsim {

namespace {

using nlohmann::ordered_json;

std::string format_real(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    if (v == 0) {
        return "0";
    }
    return fmt::format("{:.17g}", v);
}

bool is_scalar(const ordered_json &j) {
    return !j.is_object() && !j.is_array();
}

bool all_scalars(const ordered_json &j) {
    for (const auto &item : j) {
        if (!is_scalar(item)) {
            return false;
        }
    }
    return true;
}

/// Pretty printer that keeps insertion order and prints reals with 17 significant digits
/// (ordered_json::dump would use the shortest round-trip form instead).
void write_json(const ordered_json &j, int indent, std::string &out) {
    std::string pad(indent, ' ');
    std::string inner_pad(indent + 2, ' ');
    if (j.is_number_float()) {
        out += format_real(j.get<double>());
    } else if (is_scalar(j)) {
        out += j.dump();
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
        } else if (all_scalars(j)) {
            out += '[';
            bool first = true;
            for (const auto &item : j) {
                if (!first) {
                    out += ", ";
                }
                first = false;
                write_json(item, 0, out);
            }
            out += ']';
        } else {
            out += "[\n";
            bool first = true;
            for (const auto &item : j) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += inner_pad;
                write_json(item, indent + 2, out);
            }
            out += '\n' + pad + ']';
        }
    } else {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto &[key, value] : j.items()) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += inner_pad + ordered_json(key).dump() + ": ";
            write_json(value, indent + 2, out);
        }
        out += '\n' + pad + '}';
    }
}

std::string to_text(const ordered_json &j) {
    std::string out;
    write_json(j, 0, out);
    out += '\n';
    return out;
}

ordered_json one_based(const std::vector<size_t> &subset) {
    ordered_json arr = ordered_json::array();
    for (size_t k : subset) {
        arr.push_back(k + 1);
    }
    return arr;
}

ordered_json complex_json(Complex c) {
    return ordered_json::array({c.real(), c.imag()});
}

ordered_json state_json(const PolState &s) {
    ordered_json j = ordered_json::object();
    j["alpha"] = complex_json(s.alpha);
    j["beta"] = complex_json(s.beta);
    return j;
}

std::string subset_label(const std::vector<size_t> &subset) {
    std::string out;
    for (size_t k : subset) {
        if (!out.empty()) {
            out += ' ';
        }
        out += std::to_string(k + 1);
    }
    return out;
}

std::string results_json(const ResultsReport &report) {
    ordered_json root = ordered_json::object();
    root["num_levels"] = report.num_levels;
    ordered_json sel = ordered_json::object();
    sel["mode"] = std::string(selection_mode_name(report.selection_mode));
    sel["acceptance"] = report.acceptance;
    root["selection"] = sel;
    root["tree_cross_check"] = report.tree_cross_check;
    if (report.sampling) {
        ordered_json s = ordered_json::object();
        s["shots"] = report.sampling->shots;
        s["seed"] = report.sampling->seed;
        s["shards"] = report.sampling->shards;
        root["sampling"] = s;
    }
    if (report.distribution) {
        ordered_json rows = ordered_json::array();
        for (const auto &row : *report.distribution) {
            ordered_json r = ordered_json::object();
            r["outcomes"] = row.outcomes;
            r["probability"] = row.probability;
            if (row.selected) {
                r["selected"] = *row.selected;
            }
            rows.push_back(r);
        }
        root["distribution"] = rows;
    }
    if (!report.correlations.empty()) {
        ordered_json list = ordered_json::array();
        for (const auto &c : report.correlations) {
            ordered_json entry = ordered_json::object();
            entry["subset"] = one_based(c.subset);
            entry["exact"] = c.exact;
            if (c.monte_carlo) {
                ordered_json mc = ordered_json::object();
                mc["mean"] = c.monte_carlo->mean;
                mc["stderr"] = c.monte_carlo->standard_error;
                mc["count"] = c.monte_carlo->count;
                mc["acceptance"] = c.monte_carlo->acceptance;
                entry["monte_carlo"] = mc;
            }
            list.push_back(entry);
        }
        root["correlations"] = list;
    }
    return to_text(root);
}

std::string results_csv(const ResultsReport &report) {
    std::string out = fmt::format(
        "# num_levels={},selection={},acceptance={},tree_cross_check={}\n",
        report.num_levels,
        selection_mode_name(report.selection_mode),
        format_real(report.acceptance),
        format_real(report.tree_cross_check));
    if (report.distribution) {
        bool with_selected = report.selection_mode != SelectionMode::None;
        out += with_selected ? "outcomes,probability,selected\n" : "outcomes,probability\n";
        for (const auto &row : *report.distribution) {
            out += row.outcomes + ',' + format_real(row.probability);
            if (with_selected) {
                out += ',' + (row.selected ? format_real(*row.selected) : std::string());
            }
            out += '\n';
        }
    }
    if (!report.correlations.empty()) {
        if (report.distribution) {
            out += '\n';
        }
        out += "subset,exact,mc_mean,mc_stderr,mc_count,mc_acceptance\n";
        for (const auto &c : report.correlations) {
            out += subset_label(c.subset) + ',' + format_real(c.exact);
            if (c.monte_carlo) {
                out += fmt::format(
                    ",{},{},{},{}",
                    format_real(c.monte_carlo->mean),
                    format_real(c.monte_carlo->standard_error),
                    c.monte_carlo->count,
                    format_real(c.monte_carlo->acceptance));
            } else {
                out += ",,,,";
            }
            out += '\n';
        }
    }
    return out;
}

double read_real(const ordered_json &j, const char *what) {
    if (j.is_null()) {
        return std::nan("");
    }
    if (!j.is_number()) {
        throw_error(ErrorCode::SchemaError, fmt::format("report field {} is not a number", what));
    }
    return j.get<double>();
}

}  // namespace

std::string serialize_results(const ResultsReport &report, ReportFormat format) {
    return format == ReportFormat::Json ? results_json(report) : results_csv(report);
}

ResultsReport parse_report(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text.begin(), text.end());
    } catch (const ordered_json::exception &e) {
        throw_error(ErrorCode::SchemaError, fmt::format("malformed report: {}", e.what()));
    }
    try {
        ResultsReport r;
        r.num_levels = doc.at("num_levels").get<size_t>();
        auto mode = parse_selection_mode(doc.at("selection").at("mode").get<std::string>());
        if (!mode) {
            throw_error(ErrorCode::SchemaError, "unknown selection mode in report");
        }
        r.selection_mode = *mode;
        r.acceptance = read_real(doc.at("selection").at("acceptance"), "selection.acceptance");
        r.tree_cross_check = read_real(doc.at("tree_cross_check"), "tree_cross_check");
        if (doc.contains("sampling")) {
            const auto &s = doc["sampling"];
            r.sampling = SamplingSpec{
                s.at("shots").get<uint64_t>(), s.at("seed").get<uint64_t>(), s.at("shards").get<uint32_t>()};
        }
        if (doc.contains("distribution")) {
            std::vector<DistributionRow> rows;
            for (const auto &row : doc["distribution"]) {
                DistributionRow d;
                d.outcomes = row.at("outcomes").get<std::string>();
                d.probability = read_real(row.at("probability"), "probability");
                if (row.contains("selected")) {
                    d.selected = read_real(row["selected"], "selected");
                }
                rows.push_back(std::move(d));
            }
            r.distribution = std::move(rows);
        }
        if (doc.contains("correlations")) {
            for (const auto &entry : doc["correlations"]) {
                CorrelationResult c;
                for (const auto &k : entry.at("subset")) {
                    c.subset.push_back(k.get<size_t>() - 1);
                }
                c.exact = read_real(entry.at("exact"), "exact");
                if (entry.contains("monte_carlo")) {
                    const auto &mc = entry["monte_carlo"];
                    Estimate e;
                    e.mean = read_real(mc.at("mean"), "mean");
                    e.standard_error = read_real(mc.at("stderr"), "stderr");
                    e.count = mc.at("count").get<uint64_t>();
                    e.acceptance = read_real(mc.at("acceptance"), "acceptance");
                    c.monte_carlo = e;
                }
                r.correlations.push_back(std::move(c));
            }
        }
        return r;
    } catch (const ordered_json::exception &e) {
        throw_error(ErrorCode::SchemaError, fmt::format("malformed report: {}", e.what()));
    }
}

std::string serialize_experiment(const ExperimentConfig &config) {
    ordered_json root = ordered_json::object();
    root["initial_state"] = state_json(config.initial_state);
    ordered_json settings = ordered_json::array();
    for (const auto &s : config.settings) {
        ordered_json j = ordered_json::object();
        j["bloch"] = ordered_json::array({s.n.nx, s.n.ny, s.n.nz});
        j["eta"] = s.eta;
        settings.push_back(j);
    }
    root["settings"] = settings;
    ordered_json sel = ordered_json::object();
    sel["mode"] = std::string(selection_mode_name(config.selection.mode));
    if (config.selection.mode == SelectionMode::Postselect) {
        sel["final_state"] = state_json(config.selection.final_state);
    }
    root["selection"] = sel;
    ordered_json sampling = ordered_json::object();
    sampling["shots"] = config.sampling.shots;
    sampling["seed"] = config.sampling.seed;
    sampling["shards"] = config.sampling.shards;
    root["sampling"] = sampling;
    ordered_json outputs = ordered_json::object();
    ordered_json subsets = ordered_json::array();
    for (const auto &subset : config.outputs.subsets) {
        subsets.push_back(one_based(subset));
    }
    outputs["subsets"] = subsets;
    outputs["emit_distribution"] = config.outputs.emit_distribution;
    root["outputs"] = outputs;
    return to_text(root);
}

}  // namespace polsim
