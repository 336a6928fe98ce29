#include "brackets/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "brackets/csv.hpp"
#include "brackets/errors.hpp"

namespace brackets {

using nlohmann::ordered_json;

bool gate(std::span<const double> test_row, std::span<const double> rep_row,
          const std::vector<ColumnTolerance>& tolerances, double tolerance_scale) {
    for (std::size_t k = 0; k < tolerances.size(); ++k) {
        const double tol = tolerances[k].value * tolerance_scale;
        if (tolerances[k].one_sided_upper) {
            // Oversize representative can be cut down; only a deficit counts.
            if (test_row[k] - rep_row[k] > tol) return false;
        } else {
            if (std::abs(rep_row[k] - test_row[k]) > tol) return false;
        }
    }
    return true;
}

double per_variable_error(std::span<const double> test_row, std::span<const double> rep_row,
                          std::size_t column) {
    return std::abs(rep_row[column] - test_row[column]);
}

std::vector<MatchResult> match(const FeatureMatrix& test, const StandardSet& set, std::size_t k,
                               double tolerance_scale) {
    const std::size_t n_reps = set.representatives.size();
    if (n_reps == 0) throw Error("match: standard set has no representatives");
    if (k < 1 || k > n_reps) {
        throw ConfigError("match: k = " + std::to_string(k) + " out of range 1.." +
                          std::to_string(n_reps));
    }
    if (test.cols != set.scaler.columns.size()) {
        throw SchemaMismatch("test matrix has " + std::to_string(test.cols) +
                             " columns, standard set expects " +
                             std::to_string(set.scaler.columns.size()));
    }

    std::vector<MatchResult> out;
    out.reserve(test.rows);
    std::vector<std::pair<double, std::size_t>> order(n_reps);
    for (std::size_t i = 0; i < test.rows; ++i) {
        const auto row = test.row(i);
        for (std::size_t j = 0; j < n_reps; ++j) {
            order[j] = {metric_distance(row, set.representatives[j].features, set.metric), j};
        }
        std::partial_sort(order.begin(), order.begin() + k, order.end());

        MatchResult res;
        res.test_id = test.row_ids[i];
        res.nearest = order[0].second;
        res.nearest_id = set.representatives[res.nearest].id;
        res.error = order[0].first;
        const auto& nearest_row = set.representatives[res.nearest].features;
        res.variable_errors.resize(test.cols);
        for (std::size_t c = 0; c < test.cols; ++c) {
            res.variable_errors[c] = per_variable_error(row, nearest_row, c);
        }
        for (std::size_t c = 0; c < test.cols; ++c) {
            const double tol = set.tolerances[c].value * tolerance_scale;
            const bool pass = set.tolerances[c].one_sided_upper
                                  ? row[c] - nearest_row[c] <= tol
                                  : res.variable_errors[c] <= tol;
            if (!pass) res.failing_columns.push_back(c);
        }
        for (std::size_t rank = 0; rank < k; ++rank) {
            const std::size_t rep = order[rank].second;
            if (gate(row, set.representatives[rep].features, set.tolerances, tolerance_scale)) {
                res.accepted = rep;
                res.accepted_id = set.representatives[rep].id;
                res.categorized = true;
                break;
            }
        }
        out.push_back(std::move(res));
    }
    return out;
}

namespace {

CategorizationReport summarize(std::vector<MatchResult> results) {
    CategorizationReport report;
    report.test_count = results.size();
    double total = 0.0;
    for (const auto& r : results) {
        if (r.categorized) ++report.categorized;
        total += r.error;
    }
    report.new_count = report.test_count - report.categorized;
    report.mean_error = results.empty() ? 0.0 : total / static_cast<double>(results.size());
    report.results = std::move(results);
    return report;
}

GroupReport group_report(std::vector<MatchResult> results) {
    GroupReport g;
    double total = 0.0;
    for (const auto& r : results) {
        if (r.categorized) ++g.categorized;
        total += r.error;
    }
    g.mean_error = results.empty() ? 0.0 : total / static_cast<double>(results.size());
    g.results = std::move(results);
    return g;
}

void check_group_set(const StandardSet& set, VariableGroup group) {
    for (const auto& v : set.scaler.variables) {
        if (v.group != group) {
            throw SchemaMismatch(std::string("standard set for group ") + to_string(group) +
                                 " contains variable '" + v.name + "' of group " +
                                 to_string(v.group));
        }
    }
}

}  // namespace

CategorizationReport evaluate_matrix(const FeatureMatrix& test, const StandardSet& set,
                                     std::size_t k, double tolerance_scale) {
    auto report = summarize(match(test, set, k, tolerance_scale));
    report.column_names.reserve(set.scaler.columns.size());
    for (const auto& c : set.scaler.columns) report.column_names.push_back(c.name);
    return report;
}

CategorizationReport evaluate_grouped(const std::vector<RawRecord>& test_records,
                                      const CatalogSchema& schema, const StandardSet& geometry_set,
                                      const StandardSet& hole_set, std::size_t k,
                                      double tolerance_scale) {
    check_group_set(geometry_set, VariableGroup::Geometry);
    check_group_set(hole_set, VariableGroup::Hole);

    // The two groups must split the schema's non-meta variables exactly.
    std::unordered_set<std::string> geo_names, hole_names;
    for (const auto& v : geometry_set.scaler.variables) geo_names.insert(v.name);
    for (const auto& v : hole_set.scaler.variables) hole_names.insert(v.name);
    for (const auto& name : geo_names) {
        if (hole_names.count(name)) {
            throw SchemaMismatch("variable '" + name + "' appears in both group sets");
        }
    }
    for (std::size_t vi : schema.numeric_indices()) {
        const auto& name = schema.variables[vi].name;
        if (!geo_names.count(name) && !hole_names.count(name)) {
            throw SchemaMismatch("variable '" + name + "' is covered by neither group set");
        }
    }

    const auto geo_records = restrict_records(test_records, schema, VariableGroup::Geometry);
    const auto hole_records = restrict_records(test_records, schema, VariableGroup::Hole);
    auto geo = group_report(
        match(transform(geo_records, geometry_set.scaler), geometry_set, k, tolerance_scale));
    auto hole = group_report(
        match(transform(hole_records, hole_set.scaler), hole_set, k, tolerance_scale));

    CategorizationReport report;
    report.test_count = test_records.size();
    report.overall.resize(test_records.size());
    double total = 0.0;
    for (std::size_t i = 0; i < test_records.size(); ++i) {
        const bool both = geo.results[i].categorized && hole.results[i].categorized;
        report.overall[i] = both;
        if (both) ++report.categorized;
        total += std::hypot(geo.results[i].error, hole.results[i].error);
    }
    report.new_count = report.test_count - report.categorized;
    report.mean_error =
        test_records.empty() ? 0.0 : total / static_cast<double>(test_records.size());
    report.geometry = std::move(geo);
    report.hole = std::move(hole);
    return report;
}

namespace {

std::string failing_names(const MatchResult& r, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t k = 0; k < r.failing_columns.size(); ++k) {
        if (k) out += ';';
        const std::size_t c = r.failing_columns[k];
        out += c < names.size() ? names[c] : std::to_string(c);
    }
    return out;
}

}  // namespace

std::string report_to_csv(const CategorizationReport& report) {
    std::string out;
    if (!report.geometry) {
        out = "id,nearest,accepted,error,categorized,failing_columns\n";
        for (const auto& r : report.results) {
            csv::Row row{r.test_id,
                         r.nearest_id,
                         r.accepted_id,
                         csv::format_double(r.error),
                         r.categorized ? "1" : "0",
                         failing_names(r, report.column_names)};
            out += csv::join(row);
            out += '\n';
        }
        return out;
    }
    out =
        "id,geometry_nearest,geometry_accepted,geometry_error,geometry_categorized,"
        "hole_nearest,hole_accepted,hole_error,hole_categorized,combined_error,categorized\n";
    const auto& geo = *report.geometry;
    const auto& hole = *report.hole;
    for (std::size_t i = 0; i < report.test_count; ++i) {
        const auto& g = geo.results[i];
        const auto& h = hole.results[i];
        csv::Row row{g.test_id,
                     g.nearest_id,
                     g.accepted_id,
                     csv::format_double(g.error),
                     g.categorized ? "1" : "0",
                     h.nearest_id,
                     h.accepted_id,
                     csv::format_double(h.error),
                     h.categorized ? "1" : "0",
                     csv::format_double(std::hypot(g.error, h.error)),
                     report.overall[i] ? "1" : "0"};
        out += csv::join(row);
        out += '\n';
    }
    return out;
}

std::string report_summary_json(const CategorizationReport& report) {
    ordered_json doc;
    doc["format"] = "bracketstd.report_summary.v1";
    doc["test_count"] = report.test_count;
    doc["categorized"] = report.categorized;
    doc["new_brackets"] = report.new_count;
    doc["mean_error"] = report.mean_error;
    if (report.geometry) {
        doc["geometry"] = {{"categorized", report.geometry->categorized},
                           {"mean_error", report.geometry->mean_error}};
        doc["hole"] = {{"categorized", report.hole->categorized},
                       {"mean_error", report.hole->mean_error}};
    }
    return doc.dump(2) + "\n";
}

void save_report(const std::string& directory, const CategorizationReport& report) {
    namespace fs = std::filesystem;
    {
        std::ofstream out(fs::path(directory) / "report.csv", std::ios::binary);
        if (!out) throw IoError("cannot write report.csv under " + directory);
        out << report_to_csv(report);
    }
    {
        std::ofstream out(fs::path(directory) / "summary.json", std::ios::binary);
        if (!out) throw IoError("cannot write summary.json under " + directory);
        out << report_summary_json(report);
    }
}

}  // namespace brackets
