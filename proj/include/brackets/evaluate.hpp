#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brackets/standardize.hpp"

namespace brackets {

// Outcome of matching one test bracket against a standard set. The error is
// always measured to the nearest representative, even when fuzzy matching
// accepts a farther one, so error curves stay comparable across k.
struct MatchResult {
    std::string test_id;
    std::size_t nearest = 0;
    std::string nearest_id;
    double error = 0.0;                      // distance to the nearest representative
    std::vector<double> variable_errors;     // per-column |difference| vs nearest
    std::optional<std::size_t> accepted;     // first inspected rep passing every gate
    std::string accepted_id;
    bool categorized = false;
    std::vector<std::size_t> failing_columns;  // gate failures vs nearest, empty if it passed
};

struct GroupReport {
    std::vector<MatchResult> results;
    std::size_t categorized = 0;
    double mean_error = 0.0;
};

struct CategorizationReport {
    std::size_t test_count = 0;
    std::size_t categorized = 0;  // B
    std::size_t new_count = 0;    // test_count - B
    double mean_error = 0.0;
    // Single-set evaluation fills `results`. Grouped evaluation fills the two
    // sub-reports plus the per-test conjunction flags, and mean_error becomes
    // the full-space error of the assembled (geometry rep + hole rep) part.
    std::vector<MatchResult> results;
    std::vector<std::string> column_names;  // resolves failing_columns indices
    std::optional<GroupReport> geometry;
    std::optional<GroupReport> hole;
    std::vector<bool> overall;
};

// Per-column acceptance test. Two-sided columns pass when |rep - test| stays
// within tolerance; one-sided-upper columns accept any oversize rep and an
// undersize one only within tolerance. `tolerance_scale` loosens every
// threshold uniformly.
bool gate(std::span<const double> test_row, std::span<const double> rep_row,
          const std::vector<ColumnTolerance>& tolerances, double tolerance_scale = 1.0);

double per_variable_error(std::span<const double> test_row, std::span<const double> rep_row,
                          std::size_t column);

// Inspects the k nearest representatives in increasing-distance order and
// accepts the first that passes every gate; k = 1 is plain nearest-neighbor.
std::vector<MatchResult> match(const FeatureMatrix& test, const StandardSet& set, std::size_t k,
                               double tolerance_scale = 1.0);

CategorizationReport evaluate_matrix(const FeatureMatrix& test, const StandardSet& set,
                                     std::size_t k, double tolerance_scale = 1.0);

// Independent matching per standardization group; a bracket is categorized
// overall only when both groups accept it.
CategorizationReport evaluate_grouped(const std::vector<RawRecord>& test_records,
                                      const CatalogSchema& schema, const StandardSet& geometry_set,
                                      const StandardSet& hole_set, std::size_t k,
                                      double tolerance_scale = 1.0);

std::string report_to_csv(const CategorizationReport& report);
std::string report_summary_json(const CategorizationReport& report);
void save_report(const std::string& directory, const CategorizationReport& report);

}  // namespace brackets
