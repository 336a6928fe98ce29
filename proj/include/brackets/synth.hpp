#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "brackets/catalog.hpp"

namespace brackets {

// Synthetic catalog with planted cluster structure. Each record is one of K
// prototypes plus bounded noise; a singleton fraction is drawn uniformly at
// random to model genuinely unique parts.
struct GeneratorConfig {
    std::size_t prototype_count = 25;
    std::size_t record_count = 1900;   // records of the target type
    double singleton_fraction = 0.05;  // drawn uniformly, no prototype
    double size_skew = 1.0;            // Zipf exponent for prototype weights

    // Continuous noise is a truncated normal with hard bound
    // noise_factor * tolerance (sigma = bound / 3), so a record never strays
    // more than the bound from its prototype in any variable. Per-variable
    // raw-unit bounds may override the factor.
    double noise_factor = 0.4;
    std::map<std::string, double> noise_bounds;

    double mutation_probability = 0.0;  // integer variable resampled

    std::vector<double> angle_pool{-90.0, 0.0, 90.0};
    double angle_jitter = 1.0;  // uniform, degrees, applied to prototype angles
    std::vector<double> integer_pool{0, 1, 2, 3, 4, 5};

    // Prototype draw ranges for continuous variables; defaults derive from
    // the unit ("deg" uses the angle pool, anything else spans [0.1, 24]).
    std::map<std::string, std::pair<double, double>> range_override;

    // Extra records of other bracket types, for exercising type filtering.
    std::size_t decoy_count = 0;
    std::vector<std::string> decoy_types{"z", "c", "hat"};

    std::uint64_t seed = 0;
};

struct GeneratedCatalog {
    std::vector<RawRecord> records;
    // Prototype index per record; -1 for singletons and decoys.
    std::vector<int> truth;
    std::vector<RawRecord> prototypes;
};

GeneratedCatalog generate(const GeneratorConfig& config, const CatalogSchema& schema);

std::string truth_to_csv(const GeneratedCatalog& catalog);
void save_truth(const std::string& path, const GeneratedCatalog& catalog);
// Sidecar reader: record id -> prototype index.
std::map<std::string, int> load_truth(const std::string& path);

}  // namespace brackets
