#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "brackets/cluster.hpp"
#include "brackets/preprocess.hpp"

namespace brackets {

// A representative is always an actual training row (medoid), never a
// synthetic centroid, so it describes a buildable part.
struct Representative {
    std::size_t train_row = 0;
    std::string id;
    std::vector<double> features;  // normalized units

    bool operator==(const Representative&) const = default;
};

struct Provenance {
    std::size_t training_size = 0;
    std::size_t cluster_count = 0;
    std::string linkage = "ward";
    std::uint64_t seed = 0;

    bool operator==(const Provenance&) const = default;
};

// Everything needed to match raw test records later: the representatives,
// the fitted scaler, and the per-column gate thresholds.
struct StandardSet {
    std::vector<Representative> representatives;
    Scaler scaler;
    std::vector<ColumnTolerance> tolerances;  // normalized units
    MetricSpec metric;
    Provenance provenance;

    bool operator==(const StandardSet&) const = default;
};

// The cluster member with the smallest summed distance to the other members;
// ties go to the smallest row index.
std::size_t select_medoid(const FeatureMatrix& x, const std::vector<std::size_t>& members,
                          const MetricSpec& metric = {});

std::vector<std::size_t> select_medoids(const FeatureMatrix& x, const Partition& p,
                                        const MetricSpec& metric = {});

StandardSet build_standard_set(const FeatureMatrix& x, const Partition& p, const Scaler& scaler,
                               const std::vector<ColumnTolerance>& tolerances,
                               const MetricSpec& metric = {}, Provenance provenance = {});

std::string standard_set_to_json(const StandardSet& set);
StandardSet standard_set_from_json(const std::string& text, const std::string& origin);
void save_standard_set(const std::string& path, const StandardSet& set);
StandardSet load_standard_set(const std::string& path);

}  // namespace brackets
