#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "brackets/preprocess.hpp"

namespace brackets {

// Distance used for clustering and matching. Weights apply per encoded
// column; plain Euclidean leaves them empty.
struct MetricSpec {
    enum class Kind { Euclidean, WeightedEuclidean };
    Kind kind = Kind::Euclidean;
    std::vector<double> weights;

    static MetricSpec euclidean() { return {}; }
    static MetricSpec weighted(std::vector<double> w) {
        return {Kind::WeightedEuclidean, std::move(w)};
    }

    bool operator==(const MetricSpec&) const = default;
};

double metric_distance(std::span<const double> a, std::span<const double> b,
                       const MetricSpec& metric);

// Condensed upper-triangle storage of all m(m-1)/2 pairwise distances.
struct DistanceMatrix {
    std::size_t m = 0;
    std::vector<double> condensed;

    static std::size_t index(std::size_t i, std::size_t j, std::size_t m) {
        if (i > j) std::swap(i, j);
        return m * i - i * (i + 1) / 2 + (j - i - 1);
    }
    double at(std::size_t i, std::size_t j) const {
        return i == j ? 0.0 : condensed[index(i, j, m)];
    }
};

enum class LinkageMethod { Ward, Single, Complete, Average };

LinkageMethod parse_linkage(const std::string& name);
const char* to_string(LinkageMethod method);

// Merge tree from agglomeration. Leaves are nodes 0..m-1; merge k creates
// node m+k. Heights are the inter-cluster dissimilarities at merge time; for
// Ward the height h of merging p,q satisfies h^2 = 2 * increase in total
// within-cluster sum of squares.
struct Dendrogram {
    struct Merge {
        int left = 0;
        int right = 0;
        double height = 0.0;
        double size = 0.0;  // total weight of the merged cluster
    };
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

// Flat clustering: per-leaf label in 0..count-1, numbered by first
// appearance in leaf order.
struct Partition {
    int count = 0;
    std::vector<int> labels;

    std::vector<std::vector<std::size_t>> members() const;
};

DistanceMatrix pairwise_distances(const FeatureMatrix& x, const MetricSpec& metric = {});

// Agglomerative clustering via the Lance-Williams recurrence, using the
// nearest-neighbor chain strategy (Murtagh 1985). All four methods here are
// reducible, so the chain algorithm yields the same tree as greedy
// global-minimum merging; ties break toward the smallest pair of ids.
// `sizes` are optional per-point weights (default 1).
Dendrogram linkage(const DistanceMatrix& d, LinkageMethod method = LinkageMethod::Ward,
                   std::vector<double> sizes = {});

Partition cut(const Dendrogram& tree, std::size_t n_clusters);

// Mean distance from each row to its cluster's representative row.
double within_cluster_error(const FeatureMatrix& x, const Partition& p,
                            const std::vector<std::size_t>& representatives,
                            const MetricSpec& metric = {});

std::string dendrogram_to_json(const Dendrogram& tree);
void save_dendrogram(const std::string& path, const Dendrogram& tree);

}  // namespace brackets
