#include "brackets/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "brackets/errors.hpp"

namespace brackets {

namespace {

void check_weights(const MetricSpec& metric, std::size_t cols) {
    if (metric.kind != MetricSpec::Kind::WeightedEuclidean) return;
    if (metric.weights.size() != cols) {
        throw DimensionMismatch("metric has " + std::to_string(metric.weights.size()) +
                                " weights for " + std::to_string(cols) + " columns");
    }
    for (double w : metric.weights) {
        if (w < 0.0) throw Error("metric weights must be non-negative");
    }
}

}  // namespace

double metric_distance(std::span<const double> a, std::span<const double> b,
                       const MetricSpec& metric) {
    double acc = 0.0;
    if (metric.kind == MetricSpec::Kind::WeightedEuclidean) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            acc += metric.weights[k] * d * d;
        }
    } else {
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

LinkageMethod parse_linkage(const std::string& name) {
    if (name == "ward") return LinkageMethod::Ward;
    if (name == "single") return LinkageMethod::Single;
    if (name == "complete") return LinkageMethod::Complete;
    if (name == "average") return LinkageMethod::Average;
    throw ConfigError("unknown linkage method '" + name + "'");
}

const char* to_string(LinkageMethod method) {
    switch (method) {
        case LinkageMethod::Ward: return "ward";
        case LinkageMethod::Single: return "single";
        case LinkageMethod::Complete: return "complete";
        case LinkageMethod::Average: return "average";
    }
    return "?";
}

DistanceMatrix pairwise_distances(const FeatureMatrix& x, const MetricSpec& metric) {
    check_weights(metric, x.cols);
    DistanceMatrix d;
    d.m = x.rows;
    d.condensed.resize(x.rows * (x.rows - 1) / 2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = i + 1; j < x.rows; ++j) {
            d.condensed[idx++] = metric_distance(x.row(i), x.row(j), metric);
        }
    }
    return d;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out[labels[i]].push_back(i);
    }
    return out;
}

namespace {

// Active-position list over 0..m-1 with O(1) removal. pred is only read for
// non-start elements, so the start's stale back link is never followed.
struct ActiveList {
    std::vector<std::size_t> succ;
    std::vector<std::size_t> pred;
    std::size_t start = 0;

    explicit ActiveList(std::size_t m) : succ(m + 1), pred(m + 1) {
        for (std::size_t i = 0; i <= m; ++i) {
            succ[i] = i + 1;
            pred[i] = i == 0 ? 0 : i - 1;
        }
    }
    void remove(std::size_t i) {
        if (i == start) {
            start = succ[i];
        } else {
            succ[pred[i]] = succ[i];
            pred[succ[i]] = pred[i];
        }
    }
};

struct RawMerge {
    std::size_t a = 0;
    std::size_t b = 0;
    double dist = 0.0;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t nodes) : parent_(nodes, -1) {}
    int find(int x) {
        int root = x;
        while (parent_[root] >= 0) root = parent_[root];
        while (parent_[x] >= 0) {
            int next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }
    void unite(int a, int b, int node) { parent_[a] = parent_[b] = node; }

private:
    std::vector<int> parent_;
};

}  // namespace

Dendrogram linkage(const DistanceMatrix& dm, LinkageMethod method, std::vector<double> sizes) {
    const std::size_t m = dm.m;
    Dendrogram tree;
    tree.leaves = m;
    if (m <= 1) return tree;

    if (sizes.empty()) {
        sizes.assign(m, 1.0);
    } else if (sizes.size() != m) {
        throw DimensionMismatch("linkage got " + std::to_string(sizes.size()) + " sizes for " +
                                std::to_string(m) + " points");
    }

    // Ward's recurrence acts on squared dissimilarities; between singletons
    // the stored value is then the squared Euclidean distance and the final
    // square root restores the claimed reduction to the plain norm.
    std::vector<double> d = dm.condensed;
    const bool squared = method == LinkageMethod::Ward;
    if (squared) {
        for (double& v : d) v *= v;
    }
    auto dist = [&](std::size_t i, std::size_t j) -> double& {
        return d[DistanceMatrix::index(i, j, m)];
    };

    const std::vector<double> leaf_weight = sizes;
    std::vector<double> size = std::move(sizes);
    ActiveList active(m);
    std::vector<std::size_t> chain(m);
    std::size_t tip = 0;

    std::vector<RawMerge> raw;
    raw.reserve(m - 1);

    for (std::size_t step = 0; step + 1 < m; ++step) {
        std::size_t a, b;
        double min;
        if (tip < 4) {
            // Chain too short to resume: restart from the lowest active
            // position and take its nearest active neighbor.
            a = active.start;
            chain[0] = a;
            tip = 1;
            b = active.succ[a];
            min = dist(a, b);
            for (std::size_t i = active.succ[b]; i < m; i = active.succ[i]) {
                if (dist(a, i) < min) {
                    min = dist(a, i);
                    b = i;
                }
            }
        } else {
            tip -= 3;
            a = chain[tip - 1];
            b = chain[tip];
            min = dist(a, b);
        }

        // Grow the chain until two clusters are mutual nearest neighbors.
        // Strict < keeps the previous chain element on ties, which both
        // guarantees termination and prefers the smallest id pair.
        do {
            chain[tip] = b;
            for (std::size_t i = active.start; i < b; i = active.succ[i]) {
                if (dist(i, b) < min) {
                    min = dist(i, b);
                    a = i;
                }
            }
            for (std::size_t i = active.succ[b]; i < m; i = active.succ[i]) {
                if (dist(b, i) < min) {
                    min = dist(b, i);
                    a = i;
                }
            }
            b = a;
            a = chain[tip++];
        } while (b != chain[tip - 2]);

        std::size_t lo = std::min(a, b);
        std::size_t hi = std::max(a, b);
        raw.push_back({lo, hi, min});

        const double s_lo = size[lo];
        const double s_hi = size[hi];
        size[hi] = s_lo + s_hi;
        active.remove(lo);

        // Lance-Williams update; the merged cluster lives at position hi.
        for (std::size_t i = active.start; i < m; i = active.succ[i]) {
            if (i == hi) continue;
            const double d_lo = dist(i, lo);
            double& d_hi = dist(i, hi);
            switch (method) {
                case LinkageMethod::Single:
                    d_hi = std::min(d_lo, d_hi);
                    break;
                case LinkageMethod::Complete:
                    d_hi = std::max(d_lo, d_hi);
                    break;
                case LinkageMethod::Average:
                    d_hi = (s_lo * d_lo + s_hi * d_hi) / (s_lo + s_hi);
                    break;
                case LinkageMethod::Ward: {
                    const double s_i = size[i];
                    d_hi = ((s_lo + s_i) * d_lo + (s_hi + s_i) * d_hi - s_i * min) /
                           (s_lo + s_hi + s_i);
                    break;
                }
            }
        }
    }

    // The chain discovers merges out of height order; all four methods are
    // monotone, so a stable sort recovers the greedy global-minimum order.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMerge& x, const RawMerge& y) { return x.dist < y.dist; });

    std::vector<double> node_size(2 * m - 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) node_size[i] = leaf_weight[i];

    UnionFind uf(2 * m - 1);
    tree.merges.reserve(m - 1);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const int na = uf.find(static_cast<int>(raw[k].a));
        const int nb = uf.find(static_cast<int>(raw[k].b));
        Dendrogram::Merge merge;
        merge.left = std::min(na, nb);
        merge.right = std::max(na, nb);
        merge.height = squared ? std::sqrt(raw[k].dist) : raw[k].dist;
        merge.size = node_size[na] + node_size[nb];
        node_size[m + k] = merge.size;
        uf.unite(na, nb, static_cast<int>(m + k));
        tree.merges.push_back(merge);
    }
    return tree;
}

Partition cut(const Dendrogram& tree, std::size_t n_clusters) {
    const std::size_t m = tree.leaves;
    if (n_clusters < 1 || n_clusters > m) {
        throw ConfigError("cut: cluster count " + std::to_string(n_clusters) +
                          " out of range 1.." + std::to_string(m));
    }
    UnionFind uf(2 * m - 1);
    for (std::size_t k = 0; k < m - n_clusters; ++k) {
        uf.unite(tree.merges[k].left, tree.merges[k].right, static_cast<int>(m + k));
    }
    Partition p;
    p.labels.resize(m);
    std::vector<int> label_of(2 * m - 1, -1);
    int next = 0;
    for (std::size_t leaf = 0; leaf < m; ++leaf) {
        const int root = uf.find(static_cast<int>(leaf));
        if (label_of[root] < 0) label_of[root] = next++;
        p.labels[leaf] = label_of[root];
    }
    p.count = next;
    return p;
}

double within_cluster_error(const FeatureMatrix& x, const Partition& p,
                            const std::vector<std::size_t>& representatives,
                            const MetricSpec& metric) {
    if (p.labels.size() != x.rows) {
        throw DimensionMismatch("partition covers " + std::to_string(p.labels.size()) +
                                " rows, matrix has " + std::to_string(x.rows));
    }
    if (representatives.size() != static_cast<std::size_t>(p.count)) {
        throw DimensionMismatch("need one representative per cluster");
    }
    check_weights(metric, x.cols);
    if (x.rows == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        total += metric_distance(x.row(i), x.row(representatives[p.labels[i]]), metric);
    }
    return total / static_cast<double>(x.rows);
}

std::string dendrogram_to_json(const Dendrogram& tree) {
    nlohmann::ordered_json doc;
    doc["format"] = "bracketstd.dendrogram.v1";
    doc["leaves"] = tree.leaves;
    auto merges = nlohmann::ordered_json::array();
    for (const auto& merge : tree.merges) {
        merges.push_back({merge.left, merge.right, merge.height, merge.size});
    }
    doc["merges"] = std::move(merges);
    return doc.dump(2) + "\n";
}

void save_dendrogram(const std::string& path, const Dendrogram& tree) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dendrogram file: " + path);
    out << dendrogram_to_json(tree);
    if (!out) throw IoError("failed writing dendrogram file: " + path);
}

}  // namespace brackets
