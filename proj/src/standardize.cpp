#include "brackets/standardize.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brackets/errors.hpp"
#include "brackets/version.hpp"

namespace brackets {

using nlohmann::ordered_json;

std::size_t select_medoid(const FeatureMatrix& x, const std::vector<std::size_t>& members,
                          const MetricSpec& metric) {
    if (members.empty()) throw Error("select_medoid: empty cluster");
    std::size_t best = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t candidate : members) {
        double sum = 0.0;
        for (std::size_t other : members) {
            if (other == candidate) continue;
            sum += metric_distance(x.row(candidate), x.row(other), metric);
        }
        if (sum < best_sum || (sum == best_sum && candidate < best)) {
            best_sum = sum;
            best = candidate;
        }
    }
    return best;
}

std::vector<std::size_t> select_medoids(const FeatureMatrix& x, const Partition& p,
                                        const MetricSpec& metric) {
    std::vector<std::size_t> out;
    out.reserve(p.count);
    for (const auto& cluster : p.members()) {
        out.push_back(select_medoid(x, cluster, metric));
    }
    return out;
}

StandardSet build_standard_set(const FeatureMatrix& x, const Partition& p, const Scaler& scaler,
                               const std::vector<ColumnTolerance>& tolerances,
                               const MetricSpec& metric, Provenance provenance) {
    if (p.labels.size() != x.rows) {
        throw DimensionMismatch("partition covers " + std::to_string(p.labels.size()) +
                                " rows, matrix has " + std::to_string(x.rows));
    }
    if (x.cols != scaler.columns.size() || tolerances.size() != x.cols) {
        throw DimensionMismatch("matrix, scaler, and tolerances disagree on column count");
    }
    StandardSet set;
    set.scaler = scaler;
    set.tolerances = tolerances;
    set.metric = metric;
    provenance.training_size = x.rows;
    provenance.cluster_count = static_cast<std::size_t>(p.count);
    set.provenance = provenance;

    for (std::size_t row : select_medoids(x, p, metric)) {
        Representative rep;
        rep.train_row = row;
        rep.id = x.row_ids[row];
        rep.features.assign(x.row(row).begin(), x.row(row).end());
        set.representatives.push_back(std::move(rep));
    }
    return set;
}

namespace {

const char* kind_name(VariableKind kind) { return to_string(kind); }

VariableKind kind_from(const std::string& s, const std::string& origin) {
    if (s == "continuous") return VariableKind::Continuous;
    if (s == "integer") return VariableKind::IntegerCategorical;
    if (s == "label") return VariableKind::Label;
    throw ParseError(origin + ": unknown kind '" + s + "'");
}

VariableGroup group_from(const std::string& s, const std::string& origin) {
    if (s == "geometry") return VariableGroup::Geometry;
    if (s == "hole") return VariableGroup::Hole;
    if (s == "meta") return VariableGroup::Meta;
    throw ParseError(origin + ": unknown group '" + s + "'");
}

ordered_json scaler_to_json(const Scaler& scaler) {
    ordered_json doc;
    auto vars = ordered_json::array();
    for (const auto& v : scaler.variables) {
        vars.push_back({{"name", v.name},
                        {"kind", kind_name(v.kind)},
                        {"group", to_string(v.group)},
                        {"tolerance", v.tolerance},
                        {"one_sided_upper", v.one_sided_upper}});
    }
    doc["variables"] = std::move(vars);
    auto cols = ordered_json::array();
    for (const auto& c : scaler.columns) {
        cols.push_back({{"name", c.name},
                        {"source", c.source},
                        {"group", to_string(c.group)},
                        {"one_hot", c.one_hot},
                        {"category", c.category},
                        {"raw_tolerance", c.raw_tolerance},
                        {"one_sided_upper", c.one_sided_upper},
                        {"scale", c.scale}});
    }
    doc["columns"] = std::move(cols);
    return doc;
}

Scaler scaler_from_json(const ordered_json& doc, const std::string& origin) {
    Scaler scaler;
    for (const auto& v : doc.at("variables")) {
        ScalerVariable sv;
        sv.name = v.at("name").get<std::string>();
        sv.kind = kind_from(v.at("kind").get<std::string>(), origin);
        sv.group = group_from(v.at("group").get<std::string>(), origin);
        sv.tolerance = v.at("tolerance").get<double>();
        sv.one_sided_upper = v.at("one_sided_upper").get<bool>();
        scaler.variables.push_back(std::move(sv));
    }
    for (const auto& c : doc.at("columns")) {
        EncodedColumn col;
        col.name = c.at("name").get<std::string>();
        col.source = c.at("source").get<std::string>();
        col.group = group_from(c.at("group").get<std::string>(), origin);
        col.one_hot = c.at("one_hot").get<bool>();
        col.category = c.at("category").get<double>();
        col.raw_tolerance = c.at("raw_tolerance").get<double>();
        col.one_sided_upper = c.at("one_sided_upper").get<bool>();
        col.scale = c.at("scale").get<double>();
        scaler.columns.push_back(std::move(col));
    }
    // One-hot maps are a projection of the column list.
    for (const auto& v : scaler.variables) {
        if (v.kind != VariableKind::IntegerCategorical) continue;
        OneHotMap map;
        map.source = v.name;
        for (const auto& c : scaler.columns) {
            if (c.source == v.name && c.one_hot) {
                map.categories.push_back(c.category);
                map.column_names.push_back(c.name);
            }
        }
        scaler.one_hot_maps.push_back(std::move(map));
    }
    return scaler;
}

// Raw-unit view of a representative so the exported set reads as part
// dimensions, not normalized coordinates.
ordered_json raw_view(const Representative& rep, const Scaler& scaler) {
    ordered_json raw;
    const auto spans = column_spans(scaler);
    for (std::size_t k = 0; k < scaler.variables.size(); ++k) {
        const auto& v = scaler.variables[k];
        const auto [begin, end] = spans[k];
        if (v.kind == VariableKind::IntegerCategorical) {
            raw[v.name] = nullptr;
            for (std::size_t c = begin; c < end; ++c) {
                if (rep.features[c] != 0.0) {
                    raw[v.name] = scaler.columns[c].category;
                    break;
                }
            }
        } else {
            raw[v.name] = rep.features[begin] * scaler.columns[begin].scale;
        }
    }
    return raw;
}

ordered_json metric_to_json(const MetricSpec& metric) {
    ordered_json doc;
    doc["kind"] =
        metric.kind == MetricSpec::Kind::Euclidean ? "euclidean" : "weighted-euclidean";
    if (metric.kind == MetricSpec::Kind::WeightedEuclidean) {
        doc["weights"] = metric.weights;
    }
    return doc;
}

MetricSpec metric_from_json(const ordered_json& doc, const std::string& origin) {
    MetricSpec metric;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "euclidean") {
        metric.kind = MetricSpec::Kind::Euclidean;
    } else if (kind == "weighted-euclidean") {
        metric.kind = MetricSpec::Kind::WeightedEuclidean;
        metric.weights = doc.at("weights").get<std::vector<double>>();
    } else {
        throw ParseError(origin + ": unknown metric kind '" + kind + "'");
    }
    return metric;
}

}  // namespace

std::string standard_set_to_json(const StandardSet& set) {
    ordered_json doc;
    doc["format"] = "bracketstd.standard_set.v1";
    doc["tool_version"] = kToolVersion;
    doc["provenance"] = {{"training_size", set.provenance.training_size},
                         {"cluster_count", set.provenance.cluster_count},
                         {"linkage", set.provenance.linkage},
                         {"seed", set.provenance.seed}};
    doc["metric"] = metric_to_json(set.metric);
    doc["scaler"] = scaler_to_json(set.scaler);
    auto tols = ordered_json::array();
    for (const auto& t : set.tolerances) {
        tols.push_back({{"value", t.value}, {"one_sided_upper", t.one_sided_upper}});
    }
    doc["tolerances"] = std::move(tols);
    auto reps = ordered_json::array();
    for (const auto& rep : set.representatives) {
        reps.push_back({{"id", rep.id},
                        {"train_row", rep.train_row},
                        {"features", rep.features},
                        {"raw", raw_view(rep, set.scaler)}});
    }
    doc["representatives"] = std::move(reps);
    return doc.dump(2) + "\n";
}

StandardSet standard_set_from_json(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "bracketstd.standard_set.v1") {
            throw ParseError(origin + ": not a standard set file");
        }
        StandardSet set;
        const auto& prov = doc.at("provenance");
        set.provenance.training_size = prov.at("training_size").get<std::size_t>();
        set.provenance.cluster_count = prov.at("cluster_count").get<std::size_t>();
        set.provenance.linkage = prov.at("linkage").get<std::string>();
        set.provenance.seed = prov.at("seed").get<std::uint64_t>();
        set.metric = metric_from_json(doc.at("metric"), origin);
        set.scaler = scaler_from_json(doc.at("scaler"), origin);
        for (const auto& t : doc.at("tolerances")) {
            set.tolerances.push_back(
                {t.at("value").get<double>(), t.at("one_sided_upper").get<bool>()});
        }
        for (const auto& r : doc.at("representatives")) {
            Representative rep;
            rep.id = r.at("id").get<std::string>();
            rep.train_row = r.at("train_row").get<std::size_t>();
            rep.features = r.at("features").get<std::vector<double>>();
            set.representatives.push_back(std::move(rep));
        }
        if (set.tolerances.size() != set.scaler.columns.size()) {
            throw ParseError(origin + ": tolerance count does not match column count");
        }
        for (const auto& rep : set.representatives) {
            if (rep.features.size() != set.scaler.columns.size()) {
                throw ParseError(origin + ": representative '" + rep.id + "' has wrong width");
            }
        }
        return set;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

void save_standard_set(const std::string& path, const StandardSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write standard set file: " + path);
    out << standard_set_to_json(set);
    if (!out) throw IoError("failed writing standard set file: " + path);
}

StandardSet load_standard_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open standard set file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return standard_set_from_json(buf.str(), path);
}

}  // namespace brackets
