#include "brackets/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "brackets/csv.hpp"
#include "brackets/errors.hpp"

namespace brackets {

namespace {

double cell_value(const std::optional<double>& cell) {
    return cell ? *cell : 0.0;  // blank entries count as zero from here on
}

}  // namespace

bool Scaler::matches(const CatalogSchema& schema) const {
    const auto numeric = schema.numeric_indices();
    if (numeric.size() != variables.size()) return false;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        const auto& v = schema.variables[numeric[k]];
        const auto& sv = variables[k];
        if (v.name != sv.name || v.kind != sv.kind || v.group != sv.group) return false;
    }
    return true;
}

Scaler fit_scaler(const std::vector<RawRecord>& records, const CatalogSchema& schema) {
    if (records.size() < 2) {
        throw InsufficientData("fit_scaler needs at least 2 records, got " +
                               std::to_string(records.size()));
    }
    const auto numeric = schema.numeric_indices();
    for (const auto& rec : records) {
        if (rec.values.size() != numeric.size()) {
            throw SchemaMismatch("record '" + rec.id + "' has " + std::to_string(rec.values.size()) +
                                 " values, schema expects " + std::to_string(numeric.size()));
        }
    }

    Scaler scaler;
    scaler.variables.reserve(numeric.size());
    for (std::size_t vi : numeric) {
        const auto& v = schema.variables[vi];
        scaler.variables.push_back({v.name, v.kind, v.group, v.tolerance, v.one_sided_upper});
    }

    // Categories sorted ascending, so the encoding does not depend on record
    // order within the fitting set.
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        const auto& v = schema.variables[numeric[k]];
        if (v.kind != VariableKind::IntegerCategorical) continue;
        std::set<double> seen;
        for (const auto& rec : records) seen.insert(cell_value(rec.values[k]));
        OneHotMap map;
        map.source = v.name;
        for (double c : seen) {
            map.categories.push_back(c);
            map.column_names.push_back(v.name + "=" + csv::format_double(c));
        }
        scaler.one_hot_maps.push_back(std::move(map));
    }

    auto map_for = [&](const std::string& source) -> const OneHotMap& {
        for (const auto& m : scaler.one_hot_maps) {
            if (m.source == source) return m;
        }
        throw Error("internal: missing one-hot map for " + source);
    };

    for (std::size_t k = 0; k < numeric.size(); ++k) {
        const auto& v = schema.variables[numeric[k]];
        if (v.kind == VariableKind::IntegerCategorical) {
            const auto& map = map_for(v.name);
            for (std::size_t c = 0; c < map.categories.size(); ++c) {
                EncodedColumn col;
                col.name = map.column_names[c];
                col.source = v.name;
                col.group = v.group;
                col.one_hot = true;
                col.category = map.categories[c];
                col.raw_tolerance = 0.0;
                col.one_sided_upper = false;
                scaler.columns.push_back(std::move(col));
            }
        } else {
            EncodedColumn col;
            col.name = v.name;
            col.source = v.name;
            col.group = v.group;
            col.raw_tolerance = v.tolerance;
            col.one_sided_upper = v.one_sided_upper;
            scaler.columns.push_back(std::move(col));
        }
    }

    // Population standard deviation per encoded column; constant columns keep
    // scale 1 so they contribute zero to every distance.
    const double m = static_cast<double>(records.size());
    std::size_t col = 0;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        const auto& v = schema.variables[numeric[k]];
        const std::size_t width =
            v.kind == VariableKind::IntegerCategorical ? map_for(v.name).categories.size() : 1;
        for (std::size_t c = 0; c < width; ++c) {
            double mean = 0.0;
            for (const auto& rec : records) {
                double x;
                if (v.kind == VariableKind::IntegerCategorical) {
                    x = cell_value(rec.values[k]) == scaler.columns[col].category ? 1.0 : 0.0;
                } else {
                    x = cell_value(rec.values[k]);
                }
                mean += x;
            }
            mean /= m;
            double ss = 0.0;
            for (const auto& rec : records) {
                double x;
                if (v.kind == VariableKind::IntegerCategorical) {
                    x = cell_value(rec.values[k]) == scaler.columns[col].category ? 1.0 : 0.0;
                } else {
                    x = cell_value(rec.values[k]);
                }
                ss += (x - mean) * (x - mean);
            }
            const double sd = std::sqrt(ss / m);
            scaler.columns[col].scale = sd > 0.0 ? sd : 1.0;
            ++col;
        }
    }
    return scaler;
}

std::vector<std::pair<std::size_t, std::size_t>> column_spans(const Scaler& scaler) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    spans.reserve(scaler.variables.size());
    std::size_t col = 0;
    for (const auto& v : scaler.variables) {
        std::size_t begin = col;
        while (col < scaler.columns.size() && scaler.columns[col].source == v.name) ++col;
        if (begin == col) throw SchemaMismatch("scaler has no columns for variable '" + v.name + "'");
        spans.emplace_back(begin, col);
    }
    return spans;
}

FeatureMatrix transform(const std::vector<RawRecord>& records, const Scaler& scaler) {
    FeatureMatrix out;
    out.rows = records.size();
    out.cols = scaler.columns.size();
    out.columns = scaler.columns;
    out.values.assign(out.rows * out.cols, 0.0);
    out.row_ids.reserve(records.size());

    const auto spans = column_spans(scaler);

    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.values.size() != scaler.variables.size()) {
            throw SchemaMismatch("record '" + rec.id + "' has " + std::to_string(rec.values.size()) +
                                 " values, scaler expects " + std::to_string(scaler.variables.size()));
        }
        out.row_ids.push_back(rec.id);
        double* row = out.values.data() + r * out.cols;
        for (std::size_t k = 0; k < scaler.variables.size(); ++k) {
            const auto [begin, end] = spans[k];
            const double x = cell_value(rec.values[k]);
            if (scaler.variables[k].kind == VariableKind::IntegerCategorical) {
                // A category unseen at fit time leaves the whole block zero,
                // which the zero-tolerance gate then rejects.
                for (std::size_t c = begin; c < end; ++c) {
                    if (scaler.columns[c].category == x) {
                        row[c] = 1.0 / scaler.columns[c].scale;
                        break;
                    }
                }
            } else {
                row[begin] = x / scaler.columns[begin].scale;
            }
        }
    }
    return out;
}

std::vector<ColumnTolerance> normalized_tolerances(const Scaler& scaler) {
    std::vector<ColumnTolerance> out;
    out.reserve(scaler.columns.size());
    for (const auto& col : scaler.columns) {
        ColumnTolerance t;
        if (col.one_hot) {
            t.value = 0.0;
            t.one_sided_upper = false;
        } else {
            t.value = col.raw_tolerance / col.scale;
            t.one_sided_upper = col.one_sided_upper;
        }
        out.push_back(t);
    }
    return out;
}

}  // namespace brackets
