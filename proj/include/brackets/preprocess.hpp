#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "brackets/catalog.hpp"

namespace brackets {

// Categories observed for one integer variable at fit time, ascending.
struct OneHotMap {
    std::string source;
    std::vector<double> categories;
    std::vector<std::string> column_names;

    bool operator==(const OneHotMap&) const = default;
};

// One column of the encoded matrix and everything needed to interpret it.
struct EncodedColumn {
    std::string name;
    std::string source;  // schema variable it came from
    VariableGroup group = VariableGroup::Geometry;
    bool one_hot = false;
    double category = 0.0;  // one-hot columns only
    double raw_tolerance = 0.0;
    bool one_sided_upper = false;
    double scale = 1.0;  // population std of the fitting data, 1 if constant

    bool operator==(const EncodedColumn&) const = default;
};

// The numeric (non-label) schema variables a scaler was fitted for.
struct ScalerVariable {
    std::string name;
    VariableKind kind = VariableKind::Continuous;
    VariableGroup group = VariableGroup::Geometry;
    double tolerance = 0.0;
    bool one_sided_upper = false;

    bool operator==(const ScalerVariable&) const = default;
};

// Fitted encoding + unit-variance scaling. Immutable once built; apply with
// transform(). Zero-variance columns keep scale 1 rather than being dropped,
// so train and test matrices always align.
struct Scaler {
    std::vector<ScalerVariable> variables;
    std::vector<EncodedColumn> columns;
    std::vector<OneHotMap> one_hot_maps;

    bool matches(const CatalogSchema& schema) const;

    bool operator==(const Scaler&) const = default;
};

struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
    std::vector<std::string> row_ids;
    std::vector<EncodedColumn> columns;

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * cols, cols);
    }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Per encoded column gate threshold, in normalized units.
struct ColumnTolerance {
    double value = 0.0;
    bool one_sided_upper = false;

    bool operator==(const ColumnTolerance&) const = default;
};

// Half-open [begin, end) encoded-column range of each scaler variable.
std::vector<std::pair<std::size_t, std::size_t>> column_spans(const Scaler& scaler);

Scaler fit_scaler(const std::vector<RawRecord>& records, const CatalogSchema& schema);

FeatureMatrix transform(const std::vector<RawRecord>& records, const Scaler& scaler);

// Raw tolerances divided by the per-column scale factor; one-hot columns get
// an exact-match threshold of zero.
std::vector<ColumnTolerance> normalized_tolerances(const Scaler& scaler);

}  // namespace brackets
