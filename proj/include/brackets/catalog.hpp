#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace brackets {

enum class VariableKind { Continuous, IntegerCategorical, Label };
enum class VariableGroup { Geometry, Hole, Meta };
enum class VariableRole { None, Identifier, Type };

const char* to_string(VariableKind kind);
const char* to_string(VariableGroup group);

// One raw catalog column: what it measures, its manufacturing tolerance, and
// which standardization group it belongs to.
struct VariableSpec {
    std::string name;
    VariableKind kind = VariableKind::Continuous;
    std::string unit;
    double tolerance = 0.0;  // raw units; meaningless for labels
    VariableGroup group = VariableGroup::Meta;
    VariableRole role = VariableRole::None;
    bool one_sided_upper = false;  // oversize representative always acceptable

    bool operator==(const VariableSpec&) const = default;
};

struct CatalogSchema {
    std::vector<VariableSpec> variables;
    std::string type_filter;

    // Indices of non-label variables, in schema order. Raw record values
    // align with this sequence.
    std::vector<std::size_t> numeric_indices() const;
    std::size_t identifier_index() const;
    std::size_t type_index() const;
    const VariableSpec* find(const std::string& name) const;

    bool operator==(const CatalogSchema&) const = default;
};

// One catalog row. `values` holds the non-label cells in schema order;
// blank cells stay missing until preprocessing.
struct RawRecord {
    std::string id;
    std::string type;
    std::vector<std::optional<double>> values;

    bool operator==(const RawRecord&) const = default;
};

// Schema file: one variable per line as `name,kind,unit,tolerance,group,flags`,
// `#` comments, plus a `type_filter=<value>` line. See the shipped sample.
CatalogSchema load_schema(const std::string& path);
CatalogSchema parse_schema(const std::string& text, const std::string& origin);

// Validates the invariants load_schema enforces; useful for schemas built in
// code. Throws SchemaError.
void validate_schema(const CatalogSchema& schema);

std::vector<RawRecord> load_catalog(const std::string& path, const CatalogSchema& schema);
std::vector<RawRecord> parse_catalog(const std::string& text, const std::string& origin,
                                     const CatalogSchema& schema);

std::string catalog_to_csv(const std::vector<RawRecord>& records, const CatalogSchema& schema);
void save_catalog(const std::string& path, const std::vector<RawRecord>& records,
                  const CatalogSchema& schema);

std::vector<RawRecord> filter_by_type(const std::vector<RawRecord>& records,
                                      const CatalogSchema& schema);

// Projection onto one standardization group: keeps the label columns and the
// group's variables, drops the rest. Records must align with `schema`.
CatalogSchema restrict_to_group(const CatalogSchema& schema, VariableGroup group);
std::vector<RawRecord> restrict_records(const std::vector<RawRecord>& records,
                                        const CatalogSchema& schema, VariableGroup group);

// The documented example layout: 11 global parameters plus 7 per segment.
CatalogSchema sample_schema(int segments = 4);

}  // namespace brackets
