#include "brackets/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "brackets/csv.hpp"
#include "brackets/errors.hpp"

namespace brackets {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

VariableKind parse_kind(const std::string& token, const std::string& where) {
    if (token == "continuous") return VariableKind::Continuous;
    if (token == "integer" || token == "integer-categorical") return VariableKind::IntegerCategorical;
    if (token == "label") return VariableKind::Label;
    throw ParseError(where + ": unknown kind '" + token + "'");
}

VariableGroup parse_group(const std::string& token, const std::string& where) {
    if (token == "geometry") return VariableGroup::Geometry;
    if (token == "hole") return VariableGroup::Hole;
    if (token == "meta") return VariableGroup::Meta;
    throw ParseError(where + ": unknown group '" + token + "'");
}

}  // namespace

const char* to_string(VariableKind kind) {
    switch (kind) {
        case VariableKind::Continuous: return "continuous";
        case VariableKind::IntegerCategorical: return "integer";
        case VariableKind::Label: return "label";
    }
    return "?";
}

const char* to_string(VariableGroup group) {
    switch (group) {
        case VariableGroup::Geometry: return "geometry";
        case VariableGroup::Hole: return "hole";
        case VariableGroup::Meta: return "meta";
    }
    return "?";
}

std::vector<std::size_t> CatalogSchema::numeric_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].kind != VariableKind::Label) out.push_back(i);
    }
    return out;
}

std::size_t CatalogSchema::identifier_index() const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].role == VariableRole::Identifier) return i;
    }
    throw SchemaError("schema has no identifier column");
}

std::size_t CatalogSchema::type_index() const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].role == VariableRole::Type) return i;
    }
    throw SchemaError("schema has no type column");
}

const VariableSpec* CatalogSchema::find(const std::string& name) const {
    for (const auto& v : variables) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

void validate_schema(const CatalogSchema& schema) {
    std::unordered_set<std::string> names;
    std::size_t identifiers = 0;
    std::size_t types = 0;
    for (const auto& v : schema.variables) {
        if (v.name.empty()) throw SchemaError("schema: empty variable name");
        if (!names.insert(v.name).second) {
            throw SchemaError("schema: duplicate variable name '" + v.name + "'");
        }
        if (v.kind == VariableKind::Label) {
            if (v.group != VariableGroup::Meta) {
                throw SchemaError("schema: label column '" + v.name + "' must be in group meta");
            }
            if (v.role == VariableRole::None) {
                throw SchemaError("schema: label column '" + v.name +
                                  "' needs an identifier or type role");
            }
            if (v.tolerance != 0.0) {
                throw SchemaError("schema: label column '" + v.name + "' cannot carry a tolerance");
            }
        } else {
            if (v.group == VariableGroup::Meta) {
                throw SchemaError("schema: variable '" + v.name +
                                  "' must be assigned to geometry or hole");
            }
            if (v.role != VariableRole::None) {
                throw SchemaError("schema: role marker on non-label column '" + v.name + "'");
            }
            if (v.tolerance < 0.0) {
                throw SchemaError("schema: negative tolerance on '" + v.name + "'");
            }
        }
        if (v.one_sided_upper && v.kind != VariableKind::Continuous) {
            throw SchemaError("schema: one_sided_upper only applies to continuous columns ('" +
                              v.name + "')");
        }
        if (v.role == VariableRole::Identifier) ++identifiers;
        if (v.role == VariableRole::Type) ++types;
    }
    if (identifiers != 1) throw SchemaError("schema: exactly one identifier column required");
    if (types != 1) throw SchemaError("schema: exactly one type column required");
}

CatalogSchema parse_schema(const std::string& text, const std::string& origin) {
    CatalogSchema schema;
    std::istringstream in(text);
    std::string raw_line;
    std::size_t line_no = 0;
    // Tolerance presence must be distinguishable from tolerance zero, so the
    // field is parsed before defaults are applied.
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        std::string line = trim(raw_line);
        if (line.empty() || line[0] == '#') continue;
        if (auto eq = line.find('='); eq != std::string::npos && line.find(',') == std::string::npos) {
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "type_filter") {
                schema.type_filter = value;
                continue;
            }
            throw ParseError(where + ": unknown directive '" + key + "'");
        }
        auto fields = split(line, ',');
        if (fields.size() != 6) {
            throw ParseError(where + ": expected 6 fields (name,kind,unit,tolerance,group,flags), got " +
                             std::to_string(fields.size()));
        }
        VariableSpec v;
        v.name = trim(fields[0]);
        v.kind = parse_kind(trim(fields[1]), where);
        v.unit = trim(fields[2]);
        const std::string tol = trim(fields[3]);
        if (v.kind == VariableKind::Label) {
            if (!tol.empty()) {
                throw SchemaError(where + ": label column '" + v.name + "' cannot carry a tolerance");
            }
        } else {
            if (tol.empty()) {
                throw SchemaError(where + ": missing tolerance for '" + v.name + "'");
            }
            auto parsed = csv::parse_double(tol, where);
            v.tolerance = parsed.value();
        }
        v.group = parse_group(trim(fields[4]), where);
        for (const auto& flag_raw : split(trim(fields[5]), ' ')) {
            const std::string flag = trim(flag_raw);
            if (flag.empty()) continue;
            if (flag == "one_sided_upper") {
                v.one_sided_upper = true;
            } else if (flag == "identifier") {
                v.role = VariableRole::Identifier;
            } else if (flag == "type") {
                v.role = VariableRole::Type;
            } else {
                throw ParseError(where + ": unknown flag '" + flag + "'");
            }
        }
        schema.variables.push_back(std::move(v));
    }
    if (schema.variables.empty()) {
        throw ParseError(origin + ": schema defines no variables");
    }
    validate_schema(schema);
    return schema;
}

CatalogSchema load_schema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open schema file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schema(buf.str(), path);
}

std::vector<RawRecord> parse_catalog(const std::string& text, const std::string& origin,
                                     const CatalogSchema& schema) {
    auto rows = csv::parse(text, origin);
    if (rows.empty()) throw ParseError(origin + ": empty catalog (no header)");

    const auto& header = rows.front();
    std::unordered_map<std::string, std::size_t> header_pos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!header_pos.emplace(header[i], i).second) {
            throw ParseError(origin + ": duplicate header column '" + header[i] + "'");
        }
    }
    if (header.size() != schema.variables.size()) {
        throw ParseError(origin + ": header has " + std::to_string(header.size()) +
                         " columns, schema expects " + std::to_string(schema.variables.size()));
    }
    // Columns may appear in any order; map each schema variable to its
    // position in the file.
    std::vector<std::size_t> col_of(schema.variables.size());
    for (std::size_t i = 0; i < schema.variables.size(); ++i) {
        auto it = header_pos.find(schema.variables[i].name);
        if (it == header_pos.end()) {
            throw ParseError(origin + ": header is missing schema column '" +
                             schema.variables[i].name + "'");
        }
        col_of[i] = it->second;
    }

    const std::size_t id_idx = schema.identifier_index();
    const std::size_t type_idx = schema.type_index();
    const auto numeric = schema.numeric_indices();

    std::vector<RawRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = origin + ": row " + std::to_string(r + 1);
        if (row.size() != header.size()) {
            throw ParseError(where + ": has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(header.size()));
        }
        RawRecord rec;
        rec.id = row[col_of[id_idx]];
        rec.type = row[col_of[type_idx]];
        rec.values.reserve(numeric.size());
        for (std::size_t vi : numeric) {
            rec.values.push_back(
                csv::parse_double(row[col_of[vi]], where + ", column '" + schema.variables[vi].name + "'"));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RawRecord> load_catalog(const std::string& path, const CatalogSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open catalog file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str(), path, schema);
}

std::string catalog_to_csv(const std::vector<RawRecord>& records, const CatalogSchema& schema) {
    const std::size_t id_idx = schema.identifier_index();
    const std::size_t type_idx = schema.type_index();
    std::string out;
    {
        csv::Row header;
        for (const auto& v : schema.variables) header.push_back(v.name);
        out += csv::join(header);
        out += '\n';
    }
    for (const auto& rec : records) {
        if (rec.values.size() + 2 != schema.variables.size()) {
            throw SchemaMismatch("record '" + rec.id + "' has " + std::to_string(rec.values.size()) +
                                 " values, schema expects " +
                                 std::to_string(schema.variables.size() - 2));
        }
        csv::Row row;
        std::size_t next_value = 0;
        for (std::size_t i = 0; i < schema.variables.size(); ++i) {
            if (i == id_idx) {
                row.push_back(rec.id);
            } else if (i == type_idx) {
                row.push_back(rec.type);
            } else {
                const auto& cell = rec.values[next_value++];
                row.push_back(cell ? csv::format_double(*cell) : std::string());
            }
        }
        out += csv::join(row);
        out += '\n';
    }
    return out;
}

void save_catalog(const std::string& path, const std::vector<RawRecord>& records,
                  const CatalogSchema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write catalog file: " + path);
    out << catalog_to_csv(records, schema);
    if (!out) throw IoError("failed writing catalog file: " + path);
}

std::vector<RawRecord> filter_by_type(const std::vector<RawRecord>& records,
                                      const CatalogSchema& schema) {
    std::vector<RawRecord> out;
    for (const auto& rec : records) {
        if (rec.type == schema.type_filter) out.push_back(rec);
    }
    return out;
}

CatalogSchema restrict_to_group(const CatalogSchema& schema, VariableGroup group) {
    CatalogSchema out;
    out.type_filter = schema.type_filter;
    for (const auto& v : schema.variables) {
        if (v.kind == VariableKind::Label || v.group == group) out.variables.push_back(v);
    }
    validate_schema(out);
    return out;
}

std::vector<RawRecord> restrict_records(const std::vector<RawRecord>& records,
                                        const CatalogSchema& schema, VariableGroup group) {
    const auto numeric = schema.numeric_indices();
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        if (schema.variables[numeric[k]].group == group) keep.push_back(k);
    }
    std::vector<RawRecord> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.values.size() != numeric.size()) {
            throw SchemaMismatch("record '" + rec.id + "' does not align with schema");
        }
        RawRecord r;
        r.id = rec.id;
        r.type = rec.type;
        r.values.reserve(keep.size());
        for (std::size_t k : keep) r.values.push_back(rec.values[k]);
        out.push_back(std::move(r));
    }
    return out;
}

CatalogSchema sample_schema(int segments) {
    if (segments < 1) throw ConfigError("sample_schema: segments must be >= 1");
    // Tolerances: 0.02 in for thicknesses, 2 deg for angles, 0.002 in for
    // hole/fastener diameters, 0.03 in for the remaining lengths. Integer
    // columns are one-hot encoded downstream, so their tolerance is zero.
    CatalogSchema s;
    s.type_filter = "angle";
    auto label = [&](const std::string& name, VariableRole role) {
        VariableSpec v;
        v.name = name;
        v.kind = VariableKind::Label;
        v.group = VariableGroup::Meta;
        v.role = role;
        s.variables.push_back(v);
    };
    auto cont = [&](const std::string& name, const std::string& unit, double tol,
                    VariableGroup group, bool one_sided = false) {
        VariableSpec v;
        v.name = name;
        v.kind = VariableKind::Continuous;
        v.unit = unit;
        v.tolerance = tol;
        v.group = group;
        v.one_sided_upper = one_sided;
        s.variables.push_back(v);
    };
    auto integer = [&](const std::string& name, VariableGroup group) {
        VariableSpec v;
        v.name = name;
        v.kind = VariableKind::IntegerCategorical;
        v.unit = "count";
        v.tolerance = 0.0;
        v.group = group;
        s.variables.push_back(v);
    };

    label("bracket_id", VariableRole::Identifier);
    label("bracket_type", VariableRole::Type);
    cont("total_length", "in", 0.03, VariableGroup::Geometry);
    cont("width", "in", 0.03, VariableGroup::Geometry);
    cont("depth", "in", 0.03, VariableGroup::Geometry, /*one_sided=*/true);
    cont("min_thickness", "in", 0.02, VariableGroup::Geometry);
    cont("max_thickness", "in", 0.02, VariableGroup::Geometry);
    integer("num_fastener_groups", VariableGroup::Hole);
    integer("num_segments", VariableGroup::Geometry);
    integer("total_holes", VariableGroup::Hole);
    cont("max_hole_diameter", "in", 0.002, VariableGroup::Hole);
    for (int seg = 1; seg <= segments; ++seg) {
        const std::string p = "seg" + std::to_string(seg) + "_";
        cont(p + "length", "in", 0.03, VariableGroup::Geometry);
        cont(p + "thickness", "in", 0.02, VariableGroup::Geometry);
        cont(p + "angle", "deg", 2.0, VariableGroup::Geometry);
        integer(p + "num_fasteners", VariableGroup::Hole);
        cont(p + "max_fastener_diameter", "in", 0.002, VariableGroup::Hole);
        cont(p + "fastener_sep_extrusion", "in", 0.03, VariableGroup::Hole);
        cont(p + "fastener_sep_length", "in", 0.03, VariableGroup::Hole);
    }
    validate_schema(s);
    return s;
}

}  // namespace brackets
