#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace brackets::csv {

// One parsed row; fields are unescaped.
using Row = std::vector<std::string>;

// Parses RFC-4180-style CSV: quoted fields, doubled quotes, CRLF or LF line
// ends, embedded newlines inside quotes. Throws ParseError on stray quotes.
std::vector<Row> parse(const std::string& text, const std::string& origin);

// Reads and parses a whole file. Throws IoError if unreadable.
std::vector<Row> read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote, or newline.
std::string escape(const std::string& field);

std::string join(const Row& row);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

// Strict double parse of a whole field; nullopt for empty fields.
std::optional<double> parse_double(const std::string& field, const std::string& context);

}  // namespace brackets::csv
