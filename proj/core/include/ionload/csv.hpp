// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ionload::csv {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format(double value);
/// Fixed number of significant digits.
std::string format(double value, int significant);
std::string format(long long value);
inline std::string format(int value) { return format(static_cast<long long>(value)); }

/// Locale-independent double parse of the whole field.
double parse_double(std::string_view field);

/*!
 * Writer for the versioned CSV layout:
 *   # schema: <name>
 *   # key: value        (optional metadata)
 *   col_a,col_b,...
 *   rows...
 * Lines end in '\n'.
 */
class Writer {
public:
    Writer(std::string schema, std::vector<std::string> columns);

    void meta(const std::string& key, const std::string& value);
    void row(const std::vector<std::string>& cells);
    std::string str() const;
    void save(const std::string& path) const;

private:
    std::string schema_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> columns_;
    std::string body_;
};

struct Table {
    std::string schema;
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

Table parse(std::string_view text);
Table read(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ionload::csv
