// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ionload/error.hpp"

namespace ionload::csv {

std::string format(double value)
{
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format(double value, int significant)
{
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

std::string format(long long value)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field)
{
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ParseError("not a number: '" + std::string(field) + "'");
    return v;
}

Writer::Writer(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns))
{
}

void Writer::meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

void Writer::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_.size())
        throw DomainError("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

std::string Writer::str() const
{
    std::string out = "# schema: " + schema_ + "\n";
    for (const auto& [k, v] : meta_) out += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    return out + body_;
}

void Writer::save(const std::string& path) const { write_file(path, str()); }

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ParseError("csv (" + schema + "): missing column '" + std::string(name) + "'");
}

bool Table::has_column(std::string_view name) const
{
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

namespace {

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

Table parse(std::string_view text)
{
    Table t;
    std::size_t line_no = 0;
    bool header = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            const auto colon = line.find(':');
            if (colon == std::string_view::npos) continue;
            std::string key(line.substr(0, colon));
            std::string_view value = line.substr(colon + 1);
            while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
            if (key == "schema")
                t.schema = std::string(value);
            else
                t.meta[key] = std::string(value);
            continue;
        }
        auto cells = split(line);
        if (!header) {
            t.columns = std::move(cells);
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw ParseError("csv line " + std::to_string(line_no) + ": " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(t.columns.size()));
        t.rows.push_back(std::move(cells));
    }
    if (!header) throw ParseError("csv: no header row");
    return t;
}

Table read(const std::string& path) { return parse(read_file(path)); }

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace ionload::csv
