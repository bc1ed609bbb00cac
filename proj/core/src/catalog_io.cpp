// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ionload/atomic_data.hpp"
#include "ionload/error.hpp"

namespace ionload {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "ionload.atomic-catalog.v1";

const std::vector<std::string> kTransitionColumns = {
    "label", "wavelength_nm", "linewidth_MHz", "ground_branching_ratio", "intermediate_state"};
const std::vector<std::string> kResonanceColumns = {
    "wavelength_nm", "peak_cross_section_Mb", "total_energy_eV", "fano_gamma_GHz",
    "fano_q", "state", "alternative_cross_section_Mb", "note"};
const std::vector<std::string> kIsotopeColumns = {
    "mass_number", "natural_abundance", "first_step_shift_MHz"};

// One table row addressed by column name.
class Row {
public:
    Row(const std::string& table, std::size_t index, const std::map<std::string, std::size_t>& cols,
        const json& cells)
        : table_(table), index_(index), cols_(cols), cells_(cells)
    {}

    const json& cell(const std::string& name) const
    {
        auto it = cols_.find(name);
        if (it == cols_.end()) fail(name, "missing column");
        if (it->second >= cells_.size()) fail(name, "row is shorter than the header");
        return cells_[it->second];
    }

    double number(const std::string& name) const
    {
        const auto& c = cell(name);
        if (!c.is_number()) fail(name, "expected a number");
        return c.get<double>();
    }

    int integer(const std::string& name) const
    {
        const auto& c = cell(name);
        if (!c.is_number_integer()) fail(name, "expected an integer");
        return c.get<int>();
    }

    std::string text(const std::string& name) const
    {
        const auto& c = cell(name);
        if (!c.is_string()) fail(name, "expected a string");
        return c.get<std::string>();
    }

    std::optional<double> optional_number(const std::string& name) const
    {
        if (!cols_.count(name)) return std::nullopt;
        const auto& c = cell(name);
        if (c.is_null()) return std::nullopt;
        return number(name);
    }

private:
    [[noreturn]] void fail(const std::string& column, const std::string& why) const
    {
        std::ostringstream msg;
        msg << "catalog: " << table_ << " row " << index_ << ", column '" << column << "': " << why;
        throw ParseError(msg.str());
    }

    std::string table_;
    std::size_t index_;
    const std::map<std::string, std::size_t>& cols_;
    const json& cells_;
};

template <class F>
void for_each_row(const json& root, const std::string& table, F&& visit)
{
    if (!root.contains(table)) throw ParseError("catalog: missing table '" + table + "'");
    const auto& t = root.at(table);
    if (!t.contains("columns") || !t.contains("rows"))
        throw ParseError("catalog: table '" + table + "' needs 'columns' and 'rows'");
    std::map<std::string, std::size_t> cols;
    const auto& header = t.at("columns");
    for (std::size_t i = 0; i < header.size(); ++i) cols[header[i].get<std::string>()] = i;
    const auto& rows = t.at("rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array())
            throw ParseError("catalog: " + table + " row " + std::to_string(i) + " is not an array");
        visit(Row(table, i, cols, rows[i]));
    }
}

}  // namespace

std::string catalog_to_json(const AtomicCatalog& catalog)
{
    json root;
    root["schema"] = kSchema;

    json transitions = {{"columns", kTransitionColumns}, {"rows", json::array()}};
    for (const auto& t : catalog.transitions())
        transitions["rows"].push_back(
            {t.label, t.wavelength_nm, t.linewidth_MHz, t.ground_branching_ratio, t.intermediate_state});
    root["transitions"] = std::move(transitions);

    json resonances = {{"columns", kResonanceColumns}, {"rows", json::array()}};
    for (const auto& r : catalog.resonances()) {
        json alt = r.alternative_cross_section_Mb ? json(*r.alternative_cross_section_Mb) : json(nullptr);
        resonances["rows"].push_back({r.wavelength_nm, r.peak_cross_section_Mb, r.total_energy_eV,
                                      r.fano_gamma_GHz, r.fano_q, r.state, alt, r.note});
    }
    root["resonances"] = std::move(resonances);

    json isotopes = {{"columns", kIsotopeColumns}, {"rows", json::array()}};
    for (const auto& i : catalog.isotopes())
        isotopes["rows"].push_back({i.mass_number, i.natural_abundance, i.first_step_shift_MHz});
    root["isotopes"] = std::move(isotopes);

    return root.dump(2) + "\n";
}

AtomicCatalog catalog_from_json(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("catalog: ") + e.what());
    }
    try {
        if (root.value("schema", std::string()) != kSchema)
            throw ParseError(std::string("catalog: expected schema '") + kSchema + "'");

        std::vector<Transition> transitions;
        for_each_row(root, "transitions", [&](const Row& row) {
            transitions.push_back({row.text("label"), row.number("wavelength_nm"), row.number("linewidth_MHz"),
                                   row.number("ground_branching_ratio"), row.text("intermediate_state")});
        });

        std::vector<AutoionizingResonance> resonances;
        for_each_row(root, "resonances", [&](const Row& row) {
            AutoionizingResonance r;
            r.wavelength_nm = row.number("wavelength_nm");
            r.peak_cross_section_Mb = row.number("peak_cross_section_Mb");
            r.total_energy_eV = row.number("total_energy_eV");
            r.fano_gamma_GHz = row.number("fano_gamma_GHz");
            r.fano_q = row.number("fano_q");
            r.state = row.text("state");
            r.alternative_cross_section_Mb = row.optional_number("alternative_cross_section_Mb");
            r.note = row.text("note");
            resonances.push_back(std::move(r));
        });

        std::vector<Isotope> isotopes;
        for_each_row(root, "isotopes", [&](const Row& row) {
            isotopes.push_back({row.integer("mass_number"), row.number("natural_abundance"),
                                row.number("first_step_shift_MHz")});
        });

        return AtomicCatalog(std::move(transitions), std::move(resonances), std::move(isotopes));
    } catch (const json::exception& e) {
        throw ParseError(std::string("catalog: ") + e.what());
    }
}

AtomicCatalog read_catalog(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("catalog: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return catalog_from_json(buf.str());
}

void write_catalog(const AtomicCatalog& catalog, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("catalog: cannot write '" + path + "'");
    out << catalog_to_json(catalog);
}

}  // namespace ionload
