// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/atomic_data.hpp"

#include <cmath>
#include <sstream>

#include "ionload/constants.hpp"
#include "ionload/error.hpp"

namespace ionload {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ParseError(what); }

}  // namespace

void Transition::validate() const
{
    if (!(wavelength_nm > 0))
        invalid("transition '" + label + "': wavelength_nm must be > 0");
    if (!(linewidth_MHz > 0))
        invalid("transition '" + label + "': linewidth_MHz must be > 0");
    if (!(ground_branching_ratio >= 0 && ground_branching_ratio <= 1))
        invalid("transition '" + label + "': ground_branching_ratio must lie in [0, 1]");
}

void AutoionizingResonance::validate() const
{
    std::ostringstream id;
    id << "resonance " << wavelength_nm << " nm: ";
    if (!(wavelength_nm > 0)) invalid(id.str() + "wavelength_nm must be > 0");
    if (!(peak_cross_section_Mb > 0)) invalid(id.str() + "peak_cross_section_Mb must be > 0");
    // First ionization threshold of neutral barium is 5.2117 eV.
    if (!(total_energy_eV > 5.2)) invalid(id.str() + "total_energy_eV must exceed 5.2 eV");
    if (!(fano_gamma_GHz > 0)) invalid(id.str() + "fano_gamma_GHz must be > 0");
    if (!std::isfinite(fano_q)) invalid(id.str() + "fano_q must be finite");
}

void Isotope::validate() const
{
    switch (mass_number) {
    case 130: case 132: case 134: case 135: case 136: case 137: case 138:
        break;
    default:
        invalid("isotope: mass_number " + std::to_string(mass_number) +
                " is not a stable barium isotope");
    }
    if (!(natural_abundance >= 0 && natural_abundance <= 1))
        invalid("isotope " + std::to_string(mass_number) + ": natural_abundance must lie in [0, 1]");
    if (!std::isfinite(first_step_shift_MHz))
        invalid("isotope " + std::to_string(mass_number) + ": first_step_shift_MHz must be finite");
}

AtomicCatalog::AtomicCatalog(std::vector<Transition> transitions,
                             std::vector<AutoionizingResonance> resonances,
                             std::vector<Isotope> isotopes)
    : transitions_(std::move(transitions)),
      resonances_(std::move(resonances)),
      isotopes_(std::move(isotopes))
{
    validate();
}

const Transition& AtomicCatalog::transition(std::string_view label) const
{
    for (const auto& t : transitions_)
        if (t.label == label) return t;
    throw ParseError("unknown transition '" + std::string(label) + "'");
}

const Isotope& AtomicCatalog::isotope(int mass_number) const
{
    for (const auto& i : isotopes_)
        if (i.mass_number == mass_number) return i;
    throw ParseError("unknown isotope " + std::to_string(mass_number));
}

void AtomicCatalog::validate() const
{
    for (const auto& t : transitions_) t.validate();
    for (const auto& r : resonances_) r.validate();
    if (isotopes_.empty()) return;
    double total = 0.0;
    for (const auto& i : isotopes_) {
        i.validate();
        total += i.natural_abundance;
    }
    if (std::abs(total - 1.0) > 1e-9)
        invalid("isotope abundances sum to " + std::to_string(total) + ", expected 1");
}

const AtomicCatalog& default_barium_catalog()
{
    static const AtomicCatalog catalog{
        {
            {"413", 413.0, 9.15, 0.026, "5d6p 3D1"},
            {"554", 554.0, 19.02, 0.9966, "6s6p 1P1"},
            {"791", 791.0, 0.820, 0.38, "6s6p 3P1"},
        },
        {
            {380.75, 300.0, 5.49549, 60.4, 1000.0, "5d3/2 9d (J=0)", std::nullopt,
             "cross-section approximate; Fano width and q are placeholders"},
            {384.33, 290.0, 5.46516, 60.4, 1000.0, "5d3/2 9d (J=1)", std::nullopt,
             "cross-section approximate; Fano width and q are placeholders"},
            {389.74, 550.0, 5.42032, 60.4, 1000.0, "5d5/2 8d (J=1)", 520.0,
             "alternative measurement 520 +/- 78 Mb; fitted Fano width 60.4 +/- 1 GHz"},
            {402.92, 370.0, 5.31629, 60.4, 1000.0, "5d3/2 8d (J=1)", 300.0,
             "alternative measurement 300 +/- 45 Mb; Fano width and q are placeholders"},
        },
        // Natural abundances (IUPAC) and 6s2 1S0 - 6s6p 1P1 isotope shifts
        // (centers of gravity for the odd isotopes), 138Ba as reference.
        {
            {130, 0.00106, 207.1},
            {132, 0.00101, 167.9},
            {134, 0.02417, 142.8},
            {135, 0.06592, 259.3},
            {136, 0.07854, 128.0},
            {137, 0.11232, 215.2},
            {138, 0.71698, 0.0},
        },
    };
    return catalog;
}

double photon_energy_eV(double wavelength_nm)
{
    if (!(wavelength_nm > 0))
        throw DomainError("photon_energy_eV: wavelength must be positive");
    return constants::hc_eV_nm / wavelength_nm;
}

double second_step_wavelength_nm(double first_step_nm, double target_energy_eV)
{
    const double remaining = target_energy_eV - photon_energy_eV(first_step_nm);
    if (!(remaining > 0))
        throw DomainError("second_step_wavelength_nm: target energy is below the first photon energy");
    return constants::hc_eV_nm / remaining;
}

std::optional<AutoionizingResonance> lookup_resonance(const AtomicCatalog& catalog,
                                                      double wavelength_nm,
                                                      double tolerance_nm)
{
    if (!(tolerance_nm >= 0)) throw DomainError("lookup_resonance: tolerance must be non-negative");
    std::optional<AutoionizingResonance> found;
    for (const auto& r : catalog.resonances()) {
        if (std::abs(r.wavelength_nm - wavelength_nm) > tolerance_nm) continue;
        if (found) {
            std::ostringstream msg;
            msg << "lookup_resonance: both " << found->wavelength_nm << " nm and "
                << r.wavelength_nm << " nm lie within " << tolerance_nm << " nm of "
                << wavelength_nm << " nm";
            throw AmbiguityError(msg.str());
        }
        found = r;
    }
    return found;
}

}  // namespace ionload
