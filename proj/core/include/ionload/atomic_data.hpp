// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ionload {

/// First-step transition from the 6s2 1S0 ground state.
struct Transition {
    std::string label;             // e.g. "554"
    double wavelength_nm = 0.0;
    double linewidth_MHz = 0.0;    // natural linewidth, ordinary frequency
    double ground_branching_ratio = 0.0;
    std::string intermediate_state;

    void validate() const;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Autoionizing resonance reached from the 6s6p 1P1 intermediate state.
struct AutoionizingResonance {
    double wavelength_nm = 0.0;          // second-step photon wavelength
    double peak_cross_section_Mb = 0.0;
    double total_energy_eV = 0.0;        // above the ground state
    double fano_gamma_GHz = 0.0;         // full width, ordinary frequency
    double fano_q = 1000.0;
    std::string state;                   // autoionizing configuration label
    std::optional<double> alternative_cross_section_Mb;
    std::string note;

    void validate() const;
    friend bool operator==(const AutoionizingResonance&, const AutoionizingResonance&) = default;
};

struct Isotope {
    int mass_number = 0;
    double natural_abundance = 0.0;
    double first_step_shift_MHz = 0.0;   // nu(isotope) - nu(138Ba) on the first-step line

    void validate() const;
    friend bool operator==(const Isotope&, const Isotope&) = default;
};

/// Atomic data tables. Immutable once constructed.
class AtomicCatalog {
public:
    AtomicCatalog() = default;
    AtomicCatalog(std::vector<Transition> transitions,
                  std::vector<AutoionizingResonance> resonances,
                  std::vector<Isotope> isotopes);

    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<AutoionizingResonance>& resonances() const { return resonances_; }
    const std::vector<Isotope>& isotopes() const { return isotopes_; }

    /// Throws ParseError when the label is unknown.
    const Transition& transition(std::string_view label) const;
    const Isotope& isotope(int mass_number) const;

    /// Checks every row and that isotope abundances sum to 1 within 1e-9.
    void validate() const;

    friend bool operator==(const AtomicCatalog&, const AtomicCatalog&) = default;

private:
    std::vector<Transition> transitions_;
    std::vector<AutoionizingResonance> resonances_;
    std::vector<Isotope> isotopes_;
};

/// Built-in barium tables: the three first steps, four autoionizing
/// resonances from 6s6p 1P1, and the seven stable isotopes.
const AtomicCatalog& default_barium_catalog();

/// E = hc / lambda in eV. Throws DomainError for lambda <= 0.
double photon_energy_eV(double wavelength_nm);

/// Second-step wavelength that, added to the first photon, reaches
/// target_energy_eV above the ground state.
double second_step_wavelength_nm(double first_step_nm, double target_energy_eV);

/// Unique resonance within tolerance_nm of wavelength_nm, or nullopt.
/// Throws AmbiguityError if several rows match.
std::optional<AutoionizingResonance> lookup_resonance(const AtomicCatalog& catalog,
                                                      double wavelength_nm,
                                                      double tolerance_nm);

// Catalog file I/O (JSON tables with unit-suffixed column headers).
std::string catalog_to_json(const AtomicCatalog& catalog);
AtomicCatalog catalog_from_json(std::string_view text);
AtomicCatalog read_catalog(const std::string& path);
void write_catalog(const AtomicCatalog& catalog, const std::string& path);

}  // namespace ionload
