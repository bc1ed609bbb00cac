// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ionload/atomic_data.hpp"
#include "ionload/beam.hpp"
#include "ionload/lineshape.hpp"
#include "ionload/plume.hpp"

namespace ionload {

/// Direct photoionization into the continuum with a flat cross-section.
struct NonResonant {
    double cross_section_Mb = 75.0;
};

/// Second step driven through an autoionizing resonance.
struct Autoionizing {
    FanoProfile profile;
};

using SecondStepMode = std::variant<NonResonant, Autoionizing>;

/// Capture probability of a single photoion with the default beams.
/// Solved once with calibrate_capture_efficiency; see default_autoionizing_scheme.
inline constexpr double default_capture_efficiency = 1.151598e-02;

struct SchemeConfig {
    Transition first_step;
    LaserBeam first_step_beam;
    SecondStepMode second_step;
    LaserBeam second_step_beam;
    double capture_efficiency = default_capture_efficiency;
    int trap_capacity = 13;
    // Space-charge limit on ions retained from one pulse; 0 disables it.
    double retention_plateau_ions = 7.10;

    void validate() const;
    bool autoionizing() const { return std::holds_alternative<Autoionizing>(second_step); }
    std::string mode_name() const { return autoionizing() ? "autoionizing" : "nonresonant"; }
};

/// 554 nm first step with a second-step beam at 389.74779 nm on the 5.42032 eV resonance.
SchemeConfig default_autoionizing_scheme(const AtomicCatalog& catalog = default_barium_catalog());

/// Same first step with a 405 nm continuum step at 75 Mb.
SchemeConfig default_nonresonant_scheme(const AtomicCatalog& catalog = default_barium_catalog());

struct IonizationResult {
    double p_excite = 0.0;                // intensity-weighted excited fraction along the chord
    double p_ionize_given_excited = 0.0;  // for an atom held in the intermediate state
    double p_ionize = 0.0;
    double p_trap = 0.0;                  // capture_efficiency * p_ionize
};

double second_step_cross_section(const SecondStepMode& mode, double detuning_Hz);

/// First-step detuning seen by an atom: beam detuning minus isotope shift minus Doppler shift.
double first_step_detuning_Hz(const NeutralAtom& atom, const SchemeConfig& scheme);

/// Chord sums for one atom, before dividing by its speed.
struct ChordSums {
    double excited_flux = 0.0;    // int rho_ee Phi dx  [photons / (m s)]
    double flux = 0.0;            // int Phi dx
    double excited_length = 0.0;  // int rho_ee dx  [m]
};

/*!
 * Precomputed chord quadrature for one scheme.
 *
 * The atom moves along plume_axis through offset_m. With both beam axes
 * orthogonal to that path the squared distance to an axis splits into a
 * path term and an offset term, so the path Gaussians are tabulated once.
 */
class IonizationModel {
public:
    explicit IonizationModel(const SchemeConfig& scheme, int nodes = 48);

    const SchemeConfig& scheme() const { return scheme_; }

    ChordSums chord(const Vec3& offset_m, double first_step_detuning_Hz) const;
    IonizationResult evaluate(const NeutralAtom& atom) const;
    /// Result from precomputed chord sums for a given speed.
    IonizationResult from_chord(const ChordSums& sums, double speed_m_per_s) const;

    /// Scattering events on the first-step line: Gamma int rho_ee dt.
    static double scattered_photons(const ChordSums& sums, double speed_m_per_s, double linewidth_MHz);
    double scattered_photons(const ChordSums& sums, double speed_m_per_s) const;

    double sigma_m2() const { return sigma_m2_; }

private:
    SchemeConfig scheme_;
    double sigma_m2_ = 0.0;
    double s_peak_ = 0.0;
    double phi_peak_ = 0.0;
    double rho_scale_ = 1.0;
    std::vector<double> weight_;   // Gauss-Legendre weights times path length
    std::vector<double> first_;    // exp(-2 x^2 / w1^2)
    std::vector<double> second_;   // exp(-2 x^2 / w2^2)
};

IonizationResult ionization_probability(const NeutralAtom& atom, const SchemeConfig& scheme);

/// Probability that each of n candidates is retained: K(1 - (1 - 1/K)^n) / n, 1 when K = 0.
double retention_probability(int candidates, double plateau_ions);

/// Expected retained ions when candidates are Poisson(mu), including the capacity cap.
double expected_retained(double mu, double plateau_ions, int trap_capacity);

/// Closed form of expected_retained without the cap: K (1 - exp(-mu / K)).
double expected_retained_uncapped(double mu, double plateau_ions);

struct ExpectedRate {
    double mean_p_ionize = 0.0;       // over the plume population crossing the window
    double photoion_candidates = 0.0; // mean yield * capture * mean_p_ionize
    double direct_ions = 0.0;
    double ions_per_pulse = 0.0;      // after retention and capacity
};

struct PopulationAverages {
    double mean_p_ionize = 0.0;
    double mean_scattered_photons = 0.0;  // first-step scattering events per atom
};

/// Averages over isotopes, Doppler shift, speed and uniform window position, by quadrature.
PopulationAverages population_averages(const SchemeConfig& scheme, const PlumeModel& plume,
                                       std::span<const Isotope> isotopes = default_barium_catalog().isotopes());

/// Mean atom-averaged ionization probability over isotopes, Doppler, speed and window position.
double mean_ionization_probability(const SchemeConfig& scheme, const PlumeModel& plume,
                                   std::span<const Isotope> isotopes = default_barium_catalog().isotopes());

/// Analytic expected trapped ions per pulse. flux_scale multiplies the neutral yield.
ExpectedRate expected_ions_per_pulse(double fluence_J_per_cm2, const SchemeConfig& scheme,
                                     const PlumeModel& plume, double flux_scale = 1.0,
                                     std::span<const Isotope> isotopes = default_barium_catalog().isotopes());

/// Capture efficiency giving target_ions_per_pulse analytically.
double calibrate_capture_efficiency(double target_ions_per_pulse, double fluence_J_per_cm2,
                                    SchemeConfig scheme, const PlumeModel& plume,
                                    std::span<const Isotope> isotopes = default_barium_catalog().isotopes());

}  // namespace ionload
