// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace ionload {

struct AutoionizingResonance;

/*!
 * Fano profile of an autoionizing resonance.
 *
 * The cross-section is normalized so that its maximum over detuning is
 * peak_cross_section_m2 for any q. For large q the profile tends to a
 * Lorentzian of full width gamma_Hz centered on the resonance.
 *
 * All widths are ordinary frequencies (Hz), not angular.
 */
struct FanoProfile {
    double center_frequency_THz = 0.0;
    double gamma_Hz = 0.0;
    double q = 1000.0;
    double peak_cross_section_m2 = 0.0;

    void validate() const;
};

/// Profile for a catalog resonance, centered on its second-step photon frequency.
FanoProfile make_fano_profile(const AutoionizingResonance& resonance);

/// Profile centered on the photon that completes total_energy_eV from the given first step.
/// Tabulated wavelengths are rounded to 0.01 nm (about 20 GHz); this center is exact.
FanoProfile make_fano_profile(const AutoionizingResonance& resonance, double first_step_nm);

/// sigma(eps) = sigma_peak (q + eps)^2 / ((1 + q^2)(1 + eps^2)), eps = 2 detuning / gamma.
double fano_cross_section(double detuning_Hz, const FanoProfile& profile);

/// Large-q limit of fano_cross_section.
double lorentzian_cross_section(double detuning_Hz, const FanoProfile& profile);

/*!
 * Saturation intensity hbar omega^3 Gamma / (4 pi c^2) in W/m^2.
 *
 * omega = 2 pi f is angular, but Gamma enters as an ordinary frequency in
 * Hz. With Gamma = 60.4 GHz and f = 769.211 THz this gives 63.7 W/cm^2;
 * passing an angular Gamma would overstate I_sat by 2 pi.
 */
double saturation_intensity(double transition_frequency_THz, double gamma_Hz);

/// Gaussian-beam power whose peak intensity equals i_sat: I_sat pi w0^2 / 2.
double saturation_power(double i_sat_W_per_m2, double waist_m);

struct SaturationParams {
    double i_sat_W_per_m2 = 0.0;
    double p_sat_W = 0.0;
    double omega_rad_per_s = 0.0;
    double waist_m = 0.0;
};

SaturationParams make_saturation_params(double transition_frequency_THz, double gamma_Hz,
                                        double waist_m);

/// Closed two-level saturation intensity pi h c Gamma / (3 lambda^3), Gamma = 2 pi linewidth.
double two_level_saturation_intensity(double wavelength_nm, double linewidth_Hz);

/// Steady-state excited population (s/2) / (1 + s + (2 delta / Gamma)^2).
double excited_fraction(double saturation_parameter, double detuning_Hz, double linewidth_Hz);

}  // namespace ionload
