// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/lineshape.hpp"

#include <cmath>

#include "ionload/atomic_data.hpp"
#include "ionload/constants.hpp"
#include "ionload/error.hpp"

namespace ionload {

using constants::pi;

void FanoProfile::validate() const
{
    if (!(gamma_Hz > 0)) throw DomainError("FanoProfile: gamma_Hz must be > 0");
    if (!(peak_cross_section_m2 > 0)) throw DomainError("FanoProfile: peak cross-section must be > 0");
    if (!std::isfinite(q)) throw DomainError("FanoProfile: q must be finite");
}

FanoProfile make_fano_profile(const AutoionizingResonance& resonance)
{
    FanoProfile p;
    p.center_frequency_THz = constants::speed_of_light / (resonance.wavelength_nm * units::nm) / units::THz;
    p.gamma_Hz = resonance.fano_gamma_GHz * units::GHz;
    p.q = resonance.fano_q;
    p.peak_cross_section_m2 = units::megabarn_to_m2(resonance.peak_cross_section_Mb);
    p.validate();
    return p;
}

FanoProfile make_fano_profile(const AutoionizingResonance& resonance, double first_step_nm)
{
    FanoProfile p = make_fano_profile(resonance);
    const double lambda_nm = second_step_wavelength_nm(first_step_nm, resonance.total_energy_eV);
    p.center_frequency_THz = constants::speed_of_light / (lambda_nm * units::nm) / units::THz;
    return p;
}

double fano_cross_section(double detuning_Hz, const FanoProfile& profile)
{
    const double eps = 2.0 * detuning_Hz / profile.gamma_Hz;
    const double q = profile.q;
    const double num = (q + eps) * (q + eps);
    return profile.peak_cross_section_m2 * num / ((1.0 + q * q) * (1.0 + eps * eps));
}

double lorentzian_cross_section(double detuning_Hz, const FanoProfile& profile)
{
    const double eps = 2.0 * detuning_Hz / profile.gamma_Hz;
    return profile.peak_cross_section_m2 / (1.0 + eps * eps);
}

double saturation_intensity(double transition_frequency_THz, double gamma_Hz)
{
    if (!(transition_frequency_THz > 0) || !(gamma_Hz >= 0))
        throw DomainError("saturation_intensity: frequency must be > 0 and gamma >= 0");
    const double omega = 2.0 * pi * transition_frequency_THz * units::THz;
    const double c = constants::speed_of_light;
    return constants::hbar * omega * omega * omega * gamma_Hz / (4.0 * pi * c * c);
}

double saturation_power(double i_sat_W_per_m2, double waist_m)
{
    if (!(i_sat_W_per_m2 >= 0) || !(waist_m > 0))
        throw DomainError("saturation_power: intensity must be >= 0 and waist > 0");
    return i_sat_W_per_m2 * pi * waist_m * waist_m / 2.0;
}

SaturationParams make_saturation_params(double transition_frequency_THz, double gamma_Hz,
                                        double waist_m)
{
    SaturationParams s;
    s.i_sat_W_per_m2 = saturation_intensity(transition_frequency_THz, gamma_Hz);
    s.p_sat_W = saturation_power(s.i_sat_W_per_m2, waist_m);
    s.omega_rad_per_s = 2.0 * pi * transition_frequency_THz * units::THz;
    s.waist_m = waist_m;
    return s;
}

double two_level_saturation_intensity(double wavelength_nm, double linewidth_Hz)
{
    if (!(wavelength_nm > 0) || !(linewidth_Hz > 0))
        throw DomainError("two_level_saturation_intensity: inputs must be positive");
    const double lambda = wavelength_nm * units::nm;
    const double decay_rate = 2.0 * pi * linewidth_Hz;
    return pi * constants::planck * constants::speed_of_light * decay_rate / (3.0 * lambda * lambda * lambda);
}

double excited_fraction(double saturation_parameter, double detuning_Hz, double linewidth_Hz)
{
    if (!(saturation_parameter >= 0)) throw DomainError("excited_fraction: saturation parameter must be >= 0");
    if (std::isinf(saturation_parameter)) return 0.5;
    const double x = 2.0 * detuning_Hz / linewidth_Hz;
    return 0.5 * saturation_parameter / (1.0 + saturation_parameter + x * x);
}

}  // namespace ionload
