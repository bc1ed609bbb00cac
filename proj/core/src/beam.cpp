// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/beam.hpp"

#include <algorithm>
#include <cmath>

#include "ionload/constants.hpp"
#include "ionload/error.hpp"

namespace ionload {

using constants::pi;

void LaserBeam::validate() const
{
    if (!(wavelength_nm > 0)) throw DomainError("LaserBeam: wavelength_nm must be > 0");
    if (!(power_W >= 0)) throw DomainError("LaserBeam: power_W must be >= 0");
    if (!(waist_m > 0)) throw DomainError("LaserBeam: waist_m must be > 0");
    if (std::abs(dot(axis, axis) - 1.0) > 1e-9) throw DomainError("LaserBeam: axis must be a unit vector");
}

double peak_intensity(const LaserBeam& beam)
{
    return 2.0 * beam.power_W / (pi * beam.waist_m * beam.waist_m);
}

double intensity_at(const LaserBeam& beam, double radial_offset_m)
{
    const double w = beam.waist_m;
    return peak_intensity(beam) * std::exp(-2.0 * radial_offset_m * radial_offset_m / (w * w));
}

double radial_distance_sq(const LaserBeam& beam, const Vec3& point_m)
{
    const double along = dot(point_m, beam.axis);
    return std::max(0.0, dot(point_m, point_m) - along * along);
}

double intensity_at_point(const LaserBeam& beam, const Vec3& point_m)
{
    const double w = beam.waist_m;
    return peak_intensity(beam) * std::exp(-2.0 * radial_distance_sq(beam, point_m) / (w * w));
}

double photon_energy_J(double wavelength_nm)
{
    if (!(wavelength_nm > 0)) throw DomainError("photon_energy_J: wavelength must be positive");
    return constants::planck * constants::speed_of_light / (wavelength_nm * units::nm);
}

double photon_flux(double intensity_W_per_m2, double wavelength_nm)
{
    if (!(intensity_W_per_m2 >= 0)) throw DomainError("photon_flux: intensity must be >= 0");
    return intensity_W_per_m2 / photon_energy_J(wavelength_nm);
}

double TransitProfile::integrated() const
{
    const std::size_t n = time_s.size();
    if (n < 3) return 0.0;
    // Composite Simpson; an even number of intervals is guaranteed by transit_profile.
    const double h = (time_s.back() - time_s.front()) / static_cast<double>(n - 1);
    double sum = intensity_W_per_m2.front() + intensity_W_per_m2.back();
    for (std::size_t i = 1; i + 1 < n; ++i) sum += intensity_W_per_m2[i] * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

TransitProfile transit_profile(const LaserBeam& beam, double speed_m_per_s, double impact_parameter_m,
                               int samples, double span_waists)
{
    if (!(speed_m_per_s > 0)) throw DomainError("transit_profile: speed must be positive");
    if (samples < 3) throw DomainError("transit_profile: need at least 3 samples");
    if (samples % 2 == 0) ++samples;

    TransitProfile profile;
    profile.transit_time_s = 2.0 * beam.waist_m / speed_m_per_s;
    const double half = span_waists * beam.waist_m / speed_m_per_s;
    profile.time_s.resize(static_cast<std::size_t>(samples));
    profile.intensity_W_per_m2.resize(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = -half + 2.0 * half * i / (samples - 1);
        const double x = speed_m_per_s * t;
        const double r = std::hypot(x, impact_parameter_m);
        profile.time_s[static_cast<std::size_t>(i)] = t;
        profile.intensity_W_per_m2[static_cast<std::size_t>(i)] = intensity_at(beam, r);
    }
    return profile;
}

double chord_integral(const LaserBeam& beam, double speed_m_per_s, double impact_parameter_m)
{
    if (!(speed_m_per_s > 0)) throw DomainError("chord_integral: speed must be positive");
    const double w = beam.waist_m;
    return peak_intensity(beam) * w * std::sqrt(pi / 2.0) / speed_m_per_s *
           std::exp(-2.0 * impact_parameter_m * impact_parameter_m / (w * w));
}

}  // namespace ionload
