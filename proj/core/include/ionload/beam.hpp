// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

namespace ionload {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Collimated TEM00 beam focused at the origin. The waist is the 1/e^2
/// intensity radius and is taken as constant across the trap region.
struct LaserBeam {
    double wavelength_nm = 0.0;
    double power_W = 0.0;
    double waist_m = 0.0;
    double detuning_Hz = 0.0;   // from the transition or resonance it addresses
    Vec3 axis{0.0, 0.0, 1.0};   // propagation direction, unit norm

    void validate() const;
};

/// I0 = 2 P / (pi w0^2).
double peak_intensity(const LaserBeam& beam);

/// I(r) = I0 exp(-2 r^2 / w0^2) at radial distance r from the beam axis.
double intensity_at(const LaserBeam& beam, double radial_offset_m);

/// Intensity at a point given relative to the focus.
double intensity_at_point(const LaserBeam& beam, const Vec3& point_m);

/// Squared distance from a point to the beam axis.
double radial_distance_sq(const LaserBeam& beam, const Vec3& point_m);

/// Photon energy hc / lambda in joules.
double photon_energy_J(double wavelength_nm);

/// Phi = I lambda / (h c), photons m^-2 s^-1.
double photon_flux(double intensity_W_per_m2, double wavelength_nm);

/// Intensity seen by an atom crossing the beam on a straight chord
/// perpendicular to the axis.
struct TransitProfile {
    std::vector<double> time_s;
    std::vector<double> intensity_W_per_m2;
    double transit_time_s = 0.0;  // 1/e^2 crossing time 2 w0 / v

    /// Simpson integral of I dt over the sampled window.
    double integrated() const;
};

/// Samples I(t) for t in [-T, T], T = span_waists w0 / v, closest approach at t = 0.
TransitProfile transit_profile(const LaserBeam& beam, double speed_m_per_s, double impact_parameter_m,
                               int samples = 401, double span_waists = 5.0);

/// Closed form of the full chord integral: I0 w0 sqrt(pi/2) / v exp(-2 b^2 / w0^2).
double chord_integral(const LaserBeam& beam, double speed_m_per_s, double impact_parameter_m);

}  // namespace ionload
