// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace ionload::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact/recommended values, SI units.
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = planck / (2.0 * pi);        // J s
inline constexpr double speed_of_light = 299792458.0;      // m/s
inline constexpr double elementary_charge = 1.602176634e-19; // C

// hc in eV nm, the value photon energies are quoted against.
inline constexpr double hc_eV_nm = 1239.841984;

}  // namespace ionload::constants

namespace ionload::units {

inline constexpr double megabarn = 1e-22;         // m^2
inline constexpr double per_cm2 = 1e4;            // 1 /cm^2 in 1 /m^2
inline constexpr double W_per_cm2 = 1e4;          // W/m^2
inline constexpr double mW = 1e-3;
inline constexpr double uW = 1e-6;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
inline constexpr double THz = 1e12;
inline constexpr double us = 1e-6;

constexpr double megabarn_to_m2(double mb) { return mb * megabarn; }
constexpr double m2_to_megabarn(double m2) { return m2 / megabarn; }

}  // namespace ionload::units
