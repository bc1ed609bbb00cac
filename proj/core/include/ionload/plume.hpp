// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "ionload/atomic_data.hpp"
#include "ionload/beam.hpp"
#include "ionload/random.hpp"

namespace ionload {

/// Ablation fluence regimes: under-loading, isotope-selective, direct-ion.
enum class Region { I, II, III };

std::string to_string(Region region);

/*!
 * Flux-weighted shifted Maxwell-Boltzmann speed law
 * f(v) ~ v^3 exp(-(v - u)^2 / spread^2), parameterized by its mode.
 */
struct SpeedDistribution {
    double most_probable_m_per_s = 1200.0;
    double spread_m_per_s = 200.0;

    void validate() const;
    /// Flow velocity u that puts the mode at most_probable_m_per_s.
    double flow_speed() const;
    /// Unnormalized density.
    double density(double v) const;
};

/// Tabulated inverse-CDF sampler. Also exposes equal-probability quadrature nodes.
class SpeedSampler {
public:
    explicit SpeedSampler(const SpeedDistribution& dist, int table_size = 4096);

    double sample(Rng& rng) const;
    /// Speed at cumulative probability u in [0, 1].
    double quantile(double u) const;
    /// Midpoint-quantile nodes, each carrying weight 1/n.
    std::vector<double> nodes(int n) const;

private:
    std::vector<double> speeds_;
    std::vector<double> cdf_;
};

/// Phenomenological plume: fluence -> neutral yield through the ionization
/// window, direct-ion yield, and per-atom kinematics.
struct PlumeModel {
    double region1_max_J_per_cm2 = 0.30;
    double region2_max_J_per_cm2 = 0.45;

    // mean yield = yield_scale ((f - f0) / (f_ref - f0))^p above f0
    double yield_scale = 1.0e7;            // atoms per pulse through the window at f_ref
    double reference_fluence_J_per_cm2 = 0.45;
    double yield_threshold_J_per_cm2 = 0.24;
    double yield_exponent = 2.0;
    double yield_spread = 0.20;            // relative shot-to-shot spread (log-normal)

    double direct_ions_per_J_per_cm2 = 20.0;  // slope above region2_max

    double target_distance_m = 14.6e-3;
    SpeedDistribution speed;
    double transverse_velocity_sigma_m_per_s = 10.0;  // along the first-step beam
    double window_half_width_m = 100e-6;              // atoms cross a square window this wide

    void validate() const;
};

Region classify_region(double fluence_J_per_cm2, const PlumeModel& model);

/// Deterministic mean number of neutral atoms per pulse through the window.
double neutral_yield_mean(double fluence_J_per_cm2, const PlumeModel& model);

/// Mean-one log-normal multiplier with relative spread model.yield_spread.
double sample_yield_multiplier(const PlumeModel& model, Rng& rng);

struct NeutralYield {
    double mean = 0.0;
    double realized = 0.0;  // mean times a shot-to-shot multiplier
};

NeutralYield neutral_yield(double fluence_J_per_cm2, const PlumeModel& model, Rng& rng);

/// Expected ablation-produced ions per pulse reaching the trap; zero up to region2_max.
double direct_ion_yield(double fluence_J_per_cm2, const PlumeModel& model);

/// Non-zero direct-ion yield means isotope selectivity is lost.
inline bool selectivity_compromised(double fluence_J_per_cm2, const PlumeModel& model)
{
    return direct_ion_yield(fluence_J_per_cm2, model) > 0.0;
}

/// Plume propagation direction. Beams must be orthogonal to it.
inline constexpr Vec3 plume_axis{1.0, 0.0, 0.0};

struct NeutralAtom {
    Isotope isotope;
    double speed_m_per_s = 0.0;
    double arrival_time_s = 0.0;             // target_distance / speed
    double transverse_velocity_m_per_s = 0.0;
    Vec3 offset_m{0.0, 0.0, 0.0};            // closest approach to the beam crossing, plume_axis component 0
};

/// Draws atoms for a fixed plume and isotope table.
class AtomSampler {
public:
    AtomSampler(const PlumeModel& model, std::span<const Isotope> isotopes);

    NeutralAtom sample(Rng& rng) const;
    /// Isotope drawn by abundance alone.
    const Isotope& sample_isotope(Rng& rng) const;
    const SpeedSampler& speeds() const { return speeds_; }

private:
    PlumeModel model_;
    std::vector<Isotope> isotopes_;
    SpeedSampler speeds_;
    std::vector<double> cumulative_abundance_;
};

/// Convenience single draw; builds a sampler per call.
NeutralAtom sample_atom(const PlumeModel& model, std::span<const Isotope> isotopes, Rng& rng);

}  // namespace ionload
