// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/plume.hpp"

#include <algorithm>
#include <cmath>

#include "ionload/error.hpp"

namespace ionload {

std::string to_string(Region region)
{
    switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    }
    return "?";
}

void SpeedDistribution::validate() const
{
    if (!(most_probable_m_per_s > 0)) throw DomainError("SpeedDistribution: most-probable speed must be > 0");
    if (!(spread_m_per_s > 0)) throw DomainError("SpeedDistribution: spread must be > 0");
}

double SpeedDistribution::flow_speed() const
{
    // d/dv [3 ln v - (v-u)^2/a^2] = 0 at the mode.
    const double a = spread_m_per_s;
    return most_probable_m_per_s - 1.5 * a * a / most_probable_m_per_s;
}

double SpeedDistribution::density(double v) const
{
    if (v <= 0) return 0.0;
    const double x = (v - flow_speed()) / spread_m_per_s;
    return v * v * v * std::exp(-x * x);
}

SpeedSampler::SpeedSampler(const SpeedDistribution& dist, int table_size)
{
    dist.validate();
    const double vmax = std::max(dist.flow_speed(), dist.most_probable_m_per_s) + 8.0 * dist.spread_m_per_s;
    const auto n = static_cast<std::size_t>(std::max(table_size, 16));
    speeds_.resize(n + 1);
    cdf_.resize(n + 1);
    speeds_[0] = 0.0;
    cdf_[0] = 0.0;
    double prev = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double v = vmax * static_cast<double>(i) / static_cast<double>(n);
        const double mid = dist.density(0.5 * (v + speeds_[i - 1]));
        const double f = dist.density(v);
        // Simpson on each cell.
        const double h = v - speeds_[i - 1];
        speeds_[i] = v;
        cdf_[i] = cdf_[i - 1] + h * (prev + 4.0 * mid + f) / 6.0;
        prev = f;
    }
    const double total = cdf_.back();
    for (auto& c : cdf_) c /= total;
}

double SpeedSampler::quantile(double u) const
{
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return speeds_.front();
    if (it == cdf_.end()) return speeds_.back();
    const auto i = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return speeds_[i - 1] + t * (speeds_[i] - speeds_[i - 1]);
}

double SpeedSampler::sample(Rng& rng) const
{
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double v = 0.0;
    while (!(v > 0)) v = quantile(uniform(rng));
    return v;
}

std::vector<double> SpeedSampler::nodes(int n) const
{
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = quantile((i + 0.5) / n);
    return out;
}

void PlumeModel::validate() const
{
    if (!(region1_max_J_per_cm2 > 0 && region1_max_J_per_cm2 < region2_max_J_per_cm2))
        throw DomainError("PlumeModel: need 0 < region1_max < region2_max");
    if (!(yield_scale >= 0)) throw DomainError("PlumeModel: yield_scale must be >= 0");
    if (!(reference_fluence_J_per_cm2 > yield_threshold_J_per_cm2))
        throw DomainError("PlumeModel: reference fluence must exceed the yield threshold");
    if (!(yield_threshold_J_per_cm2 >= 0)) throw DomainError("PlumeModel: yield threshold must be >= 0");
    if (!(yield_exponent > 0)) throw DomainError("PlumeModel: yield exponent must be > 0");
    if (!(yield_spread >= 0)) throw DomainError("PlumeModel: yield spread must be >= 0");
    if (!(direct_ions_per_J_per_cm2 >= 0)) throw DomainError("PlumeModel: direct-ion slope must be >= 0");
    if (!(target_distance_m > 0)) throw DomainError("PlumeModel: target distance must be > 0");
    if (!(transverse_velocity_sigma_m_per_s >= 0))
        throw DomainError("PlumeModel: transverse velocity spread must be >= 0");
    if (!(window_half_width_m > 0)) throw DomainError("PlumeModel: window half-width must be > 0");
    speed.validate();
}

namespace {

void check_fluence(double fluence)
{
    if (!(fluence >= 0)) throw DomainError("fluence must be non-negative");
}

}  // namespace

Region classify_region(double fluence_J_per_cm2, const PlumeModel& model)
{
    check_fluence(fluence_J_per_cm2);
    if (fluence_J_per_cm2 < model.region1_max_J_per_cm2) return Region::I;
    if (fluence_J_per_cm2 <= model.region2_max_J_per_cm2) return Region::II;
    return Region::III;
}

double neutral_yield_mean(double fluence_J_per_cm2, const PlumeModel& model)
{
    check_fluence(fluence_J_per_cm2);
    const double f0 = model.yield_threshold_J_per_cm2;
    if (fluence_J_per_cm2 <= f0) return 0.0;
    const double x = (fluence_J_per_cm2 - f0) / (model.reference_fluence_J_per_cm2 - f0);
    return model.yield_scale * std::pow(x, model.yield_exponent);
}

double sample_yield_multiplier(const PlumeModel& model, Rng& rng)
{
    if (model.yield_spread <= 0) return 1.0;
    const double s2 = std::log1p(model.yield_spread * model.yield_spread);
    std::normal_distribution<double> normal(0.0, 1.0);
    return std::exp(std::sqrt(s2) * normal(rng) - 0.5 * s2);
}

NeutralYield neutral_yield(double fluence_J_per_cm2, const PlumeModel& model, Rng& rng)
{
    NeutralYield y;
    y.mean = neutral_yield_mean(fluence_J_per_cm2, model);
    y.realized = y.mean * sample_yield_multiplier(model, rng);
    return y;
}

double direct_ion_yield(double fluence_J_per_cm2, const PlumeModel& model)
{
    check_fluence(fluence_J_per_cm2);
    const double excess = fluence_J_per_cm2 - model.region2_max_J_per_cm2;
    return excess > 0 ? model.direct_ions_per_J_per_cm2 * excess : 0.0;
}

AtomSampler::AtomSampler(const PlumeModel& model, std::span<const Isotope> isotopes)
    : model_(model), isotopes_(isotopes.begin(), isotopes.end()), speeds_(model.speed)
{
    model_.validate();
    if (isotopes_.empty()) throw DomainError("AtomSampler: empty isotope table");
    double total = 0.0;
    for (const auto& iso : isotopes_) {
        total += iso.natural_abundance;
        cumulative_abundance_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("AtomSampler: isotope abundances must sum to 1");
}

const Isotope& AtomSampler::sample_isotope(Rng& rng) const
{
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double u = uniform(rng) * cumulative_abundance_.back();
    auto it = std::upper_bound(cumulative_abundance_.begin(), cumulative_abundance_.end(), u);
    const auto idx = std::min(static_cast<std::size_t>(it - cumulative_abundance_.begin()), isotopes_.size() - 1);
    return isotopes_[idx];
}

NeutralAtom AtomSampler::sample(Rng& rng) const
{
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    NeutralAtom atom;
    atom.isotope = sample_isotope(rng);

    atom.speed_m_per_s = speeds_.sample(rng);
    atom.arrival_time_s = model_.target_distance_m / atom.speed_m_per_s;
    atom.transverse_velocity_m_per_s = model_.transverse_velocity_sigma_m_per_s * normal(rng);
    const double L = model_.window_half_width_m;
    atom.offset_m = {0.0, L * (2.0 * uniform(rng) - 1.0), L * (2.0 * uniform(rng) - 1.0)};
    return atom;
}

NeutralAtom sample_atom(const PlumeModel& model, std::span<const Isotope> isotopes, Rng& rng)
{
    return AtomSampler(model, isotopes).sample(rng);
}

}  // namespace ionload
