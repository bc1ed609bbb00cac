// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/ionization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "ionload/constants.hpp"
#include "ionload/error.hpp"

namespace ionload {

namespace {

constexpr int kChordNodes = 48;
constexpr double kChordSpanWaists = 4.5;

// Gauss-Legendre rule mapped to [-half, half].
void legendre_rule(int n, double half, std::vector<double>& x, std::vector<double>& w)
{
    x.clear();
    w.clear();
    auto push = [&](const auto& abscissa, const auto& weights) {
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            if (abscissa[i] == 0.0) {
                x.push_back(0.0);
                w.push_back(weights[i] * half);
                continue;
            }
            x.push_back(-abscissa[i] * half);
            w.push_back(weights[i] * half);
            x.push_back(abscissa[i] * half);
            w.push_back(weights[i] * half);
        }
    };
    switch (n) {
    case 16: {
        using G = boost::math::quadrature::gauss<double, 16>;
        push(G::abscissa(), G::weights());
        break;
    }
    case 24: {
        using G = boost::math::quadrature::gauss<double, 24>;
        push(G::abscissa(), G::weights());
        break;
    }
    case 40: {
        using G = boost::math::quadrature::gauss<double, 40>;
        push(G::abscissa(), G::weights());
        break;
    }
    case 48: {
        using G = boost::math::quadrature::gauss<double, 48>;
        push(G::abscissa(), G::weights());
        break;
    }
    case 64: {
        using G = boost::math::quadrature::gauss<double, 64>;
        push(G::abscissa(), G::weights());
        break;
    }
    default:
        throw DomainError("unsupported quadrature order " + std::to_string(n));
    }
}

// Standard-normal nodes on [-6, 6] with weights renormalized to sum to one.
void normal_rule(int n, std::vector<double>& z, std::vector<double>& w)
{
    legendre_rule(n, 6.0, z, w);
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        w[i] *= std::exp(-0.5 * z[i] * z[i]);
        total += w[i];
    }
    for (auto& wi : w) wi /= total;
}

void check_orthogonal(const LaserBeam& beam, const char* which)
{
    if (std::abs(dot(beam.axis, plume_axis)) > 1e-12)
        throw DomainError(std::string(which) + " beam must be orthogonal to the plume axis");
}

double first_step_saturation_parameter(const SchemeConfig& scheme)
{
    const double i_sat = two_level_saturation_intensity(scheme.first_step_beam.wavelength_nm,
                                                        scheme.first_step.linewidth_MHz * units::MHz);
    return peak_intensity(scheme.first_step_beam) / i_sat;
}

}  // namespace

void SchemeConfig::validate() const
{
    first_step.validate();
    first_step_beam.validate();
    second_step_beam.validate();
    check_orthogonal(first_step_beam, "first-step");
    check_orthogonal(second_step_beam, "second-step");
    if (!(capture_efficiency >= 0 && capture_efficiency <= 1))
        throw DomainError("capture_efficiency must lie in [0, 1]");
    if (trap_capacity < 1) throw DomainError("trap_capacity must be >= 1");
    if (!(retention_plateau_ions == 0 || retention_plateau_ions >= 1))
        throw DomainError("retention_plateau_ions must be 0 (disabled) or >= 1");
    if (const auto* nr = std::get_if<NonResonant>(&second_step)) {
        if (!(nr->cross_section_Mb >= 0)) throw DomainError("non-resonant cross-section must be >= 0");
    } else {
        std::get<Autoionizing>(second_step).profile.validate();
    }
}

SchemeConfig default_autoionizing_scheme(const AtomicCatalog& catalog)
{
    SchemeConfig s;
    s.first_step = catalog.transition("554");
    s.first_step_beam = {553.70185, 15.0 * units::uW, 35.0 * units::um, 0.0, {0.0, 1.0, 0.0}};
    const auto resonance = lookup_resonance(catalog, 389.74, 0.05);
    if (!resonance) throw DomainError("catalog has no resonance near 389.74 nm");
    const FanoProfile profile = make_fano_profile(*resonance, s.first_step_beam.wavelength_nm);
    s.second_step = Autoionizing{profile};
    const double lambda = 389.74779;
    const double nu = constants::speed_of_light / (lambda * units::nm);
    s.second_step_beam = {lambda, 1.08 * units::mW, 34.0 * units::um,
                          nu - profile.center_frequency_THz * units::THz, {0.0, 0.0, 1.0}};
    s.validate();
    return s;
}

SchemeConfig default_nonresonant_scheme(const AtomicCatalog& catalog)
{
    SchemeConfig s = default_autoionizing_scheme(catalog);
    s.second_step = NonResonant{75.0};
    s.second_step_beam = {405.0, 1.17 * units::mW, 35.0 * units::um, 0.0, {0.0, 0.0, 1.0}};
    s.validate();
    return s;
}

double second_step_cross_section(const SecondStepMode& mode, double detuning_Hz)
{
    if (const auto* nr = std::get_if<NonResonant>(&mode)) return units::megabarn_to_m2(nr->cross_section_Mb);
    return fano_cross_section(detuning_Hz, std::get<Autoionizing>(mode).profile);
}

double first_step_detuning_Hz(const NeutralAtom& atom, const SchemeConfig& scheme)
{
    const double doppler = atom.transverse_velocity_m_per_s / (scheme.first_step_beam.wavelength_nm * units::nm);
    return scheme.first_step_beam.detuning_Hz - atom.isotope.first_step_shift_MHz * units::MHz - doppler;
}

IonizationModel::IonizationModel(const SchemeConfig& scheme, int nodes) : scheme_(scheme)
{
    scheme_.validate();
    sigma_m2_ = second_step_cross_section(scheme_.second_step, scheme_.second_step_beam.detuning_Hz);
    s_peak_ = first_step_saturation_parameter(scheme_);
    phi_peak_ = photon_flux(peak_intensity(scheme_.second_step_beam), scheme_.second_step_beam.wavelength_nm);
    // Leaky first steps lose population to dark states.
    rho_scale_ = scheme_.first_step.ground_branching_ratio < 0.9 ? scheme_.first_step.ground_branching_ratio : 1.0;

    const double w1 = scheme_.first_step_beam.waist_m;
    const double w2 = scheme_.second_step_beam.waist_m;
    std::vector<double> x;
    legendre_rule(nodes, kChordSpanWaists * std::max(w1, w2), x, weight_);
    first_.resize(x.size());
    second_.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        first_[k] = std::exp(-2.0 * x[k] * x[k] / (w1 * w1));
        second_[k] = std::exp(-2.0 * x[k] * x[k] / (w2 * w2));
    }
}

ChordSums IonizationModel::chord(const Vec3& offset_m, double detuning_Hz) const
{
    const auto& b1 = scheme_.first_step_beam;
    const auto& b2 = scheme_.second_step_beam;
    // Only the offset transverse to the path matters.
    const double along = dot(offset_m, plume_axis);
    const Vec3 o{offset_m[0] - along * plume_axis[0], offset_m[1] - along * plume_axis[1],
                 offset_m[2] - along * plume_axis[2]};
    const double r1 = radial_distance_sq(b1, o);
    const double r2 = radial_distance_sq(b2, o);
    const double s0 = s_peak_ * std::exp(-2.0 * r1 / (b1.waist_m * b1.waist_m));
    const double phi0 = phi_peak_ * std::exp(-2.0 * r2 / (b2.waist_m * b2.waist_m));
    const double x = 2.0 * detuning_Hz / (scheme_.first_step.linewidth_MHz * units::MHz);
    const double lorentz = 1.0 + x * x;

    ChordSums out;
    for (std::size_t k = 0; k < weight_.size(); ++k) {
        const double s = s0 * first_[k];
        const double rho = 0.5 * s / (lorentz + s);
        out.excited_length += weight_[k] * rho;
        out.excited_flux += weight_[k] * rho * second_[k];
        out.flux += weight_[k] * second_[k];
    }
    out.excited_length *= rho_scale_;
    out.excited_flux *= rho_scale_ * phi0;
    out.flux *= phi0;
    return out;
}

IonizationResult IonizationModel::from_chord(const ChordSums& sums, double speed_m_per_s) const
{
    if (!(speed_m_per_s > 0)) throw DomainError("atom speed must be > 0");
    IonizationResult r;
    r.p_excite = sums.flux > 0 ? sums.excited_flux / sums.flux : 0.0;
    r.p_ionize_given_excited = -std::expm1(-sigma_m2_ * sums.flux / speed_m_per_s);
    r.p_ionize = -std::expm1(-sigma_m2_ * sums.excited_flux / speed_m_per_s);
    r.p_trap = scheme_.capture_efficiency * r.p_ionize;
    return r;
}

IonizationResult IonizationModel::evaluate(const NeutralAtom& atom) const
{
    return from_chord(chord(atom.offset_m, first_step_detuning_Hz(atom, scheme_)), atom.speed_m_per_s);
}

double IonizationModel::scattered_photons(const ChordSums& sums, double speed_m_per_s, double linewidth_MHz)
{
    return 2.0 * constants::pi * linewidth_MHz * units::MHz * sums.excited_length / speed_m_per_s;
}

double IonizationModel::scattered_photons(const ChordSums& sums, double speed_m_per_s) const
{
    return scattered_photons(sums, speed_m_per_s, scheme_.first_step.linewidth_MHz);
}

IonizationResult ionization_probability(const NeutralAtom& atom, const SchemeConfig& scheme)
{
    return IonizationModel(scheme, kChordNodes).evaluate(atom);
}

double retention_probability(int candidates, double plateau_ions)
{
    if (candidates < 0) throw DomainError("retention_probability: negative candidate count");
    if (candidates <= 1 || plateau_ions == 0) return 1.0;
    const double n = candidates;
    const double kept = -plateau_ions * std::expm1(n * std::log1p(-1.0 / plateau_ions));
    return std::min(1.0, kept / n);
}

double expected_retained(double mu, double plateau_ions, int trap_capacity)
{
    if (!(mu >= 0)) throw DomainError("expected_retained: mu must be >= 0");
    if (mu == 0) return 0.0;
    const boost::math::poisson_distribution<double> candidates(mu);
    const auto n_max = static_cast<int>(mu + 12.0 * std::sqrt(mu) + 30.0);
    double total = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double weight = boost::math::pdf(candidates, n);
        if (weight == 0.0) continue;
        const double q = retention_probability(n, plateau_ions);
        double kept;
        if (n <= trap_capacity) {
            kept = n * q;
        } else if (q >= 1.0) {
            kept = trap_capacity;
        } else {
            // E[min(X, cap)] = sum_{j < cap} P(X > j)
            const boost::math::binomial_distribution<double> retained(n, q);
            kept = 0.0;
            for (int j = 0; j < trap_capacity; ++j) kept += boost::math::cdf(boost::math::complement(retained, j));
        }
        total += weight * kept;
    }
    return total;
}

double expected_retained_uncapped(double mu, double plateau_ions)
{
    if (plateau_ions == 0) return mu;
    return -plateau_ions * std::expm1(-mu / plateau_ions);
}

PopulationAverages population_averages(const SchemeConfig& scheme, const PlumeModel& plume,
                                       std::span<const Isotope> isotopes)
{
    plume.validate();
    const IonizationModel model(scheme, kChordNodes);

    std::vector<double> pos, pos_w;
    legendre_rule(40, plume.window_half_width_m, pos, pos_w);
    const double area = 4.0 * plume.window_half_width_m * plume.window_half_width_m;

    std::vector<double> dop{0.0}, dop_w{1.0};
    if (plume.transverse_velocity_sigma_m_per_s > 0) normal_rule(16, dop, dop_w);

    const std::vector<double> speeds = SpeedSampler(plume.speed).nodes(64);
    const double speed_w = 1.0 / static_cast<double>(speeds.size());

    NeutralAtom atom;
    PopulationAverages out;
    for (const auto& iso : isotopes) {
        if (iso.natural_abundance == 0) continue;
        atom.isotope = iso;
        double iso_sum = 0.0;
        double iso_scatter = 0.0;
        for (std::size_t d = 0; d < dop.size(); ++d) {
            atom.transverse_velocity_m_per_s = plume.transverse_velocity_sigma_m_per_s * dop[d];
            const double detuning = first_step_detuning_Hz(atom, scheme);
            for (std::size_t i = 0; i < pos.size(); ++i) {
                for (std::size_t j = 0; j < pos.size(); ++j) {
                    const ChordSums sums = model.chord({0.0, pos[i], pos[j]}, detuning);
                    double p = 0.0, n = 0.0;
                    for (double v : speeds) {
                        p += model.from_chord(sums, v).p_ionize;
                        n += model.scattered_photons(sums, v);
                    }
                    const double w = dop_w[d] * pos_w[i] * pos_w[j] * speed_w;
                    iso_sum += w * p;
                    iso_scatter += w * n;
                }
            }
        }
        out.mean_p_ionize += iso.natural_abundance * iso_sum / area;
        out.mean_scattered_photons += iso.natural_abundance * iso_scatter / area;
    }
    return out;
}

double mean_ionization_probability(const SchemeConfig& scheme, const PlumeModel& plume,
                                   std::span<const Isotope> isotopes)
{
    return population_averages(scheme, plume, isotopes).mean_p_ionize;
}

namespace {

// E_Y[g(Y)] for the mean-one log-normal shot-to-shot multiplier.
template <class F>
double over_yield_spread(double spread, F&& g)
{
    if (spread <= 0) return g(1.0);
    const double s = std::sqrt(std::log1p(spread * spread));
    std::vector<double> z, w;
    normal_rule(40, z, w);
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) total += w[i] * g(std::exp(s * z[i] - 0.5 * s * s));
    return total;
}

ExpectedRate expected_from_mean_p(double mean_p, double fluence, const SchemeConfig& scheme,
                                  const PlumeModel& plume, double flux_scale)
{
    ExpectedRate r;
    r.mean_p_ionize = mean_p;
    const double atoms = flux_scale * neutral_yield_mean(fluence, plume);
    r.photoion_candidates = atoms * scheme.capture_efficiency * mean_p;
    r.direct_ions = direct_ion_yield(fluence, plume);
    r.ions_per_pulse = over_yield_spread(plume.yield_spread, [&](double y) {
        return expected_retained(r.photoion_candidates * y + r.direct_ions, scheme.retention_plateau_ions,
                                 scheme.trap_capacity);
    });
    return r;
}

}  // namespace

ExpectedRate expected_ions_per_pulse(double fluence_J_per_cm2, const SchemeConfig& scheme,
                                     const PlumeModel& plume, double flux_scale,
                                     std::span<const Isotope> isotopes)
{
    if (!(flux_scale >= 0)) throw DomainError("flux_scale must be >= 0");
    const double mean_p = mean_ionization_probability(scheme, plume, isotopes);
    return expected_from_mean_p(mean_p, fluence_J_per_cm2, scheme, plume, flux_scale);
}

double calibrate_capture_efficiency(double target_ions_per_pulse, double fluence_J_per_cm2,
                                    SchemeConfig scheme, const PlumeModel& plume,
                                    std::span<const Isotope> isotopes)
{
    if (!(target_ions_per_pulse > 0)) throw DomainError("calibration target must be > 0");
    const double mean_p = mean_ionization_probability(scheme, plume, isotopes);
    auto residual = [&](double c) {
        scheme.capture_efficiency = c;
        return expected_from_mean_p(mean_p, fluence_J_per_cm2, scheme, plume, 1.0).ions_per_pulse -
               target_ions_per_pulse;
    };
    const double lo = 0.0, hi = 1.0;
    if (residual(hi) < 0) throw DomainError("calibration target is unreachable with capture_efficiency <= 1");
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, lo, hi, residual(lo), residual(hi), boost::math::tools::eps_tolerance<double>(50), iterations);
    return 0.5 * (bracket.first + bracket.second);
}

}  // namespace ionload
