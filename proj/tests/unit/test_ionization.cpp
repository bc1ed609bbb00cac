// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "ionload/constants.hpp"
#include "ionload/error.hpp"
#include "ionload/ionization.hpp"
#include "ionload/lineshape.hpp"

using namespace ionload;

namespace {

NeutralAtom centered_atom(double speed = 1200.0)
{
    NeutralAtom a;
    a.isotope = default_barium_catalog().isotope(138);
    a.speed_m_per_s = speed;
    a.arrival_time_s = 14.6e-3 / speed;
    return a;
}

// Simpson rule along the plume axis, independent of the model's Gauss-Legendre table.
ChordSums simpson_chord(const SchemeConfig& s, const Vec3& offset, double detuning_Hz)
{
    const double i_sat = two_level_saturation_intensity(s.first_step_beam.wavelength_nm, s.first_step.linewidth_MHz * 1e6);
    const double half = 8.0 * std::max(s.first_step_beam.waist_m, s.second_step_beam.waist_m);
    const int n = 4000;
    const double h = 2.0 * half / n;
    ChordSums out;
    for (int k = 0; k <= n; ++k) {
        const Vec3 p{-half + k * h, offset[1], offset[2]};
        const double sat = intensity_at_point(s.first_step_beam, p) / i_sat;
        const double rho = excited_fraction(sat, detuning_Hz, s.first_step.linewidth_MHz * 1e6);
        const double phi = photon_flux(intensity_at_point(s.second_step_beam, p), s.second_step_beam.wavelength_nm);
        const double w = (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0)) * h / 3.0;
        out.excited_flux += w * rho * phi;
        out.flux += w * phi;
        out.excited_length += w * rho;
    }
    return out;
}

double rate(const SchemeConfig& s, double fluence = 0.45)
{
    return expected_ions_per_pulse(fluence, s, PlumeModel{}).ions_per_pulse;
}

SchemeConfig with_power(SchemeConfig s, double mW)
{
    s.second_step_beam.power_W = mW * 1e-3;
    return s;
}

}  // namespace

TEST_CASE("default schemes")
{
    const auto ai = default_autoionizing_scheme();
    CHECK(ai.autoionizing());
    CHECK(ai.mode_name() == "autoionizing");
    CHECK(ai.first_step.label == "554");
    CHECK(ai.first_step_beam.wavelength_nm == 553.70185);
    CHECK(ai.second_step_beam.wavelength_nm == 389.74779);
    CHECK(ai.second_step_beam.waist_m == doctest::Approx(34e-6));
    CHECK(ai.second_step_beam.power_W == doctest::Approx(1.08e-3));
    CHECK(ai.trap_capacity == 13);
    CHECK(ai.capture_efficiency == default_capture_efficiency);

    const auto nr = default_nonresonant_scheme();
    CHECK_FALSE(nr.autoionizing());
    CHECK(nr.second_step_beam.wavelength_nm == 405.0);
    CHECK(nr.second_step_beam.waist_m == doctest::Approx(35e-6));
    CHECK(nr.second_step_beam.power_W == doctest::Approx(1.17e-3));
}

TEST_CASE("scheme validation")
{
    auto s = default_autoionizing_scheme();
    s.capture_efficiency = 1.5;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = default_autoionizing_scheme();
    s.trap_capacity = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = default_autoionizing_scheme();
    s.second_step_beam.axis = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("second-step cross-sections")
{
    CHECK(second_step_cross_section(NonResonant{75.0}, 0.0) == doctest::Approx(75e-22));
    CHECK(second_step_cross_section(NonResonant{75.0}, 300e9) == doctest::Approx(75e-22));
    const auto r = *lookup_resonance(default_barium_catalog(), 389.74, 0.01);
    const SecondStepMode ai = Autoionizing{make_fano_profile(r)};
    CHECK(second_step_cross_section(ai, 0.0) == doctest::Approx(550e-22).epsilon(1e-5));
    CHECK(second_step_cross_section(ai, 0.0) / second_step_cross_section(NonResonant{75.0}, 0.0) ==
          doctest::Approx(7.33).epsilon(1e-3));
    CHECK(520.0 / 75.0 == doctest::Approx(6.9).epsilon(0.01));
}

TEST_CASE("default beam sits near the resonance center")
{
    const auto s = default_autoionizing_scheme();
    CHECK(std::abs(s.second_step_beam.detuning_Hz) < 3e9);
    const IonizationModel m(s);
    CHECK(m.sigma_m2() > 0.99 * 550e-22);
}

TEST_CASE("first-step detuning")
{
    const auto s = default_autoionizing_scheme();
    auto a = centered_atom();
    a.isotope = default_barium_catalog().isotope(136);
    a.transverse_velocity_m_per_s = 5.0;
    const double oracle = -a.isotope.first_step_shift_MHz * 1e6 - 5.0 / 553.70185e-9;
    CHECK(first_step_detuning_Hz(a, s) == doctest::Approx(oracle));
}

TEST_CASE("chord sums match an independent Simpson integral")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> pos(-100e-6, 100e-6), det(-200e6, 200e6);
    for (const auto& s : {default_autoionizing_scheme(), default_nonresonant_scheme()}) {
        const IonizationModel m(s);
        for (int i = 0; i < 25; ++i) {
            const Vec3 off{0.0, pos(rng), pos(rng)};
            const double d = det(rng);
            const auto a = m.chord(off, d);
            const auto b = simpson_chord(s, off, d);
            CHECK(a.excited_flux == doctest::Approx(b.excited_flux).epsilon(1e-6));
            CHECK(a.flux == doctest::Approx(b.flux).epsilon(1e-6));
            CHECK(a.excited_length == doctest::Approx(b.excited_length).epsilon(1e-6));
        }
    }
}

TEST_CASE("zero second-step power")
{
    const auto r = ionization_probability(centered_atom(), with_power(default_autoionizing_scheme(), 0.0));
    CHECK(r.p_ionize == 0.0);
    CHECK(r.p_trap == 0.0);
}

TEST_CASE("saturated first step at the saturation intensity")
{
    auto s = default_autoionizing_scheme();
    s.first_step_beam.power_W = 100.0;  // s in the millions, rho_ee = 1/2 wherever the 390 nm beam matters
    s.second_step_beam.detuning_Hz = 0.0;
    const double i_sat = saturation_intensity(769.211, 60.4e9);
    s.second_step_beam.power_W = saturation_power(i_sat, s.second_step_beam.waist_m);
    const double v = 1200.0;
    const double phi = photon_flux(i_sat, s.second_step_beam.wavelength_nm);
    const double sigma = fano_cross_section(0.0, std::get<Autoionizing>(s.second_step).profile);
    const double closed = -std::expm1(-0.5 * sigma * phi * s.second_step_beam.waist_m * std::sqrt(M_PI / 2.0) / v);
    const auto r = ionization_probability(centered_atom(v), s);
    CHECK(r.p_ionize == doctest::Approx(closed).epsilon(1e-3));
    CHECK(r.p_ionize == doctest::Approx(1.22e-3).epsilon(0.01));
    CHECK(r.p_excite == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(r.p_ionize <= r.p_ionize_given_excited);
}

TEST_CASE("off-resonant isotope is suppressed")
{
    auto s = default_autoionizing_scheme();
    const double i_sat = two_level_saturation_intensity(553.70185, 19.02e6);
    s.first_step_beam.power_W = i_sat * M_PI * std::pow(s.first_step_beam.waist_m, 2) / 2.0;  // s = 1 on axis
    auto on = centered_atom();
    auto off = on;
    off.isotope.first_step_shift_MHz = -10.0 * 19.02;
    const double p_on = ionization_probability(on, s).p_ionize;
    const double p_off = ionization_probability(off, s).p_ionize;
    CHECK(p_on / p_off >= 100.0);
    // Weak second step: the ratio is that of the chord-integrated excited flux.
    const double oracle = simpson_chord(s, {0.0, 0.0, 0.0}, 0.0).excited_flux /
                          simpson_chord(s, {0.0, 0.0, 0.0}, 10.0 * 19.02e6).excited_flux;
    CHECK(p_on / p_off == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("p_ionize is linear in sigma at small p")
{
    auto s = default_nonresonant_scheme();
    const auto p1 = ionization_probability(centered_atom(), s).p_ionize;
    s.second_step = NonResonant{150.0};
    const auto p2 = ionization_probability(centered_atom(), s).p_ionize;
    CHECK(p2 / p1 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("result invariants over random atoms")
{
    const auto s = default_autoionizing_scheme();
    const IonizationModel m(s);
    const AtomSampler sampler(PlumeModel{}, default_barium_catalog().isotopes());
    Rng rng = make_stream(8, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto r = m.evaluate(sampler.sample(rng));
        CHECK(r.p_excite >= 0.0);
        CHECK(r.p_excite <= 0.5);
        CHECK(r.p_ionize >= 0.0);
        CHECK(r.p_ionize <= r.p_ionize_given_excited);
        CHECK(r.p_ionize_given_excited <= 1.0);
        CHECK(r.p_trap == doctest::Approx(s.capture_efficiency * r.p_ionize));
    }
}

TEST_CASE("scattered photons")
{
    ChordSums sums;
    sums.excited_length = 1e-5;
    CHECK(IonizationModel::scattered_photons(sums, 1000.0, 19.02) ==
          doctest::Approx(2.0 * M_PI * 19.02e6 * 1e-8));
}

TEST_CASE("retention")
{
    CHECK(retention_probability(0, 7.1) == 1.0);
    CHECK(retention_probability(1, 7.1) == 1.0);
    CHECK(retention_probability(50, 0.0) == 1.0);
    for (int n = 2; n < 60; ++n) {
        const double q = retention_probability(n, 7.1);
        CHECK(q <= 1.0);
        CHECK(n * q == doctest::Approx(7.1 * (1.0 - std::pow(1.0 - 1.0 / 7.1, n))));
        CHECK(q <= retention_probability(n - 1, 7.1));
    }
    CHECK_THROWS_AS(retention_probability(-1, 7.1), DomainError);
}

TEST_CASE("expected retained ions")
{
    CHECK(expected_retained(0.0, 7.1, 13) == 0.0);
    for (double mu : {0.1, 1.0, 4.0, 10.0, 30.0})
        CHECK(expected_retained(mu, 7.1, 100000) == doctest::Approx(expected_retained_uncapped(mu, 7.1)).epsilon(1e-9));
    CHECK(expected_retained_uncapped(5.0, 0.0) == 5.0);
    CHECK(expected_retained(5.0, 0.0, 100000) == doctest::Approx(5.0).epsilon(1e-9));
    // Capacity 1: at least one candidate retained.
    CHECK(expected_retained(2.0, 0.0, 1) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-9));
    CHECK(expected_retained(1e-4, 7.1, 13) == doctest::Approx(1e-4).epsilon(1e-3));
    CHECK(expected_retained(500.0, 7.1, 13) <= 13.0);
    CHECK_THROWS_AS(expected_retained(-1.0, 7.1, 13), DomainError);
}

TEST_CASE("quadrature average agrees with sampled atoms")
{
    const auto s = default_autoionizing_scheme();
    const PlumeModel plume;
    const auto avg = population_averages(s, plume);
    CHECK(mean_ionization_probability(s, plume) == avg.mean_p_ionize);

    const IonizationModel m(s);
    const AtomSampler sampler(plume, default_barium_catalog().isotopes());
    Rng rng = make_stream(2024, 1);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, photons = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto atom = sampler.sample(rng);
        const auto sums = m.chord(atom.offset_m, first_step_detuning_Hz(atom, s));
        const double p = m.from_chord(sums, atom.speed_m_per_s).p_ionize;
        sum += p;
        sum2 += p * p;
        photons += m.scattered_photons(sums, atom.speed_m_per_s);
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - avg.mean_p_ionize) < 3.0 * se);
    CHECK(photons / n == doctest::Approx(avg.mean_scattered_photons).epsilon(0.01));
}

TEST_CASE("calibrated operating point")
{
    const auto s = default_autoionizing_scheme();
    const PlumeModel plume;
    CHECK(rate(s) == doctest::Approx(4.48).epsilon(1e-5));
    CHECK(calibrate_capture_efficiency(4.48, 0.45, s, plume) == doctest::Approx(default_capture_efficiency).epsilon(1e-5));
    const auto r = expected_ions_per_pulse(0.45, s, plume);
    CHECK(r.direct_ions == 0.0);
    CHECK(r.photoion_candidates == doctest::Approx(plume.yield_scale * s.capture_efficiency * r.mean_p_ionize));
}

TEST_CASE("autoionizing curve saturates at the configured plateau")
{
    const auto s = default_autoionizing_scheme();
    CHECK(rate(with_power(s, 60.0)) == doctest::Approx(7.10).epsilon(0.06 / 7.10));
    double prev = 0.0, prev_step = 1e9;
    for (double p = 0.1; p <= 3.0 + 1e-9; p += 0.1) {
        const double r = rate(with_power(s, p));
        CHECK(r > prev);
        CHECK(r - prev <= prev_step + 1e-9);
        prev_step = r - prev;
        prev = r;
    }
}

TEST_CASE("non-resonant curve is close to linear up to 1.5 mW")
{
    const auto s = default_nonresonant_scheme();
    std::vector<double> x, y;
    for (double p = 0.0; p <= 1.5 + 1e-9; p += 0.1) {
        x.push_back(p);
        y.push_back(rate(with_power(s, p)));
    }
    // Unweighted least-squares line.
    const double n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double m = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double c = (sy - m * sx) / n;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] - (m * x[i] + c)));
    CHECK(worst / (y.back() - y.front()) < 0.02);
}

TEST_CASE("low-power proportionality in sigma and power")
{
    auto s = with_power(default_nonresonant_scheme(), 0.02);
    const double base = rate(s);
    CHECK(rate(with_power(s, 0.04)) / base == doctest::Approx(2.0).epsilon(0.01));
    s.second_step = NonResonant{150.0};
    CHECK(rate(s) / base == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("scheme ratio at equal photon flux")
{
    auto ai = with_power(default_autoionizing_scheme(), 0.02);
    ai.second_step_beam.detuning_Hz = 0.0;
    auto nr = default_nonresonant_scheme();
    nr.second_step_beam.waist_m = ai.second_step_beam.waist_m;
    nr.second_step_beam.power_W = ai.second_step_beam.power_W * ai.second_step_beam.wavelength_nm / 405.0;
    const double sigma_ratio = IonizationModel(ai).sigma_m2() / IonizationModel(nr).sigma_m2();
    CHECK(rate(ai) / rate(nr) == doctest::Approx(sigma_ratio).epsilon(0.02));
    CHECK(sigma_ratio == doctest::Approx(550.0 / 75.0).epsilon(1e-4));
}

TEST_CASE("rate is monotone in both powers and fluence")
{
    const auto s = default_autoionizing_scheme();
    double prev = -1.0;
    for (double uW : {0.0, 1.0, 5.0, 15.0, 50.0, 200.0}) {
        auto t = s;
        t.first_step_beam.power_W = uW * 1e-6;
        const double r = rate(t);
        CHECK(r >= prev);
        prev = r;
    }
    prev = -1.0;
    for (double f = 0.0; f <= 0.7; f += 0.025) {
        const double r = rate(s, f);
        CHECK(r >= prev);
        prev = r;
    }
    CHECK(expected_ions_per_pulse(0.6, s, PlumeModel{}).direct_ions > 0.0);
}

TEST_CASE("leaky first step scales the excited fraction")
{
    auto s = default_autoionizing_scheme();
    const auto p554 = ionization_probability(centered_atom(), s).p_ionize;
    s.first_step.ground_branching_ratio = 0.38;
    const auto p_leaky = ionization_probability(centered_atom(), s).p_ionize;
    CHECK(p_leaky / p554 == doctest::Approx(0.38).epsilon(1e-3));
}
