// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ionload/error.hpp"
#include "ionload/plume.hpp"

using namespace ionload;

TEST_CASE("fluence regions")
{
    const PlumeModel m;
    CHECK(classify_region(0.45, m) == Region::II);
    CHECK(classify_region(0.30, m) == Region::II);
    CHECK(classify_region(0.2, m) == Region::I);
    CHECK(classify_region(0.0, m) == Region::I);
    CHECK(classify_region(0.6, m) == Region::III);
    CHECK(classify_region(0.4500001, m) == Region::III);
    CHECK_THROWS_AS(classify_region(-0.1, m), DomainError);
    CHECK(to_string(Region::III) == "III");
}

TEST_CASE("model validation")
{
    PlumeModel m;
    CHECK_NOTHROW(m.validate());
    m.region1_max_J_per_cm2 = 0.5;
    CHECK_THROWS(m.validate());
    m = PlumeModel{};
    m.target_distance_m = 0.0;
    CHECK_THROWS(m.validate());
    m = PlumeModel{};
    m.yield_scale = -1.0;
    CHECK_THROWS(m.validate());
}

TEST_CASE("neutral yield curve")
{
    const PlumeModel m;
    CHECK(neutral_yield_mean(0.0, m) == 0.0);
    CHECK(neutral_yield_mean(0.45, m) > neutral_yield_mean(0.30, m));
    CHECK(neutral_yield_mean(0.30, m) > neutral_yield_mean(0.15, m));
    CHECK(neutral_yield_mean(0.45, m) == doctest::Approx(m.yield_scale));

    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double y = neutral_yield_mean(i * 0.01, m);
        CHECK(y >= prev);
        prev = y;
    }
    // Region I stays small against the operating point.
    CHECK(neutral_yield_mean(0.29, m) < 0.06 * neutral_yield_mean(0.45, m));
}

TEST_CASE("yield realizations")
{
    PlumeModel m;
    m.yield_spread = 0.0;
    Rng a = make_stream(1, 0), b = make_stream(2, 0);
    CHECK(neutral_yield(0.45, m, a).realized == neutral_yield(0.45, m, b).realized);

    m.yield_spread = 0.2;
    Rng rng = make_stream(99, 0);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = sample_yield_multiplier(m, rng);
        CHECK_FALSE(x <= 0.0);
        sum += x;
        sum2 += x * x;
    }
    const double mu = sum / n;
    const double sd = std::sqrt(sum2 / n - mu * mu);
    CHECK(mu == doctest::Approx(1.0).epsilon(0.003));
    CHECK(sd == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("direct ions")
{
    const PlumeModel m;
    CHECK(direct_ion_yield(0.0, m) == 0.0);
    CHECK(direct_ion_yield(0.4, m) == 0.0);
    CHECK(direct_ion_yield(0.45, m) == 0.0);
    CHECK(direct_ion_yield(0.6, m) > 0.0);
    CHECK(direct_ion_yield(0.6, m) > direct_ion_yield(0.5, m));
    CHECK(selectivity_compromised(0.6, m));
    CHECK_FALSE(selectivity_compromised(0.45, m));
}

TEST_CASE("speed law")
{
    const SpeedDistribution d;
    const double u = d.flow_speed();
    // v^3 exp(-(v-u)^2/a^2) has its mode where 3/v = 2 (v - u) / a^2.
    const double v = d.most_probable_m_per_s, a = d.spread_m_per_s;
    CHECK(3.0 / v == doctest::Approx(2.0 * (v - u) / (a * a)).epsilon(1e-12));
    CHECK(d.density(v) > d.density(v - 1.0));
    CHECK(d.density(v) > d.density(v + 1.0));

    const SpeedSampler s(d);
    CHECK(s.quantile(0.0) >= 0.0);
    double prev = 0.0;
    for (double q = 0.0; q <= 1.0; q += 0.01) {
        CHECK(s.quantile(q) >= prev);
        prev = s.quantile(q);
    }
    const auto nodes = s.nodes(64);
    REQUIRE(nodes.size() == 64);
    double node_mean = 0.0;
    for (double x : nodes) node_mean += x / 64.0;
    Rng rng = make_stream(5, 0);
    double sample_mean = 0.0;
    for (int i = 0; i < 100000; ++i) sample_mean += s.sample(rng) / 100000.0;
    CHECK(node_mean == doctest::Approx(sample_mean).epsilon(0.005));
}

TEST_CASE("arrival times")
{
    const PlumeModel m;
    CHECK(m.target_distance_m / 1460.0 == doctest::Approx(10.0e-6).epsilon(1e-3));
    CHECK(m.target_distance_m / 973.0 == doctest::Approx(15.0e-6).epsilon(1e-3));

    const auto& isotopes = default_barium_catalog().isotopes();
    const AtomSampler sampler(m, isotopes);
    Rng rng = make_stream(20240612, 7);
    int in_window = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto atom = sampler.sample(rng);
        CHECK_FALSE(atom.speed_m_per_s <= 0.0);
        if (i < 100) {
            CHECK(atom.arrival_time_s == doctest::Approx(m.target_distance_m / atom.speed_m_per_s).epsilon(1e-14));
            CHECK(atom.offset_m[0] == 0.0);
            CHECK(std::abs(atom.offset_m[1]) <= m.window_half_width_m);
            CHECK(std::abs(atom.offset_m[2]) <= m.window_half_width_m);
        }
        if (atom.arrival_time_s >= 10e-6 && atom.arrival_time_s <= 15e-6) ++in_window;
    }
    CHECK(static_cast<double>(in_window) / n >= 0.6);
}

TEST_CASE("isotope sampling")
{
    const PlumeModel m;
    const Isotope only{138, 1.0, 0.0};
    const AtomSampler single(m, std::span<const Isotope>(&only, 1));
    Rng rng = make_stream(3, 0);
    for (int i = 0; i < 1000; ++i) CHECK(single.sample(rng).isotope.mass_number == 138);

    const auto& isotopes = default_barium_catalog().isotopes();
    const AtomSampler sampler(m, isotopes);
    std::map<int, long> counts;
    const long n = 1000000;
    Rng r2 = make_stream(11, 0);
    for (long i = 0; i < n; ++i) ++counts[sampler.sample_isotope(r2).mass_number];
    for (const auto& iso : isotopes) {
        const double p = iso.natural_abundance;
        const double sigma = std::sqrt(n * p * (1 - p));
        CAPTURE(iso.mass_number);
        CHECK(std::abs(counts[iso.mass_number] - n * p) <= 3.0 * sigma);
    }
}

TEST_CASE("transverse velocity spread")
{
    const PlumeModel m;
    const AtomSampler sampler(m, default_barium_catalog().isotopes());
    Rng rng = make_stream(17, 0);
    double sum2 = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const double vt = sampler.sample(rng).transverse_velocity_m_per_s;
        sum2 += vt * vt;
    }
    CHECK(std::sqrt(sum2 / n) == doctest::Approx(m.transverse_velocity_sigma_m_per_s).epsilon(0.02));
    // 10 m/s at 554 nm is 18 MHz, about one natural linewidth.
    CHECK(m.transverse_velocity_sigma_m_per_s / 553.70185e-9 < 3.0 * 19.02e6);
}

TEST_CASE("seeded streams are reproducible")
{
    const PlumeModel m;
    const auto& isotopes = default_barium_catalog().isotopes();
    Rng a = make_stream(42, 3), b = make_stream(42, 3), c = make_stream(42, 4);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = sample_atom(m, isotopes, a);
        const auto y = sample_atom(m, isotopes, b);
        const auto z = sample_atom(m, isotopes, c);
        CHECK(x.speed_m_per_s == y.speed_m_per_s);
        CHECK(x.offset_m == y.offset_m);
        CHECK(x.isotope == y.isotope);
        differs = differs || x.speed_m_per_s != z.speed_m_per_s;
    }
    CHECK(differs);
    CHECK(seed_path(42, 3) == "42/3");
}
