// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ionload/constants.hpp"
#include "ionload/error.hpp"
#include "ionload/random.hpp"

namespace ionload {

void Campaign::validate() const
{
    if (n_pulses < 1) throw DomainError("campaign: n_pulses must be >= 1");
    if (!(fluence_J_per_cm2 >= 0)) throw DomainError("campaign: fluence must be >= 0");
    if (!(flux_scale >= 0)) throw DomainError("campaign: flux_scale must be >= 0");
    if (max_tracked_atoms < 1) throw DomainError("campaign: max_tracked_atoms must be >= 1");
    if (!(fluorescence_counts_per_photon >= 0))
        throw DomainError("campaign: fluorescence_counts_per_photon must be >= 0");
    scheme.validate();
    plume.validate();
}

int PulseOutcome::total_trapped() const
{
    int n = 0;
    for (const auto& [mass, count] : trapped_by_isotope) n += count;
    return n;
}

int PulseOutcome::trapped(int mass_number) const
{
    const auto it = trapped_by_isotope.find(mass_number);
    return it == trapped_by_isotope.end() ? 0 : it->second;
}

CampaignRunner::CampaignRunner(const Campaign& campaign)
    : campaign_(campaign), model_(campaign.scheme), sampler_(campaign.plume, campaign.isotopes)
{
    campaign_.validate();
}

PulseOutcome CampaignRunner::run_pulse(int pulse_index) const
{
    if (pulse_index < 0) throw DomainError("run_pulse: negative pulse index");
    const Campaign& c = campaign_;
    Rng rng = make_stream(c.master_seed, static_cast<std::uint64_t>(pulse_index));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    PulseOutcome out;
    out.pulse_index = pulse_index;
    out.seed_path = seed_path(c.master_seed, static_cast<std::uint64_t>(pulse_index));

    const double multiplier = sample_yield_multiplier(c.plume, rng);
    const double mean_atoms = c.flux_scale * neutral_yield_mean(c.fluence_J_per_cm2, c.plume) * multiplier;
    if (mean_atoms > 0) out.neutral_atoms = std::poisson_distribution<long long>(mean_atoms)(rng);

    const long long tracked = std::min<long long>(out.neutral_atoms, c.max_tracked_atoms);
    const double weight = tracked > 0 ? static_cast<double>(out.neutral_atoms) / static_cast<double>(tracked) : 0.0;
    const double capture = c.scheme.capture_efficiency;

    std::vector<int> candidates;
    std::map<int, double> photoion_mean;  // weighted subsample: Poisson per isotope
    double scattered = 0.0;
    for (long long i = 0; i < tracked; ++i) {
        const NeutralAtom atom = sampler_.sample(rng);
        const ChordSums sums = model_.chord(atom.offset_m, first_step_detuning_Hz(atom, c.scheme));
        const IonizationResult r = model_.from_chord(sums, atom.speed_m_per_s);
        scattered += weight * model_.scattered_photons(sums, atom.speed_m_per_s);
        if (tracked == out.neutral_atoms) {
            if (uniform(rng) < capture * r.p_ionize) candidates.push_back(atom.isotope.mass_number);
        } else {
            photoion_mean[atom.isotope.mass_number] += weight * capture * r.p_ionize;
        }
    }
    for (const auto& [mass, mu] : photoion_mean) {
        if (mu <= 0) continue;
        const long long n = std::poisson_distribution<long long>(mu)(rng);
        candidates.insert(candidates.end(), static_cast<std::size_t>(n), mass);
    }

    const double direct_mean = direct_ion_yield(c.fluence_J_per_cm2, c.plume);
    if (direct_mean > 0) {
        out.direct_ions = std::poisson_distribution<int>(direct_mean)(rng);
        for (int i = 0; i < out.direct_ions; ++i) candidates.push_back(sampler_.sample_isotope(rng).mass_number);
    }
    out.candidates = static_cast<int>(candidates.size());

    // Space-charge retention, then a uniformly random retained subset.
    int kept = 0;
    if (!candidates.empty()) {
        const double q = retention_probability(out.candidates, c.scheme.retention_plateau_ions);
        kept = q >= 1.0 ? out.candidates : std::binomial_distribution<int>(out.candidates, q)(rng);
        kept = std::min(kept, c.scheme.trap_capacity);
        for (int i = 0; i < kept; ++i) {
            std::uniform_int_distribution<int> pick(i, out.candidates - 1);
            std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(pick(rng))]);
            ++out.trapped_by_isotope[candidates[static_cast<std::size_t>(i)]];
        }
    }

    const double expected_counts = c.fluorescence_counts_per_photon * scattered;
    if (expected_counts > 0) out.neutral_fluorescence_counts = std::poisson_distribution<long long>(expected_counts)(rng);
    return out;
}

PulseOutcome run_pulse(const Campaign& campaign, int pulse_index)
{
    return CampaignRunner(campaign).run_pulse(pulse_index);
}

CampaignSummary summarize(const std::vector<PulseOutcome>& pulses, int target_mass_number)
{
    if (pulses.empty()) throw DomainError("summarize: no pulses");
    CampaignSummary s;
    s.n_pulses = static_cast<int>(pulses.size());
    std::vector<double> ions, fluor, direct;
    std::vector<int> counts;
    ions.reserve(pulses.size());
    for (const auto& p : pulses) {
        const int n = p.total_trapped();
        ions.push_back(n);
        counts.push_back(n);
        fluor.push_back(static_cast<double>(p.neutral_fluorescence_counts));
        direct.push_back(p.direct_ions);
        if (n > 0) s.success_fraction += 1.0;
        if (static_cast<std::size_t>(n) >= s.histogram.size()) s.histogram.resize(static_cast<std::size_t>(n) + 1, 0);
        ++s.histogram[static_cast<std::size_t>(n)];
        for (const auto& [mass, k] : p.trapped_by_isotope) {
            s.ions_by_isotope[mass] += k;
            s.total_ions += k;
            if (mass != target_mass_number) s.impurity_ions += k;
            if (n >= 2) {
                s.multi_ion_total += k;
                if (mass != target_mass_number) s.multi_ion_impurity += k;
            }
        }
    }
    s.success_fraction /= s.n_pulses;
    s.mean = mean(ions);
    s.median = median(ions);
    s.mean_fluorescence = mean(fluor);
    s.mean_direct_ions = mean(direct);
    if (s.n_pulses >= 2) {
        s.sem = sem(ions);
        s.sem_fluorescence = sem(fluor);
    }
    s.poisson = poisson_mle(counts);
    return s;
}

CampaignResult run_campaign(const Campaign& campaign, int threads)
{
    const CampaignRunner runner(campaign);
    CampaignResult result;
    result.pulses.resize(static_cast<std::size_t>(campaign.n_pulses));

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(campaign.n_pulses));
    if (workers <= 1) {
        for (int i = 0; i < campaign.n_pulses; ++i) result.pulses[static_cast<std::size_t>(i)] = runner.run_pulse(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = next++; i < campaign.n_pulses; i = next++)
                        result.pulses[static_cast<std::size_t>(i)] = runner.run_pulse(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = campaign.n_pulses;
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    result.summary = summarize(result.pulses);
    return result;
}

std::vector<SweepPoint> sweep(const Campaign& campaign, SweepVariable variable, const std::vector<double>& grid,
                              int threads)
{
    if (grid.empty()) throw DomainError("sweep: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0)) throw DomainError("sweep: grid values must be >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("sweep: grid must be strictly ascending");
    }
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double x : grid) {
        Campaign c = campaign;
        if (variable == SweepVariable::second_step_power)
            c.scheme.second_step_beam.power_W = x * units::mW;
        else
            c.fluence_J_per_cm2 = x;
        SweepPoint p;
        p.x = x;
        p.summary = run_campaign(c, threads).summary;
        p.expected_ions_per_pulse =
            expected_ions_per_pulse(c.fluence_J_per_cm2, c.scheme, c.plume, c.flux_scale, c.isotopes).ions_per_pulse;
        p.region = classify_region(c.fluence_J_per_cm2, c.plume);
        p.selectivity_compromised = selectivity_compromised(c.fluence_J_per_cm2, c.plume);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace ionload
