// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ionload/analysis.hpp"
#include "ionload/ionization.hpp"
#include "ionload/plume.hpp"

namespace ionload {

/// Detected counts per first-step scattering event, set so the default
/// autoionizing campaign averages about 36 counts per pulse.
inline constexpr double default_fluorescence_counts_per_photon = 3.521556e-06;

struct Campaign {
    int n_pulses = 266;
    SchemeConfig scheme = default_autoionizing_scheme();
    double fluence_J_per_cm2 = 0.45;
    PlumeModel plume;
    std::uint64_t master_seed = 20240612;
    double flux_scale = 1.0;                 // multiplies the neutral yield
    int max_tracked_atoms = 20000;           // heavier pulses track a weighted subsample
    double fluorescence_counts_per_photon = default_fluorescence_counts_per_photon;
    std::vector<Isotope> isotopes = default_barium_catalog().isotopes();

    void validate() const;
};

struct PulseOutcome {
    int pulse_index = 0;
    std::map<int, int> trapped_by_isotope;   // mass number -> ions, zero entries omitted
    long long neutral_fluorescence_counts = 0;
    int direct_ions = 0;                      // ablation ions among the candidates
    int candidates = 0;                       // captured before space-charge retention
    long long neutral_atoms = 0;              // atoms through the window
    std::string seed_path;

    int total_trapped() const;
    int trapped(int mass_number) const;
    bool operator==(const PulseOutcome&) const = default;
};

/// Reusable per-campaign state; run_pulse is const and thread-safe.
class CampaignRunner {
public:
    explicit CampaignRunner(const Campaign& campaign);

    const Campaign& campaign() const { return campaign_; }
    PulseOutcome run_pulse(int pulse_index) const;

private:
    Campaign campaign_;
    IonizationModel model_;
    AtomSampler sampler_;
};

PulseOutcome run_pulse(const Campaign& campaign, int pulse_index);

struct CampaignSummary {
    int n_pulses = 0;
    double mean = 0.0;
    double sem = 0.0;                   // 0 for a single pulse
    double median = 0.0;
    double success_fraction = 0.0;      // pulses with at least one ion
    std::vector<int> histogram;         // pulses per ion count 0..max
    PoissonFit poisson;
    double mean_fluorescence = 0.0;
    double sem_fluorescence = 0.0;
    double mean_direct_ions = 0.0;
    std::map<int, long long> ions_by_isotope;
    long long total_ions = 0;
    long long impurity_ions = 0;        // not the most abundant isotope
    long long multi_ion_total = 0;      // ions in pulses with >= 2 ions
    long long multi_ion_impurity = 0;
};

CampaignSummary summarize(const std::vector<PulseOutcome>& pulses, int target_mass_number = 138);

struct CampaignResult {
    std::vector<PulseOutcome> pulses;
    CampaignSummary summary;
};

/// Runs pulses 0..n-1 on up to `threads` workers (0: hardware concurrency).
/// Output order and content do not depend on the worker count.
CampaignResult run_campaign(const Campaign& campaign, int threads = 1);

enum class SweepVariable { second_step_power, fluence };

struct SweepPoint {
    double x = 0.0;                 // mW or J/cm^2
    CampaignSummary summary;
    double expected_ions_per_pulse = 0.0;  // analytic
    Region region = Region::II;
    bool selectivity_compromised = false;
};

/// One campaign per grid value with the template's seed (common random numbers).
std::vector<SweepPoint> sweep(const Campaign& campaign, SweepVariable variable, const std::vector<double>& grid,
                              int threads = 1);

}  // namespace ionload
