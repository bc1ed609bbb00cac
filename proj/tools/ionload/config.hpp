// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ionload/ionization.hpp"
#include "ionload/plume.hpp"
#include "ionload/simulation.hpp"

namespace ionload::cli {

inline constexpr std::string_view config_schema = "ionload-config/1";

enum class SchemeKind { autoionizing, nonresonant };

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);

// Values are kept in the units their keys name so that emitting the
// effective config and reading it back is exact.
struct FirstStepSection {
    std::string transition = "554";
    double wavelength_nm = 553.70185;
    double power_uW = 15.0;
    double waist_um = 35.0;
    double detuning_MHz = 0.0;
};

struct AutoionizingSection {
    double resonance_wavelength_nm = 389.74;
    double wavelength_nm = 389.74779;
    double waist_um = 34.0;
};

struct NonresonantSection {
    double wavelength_nm = 405.0;
    double waist_um = 35.0;
    double cross_section_Mb = 75.0;
};

struct SchemeSection {
    FirstStepSection first_step;
    AutoionizingSection autoionizing;
    NonresonantSection nonresonant;
    double capture_efficiency = default_capture_efficiency;
    int trap_capacity = 13;
    double retention_plateau_ions = 7.10;
};

struct PlumeSection {
    double region1_max_J_per_cm2 = 0.30;
    double region2_max_J_per_cm2 = 0.45;
    double yield_scale_atoms = 1.0e7;
    double reference_fluence_J_per_cm2 = 0.45;
    double yield_threshold_J_per_cm2 = 0.24;
    double yield_exponent = 2.0;
    double yield_spread_relative = 0.20;
    double direct_ions_per_J_per_cm2 = 20.0;
    double target_distance_mm = 14.6;
    double most_probable_speed_m_per_s = 1200.0;
    double speed_spread_m_per_s = 200.0;
    double transverse_velocity_sigma_m_per_s = 10.0;
    double window_half_width_um = 100.0;
};

struct SchemeRun {
    int pulses = 0;
    double power_mW = 0.0;
    double flux_scale = 1.0;
};

struct CampaignSection {
    double fluence_J_per_cm2 = 0.45;
    int max_tracked_atoms = 20000;
    double fluorescence_counts_per_photon = default_fluorescence_counts_per_photon;
    SchemeRun autoionizing{266, 1.08, 1.0};
    SchemeRun nonresonant{265, 1.17, 0.716782};
};

struct SweepSection {
    std::vector<double> autoionizing_power_grid_mW;
    std::vector<double> nonresonant_power_grid_mW;
    double power_sweep_fluence_J_per_cm2 = 0.45;
    std::vector<double> fluence_grid_J_per_cm2;
    double autoionizing_fluence_sweep_power_mW = 1.20;
    double nonresonant_fluence_sweep_power_mW = 1.02;
    int pulses_per_point = 100;

    SweepSection();
};

struct RunConfig {
    std::uint64_t master_seed = 20240612;
    int threads = 1;
    SchemeSection scheme;
    PlumeSection plume;
    CampaignSection campaign;
    SweepSection sweep;
    std::string out_dir = "out";

    void validate() const;

    PlumeModel plume_model() const;
    SchemeConfig scheme_config(SchemeKind kind, double power_mW) const;
    /// Campaign at the configured power, pulse count and flux scale for this scheme.
    Campaign campaign_for(SchemeKind kind) const;
    /// Campaign template for sweeps (pulses_per_point, unit flux).
    Campaign sweep_template(SchemeKind kind, double power_mW, double fluence_J_per_cm2) const;
    const SchemeRun& run(SchemeKind kind) const;
    SchemeRun& run(SchemeKind kind);
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ParseError naming the JSON path (and line:column for syntax errors).
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Effective config as pretty-printed JSON, newline-terminated.
std::string dump_config(const RunConfig& config);

}  // namespace ionload::cli
