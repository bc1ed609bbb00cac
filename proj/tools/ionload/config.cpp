// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "ionload/constants.hpp"
#include "ionload/csv.hpp"
#include "ionload/error.hpp"

namespace ionload::cli {

using nlohmann::ordered_json;

std::string_view to_string(SchemeKind kind)
{
    return kind == SchemeKind::autoionizing ? "autoionizing" : "nonresonant";
}

SchemeKind parse_scheme(std::string_view name)
{
    if (name == "autoionizing") return SchemeKind::autoionizing;
    if (name == "nonresonant") return SchemeKind::nonresonant;
    throw ParseError("unknown scheme '" + std::string(name) + "' (expected autoionizing or nonresonant)");
}

namespace {

std::vector<double> grid(double start, double step, int count)
{
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(std::round((start + i * step) * 1e6) / 1e6);
    return g;
}

// Walks one JSON object, recording which keys were consumed.
class Section {
public:
    Section(const ordered_json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what)
    {
        throw ParseError("config: " + (path.empty() ? std::string("<root>") : path) + ": " + what);
    }

    std::string at(std::string_view key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const ordered_json* find(std::string_view key)
    {
        const auto it = j_.find(std::string(key));
        if (it == j_.end()) return nullptr;
        seen_.insert(std::string(key));
        return &*it;
    }

    void number(std::string_view key, double& out)
    {
        if (const auto* v = find(key)) {
            if (!v->is_number()) fail(at(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) fail(at(key), "must be finite");
        }
    }

    void integer(std::string_view key, int& out)
    {
        if (const auto* v = find(key)) {
            if (!v->is_number_integer()) fail(at(key), "expected an integer");
            out = v->get<int>();
        }
    }

    void seed(std::string_view key, std::uint64_t& out)
    {
        if (const auto* v = find(key)) {
            if (!v->is_number_unsigned()) fail(at(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void text(std::string_view key, std::string& out)
    {
        if (const auto* v = find(key)) {
            if (!v->is_string()) fail(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void numbers(std::string_view key, std::vector<double>& out)
    {
        if (const auto* v = find(key)) {
            if (!v->is_array()) fail(at(key), "expected an array of numbers");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!(*v)[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
                out.push_back((*v)[i].get<double>());
            }
        }
    }

    template <class F>
    void object(std::string_view key, F&& f)
    {
        if (const auto* v = find(key)) {
            Section child(*v, at(key));
            f(child);
            child.finish();
        }
    }

    void finish() const
    {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) fail(at(key), "unknown key");
    }

private:
    const ordered_json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_run(Section& s, SchemeRun& run)
{
    s.integer("pulses", run.pulses);
    s.number("power_mW", run.power_mW);
    s.number("flux_scale", run.flux_scale);
}

void require(bool ok, const std::string& path, const std::string& what)
{
    if (!ok) Section::fail(path, what);
}

void check_grid(const std::vector<double>& g, const std::string& path)
{
    for (std::size_t i = 0; i < g.size(); ++i) {
        require(g[i] >= 0, path, "values must be >= 0");
        if (i > 0) require(g[i] > g[i - 1], path, "values must be strictly ascending");
    }
}

}  // namespace

SweepSection::SweepSection()
    : autoionizing_power_grid_mW(grid(0.0, 0.2, 16)),
      nonresonant_power_grid_mW(grid(0.0, 0.1, 16)),
      fluence_grid_J_per_cm2(grid(0.10, 0.025, 21))
{
}

void RunConfig::validate() const
{
    require(threads >= 0, "threads", "must be >= 0");
    require(scheme.capture_efficiency >= 0 && scheme.capture_efficiency <= 1, "scheme.capture_efficiency",
            "must lie in [0, 1]");
    require(scheme.trap_capacity >= 1, "scheme.trap_capacity", "must be >= 1");
    require(scheme.retention_plateau_ions == 0 || scheme.retention_plateau_ions >= 1,
            "scheme.retention_plateau_ions", "must be 0 (disabled) or >= 1");
    require(scheme.first_step.power_uW >= 0, "scheme.first_step.power_uW", "must be >= 0");
    require(scheme.first_step.waist_um > 0, "scheme.first_step.waist_um", "must be > 0");
    require(scheme.first_step.wavelength_nm > 0, "scheme.first_step.wavelength_nm", "must be > 0");
    require(scheme.autoionizing.waist_um > 0, "scheme.autoionizing.waist_um", "must be > 0");
    require(scheme.autoionizing.wavelength_nm > 0, "scheme.autoionizing.wavelength_nm", "must be > 0");
    require(scheme.nonresonant.waist_um > 0, "scheme.nonresonant.waist_um", "must be > 0");
    require(scheme.nonresonant.wavelength_nm > 0, "scheme.nonresonant.wavelength_nm", "must be > 0");
    require(scheme.nonresonant.cross_section_Mb >= 0, "scheme.nonresonant.cross_section_Mb", "must be >= 0");
    require(campaign.fluence_J_per_cm2 >= 0, "campaign.fluence_J_per_cm2", "must be >= 0");
    require(campaign.max_tracked_atoms >= 1, "campaign.max_tracked_atoms", "must be >= 1");
    require(campaign.fluorescence_counts_per_photon >= 0, "campaign.fluorescence_counts_per_photon",
            "must be >= 0");
    for (auto kind : {SchemeKind::autoionizing, SchemeKind::nonresonant}) {
        const std::string p = "campaign." + std::string(to_string(kind));
        require(run(kind).pulses >= 1, p + ".pulses", "must be >= 1");
        require(run(kind).power_mW >= 0, p + ".power_mW", "must be >= 0");
        require(run(kind).flux_scale >= 0, p + ".flux_scale", "must be >= 0");
    }
    check_grid(sweep.autoionizing_power_grid_mW, "sweep.power_grid_mW.autoionizing");
    check_grid(sweep.nonresonant_power_grid_mW, "sweep.power_grid_mW.nonresonant");
    check_grid(sweep.fluence_grid_J_per_cm2, "sweep.fluence_grid_J_per_cm2");
    require(sweep.pulses_per_point >= 1, "sweep.pulses_per_point", "must be >= 1");
    require(sweep.power_sweep_fluence_J_per_cm2 >= 0, "sweep.power_sweep_fluence_J_per_cm2", "must be >= 0");
    try {
        plume_model().validate();
        scheme_config(SchemeKind::autoionizing, 1.0);
        scheme_config(SchemeKind::nonresonant, 1.0);
    } catch (const std::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

PlumeModel RunConfig::plume_model() const
{
    PlumeModel m;
    m.region1_max_J_per_cm2 = plume.region1_max_J_per_cm2;
    m.region2_max_J_per_cm2 = plume.region2_max_J_per_cm2;
    m.yield_scale = plume.yield_scale_atoms;
    m.reference_fluence_J_per_cm2 = plume.reference_fluence_J_per_cm2;
    m.yield_threshold_J_per_cm2 = plume.yield_threshold_J_per_cm2;
    m.yield_exponent = plume.yield_exponent;
    m.yield_spread = plume.yield_spread_relative;
    m.direct_ions_per_J_per_cm2 = plume.direct_ions_per_J_per_cm2;
    m.target_distance_m = plume.target_distance_mm * 1e-3;
    m.speed.most_probable_m_per_s = plume.most_probable_speed_m_per_s;
    m.speed.spread_m_per_s = plume.speed_spread_m_per_s;
    m.transverse_velocity_sigma_m_per_s = plume.transverse_velocity_sigma_m_per_s;
    m.window_half_width_m = plume.window_half_width_um * units::um;
    return m;
}

SchemeConfig RunConfig::scheme_config(SchemeKind kind, double power_mW) const
{
    const AtomicCatalog& catalog = default_barium_catalog();
    SchemeConfig s = default_autoionizing_scheme(catalog);
    const auto& fs = scheme.first_step;
    s.first_step = catalog.transition(fs.transition);
    s.first_step_beam.wavelength_nm = fs.wavelength_nm;
    s.first_step_beam.power_W = fs.power_uW * units::uW;
    s.first_step_beam.waist_m = fs.waist_um * units::um;
    s.first_step_beam.detuning_Hz = fs.detuning_MHz * units::MHz;

    if (kind == SchemeKind::autoionizing) {
        const auto& ai = scheme.autoionizing;
        const auto resonance = lookup_resonance(catalog, ai.resonance_wavelength_nm, 0.05);
        if (!resonance)
            throw ParseError("config: scheme.autoionizing.resonance_wavelength_nm: no catalog resonance within 0.05 nm");
        const FanoProfile profile = make_fano_profile(*resonance, fs.wavelength_nm);
        s.second_step = Autoionizing{profile};
        const double nu = constants::speed_of_light / (ai.wavelength_nm * units::nm);
        s.second_step_beam = {ai.wavelength_nm, power_mW * units::mW, ai.waist_um * units::um,
                              nu - profile.center_frequency_THz * units::THz, {0.0, 0.0, 1.0}};
    } else {
        const auto& nr = scheme.nonresonant;
        s.second_step = NonResonant{nr.cross_section_Mb};
        s.second_step_beam = {nr.wavelength_nm, power_mW * units::mW, nr.waist_um * units::um, 0.0, {0.0, 0.0, 1.0}};
    }
    s.capture_efficiency = scheme.capture_efficiency;
    s.trap_capacity = scheme.trap_capacity;
    s.retention_plateau_ions = scheme.retention_plateau_ions;
    s.validate();
    return s;
}

const SchemeRun& RunConfig::run(SchemeKind kind) const
{
    return kind == SchemeKind::autoionizing ? campaign.autoionizing : campaign.nonresonant;
}

SchemeRun& RunConfig::run(SchemeKind kind)
{
    return kind == SchemeKind::autoionizing ? campaign.autoionizing : campaign.nonresonant;
}

Campaign RunConfig::campaign_for(SchemeKind kind) const
{
    Campaign c;
    const SchemeRun& r = run(kind);
    c.n_pulses = r.pulses;
    c.scheme = scheme_config(kind, r.power_mW);
    c.fluence_J_per_cm2 = campaign.fluence_J_per_cm2;
    c.plume = plume_model();
    c.master_seed = master_seed;
    c.flux_scale = r.flux_scale;
    c.max_tracked_atoms = campaign.max_tracked_atoms;
    c.fluorescence_counts_per_photon = campaign.fluorescence_counts_per_photon;
    return c;
}

Campaign RunConfig::sweep_template(SchemeKind kind, double power_mW, double fluence_J_per_cm2) const
{
    Campaign c = campaign_for(kind);
    c.n_pulses = sweep.pulses_per_point;
    c.scheme = scheme_config(kind, power_mW);
    c.fluence_J_per_cm2 = fluence_J_per_cm2;
    c.flux_scale = 1.0;
    return c;
}

RunConfig parse_config(std::string_view json_text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text.begin(), json_text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, json_text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (json_text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("config: line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": JSON syntax error");
    }

    RunConfig c;
    Section root(j, "");
    std::string schema;
    root.text("schema", schema);
    if (schema != config_schema)
        Section::fail("schema", "expected \"" + std::string(config_schema) + "\", got \"" + schema + "\"");
    root.seed("master_seed", c.master_seed);
    root.integer("threads", c.threads);
    root.object("scheme", [&](Section& s) {
        s.object("first_step", [&](Section& f) {
            f.text("transition", c.scheme.first_step.transition);
            f.number("wavelength_nm", c.scheme.first_step.wavelength_nm);
            f.number("power_uW", c.scheme.first_step.power_uW);
            f.number("waist_um", c.scheme.first_step.waist_um);
            f.number("detuning_MHz", c.scheme.first_step.detuning_MHz);
        });
        s.object("autoionizing", [&](Section& a) {
            a.number("resonance_wavelength_nm", c.scheme.autoionizing.resonance_wavelength_nm);
            a.number("wavelength_nm", c.scheme.autoionizing.wavelength_nm);
            a.number("waist_um", c.scheme.autoionizing.waist_um);
        });
        s.object("nonresonant", [&](Section& n) {
            n.number("wavelength_nm", c.scheme.nonresonant.wavelength_nm);
            n.number("waist_um", c.scheme.nonresonant.waist_um);
            n.number("cross_section_Mb", c.scheme.nonresonant.cross_section_Mb);
        });
        s.number("capture_efficiency", c.scheme.capture_efficiency);
        s.integer("trap_capacity", c.scheme.trap_capacity);
        s.number("retention_plateau_ions", c.scheme.retention_plateau_ions);
    });
    root.object("plume", [&](Section& p) {
        auto& m = c.plume;
        p.number("region1_max_J_per_cm2", m.region1_max_J_per_cm2);
        p.number("region2_max_J_per_cm2", m.region2_max_J_per_cm2);
        p.number("yield_scale_atoms", m.yield_scale_atoms);
        p.number("reference_fluence_J_per_cm2", m.reference_fluence_J_per_cm2);
        p.number("yield_threshold_J_per_cm2", m.yield_threshold_J_per_cm2);
        p.number("yield_exponent", m.yield_exponent);
        p.number("yield_spread_relative", m.yield_spread_relative);
        p.number("direct_ions_per_J_per_cm2", m.direct_ions_per_J_per_cm2);
        p.number("target_distance_mm", m.target_distance_mm);
        p.number("most_probable_speed_m_per_s", m.most_probable_speed_m_per_s);
        p.number("speed_spread_m_per_s", m.speed_spread_m_per_s);
        p.number("transverse_velocity_sigma_m_per_s", m.transverse_velocity_sigma_m_per_s);
        p.number("window_half_width_um", m.window_half_width_um);
    });
    root.object("campaign", [&](Section& s) {
        s.number("fluence_J_per_cm2", c.campaign.fluence_J_per_cm2);
        s.integer("max_tracked_atoms", c.campaign.max_tracked_atoms);
        s.number("fluorescence_counts_per_photon", c.campaign.fluorescence_counts_per_photon);
        s.object("autoionizing", [&](Section& r) { read_run(r, c.campaign.autoionizing); });
        s.object("nonresonant", [&](Section& r) { read_run(r, c.campaign.nonresonant); });
    });
    root.object("sweep", [&](Section& s) {
        s.object("power_grid_mW", [&](Section& g) {
            g.numbers("autoionizing", c.sweep.autoionizing_power_grid_mW);
            g.numbers("nonresonant", c.sweep.nonresonant_power_grid_mW);
        });
        s.number("power_sweep_fluence_J_per_cm2", c.sweep.power_sweep_fluence_J_per_cm2);
        s.numbers("fluence_grid_J_per_cm2", c.sweep.fluence_grid_J_per_cm2);
        s.object("fluence_sweep_power_mW", [&](Section& g) {
            g.number("autoionizing", c.sweep.autoionizing_fluence_sweep_power_mW);
            g.number("nonresonant", c.sweep.nonresonant_fluence_sweep_power_mW);
        });
        s.integer("pulses_per_point", c.sweep.pulses_per_point);
    });
    root.object("output", [&](Section& o) { o.text("out_dir", c.out_dir); });
    root.finish();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(csv::read_file(path)); }

std::string dump_config(const RunConfig& c)
{
    ordered_json j;
    j["schema"] = config_schema;
    j["master_seed"] = c.master_seed;
    j["threads"] = c.threads;
    const auto& fs = c.scheme.first_step;
    j["scheme"]["first_step"] = {{"transition", fs.transition},
                                 {"wavelength_nm", fs.wavelength_nm},
                                 {"power_uW", fs.power_uW},
                                 {"waist_um", fs.waist_um},
                                 {"detuning_MHz", fs.detuning_MHz}};
    const auto& ai = c.scheme.autoionizing;
    j["scheme"]["autoionizing"] = {{"resonance_wavelength_nm", ai.resonance_wavelength_nm},
                                   {"wavelength_nm", ai.wavelength_nm},
                                   {"waist_um", ai.waist_um}};
    const auto& nr = c.scheme.nonresonant;
    j["scheme"]["nonresonant"] = {{"wavelength_nm", nr.wavelength_nm},
                                  {"waist_um", nr.waist_um},
                                  {"cross_section_Mb", nr.cross_section_Mb}};
    j["scheme"]["capture_efficiency"] = c.scheme.capture_efficiency;
    j["scheme"]["trap_capacity"] = c.scheme.trap_capacity;
    j["scheme"]["retention_plateau_ions"] = c.scheme.retention_plateau_ions;

    const auto& p = c.plume;
    j["plume"] = {{"region1_max_J_per_cm2", p.region1_max_J_per_cm2},
                  {"region2_max_J_per_cm2", p.region2_max_J_per_cm2},
                  {"yield_scale_atoms", p.yield_scale_atoms},
                  {"reference_fluence_J_per_cm2", p.reference_fluence_J_per_cm2},
                  {"yield_threshold_J_per_cm2", p.yield_threshold_J_per_cm2},
                  {"yield_exponent", p.yield_exponent},
                  {"yield_spread_relative", p.yield_spread_relative},
                  {"direct_ions_per_J_per_cm2", p.direct_ions_per_J_per_cm2},
                  {"target_distance_mm", p.target_distance_mm},
                  {"most_probable_speed_m_per_s", p.most_probable_speed_m_per_s},
                  {"speed_spread_m_per_s", p.speed_spread_m_per_s},
                  {"transverse_velocity_sigma_m_per_s", p.transverse_velocity_sigma_m_per_s},
                  {"window_half_width_um", p.window_half_width_um}};

    auto run_json = [](const SchemeRun& r) {
        return ordered_json{{"pulses", r.pulses}, {"power_mW", r.power_mW}, {"flux_scale", r.flux_scale}};
    };
    j["campaign"] = {{"fluence_J_per_cm2", c.campaign.fluence_J_per_cm2},
                     {"max_tracked_atoms", c.campaign.max_tracked_atoms},
                     {"fluorescence_counts_per_photon", c.campaign.fluorescence_counts_per_photon},
                     {"autoionizing", run_json(c.campaign.autoionizing)},
                     {"nonresonant", run_json(c.campaign.nonresonant)}};

    const auto& s = c.sweep;
    j["sweep"]["power_grid_mW"] = {{"autoionizing", s.autoionizing_power_grid_mW},
                                   {"nonresonant", s.nonresonant_power_grid_mW}};
    j["sweep"]["power_sweep_fluence_J_per_cm2"] = s.power_sweep_fluence_J_per_cm2;
    j["sweep"]["fluence_grid_J_per_cm2"] = s.fluence_grid_J_per_cm2;
    j["sweep"]["fluence_sweep_power_mW"] = {{"autoionizing", s.autoionizing_fluence_sweep_power_mW},
                                            {"nonresonant", s.nonresonant_fluence_sweep_power_mW}};
    j["sweep"]["pulses_per_point"] = s.pulses_per_point;
    j["output"]["out_dir"] = c.out_dir;
    return j.dump(2) + "\n";
}

}  // namespace ionload::cli
