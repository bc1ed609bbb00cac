// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "ionload/analysis.hpp"
#include "ionload/atomic_data.hpp"
#include "ionload/constants.hpp"
#include "ionload/csv.hpp"
#include "ionload/error.hpp"
#include "ionload/lineshape.hpp"

namespace ionload::cli {

using csv::format;

namespace {

// Continuum cross-section from an independent 405 nm measurement, used only for the
// ratio bracket printed by compare.
constexpr double alternative_nonresonant_cross_section_Mb = 60.0;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<SchemeKind> schemes_for(const CommandOptions& opts)
{
    if (opts.scheme) return {*opts.scheme};
    return {SchemeKind::autoionizing, SchemeKind::nonresonant};
}

std::string out_path(const RunConfig& config, const std::string& name)
{
    std::filesystem::create_directories(config.out_dir);
    return (std::filesystem::path(config.out_dir) / name).string();
}

std::string meta_number(double v) { return format(v, 12); }

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty())
        out << text;
    else
        csv::write_file(path, text);
}

std::string summary_line(std::string_view scheme, const CampaignSummary& s)
{
    return std::string(scheme) + ": pulses=" + format(s.n_pulses) + " mean=" + format(s.mean, 6) +
           " sem=" + format(s.sem, 4) + " median=" + format(s.median, 6) + " success=" +
           format(s.success_fraction, 4) + " poisson_lambda=" + format(s.poisson.fit.params[0], 6) +
           " fluorescence=" + format(s.mean_fluorescence, 6) + "\n";
}

std::vector<DataPoint> points_from(const std::vector<SweepPoint>& sweep)
{
    std::vector<DataPoint> pts;
    for (const auto& p : sweep) pts.push_back({p.x, p.summary.mean, p.summary.sem});
    return pts;
}

}  // namespace

std::string pulses_csv(const Campaign& campaign, std::string_view scheme, const std::vector<PulseOutcome>& pulses)
{
    std::vector<int> masses;
    for (const auto& iso : campaign.isotopes) masses.push_back(iso.mass_number);
    std::sort(masses.begin(), masses.end());

    std::vector<std::string> cols{"pulse_index", "ions_total"};
    for (int m : masses) cols.push_back("ions_" + std::to_string(m));
    for (const char* c : {"direct_ions", "candidates", "neutral_atoms", "fluorescence_counts", "seed_path"})
        cols.emplace_back(c);

    csv::Writer w("ionload.pulses.v1", cols);
    w.meta("scheme", std::string(scheme));
    w.meta("n_pulses", format(campaign.n_pulses));
    w.meta("second_step_power_mW", meta_number(campaign.scheme.second_step_beam.power_W / units::mW));
    w.meta("second_step_wavelength_nm", meta_number(campaign.scheme.second_step_beam.wavelength_nm));
    w.meta("fluence_J_per_cm2", meta_number(campaign.fluence_J_per_cm2));
    w.meta("flux_scale", meta_number(campaign.flux_scale));
    w.meta("capture_efficiency", format(campaign.scheme.capture_efficiency));
    w.meta("master_seed", std::to_string(campaign.master_seed));
    for (const auto& p : pulses) {
        std::vector<std::string> row{format(p.pulse_index), format(p.total_trapped())};
        for (int m : masses) row.push_back(format(p.trapped(m)));
        row.push_back(format(p.direct_ions));
        row.push_back(format(p.candidates));
        row.push_back(format(p.neutral_atoms));
        row.push_back(format(p.neutral_fluorescence_counts));
        row.push_back(p.seed_path);
        w.row(row);
    }
    return w.str();
}

std::string summary_csv(std::string_view scheme, const CampaignSummary& s)
{
    csv::Writer w("ionload.campaign-summary.v1",
                  {"scheme", "n_pulses", "mean_ions_per_pulse", "sem_ions_per_pulse", "median_ions_per_pulse",
                   "success_fraction", "poisson_lambda_ions_per_pulse", "poisson_lambda_sigma", "poisson_chi_squared",
                   "poisson_dof", "poisson_p_value", "mean_fluorescence_counts", "sem_fluorescence_counts",
                   "mean_direct_ions", "total_ions", "impurity_ions", "multi_ion_total", "multi_ion_impurity"});
    w.row({std::string(scheme), format(s.n_pulses), format(s.mean), format(s.sem), format(s.median),
           format(s.success_fraction), format(s.poisson.fit.params[0]), format(s.poisson.fit.sigmas[0]),
           format(s.poisson.chi_squared), format(s.poisson.dof), format(s.poisson.p_value),
           format(s.mean_fluorescence), format(s.sem_fluorescence), format(s.mean_direct_ions),
           format(s.total_ions), format(s.impurity_ions), format(s.multi_ion_total), format(s.multi_ion_impurity)});
    return w.str();
}

std::string histogram_csv(std::string_view scheme, const CampaignSummary& s)
{
    csv::Writer w("ionload.histogram.v1", {"ions", "pulses", "fraction", "poisson_pmf"});
    w.meta("scheme", std::string(scheme));
    w.meta("poisson_lambda", format(s.poisson.fit.params[0]));
    const double lambda = s.poisson.fit.params[0];
    double pmf = std::exp(-lambda);
    for (std::size_t k = 0; k < s.histogram.size(); ++k) {
        if (k > 0) pmf *= lambda / static_cast<double>(k);
        w.row({format(static_cast<long long>(k)), format(s.histogram[k]),
               format(static_cast<double>(s.histogram[k]) / s.n_pulses), format(pmf)});
    }
    return w.str();
}

std::string fit_report(const FitResult& fit, std::string_view scheme, const SchemeConfig& config)
{
    std::string r = "# schema: ionload.fit-report.v1\n";
    auto line = [&](const std::string& k, const std::string& v) { r += k + ": " + v + "\n"; };
    line("model", fit.model_id);
    line("scheme", std::string(scheme));
    line("points", format(fit.dof + static_cast<int>(fit.params.size())));
    if (fit.model_id == "saturation") {
        const double a = fit.param("a"), b = fit.param("b");
        line("function", "a*(1-exp(-b*x)), x in mW");
        line("a_ions_per_pulse", format(a));
        line("a_sigma", format(fit.sigma("a")));
        line("b_per_mW", format(b));
        line("b_sigma", format(fit.sigma("b")));
        line("covariance_a_b", format(fit.covariance(0, 1)));
        line("f_at_inverse_b", format(saturation_curve(1.0 / b, a, b)));
        if (const auto* ai = std::get_if<Autoionizing>(&config.second_step)) {
            const double nu = constants::speed_of_light / (config.second_step_beam.wavelength_nm * units::nm);
            const double p_sat = saturation_power(saturation_intensity(nu / units::THz, ai->profile.gamma_Hz),
                                                  config.second_step_beam.waist_m) / units::mW;
            line("p_sat_mW", format(p_sat));
            line("f_at_p_sat", format(saturation_curve(p_sat, a, b)));
        }
    } else {
        const double m = fit.param("m"), c = fit.param("c");
        line("function", "m*x+c, x in mW");
        line("m_ions_per_pulse_per_mW", format(m));
        line("m_sigma", format(fit.sigma("m")));
        line("c_ions_per_pulse", format(c));
        line("c_sigma", format(fit.sigma("c")));
        if (m > 0) line("power_for_5_ions_mW", format((5.0 - c) / m));
    }
    line("chi_squared", format(fit.chi_squared));
    line("dof", format(fit.dof));
    line("residual_norm", format(fit.residual_norm));
    return r;
}

int cmd_sweep_power(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&)
{
    csv::Writer w("ionload.power-sweep.v1",
                  {"scheme", "power_mW", "mean_ions_per_pulse", "sem_ions_per_pulse", "median_ions_per_pulse",
                   "success_fraction", "expected_ions_per_pulse", "n_pulses"});
    w.meta("fluence_J_per_cm2", meta_number(config.sweep.power_sweep_fluence_J_per_cm2));
    w.meta("pulses_per_point", format(config.sweep.pulses_per_point));
    w.meta("master_seed", std::to_string(config.master_seed));

    struct Fitted {
        SchemeKind kind;
        std::vector<SweepPoint> points;
    };
    std::vector<Fitted> done;
    for (SchemeKind kind : schemes_for(opts)) {
        const auto& grid = kind == SchemeKind::autoionizing ? config.sweep.autoionizing_power_grid_mW
                                                            : config.sweep.nonresonant_power_grid_mW;
        if (grid.empty()) throw UsageError("sweep.power_grid_mW." + std::string(to_string(kind)) + " is empty");
        const Campaign tmpl = config.sweep_template(kind, grid.front(), config.sweep.power_sweep_fluence_J_per_cm2);
        auto points = sweep(tmpl, SweepVariable::second_step_power, grid, config.threads);
        for (const auto& p : points)
            w.row({std::string(to_string(kind)), format(p.x), format(p.summary.mean), format(p.summary.sem),
                   format(p.summary.median), format(p.summary.success_fraction), format(p.expected_ions_per_pulse),
                   format(p.summary.n_pulses)});
        done.push_back({kind, std::move(points)});
    }
    w.save(out_path(config, "power_sweep.csv"));
    out << "wrote " << out_path(config, "power_sweep.csv") << "\n";

    for (const auto& f : done) {
        const auto pts = points_from(f.points);
        const bool saturating = f.kind == SchemeKind::autoionizing;
        const std::string name = "power_sweep_fit_" + std::string(to_string(f.kind)) + ".txt";
        try {
            const FitResult fit = saturating ? fit_saturation(pts) : fit_linear(pts);
            const std::string report = fit_report(fit, to_string(f.kind), config.scheme_config(f.kind, 1.0));
            csv::write_file(out_path(config, name), report);
            out << report;
        } catch (const FitError& e) {
            out << to_string(f.kind) << ": fit failed: " << e.what() << "\n";
        }
    }
    return exit_ok;
}

int cmd_sweep_fluence(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&)
{
    const auto& grid = config.sweep.fluence_grid_J_per_cm2;
    if (grid.empty()) throw UsageError("sweep.fluence_grid_J_per_cm2 is empty");
    csv::Writer w("ionload.fluence-sweep.v1",
                  {"scheme", "fluence_J_per_cm2", "region", "mean_ions_per_pulse", "sem_ions_per_pulse",
                   "median_ions_per_pulse", "success_fraction", "expected_ions_per_pulse", "mean_direct_ions",
                   "selectivity_compromised", "power_mW", "n_pulses"});
    w.meta("pulses_per_point", format(config.sweep.pulses_per_point));
    w.meta("master_seed", std::to_string(config.master_seed));
    for (SchemeKind kind : schemes_for(opts)) {
        const double power = kind == SchemeKind::autoionizing ? config.sweep.autoionizing_fluence_sweep_power_mW
                                                              : config.sweep.nonresonant_fluence_sweep_power_mW;
        const Campaign tmpl = config.sweep_template(kind, power, grid.front());
        for (const auto& p : sweep(tmpl, SweepVariable::fluence, grid, config.threads))
            w.row({std::string(to_string(kind)), format(p.x), to_string(p.region), format(p.summary.mean),
                   format(p.summary.sem), format(p.summary.median), format(p.summary.success_fraction),
                   format(p.expected_ions_per_pulse), format(p.summary.mean_direct_ions),
                   p.selectivity_compromised ? "1" : "0", meta_number(power), format(p.summary.n_pulses)});
    }
    w.save(out_path(config, "fluence_sweep.csv"));
    out << "wrote " << out_path(config, "fluence_sweep.csv") << "\n";
    return exit_ok;
}

int cmd_campaign(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&)
{
    for (SchemeKind kind : schemes_for(opts)) {
        const Campaign c = config.campaign_for(kind);
        const CampaignResult r = run_campaign(c, config.threads);
        const std::string name(to_string(kind));
        csv::write_file(out_path(config, "campaign_" + name + "_pulses.csv"), pulses_csv(c, name, r.pulses));
        csv::write_file(out_path(config, "campaign_" + name + "_summary.csv"), summary_csv(name, r.summary));
        csv::write_file(out_path(config, "campaign_" + name + "_histogram.csv"), histogram_csv(name, r.summary));
        out << summary_line(name, r.summary);
    }
    return exit_ok;
}

namespace {

struct CampaignData {
    Measurement rate;
    Measurement fluorescence;
    double power_mW = 0.0;
};

CampaignData load_campaign(const std::string& path)
{
    if (!std::filesystem::exists(path)) throw std::runtime_error("missing campaign output '" + path + "'");
    const csv::Table t = csv::read(path);
    if (t.schema != "ionload.pulses.v1")
        throw ParseError(path + ": schema '" + t.schema + "', expected ionload.pulses.v1");
    const auto power = t.meta.find("second_step_power_mW");
    if (power == t.meta.end()) throw ParseError(path + ": missing second_step_power_mW metadata");
    const std::size_t ions_col = t.column("ions_total");
    const std::size_t fl_col = t.column("fluorescence_counts");
    std::vector<double> ions, fl;
    for (const auto& row : t.rows) {
        ions.push_back(csv::parse_double(row[ions_col]));
        fl.push_back(csv::parse_double(row[fl_col]));
    }
    if (ions.size() < 2) throw ParseError(path + ": need at least 2 pulses");
    CampaignData d;
    d.rate = {mean(ions), sem(ions)};
    d.fluorescence = {mean(fl), sem(fl)};
    d.power_mW = csv::parse_double(power->second);
    return d;
}

}  // namespace

int cmd_compare(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    const std::string ai_path =
        opts.autoionizing_csv.empty()
            ? (std::filesystem::path(config.out_dir) / "campaign_autoionizing_pulses.csv").string()
            : opts.autoionizing_csv;
    const std::string nr_path =
        opts.nonresonant_csv.empty()
            ? (std::filesystem::path(config.out_dir) / "campaign_nonresonant_pulses.csv").string()
            : opts.nonresonant_csv;
    CampaignData ai, nr;
    try {
        ai = load_campaign(ai_path);
        nr = load_campaign(nr_path);
    } catch (const std::exception& e) {
        err << "compare: " << e.what() << " (run `ionload campaign` first or pass the CSV paths)\n";
        return exit_failure;
    }

    // Scale the continuum rate to the autoionizing beam power and neutral flux.
    const Measurement p_ai{ai.power_mW, 0.0}, p_nr{nr.power_mW, 0.0};
    const Measurement consistent = normalize_rate(nr.rate, p_nr, p_ai, nr.fluorescence, ai.fluorescence);
    const Measurement published = normalize_rate(nr.rate, p_ai, p_nr, nr.fluorescence, ai.fluorescence);
    const Measurement ratio = enhancement_ratio(ai.rate, consistent);
    const Measurement ratio_published = enhancement_ratio(ai.rate, published);
    const Measurement raw = enhancement_ratio(ai.rate, nr.rate);

    const auto resonance = lookup_resonance(default_barium_catalog(), config.scheme.autoionizing.resonance_wavelength_nm, 0.05);
    const double sigma_ai = resonance ? resonance->peak_cross_section_Mb : 0.0;
    const double sigma_ai_alt = resonance && resonance->alternative_cross_section_Mb
                                    ? *resonance->alternative_cross_section_Mb
                                    : sigma_ai;
    const double sigma_nr = config.scheme.nonresonant.cross_section_Mb;
    const double lo = std::min({sigma_ai / sigma_nr, sigma_ai_alt / sigma_nr,
                                sigma_ai / alternative_nonresonant_cross_section_Mb});
    const double hi = std::max({sigma_ai / sigma_nr, sigma_ai_alt / sigma_nr,
                                sigma_ai / alternative_nonresonant_cross_section_Mb});
    const bool within = ratio.value >= lo && ratio.value <= hi;

    std::string r = "# schema: ionload.compare-report.v1\n";
    auto line = [&](const std::string& k, const std::string& v) { r += k + ": " + v + "\n"; };
    line("autoionizing_rate", format(ai.rate.value, 6) + " +/- " + format(ai.rate.sigma, 4));
    line("autoionizing_power_mW", meta_number(ai.power_mW));
    line("autoionizing_fluorescence_counts", format(ai.fluorescence.value, 6) + " +/- " + format(ai.fluorescence.sigma, 4));
    line("nonresonant_rate", format(nr.rate.value, 6) + " +/- " + format(nr.rate.sigma, 4));
    line("nonresonant_power_mW", meta_number(nr.power_mW));
    line("nonresonant_fluorescence_counts", format(nr.fluorescence.value, 6) + " +/- " + format(nr.fluorescence.sigma, 4));
    line("nonresonant_rate_normalized", format(consistent.value, 6) + " +/- " + format(consistent.sigma, 4));
    line("enhancement_ratio", format(ratio.value, 6) + " +/- " + format(ratio.sigma, 4));
    line("nonresonant_rate_normalized_published_convention",
         format(published.value, 6) + " +/- " + format(published.sigma, 4));
    line("enhancement_ratio_published_convention",
         format(ratio_published.value, 6) + " +/- " + format(ratio_published.sigma, 4));
    line("enhancement_ratio_uncorrected", format(raw.value, 6) + " +/- " + format(raw.sigma, 4));
    line("cross_section_ratio_range", format(lo, 4) + " .. " + format(hi, 4));
    line("cross_section_check", within ? "pass" : "info: outside catalog range");
    csv::write_file(out_path(config, "compare_report.txt"), r);
    out << r;
    return exit_ok;
}

int cmd_fit(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    if (opts.input.empty()) throw UsageError("fit needs --input <sweep.csv>");
    if (!std::filesystem::exists(opts.input)) {
        err << "fit: missing input '" << opts.input << "'\n";
        return exit_failure;
    }
    const csv::Table t = csv::read(opts.input);
    const std::size_t x_col = t.has_column("power_mW") ? t.column("power_mW") : t.column("fluence_J_per_cm2");
    const std::size_t y_col = t.column("mean_ions_per_pulse");
    const std::size_t s_col = t.column("sem_ions_per_pulse");
    const bool has_scheme = t.has_column("scheme");

    std::vector<std::string> order;
    for (const auto& row : t.rows) {
        const std::string s = has_scheme ? row[t.column("scheme")] : "autoionizing";
        if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    }
    std::string report;
    for (const auto& scheme : order) {
        if (opts.scheme && scheme != to_string(*opts.scheme)) continue;
        std::vector<DataPoint> pts;
        for (const auto& row : t.rows) {
            if (has_scheme && row[t.column("scheme")] != scheme) continue;
            pts.push_back({csv::parse_double(row[x_col]), csv::parse_double(row[y_col]), csv::parse_double(row[s_col])});
        }
        const SchemeKind kind = parse_scheme(scheme);
        std::string model = opts.model;
        if (model == "auto") model = kind == SchemeKind::autoionizing ? "saturation" : "linear";
        FitResult fit;
        if (model == "saturation")
            fit = fit_saturation(pts);
        else if (model == "linear")
            fit = fit_linear(pts);
        else
            throw UsageError("unknown --model '" + model + "' (saturation, linear or auto)");
        report += fit_report(fit, scheme, config.scheme_config(kind, 1.0));
    }
    if (report.empty()) throw UsageError("fit: no rows for the requested scheme");
    emit(report, opts.output, out);
    return exit_ok;
}

int cmd_catalog(const RunConfig&, const CommandOptions& opts, std::ostream& out, std::ostream&)
{
    const std::string text =
        opts.input.empty() ? catalog_to_json(default_barium_catalog()) : catalog_to_json(read_catalog(opts.input));
    emit(text, opts.output, out);
    return exit_ok;
}

int cmd_config(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream&)
{
    emit(dump_config(config), opts.output, out);
    return exit_ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-step photoionization loading simulator", "ionload"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, scheme_name;
    std::optional<std::uint64_t> seed;
    std::optional<int> pulses, threads;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--pulses", pulses, "Pulses per campaign and per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", out_dir, "Output directory");
    app.add_option("--scheme", scheme_name, "Restrict to one scheme")
        ->check(CLI::IsMember({"autoionizing", "nonresonant"}));
    app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    CommandOptions opts;
    auto* sweep_power = app.add_subcommand("sweep-power", "Loading rate versus second-step power");
    auto* sweep_fluence = app.add_subcommand("sweep-fluence", "Loading rate versus ablation fluence");
    auto* campaign = app.add_subcommand("campaign", "Per-pulse loading statistics");
    auto* compare = app.add_subcommand("compare", "Normalized rates and enhancement ratio");
    compare->add_option("--autoionizing-csv", opts.autoionizing_csv, "Autoionizing pulses CSV");
    compare->add_option("--nonresonant-csv", opts.nonresonant_csv, "Non-resonant pulses CSV");
    auto* fit = app.add_subcommand("fit", "Re-fit a power or fluence sweep CSV");
    fit->add_option("--input", opts.input, "Sweep CSV")->required();
    fit->add_option("--model", opts.model, "saturation, linear or auto")
        ->check(CLI::IsMember({"saturation", "linear", "auto"}));
    fit->add_option("--output", opts.output, "Report file (default: stdout)");
    auto* catalog = app.add_subcommand("catalog", "Dump the atomic data tables as JSON");
    catalog->add_option("--input", opts.input, "Catalog JSON to validate and re-emit");
    catalog->add_option("--output", opts.output, "Output file (default: stdout)");
    auto* config_cmd = app.add_subcommand("config", "Print the effective configuration");
    config_cmd->add_option("--output", opts.output, "Output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) config.master_seed = *seed;
        if (pulses) {
            config.campaign.autoionizing.pulses = *pulses;
            config.campaign.nonresonant.pulses = *pulses;
            config.sweep.pulses_per_point = *pulses;
        }
        if (threads) config.threads = *threads;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!scheme_name.empty()) opts.scheme = parse_scheme(scheme_name);
        config.validate();

        if (*sweep_power) return cmd_sweep_power(config, opts, out, err);
        if (*sweep_fluence) return cmd_sweep_fluence(config, opts, out, err);
        if (*campaign) return cmd_campaign(config, opts, out, err);
        if (*compare) return cmd_compare(config, opts, out, err);
        if (*fit) return cmd_fit(config, opts, out, err);
        if (*catalog) return cmd_catalog(config, opts, out, err);
        if (*config_cmd) return cmd_config(config, opts, out, err);
        return exit_usage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace ionload::cli
