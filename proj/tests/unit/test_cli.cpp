// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "ionload/csv.hpp"
#include "ionload/error.hpp"

using namespace ionload;
using namespace ionload::cli;

namespace {

std::string tmp_dir(const std::string& name)
{
    const auto p = std::filesystem::path(IONLOAD_TEST_TMP) / "cli" / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

struct Run {
    int code = -1;
    std::string out, err;
};

Run invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_config(const std::string& dir, const std::string& text)
{
    const std::string path = dir + "/config.json";
    csv::write_file(path, text);
    return path;
}

// Synthetic pulses CSV with the given ion counts and fluorescence per pulse.
std::string synthetic_pulses(const std::string& path, std::string_view scheme, double power_mW,
                             const std::vector<int>& ions, const std::vector<int>& fluorescence)
{
    csv::Writer w("ionload.pulses.v1", {"pulse_index", "ions_total", "fluorescence_counts"});
    w.meta("scheme", std::string(scheme));
    w.meta("second_step_power_mW", csv::format(power_mW));
    for (std::size_t i = 0; i < ions.size(); ++i)
        w.row({csv::format(static_cast<long long>(i)), csv::format(ions[i]), csv::format(fluorescence[i])});
    w.save(path);
    return path;
}

// Value of a "key: value" line in a report.
double report_value(const std::string& text, const std::string& key)
{
    const auto pos = text.find("\n" + key + ": ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("effective config round trip")
{
    const RunConfig def;
    const std::string text = dump_config(def);
    CHECK(text.back() == '\n');
    CHECK(dump_config(parse_config(text)) == text);

    auto r = invoke({"config"});
    CHECK(r.code == exit_ok);
    CHECK(r.out == text);

    r = invoke({"--seed", "42", "--pulses", "7", "config"});
    const auto parsed = parse_config(r.out);
    CHECK(parsed.master_seed == 42);
    CHECK(parsed.campaign.autoionizing.pulses == 7);
    CHECK(parsed.sweep.pulses_per_point == 7);
}

TEST_CASE("default grids")
{
    const RunConfig c;
    CHECK(c.sweep.autoionizing_power_grid_mW.size() == 16);
    CHECK(c.sweep.autoionizing_power_grid_mW.back() == 3.0);
    CHECK(c.sweep.nonresonant_power_grid_mW.back() == 1.5);
    CHECK(c.sweep.fluence_grid_J_per_cm2.front() == 0.1);
    CHECK(c.sweep.fluence_grid_J_per_cm2.back() == 0.6);
    CHECK(c.campaign.nonresonant.flux_scale == doctest::Approx(25.84 / 36.05).epsilon(1e-5));
}

TEST_CASE("config diagnostics")
{
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema": "ionload-config/1", "plume": {"bogus": 1}})"),
                         doctest::Contains("plume.bogus"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema": "ionload-config/1", "threads": "two"})"),
                         doctest::Contains("threads"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config("{\n  \"schema\": \"ionload-config/1\",\n  \"threads\": ,\n}"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema": "other"})"), doctest::Contains("schema"), ParseError);
    auto bad = RunConfig{};
    bad.plume.region1_max_J_per_cm2 = 0.6;
    CHECK_THROWS_AS(bad.validate(), ParseError);
    bad = RunConfig{};
    bad.sweep.fluence_grid_J_per_cm2 = {0.3, 0.2};
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("fluence_grid"), ParseError);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(invoke({}).code == exit_usage);
    CHECK(invoke({"frobnicate"}).code == exit_usage);
    CHECK(invoke({"--scheme", "both", "campaign"}).code == exit_usage);
    CHECK(invoke({"--help"}).code == exit_ok);

    const std::string dir = tmp_dir("usage");
    auto cfg = write_config(dir, R"({"schema": "ionload-config/1", "sweep": {"fluence_grid_J_per_cm2": []}})");
    auto r = invoke({"--config", cfg, "--out-dir", dir, "sweep-fluence"});
    CHECK(r.code == exit_usage);
    CHECK(r.err.find("empty") != std::string::npos);

    cfg = write_config(dir, R"({"schema": "ionload-config/1", "sweep": {"power_grid_mW": {"autoionizing": []}}})");
    CHECK(invoke({"--config", cfg, "--out-dir", dir, "sweep-power"}).code == exit_usage);

    cfg = write_config(dir, R"({"schema": "ionload-config/1", "campaign": {"fluence_J_per_cm2": -1}})");
    r = invoke({"--config", cfg, "campaign"});
    CHECK(r.code == exit_usage);
    CHECK(r.err.find("fluence") != std::string::npos);
}

TEST_CASE("compare needs campaign outputs")
{
    const std::string dir = tmp_dir("missing");
    const auto r = invoke({"--out-dir", dir, "compare"});
    CHECK(r.code == exit_failure);
    CHECK(r.err.find("missing") != std::string::npos);
}

TEST_CASE("campaign outputs")
{
    const std::string dir = tmp_dir("campaign");
    auto r = invoke({"--pulses", "1", "--out-dir", dir, "--scheme", "autoionizing", "campaign"});
    REQUIRE(r.code == exit_ok);
    const auto pulses = csv::read(dir + "/campaign_autoionizing_pulses.csv");
    const auto summary = csv::read(dir + "/campaign_autoionizing_summary.csv");
    const auto hist = csv::read(dir + "/campaign_autoionizing_histogram.csv");
    CHECK(pulses.schema == "ionload.pulses.v1");
    CHECK(summary.schema == "ionload.campaign-summary.v1");
    CHECK(hist.schema == "ionload.histogram.v1");
    CHECK(pulses.meta.at("second_step_power_mW") == "1.08");
    CHECK(pulses.meta.at("master_seed") == "20240612");
    for (const char* col : {"pulse_index", "ions_total", "ions_138", "ions_130", "fluorescence_counts", "seed_path"})
        CHECK(pulses.has_column(col));
    REQUIRE(pulses.rows.size() == 1);
    const auto ions = pulses.rows[0][pulses.column("ions_total")];
    CHECK(summary.rows.at(0)[summary.column("mean_ions_per_pulse")] == ions);
    CHECK(summary.rows.at(0)[summary.column("median_ions_per_pulse")] == ions);
    CHECK(summary.rows.at(0)[summary.column("sem_ions_per_pulse")] == "0");
    CHECK(pulses.rows[0][pulses.column("seed_path")] == "20240612/0");
    CHECK_FALSE(std::filesystem::exists(dir + "/campaign_nonresonant_pulses.csv"));
}

TEST_CASE("repeat runs are byte-identical")
{
    const std::string a = tmp_dir("repeat_a"), b = tmp_dir("repeat_b");
    for (const auto& dir : {a, b})
        REQUIRE(invoke({"--seed", "42", "--pulses", "12", "--threads", dir == a ? "1" : "3", "--out-dir", dir, "campaign"})
                    .code == exit_ok);
    for (const char* f : {"campaign_autoionizing_pulses.csv", "campaign_nonresonant_summary.csv",
                          "campaign_nonresonant_histogram.csv"})
        CHECK(csv::read_file(a + "/" + f) == csv::read_file(b + "/" + f));

    const std::string c = tmp_dir("repeat_c");
    REQUIRE(invoke({"--seed", "43", "--pulses", "12", "--out-dir", c, "campaign"}).code == exit_ok);
    CHECK(csv::read_file(a + "/campaign_autoionizing_pulses.csv") !=
          csv::read_file(c + "/campaign_autoionizing_pulses.csv"));
}

TEST_CASE("emitted config reproduces the run")
{
    const std::string a = tmp_dir("emit_a"), b = tmp_dir("emit_b");
    REQUIRE(invoke({"--seed", "5", "--pulses", "6", "--out-dir", a, "campaign"}).code == exit_ok);
    auto r = invoke({"--seed", "5", "--pulses", "6", "--out-dir", b, "config"});
    const std::string cfg = write_config(b, r.out);
    REQUIRE(invoke({"--config", cfg, "campaign"}).code == exit_ok);
    CHECK(csv::read_file(a + "/campaign_nonresonant_pulses.csv") ==
          csv::read_file(b + "/campaign_nonresonant_pulses.csv"));
}

TEST_CASE("fluence sweep annotations")
{
    const std::string dir = tmp_dir("fluence");
    const auto cfg = write_config(
        dir, R"({"schema": "ionload-config/1", "sweep": {"fluence_grid_J_per_cm2": [0.2, 0.45, 0.6], "pulses_per_point": 5}})");
    REQUIRE(invoke({"--config", cfg, "--out-dir", dir, "sweep-fluence"}).code == exit_ok);
    const auto t = csv::read(dir + "/fluence_sweep.csv");
    CHECK(t.schema == "ionload.fluence-sweep.v1");
    REQUIRE(t.rows.size() == 6);
    for (const auto& row : t.rows) {
        const double f = csv::parse_double(row[t.column("fluence_J_per_cm2")]);
        const std::string region = row[t.column("region")];
        const std::string flag = row[t.column("selectivity_compromised")];
        if (f == 0.2) CHECK(region == "I");
        if (f == 0.45) CHECK(region == "II");
        if (f == 0.6) {
            CHECK(region == "III");
            CHECK(flag == "1");
        } else {
            CHECK(flag == "0");
        }
    }
}

TEST_CASE("fit command re-fits a sweep CSV")
{
    const std::string dir = tmp_dir("fit");
    csv::Writer w("ionload.power-sweep.v1", {"scheme", "power_mW", "mean_ions_per_pulse", "sem_ions_per_pulse"});
    for (int i = 0; i <= 15; ++i) {
        const double x = 0.2 * i;
        w.row({"autoionizing", csv::format(x), csv::format(saturation_curve(x, 7.10, 0.84)), "0.1"});
        w.row({"nonresonant", csv::format(0.1 * i), csv::format(0.4 * 0.1 * i), "0.05"});
    }
    w.save(dir + "/sweep.csv");

    auto r = invoke({"fit", "--input", dir + "/sweep.csv", "--scheme", "autoionizing"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("model: saturation") != std::string::npos);
    CHECK(report_value(r.out, "a_ions_per_pulse") == doctest::Approx(7.10).epsilon(1e-9));
    CHECK(report_value(r.out, "b_per_mW") == doctest::Approx(0.84).epsilon(1e-9));

    r = invoke({"fit", "--input", dir + "/sweep.csv", "--output", dir + "/fit.txt"});
    REQUIRE(r.code == exit_ok);
    const std::string report = csv::read_file(dir + "/fit.txt");
    CHECK(report.find("model: linear") != std::string::npos);
    CHECK(report_value(report, "m_ions_per_pulse_per_mW") == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(report_value(report, "power_for_5_ions_mW") == doctest::Approx(12.5).epsilon(1e-9));

    CHECK(invoke({"fit", "--input", dir + "/nope.csv"}).code == exit_failure);
    CHECK(invoke({"fit"}).code == exit_usage);
    CHECK(invoke({"fit", "--input", dir + "/sweep.csv", "--model", "cubic"}).code == exit_usage);
}

TEST_CASE("compare on identical and reference-matched inputs")
{
    const std::string dir = tmp_dir("compare");
    std::vector<int> ions, fl;
    for (int i = 0; i < 100; ++i) {
        ions.push_back(i % 9);
        fl.push_back(30 + i % 7);
    }
    const auto same = synthetic_pulses(dir + "/same.csv", "autoionizing", 1.0, ions, fl);
    auto r = invoke({"--out-dir", dir, "compare", "--autoionizing-csv", same, "--nonresonant-csv", same});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("enhancement_ratio: 1 +/-") != std::string::npos);

    // 266 pulses averaging 4.48 and 265 pulses averaging 0.435, fluorescence 36.05 vs 25.84.
    std::vector<int> ai_ions, ai_fl, nr_ions, nr_fl;
    for (int i = 0; i < 266; ++i) {
        ai_ions.push_back(i < 100 ? 4 : (i < 250 ? 5 : (i < 264 ? 3 : 0)));
        ai_fl.push_back(i % 20 < 1 ? 37 : 36);
    }
    for (int i = 0; i < 265; ++i) {
        nr_ions.push_back(i < 40 ? 2 : (i < 75 ? 1 : 0));
        nr_fl.push_back(i % 25 < 21 ? 26 : 25);
    }
    const auto ai = synthetic_pulses(dir + "/ai.csv", "autoionizing", 1.08, ai_ions, ai_fl);
    const auto nr = synthetic_pulses(dir + "/nr.csv", "nonresonant", 1.17, nr_ions, nr_fl);
    r = invoke({"--out-dir", dir, "compare", "--autoionizing-csv", ai, "--nonresonant-csv", nr});
    REQUIRE(r.code == exit_ok);
    const auto report = csv::read_file(dir + "/compare_report.txt");
    CHECK(report == r.out);
    const double ratio = report_value(report, "enhancement_ratio_published_convention");
    CHECK(ratio == doctest::Approx(6.8).epsilon(0.05));
    CHECK(report.find("cross_section_ratio_range: 6.933 .. 9.167") != std::string::npos);
}

TEST_CASE("catalog command")
{
    const std::string dir = tmp_dir("catalog");
    auto r = invoke({"catalog"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out == catalog_to_json(default_barium_catalog()));
    REQUIRE(invoke({"catalog", "--output", dir + "/cat.json"}).code == exit_ok);
    r = invoke({"catalog", "--input", dir + "/cat.json"});
    CHECK(r.code == exit_ok);
    CHECK(r.out == catalog_to_json(default_barium_catalog()));
    csv::write_file(dir + "/broken.json", "{\"schema\": 3}");
    CHECK(invoke({"catalog", "--input", dir + "/broken.json"}).code == exit_usage);
}
