// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace ionload::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // missing inputs, I/O, fit failures
inline constexpr int exit_usage = 2;    // bad flags, invalid config, empty grids

struct CommandOptions {
    std::optional<SchemeKind> scheme;   // restricts to one scheme where applicable
    std::string input;                  // fit, catalog
    std::string output;                 // fit, catalog, config: file instead of stdout
    std::string model = "auto";         // fit: saturation | linear | auto
    std::string autoionizing_csv;       // compare
    std::string nonresonant_csv;        // compare
};

int cmd_sweep_power(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep_fluence(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_campaign(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fit(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_catalog(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_config(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Full command line (argv[0] excluded) to exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// CSV builders, exposed for golden-file tests.
std::string pulses_csv(const Campaign& campaign, std::string_view scheme, const std::vector<PulseOutcome>& pulses);
std::string summary_csv(std::string_view scheme, const CampaignSummary& s);
std::string histogram_csv(std::string_view scheme, const CampaignSummary& s);
std::string fit_report(const FitResult& fit, std::string_view scheme, const SchemeConfig& config);

}  // namespace ionload::cli
