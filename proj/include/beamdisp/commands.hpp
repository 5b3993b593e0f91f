#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "beamdisp/detection.hpp"
#include "beamdisp/montecarlo.hpp"
#include "beamdisp/tables.hpp"

namespace beamdisp::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitEmptyTrials = 4;

/// Raised by the montecarlo command when more than 1% of trials drew no
/// photons.
struct EmptyTrialOverflowError : std::runtime_error {
    explicit EmptyTrialOverflowError(double fraction)
        : std::runtime_error("empty-trial fraction " + std::to_string(fraction) +
                             " exceeds 1% of trials") {}
};

/// Flags shared by every subcommand.  All displacements on the CLI are given
/// in units of the waist; `waist` and `photons` set the physical scale.
struct CommonOptions {
    double waist = 1.0;
    double photons = 1e6;
    int n_max = 40;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::string format = "csv";  // csv | json
    std::string command_line;    // recorded in the run manifest
};

struct SweepOptions {
    detection::Scheme scheme = detection::Scheme::split;
    double d_min = 0.0;  // units of w0
    double d_max = 4.0;
    int steps = 401;
    std::optional<double> squeeze_db;
};

struct DecomposeOptions {
    double d_min = 0.0;
    double d_max = 4.0;
    int steps = 401;
};

struct SqueezeSweepOptions {
    double db_min = 0.0;
    double db_max = 10.0;
    int steps = 201;
};

struct MonteCarloOptions {
    detection::Scheme scheme = detection::Scheme::array_qnl;
    std::int64_t trials = 1000;
    double d = 0.0;       // units of w0
    double delta = 0.01;  // finite-difference step, units of w0
    bool per_trial = false;
    mc::PhotonSampling sampling = mc::PhotonSampling::poissonian;
};

void cmd_sweep(const SweepOptions& opt, const CommonOptions& common, std::ostream& log);
void cmd_decompose(const DecomposeOptions& opt, const CommonOptions& common, std::ostream& log);
void cmd_squeeze_sweep(const SqueezeSweepOptions& opt, const CommonOptions& common,
                       std::ostream& log);
void cmd_montecarlo(const MonteCarloOptions& opt, const CommonOptions& common, std::ostream& log);
void cmd_reproduce(const std::string& figure, const CommonOptions& common, std::ostream& log);
void cmd_crossover(const CommonOptions& common, std::ostream& log);

/// Accepts array | split | homodyne (plus the full scheme_name spellings).
detection::Scheme parse_scheme(const std::string& name);

}  // namespace beamdisp::cli
