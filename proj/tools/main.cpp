#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "beamdisp/commands.hpp"

namespace {

std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace beamdisp;

    CLI::App app{"beamdisp: quantum-noise-limited optical beam displacement calculator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cli::kToolVersion));

    cli::CommonOptions common;
    common.command_line = join_args(argc, argv);

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--waist", common.waist, "beam waist w0, length units")
            ->check(CLI::PositiveNumber);
        sub->add_option("--photons", common.photons, "mean photon number N")
            ->check(CLI::PositiveNumber);
        sub->add_option("--n-max", common.n_max, "noise sum-rule truncation order");
        sub->add_option("--seed", common.seed, "random seed");
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--format", common.format, "table file format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    // sweep
    cli::SweepOptions sweep;
    std::string sweep_scheme = "split";
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate one scheme over a displacement grid");
    sweep_cmd->add_option("--scheme", sweep_scheme, "array | split | homodyne")
        ->required()
        ->check(CLI::IsMember({"array", "split", "homodyne"}));
    sweep_cmd->add_option("--d-min", sweep.d_min, "grid start, units of w0");
    sweep_cmd->add_option("--d-max", sweep.d_max, "grid end, units of w0");
    sweep_cmd->add_option("--steps", sweep.steps, "grid points");
    sweep_cmd->add_option("--squeeze-db", sweep.squeeze_db, "squeezing magnitude in dB");
    add_common(sweep_cmd);

    // decompose
    cli::DecomposeOptions decomp;
    auto* decomp_cmd =
        app.add_subcommand("decompose", "displaced-beam coefficients c0..c5 over a grid");
    decomp_cmd->add_option("--d-min", decomp.d_min, "grid start, units of w0");
    decomp_cmd->add_option("--d-max", decomp.d_max, "grid end, units of w0");
    decomp_cmd->add_option("--steps", decomp.steps, "grid points");
    add_common(decomp_cmd);

    // squeeze-sweep
    cli::SqueezeSweepOptions squeeze;
    auto* squeeze_cmd = app.add_subcommand(
        "squeeze-sweep", "small-displacement sensitivities vs squeezing for both schemes");
    squeeze_cmd->add_option("--db-min", squeeze.db_min, "grid start, dB");
    squeeze_cmd->add_option("--db-max", squeeze.db_max, "grid end, dB");
    squeeze_cmd->add_option("--steps", squeeze.steps, "grid points");
    add_common(squeeze_cmd);

    // montecarlo
    cli::MonteCarloOptions mc_opt;
    std::string mc_scheme = "array";
    std::string mc_sampling = "poisson";
    auto* mc_cmd = app.add_subcommand("montecarlo", "photon-level simulation of one ensemble");
    mc_cmd->add_option("--scheme", mc_scheme, "array | split")
        ->check(CLI::IsMember({"array", "split"}));
    mc_cmd->add_option("--trials", mc_opt.trials, "number of trials")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--d", mc_opt.d, "true displacement, units of w0");
    mc_cmd->add_option("--delta", mc_opt.delta, "finite-difference step, units of w0")
        ->check(CLI::PositiveNumber);
    mc_cmd->add_flag("--per-trial", mc_opt.per_trial, "also write per-trial estimates");
    mc_cmd->add_option("--sampling", mc_sampling, "fixed | poisson photon statistics")
        ->check(CLI::IsMember({"fixed", "poisson"}));
    add_common(mc_cmd);

    // reproduce
    std::string figure;
    auto* repro_cmd = app.add_subcommand("reproduce", "write a figure's underlying data table");
    repro_cmd->add_option("figure", figure, "fig2 | fig3 | fig4 | fig6")->required();
    add_common(repro_cmd);

    // crossover
    auto* cross_cmd =
        app.add_subcommand("crossover", "QNL crossover squeezing for both schemes");
    add_common(cross_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    try {
        if (sweep_cmd->parsed()) {
            sweep.scheme = cli::parse_scheme(sweep_scheme);
            cli::cmd_sweep(sweep, common, std::cout);
        } else if (decomp_cmd->parsed()) {
            cli::cmd_decompose(decomp, common, std::cout);
        } else if (squeeze_cmd->parsed()) {
            cli::cmd_squeeze_sweep(squeeze, common, std::cout);
        } else if (mc_cmd->parsed()) {
            mc_opt.scheme = cli::parse_scheme(mc_scheme);
            mc_opt.sampling = mc_sampling == "fixed" ? mc::PhotonSampling::fixed_n
                                                     : mc::PhotonSampling::poissonian;
            cli::cmd_montecarlo(mc_opt, common, std::cout);
        } else if (repro_cmd->parsed()) {
            cli::cmd_reproduce(figure, common, std::cout);
        } else if (cross_cmd->parsed()) {
            cli::cmd_crossover(common, std::cout);
        }
    } catch (const cli::EmptyTrialOverflowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitEmptyTrials;
    } catch (const mc::EmptyTrialError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitEmptyTrials;
    } catch (const numerics::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitNonConvergence;
    } catch (const detection::TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitNonConvergence;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitInternal;
    }
    return cli::kExitOk;
}
