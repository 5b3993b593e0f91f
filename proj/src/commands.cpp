#include "beamdisp/commands.hpp"

#include <cmath>
#include <filesystem>

namespace beamdisp::cli {

namespace {

using detection::Scheme;

// Grid point i of a uniform grid; written so that integer-representable
// targets (e.g. d = w0 on the default figure grids) land exactly.
double grid_point(double lo, double hi, int steps, int i) {
    return lo + (i * (hi - lo)) / (steps - 1);
}

modes::BeamState beam_at(double d_over_w0, const CommonOptions& common) {
    return {common.waist, common.photons, d_over_w0 * common.waist};
}

detection::SchemeConfig make_config(Scheme scheme, std::optional<double> squeeze_db, int n_max) {
    detection::SchemeConfig config{scheme, std::nullopt, n_max};
    if (squeeze_db) {
        const auto target = scheme == Scheme::split ? detection::SqueezeTarget::flipped_v0
                                                    : detection::SqueezeTarget::tem10;
        config.squeeze = detection::SqueezeSpec{*squeeze_db, target};
    }
    config.validate();
    return config;
}

// Displacement (in waist units) used for "small displacement" figures.
constexpr double kSmallDisplacement = 1e-6;

void require_grid(double lo, double hi, int steps, const char* what) {
    if (!(lo < hi)) throw std::invalid_argument(std::string(what) + ": min must be < max");
    if (steps < 2) throw std::invalid_argument(std::string(what) + ": steps must be >= 2");
}

struct Emitter {
    const CommonOptions& common;
    std::ostream& log;
    RunManifest manifest;

    Emitter(const CommonOptions& c, std::ostream& l, nlohmann::json config) : common(c), log(l) {
        manifest.command_line = c.command_line;
        manifest.config = std::move(config);
        manifest.seed = c.seed;
        manifest.timestamp = iso8601_utc_now();
        std::filesystem::create_directories(common.out_dir);
    }

    std::string path_of(const std::string& name) const { return common.out_dir + "/" + name; }

    void table(const Table& t, const std::string& stem) {
        const bool json = common.format == "json";
        const std::string name = stem + (json ? ".json" : ".csv");
        const std::string content = json ? to_json(t) : to_csv(t);
        write_file(path_of(name), content);
        manifest.outputs.emplace_back(name, fnv1a64_hex(content));
        log << "wrote " << path_of(name) << " (" << t.rows.size() << " rows)\n";
    }

    void finish(const std::string& stem) {
        const std::string content = manifest.to_json().dump(2) + "\n";
        write_file(path_of(stem + "_manifest.json"), content);
    }
};

Table sweep_table(const SweepOptions& opt, const CommonOptions& common) {
    Table t;
    t.columns = {"d_over_w0", "mean_signal", "noise_std", "sensitivity", "relative_to_qnl"};
    switch (opt.scheme) {
        case Scheme::split:
            t.note = "split detection: mean_signal = <n_->/N, noise_std per sqrt(N), "
                     "sensitivity in 1/length, relative_to_qnl vs 2 sqrt(N)/w0";
            break;
        case Scheme::tem10_homodyne:
            t.note = "tem10 homodyne: mean_signal = <n_->/(sqrt(N_LO) sqrt(N)), noise_std per "
                     "sqrt(N_LO), sensitivity in 1/length, relative_to_qnl vs 2 sqrt(N)/w0";
            break;
        case Scheme::array_qnl:
            t.note = "idealised array: mean_signal = position estimate (length units), "
                     "noise_std = w0/(2 sqrt(N))";
            break;
    }
    const auto config = make_config(opt.scheme, opt.squeeze_db, common.n_max);
    for (int i = 0; i < opt.steps; ++i) {
        const double r = grid_point(opt.d_min, opt.d_max, opt.steps, i);
        const auto res = detection::evaluate(config, beam_at(r, common));
        t.rows.push_back({r, res.mean_signal, res.noise_std, res.sensitivity, res.relative_to_qnl});
    }
    return t;
}

Table decompose_table(const DecomposeOptions& opt, const CommonOptions& common) {
    Table t;
    t.columns = {"d_over_w0", "c0", "c1", "c2", "c3", "c4", "c5"};
    t.note = "coefficients alpha_n/sqrt(N) of the displaced beam over the centred "
             "Hermite-Gauss basis";
    for (int i = 0; i < opt.steps; ++i) {
        const double r = grid_point(opt.d_min, opt.d_max, opt.steps, i);
        const auto beam = beam_at(r, common);
        std::vector<double> row{r};
        for (int n = 0; n <= 5; ++n) row.push_back(modes::displaced_coeff(n, beam));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table squeeze_table(double db_min, double db_max, int steps, const CommonOptions& common) {
    Table t;
    t.columns = {"squeeze_db", "relative_to_qnl_split", "relative_to_qnl_homodyne",
                 "split_above_qnl"};
    t.note = "small-displacement (d = 1e-6 w0) sensitivities relative to the QNL as a function "
             "of squeezing; split_above_qnl marks rows past the split crossover";
    const auto beam = beam_at(kSmallDisplacement, common);
    for (int i = 0; i < steps; ++i) {
        const double db = grid_point(db_min, db_max, steps, i);
        const auto split = detection::split_sensitivity(
            make_config(Scheme::split, db > 0.0 ? std::optional(db) : std::nullopt, common.n_max),
            beam);
        const auto homodyne = detection::homodyne_sensitivity(
            make_config(Scheme::tem10_homodyne, db > 0.0 ? std::optional(db) : std::nullopt,
                        common.n_max),
            beam);
        t.rows.push_back({db, split.relative_to_qnl, homodyne.relative_to_qnl,
                          split.relative_to_qnl > 1.0 ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace

detection::Scheme parse_scheme(const std::string& name) {
    if (name == "array" || name == "array_qnl") return Scheme::array_qnl;
    if (name == "split") return Scheme::split;
    if (name == "homodyne" || name == "tem10" || name == "tem10_homodyne")
        return Scheme::tem10_homodyne;
    throw std::invalid_argument("unknown scheme: " + name);
}

void cmd_sweep(const SweepOptions& opt, const CommonOptions& common, std::ostream& log) {
    require_grid(opt.d_min, opt.d_max, opt.steps, "sweep");
    nlohmann::json config{{"command", "sweep"},
                          {"scheme", detection::scheme_name(opt.scheme)},
                          {"d_min", opt.d_min},
                          {"d_max", opt.d_max},
                          {"steps", opt.steps},
                          {"waist", common.waist},
                          {"photons", common.photons},
                          {"n_max", common.n_max}};
    if (opt.squeeze_db) config["squeeze_db"] = *opt.squeeze_db;
    Emitter emit(common, log, std::move(config));
    const std::string stem = std::string("sweep_") + detection::scheme_name(opt.scheme);
    emit.table(sweep_table(opt, common), stem);
    emit.finish(stem);
}

void cmd_decompose(const DecomposeOptions& opt, const CommonOptions& common, std::ostream& log) {
    require_grid(opt.d_min, opt.d_max, opt.steps, "decompose");
    Emitter emit(common, log,
                 {{"command", "decompose"},
                  {"d_min", opt.d_min},
                  {"d_max", opt.d_max},
                  {"steps", opt.steps},
                  {"waist", common.waist},
                  {"photons", common.photons}});
    emit.table(decompose_table(opt, common), "decompose");
    emit.finish("decompose");
}

void cmd_squeeze_sweep(const SqueezeSweepOptions& opt, const CommonOptions& common,
                       std::ostream& log) {
    if (!(opt.db_min >= 0.0)) throw std::invalid_argument("squeeze-sweep: db_min must be >= 0");
    require_grid(opt.db_min, opt.db_max, opt.steps, "squeeze-sweep");
    Emitter emit(common, log,
                 {{"command", "squeeze-sweep"},
                  {"db_min", opt.db_min},
                  {"db_max", opt.db_max},
                  {"steps", opt.steps},
                  {"waist", common.waist},
                  {"photons", common.photons},
                  {"n_max", common.n_max}});
    emit.table(squeeze_table(opt.db_min, opt.db_max, opt.steps, common), "squeeze_sweep");
    emit.finish("squeeze_sweep");
    log << "split crossover = " << format_double(detection::qnl_crossover_db(Scheme::split))
        << " dB\n";
}

void cmd_montecarlo(const MonteCarloOptions& opt, const CommonOptions& common, std::ostream& log) {
    if (opt.scheme == Scheme::tem10_homodyne)
        throw std::invalid_argument("montecarlo: scheme must be array or split");
    mc::McConfig config{beam_at(opt.d, common), opt.trials, common.seed, opt.sampling};
    config.validate();

    const auto result = mc::run_trials(config, opt.scheme);
    const auto sens = mc::empirical_sensitivity(config, opt.scheme, opt.delta * common.waist);

    Emitter emit(common, log,
                 {{"command", "montecarlo"},
                  {"scheme", detection::scheme_name(opt.scheme)},
                  {"trials", opt.trials},
                  {"d", opt.d},
                  {"delta", opt.delta},
                  {"sampling", opt.sampling == mc::PhotonSampling::fixed_n ? "fixed" : "poisson"},
                  {"waist", common.waist},
                  {"photons", common.photons},
                  {"seed", common.seed},
                  {"standard_error_convention", "estimator_std / sqrt(2 (used_trials - 1))"}});

    Table summary;
    summary.columns = {"d_over_w0",     "photons",       "trials",         "used_trials",
                       "empty_trials",  "estimator_mean", "estimator_std",  "predicted_std",
                       "n_effective",   "standard_error", "sensitivity",    "sensitivity_stderr"};
    summary.note = opt.scheme == Scheme::array_qnl
                       ? "idealised array: estimator = mean photon position per trial (length "
                         "units); predicted_std = w0/(2 sqrt(N))"
                       : "split detection: estimator = count difference / N per trial; "
                         "predicted_std = 1/sqrt(N)";
    summary.rows.push_back({opt.d, common.photons, double(opt.trials), double(result.used_trials),
                            double(result.empty_trials), result.estimator_mean,
                            result.estimator_std, result.predicted_std, result.n_effective,
                            result.standard_error, sens.sensitivity, sens.bootstrap_stderr});
    const std::string stem = std::string("montecarlo_") + detection::scheme_name(opt.scheme);
    emit.table(summary, stem + "_summary");

    if (opt.per_trial) {
        Table trials_table;
        trials_table.columns = {"trial", "estimate"};
        trials_table.note = summary.note;
        for (std::int64_t t = 0; t < opt.trials; ++t) {
            const auto positions = mc::sample_positions(config, std::uint64_t(t));
            if (opt.scheme == Scheme::array_qnl) {
                if (positions.empty()) continue;
                trials_table.rows.push_back({double(t), mc::array_estimate(positions)});
            } else {
                trials_table.rows.push_back(
                    {double(t), double(mc::split_trial(positions)) / common.photons});
            }
        }
        emit.table(trials_table, stem + "_trials");
    }
    emit.finish(stem);

    const double empty_fraction = double(result.empty_trials) / double(opt.trials);
    if (empty_fraction > 0.01) throw EmptyTrialOverflowError(empty_fraction);
}

void cmd_reproduce(const std::string& figure, const CommonOptions& common, std::ostream& log) {
    if (figure == "fig2" || figure == "fig3") {
        Table t;
        const bool means = figure == "fig2";
        t.columns = {"d_over_w0", means ? "split_mean" : "split_rel_qnl",
                     means ? "homodyne_mean" : "homodyne_rel_qnl"};
        t.note = means ? "normalised mean difference photocurrent vs displacement: split = "
                         "<n_->/N, homodyne = <n_->/(sqrt(N_LO) sqrt(N))"
                       : "sensitivity relative to the QNL vs displacement, no squeezing";
        const auto split_cfg = make_config(Scheme::split, std::nullopt, common.n_max);
        const auto hom_cfg = make_config(Scheme::tem10_homodyne, std::nullopt, common.n_max);
        for (int i = 0; i < 401; ++i) {
            const double r = grid_point(0.0, 4.0, 401, i);
            const auto beam = beam_at(r, common);
            if (means)
                t.rows.push_back({r, detection::split_mean(beam), detection::homodyne_mean(beam)});
            else
                t.rows.push_back({r, detection::split_sensitivity(split_cfg, beam).relative_to_qnl,
                                  detection::homodyne_sensitivity(hom_cfg, beam).relative_to_qnl});
        }
        Emitter emit(common, log, {{"command", "reproduce"}, {"figure", figure}});
        emit.table(t, figure);
        emit.finish(figure);
        if (means) {
            std::size_t peak = 0;
            for (std::size_t i = 0; i < t.rows.size(); ++i)
                if (t.rows[i][2] > t.rows[peak][2]) peak = i;
            log << figure << " checkpoint: homodyne mean peak " << format_double(t.rows[peak][2])
                << " at d/w0 = " << format_double(t.rows[peak][0]) << "\n";
        } else {
            log << figure << " checkpoint: d->0 split/QNL ratio = " << format_double(t.rows[0][1])
                << "\n";
        }
        return;
    }
    if (figure == "fig4") {
        Table t = decompose_table({0.0, 4.0, 401}, common);
        Emitter emit(common, log, {{"command", "reproduce"}, {"figure", figure}});
        emit.table(t, figure);
        emit.finish(figure);
        double max_sumsq = 0.0;
        for (const auto& row : t.rows) {
            double s = 0.0;
            for (std::size_t c = 1; c < row.size(); ++c) s += row[c] * row[c];
            max_sumsq = std::max(max_sumsq, s);
        }
        log << figure << " checkpoint: max row sum of squares = " << format_double(max_sumsq)
            << " (<= 1)\n";
        return;
    }
    if (figure == "fig6") {
        Table t = squeeze_table(0.0, 10.0, 201, common);
        Emitter emit(common, log, {{"command", "reproduce"}, {"figure", figure}});
        emit.table(t, figure);
        emit.finish(figure);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f", detection::qnl_crossover_db(Scheme::split));
        log << figure << " checkpoint: split crossover = " << buf << " dB\n";
        return;
    }
    throw std::invalid_argument("reproduce: unknown figure '" + figure +
                                "' (expected fig2|fig3|fig4|fig6)");
}

void cmd_crossover(const CommonOptions& common, std::ostream& log) {
    const double split_db = detection::qnl_crossover_db(Scheme::split);
    const double hom_db = detection::qnl_crossover_db(Scheme::tem10_homodyne);
    Emitter emit(common, log, {{"command", "crossover"}});
    Table t;
    t.columns = {"crossover_db_split", "crossover_db_homodyne"};
    t.note = "squeezing (dB) at which the small-displacement sensitivity reaches the QNL";
    t.rows.push_back({split_db, hom_db});
    emit.table(t, "crossover");
    emit.finish("crossover");
    log << "split crossover = " << format_double(split_db) << " dB\n";
    log << "tem10_homodyne crossover = " << format_double(hom_db) << " dB\n";
}

}  // namespace beamdisp::cli
