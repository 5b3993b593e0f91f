#include "beamdisp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamdisp::mc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

// Stream ids at or above this tag are reserved for bootstrap resampling, so
// they can never collide with a trial index.
constexpr std::uint64_t kBootstrapTag = std::uint64_t(1) << 62;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round != 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        counter = philox_round(counter, key);
    }
    return counter;
}

void CounterStream::refill() {
    buf_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                       static_cast<std::uint32_t>(stream_id_),
                       static_cast<std::uint32_t>(stream_id_ >> 32)},
                      key_);
    ++block_;
    avail_ = 4;
}

std::uint64_t CounterStream::next_u64() {
    if (avail_ < 2) refill();
    const std::uint32_t lo = buf_[4 - avail_];
    const std::uint32_t hi = buf_[5 - avail_];
    avail_ -= 2;
    return std::uint64_t(hi) << 32 | lo;
}

double CounterStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t CounterStream::poisson(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson: mean must be positive");
    if (mean < 10.0) {
        // Exponential-gap summation, in log space to avoid underflow.
        double elapsed = 0.0;
        std::uint64_t k = 0;
        for (;;) {
            elapsed -= std::log1p(-uniform());
            if (elapsed > mean) return k;
            ++k;
        }
    }
    // Hoermann's PTRS transformed rejection, valid for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

void McConfig::validate() const {
    beam.validate();
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
    if (static_cast<std::uint64_t>(trials) >= kBootstrapTag)
        throw std::invalid_argument("McConfig: trials exceeds the stream id space");
}

namespace {

std::uint64_t draw_photon_count(const McConfig& config, CounterStream& rng) {
    if (config.photon_sampling == PhotonSampling::fixed_n)
        return static_cast<std::uint64_t>(std::llround(config.beam.photons));
    return rng.poisson(config.beam.photons);
}

void sample_into(const McConfig& config, std::uint64_t trial_index, std::vector<double>& out) {
    CounterStream rng(config.seed, trial_index);
    const std::uint64_t count = draw_photon_count(config, rng);
    out.resize(count);
    const double sigma = 0.5 * config.beam.waist;
    for (auto& x : out) x = config.beam.displacement + sigma * rng.normal();
}

// Streaming mean/variance accumulator (Welford).
struct RunningStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
};

void require_mc_scheme(detection::Scheme scheme) {
    if (scheme != detection::Scheme::array_qnl && scheme != detection::Scheme::split)
        throw std::invalid_argument("monte carlo supports array_qnl and split schemes only");
}

}  // namespace

std::vector<double> sample_positions(const McConfig& config, std::uint64_t trial_index) {
    config.validate();
    if (trial_index >= static_cast<std::uint64_t>(config.trials))
        throw std::invalid_argument("sample_positions: trial_index out of range");
    std::vector<double> out;
    sample_into(config, trial_index, out);
    return out;
}

double array_estimate(std::span<const double> positions) {
    if (positions.empty()) throw EmptyTrialError{};
    double sum = 0.0;
    for (double x : positions) sum += x;
    return sum / static_cast<double>(positions.size());
}

std::int64_t split_trial(std::span<const double> positions) {
    std::int64_t diff = 0;
    for (double x : positions) {
        if (x > 0.0) ++diff;
        else if (x < 0.0) --diff;
    }
    return diff;
}

McResult run_trials(const McConfig& config, detection::Scheme scheme) {
    config.validate();
    require_mc_scheme(scheme);
    const double n_photons = config.beam.photons;

    RunningStats stats;
    RunningStats photon_counts;
    std::int64_t empty = 0;
    std::vector<double> positions;
    for (std::int64_t t = 0; t < config.trials; ++t) {
        sample_into(config, static_cast<std::uint64_t>(t), positions);
        photon_counts.add(static_cast<double>(positions.size()));
        if (scheme == detection::Scheme::array_qnl) {
            if (positions.empty()) {
                ++empty;
                continue;
            }
            stats.add(array_estimate(positions));
        } else {
            if (positions.empty()) ++empty;
            stats.add(static_cast<double>(split_trial(positions)) / n_photons);
        }
    }

    McResult out;
    out.estimator_mean = stats.mean;
    out.estimator_std = stats.stddev();
    out.predicted_std = scheme == detection::Scheme::array_qnl
                            ? 0.5 * config.beam.waist / std::sqrt(n_photons)
                            : 1.0 / std::sqrt(n_photons);
    out.n_effective = photon_counts.mean;
    out.standard_error = stats.n > 1 ? out.estimator_std / std::sqrt(2.0 * (stats.n - 1)) : 0.0;
    out.empty_trials = empty;
    out.used_trials = stats.n;
    return out;
}

SensitivityEstimate empirical_sensitivity(const McConfig& config, detection::Scheme scheme,
                                          double delta) {
    config.validate();
    require_mc_scheme(scheme);
    if (!(delta > 0.0)) throw std::invalid_argument("empirical_sensitivity: delta must be positive");

    const double d_lo = config.beam.displacement - 0.5 * delta;
    const double d_hi = config.beam.displacement + 0.5 * delta;
    const double sigma = 0.5 * config.beam.waist;

    std::vector<double> lo_stats, hi_stats;
    lo_stats.reserve(config.trials);
    hi_stats.reserve(config.trials);
    std::int64_t empty = 0;
    for (std::int64_t t = 0; t < config.trials; ++t) {
        CounterStream rng(config.seed, static_cast<std::uint64_t>(t));
        const std::uint64_t count = draw_photon_count(config, rng);
        if (count == 0) {
            ++empty;
            continue;
        }
        if (scheme == detection::Scheme::array_qnl) {
            double z_sum = 0.0;
            for (std::uint64_t i = 0; i < count; ++i) z_sum += rng.normal();
            const double offset = sigma * z_sum / static_cast<double>(count);
            lo_stats.push_back(d_lo + offset);
            hi_stats.push_back(d_hi + offset);
        } else {
            std::int64_t n_lo = 0, n_hi = 0;
            for (std::uint64_t i = 0; i < count; ++i) {
                const double z = sigma * rng.normal();
                const double x_lo = d_lo + z;
                const double x_hi = d_hi + z;
                if (x_lo > 0.0) ++n_lo;
                else if (x_lo < 0.0) --n_lo;
                if (x_hi > 0.0) ++n_hi;
                else if (x_hi < 0.0) --n_hi;
            }
            lo_stats.push_back(static_cast<double>(n_lo));
            hi_stats.push_back(static_cast<double>(n_hi));
        }
    }

    const std::int64_t used = static_cast<std::int64_t>(lo_stats.size());
    if (used < 2) throw EmptyTrialError{};

    auto sensitivity_of = [&](std::span<const double> lo, std::span<const double> hi,
                              std::span<const std::size_t> idx) {
        RunningStats s_lo, s_hi, s_diff;
        if (idx.empty()) {
            for (std::size_t i = 0; i < lo.size(); ++i) {
                s_lo.add(lo[i]);
                s_hi.add(hi[i]);
                s_diff.add(hi[i] - lo[i]);
            }
        } else {
            for (std::size_t i : idx) {
                s_lo.add(lo[i]);
                s_hi.add(hi[i]);
                s_diff.add(hi[i] - lo[i]);
            }
        }
        const double pooled = std::sqrt(0.5 * (s_lo.variance() + s_hi.variance()));
        return (s_diff.mean / delta) / pooled;
    };

    SensitivityEstimate out;
    out.sensitivity = sensitivity_of(lo_stats, hi_stats, {});
    out.used_trials = used;
    out.empty_trials = empty;

    // Bootstrap over trial pairs; resampling streams live in a reserved id
    // range so they are independent of every trial stream.
    constexpr int kResamples = 200;
    RunningStats boot;
    std::vector<std::size_t> idx(used);
    for (int b = 0; b < kResamples; ++b) {
        CounterStream rng(config.seed, kBootstrapTag + static_cast<std::uint64_t>(b));
        for (auto& i : idx)
            i = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * used), used - 1);
        boot.add(sensitivity_of(lo_stats, hi_stats, idx));
    }
    out.bootstrap_stderr = boot.stddev();
    return out;
}

}  // namespace beamdisp::mc
