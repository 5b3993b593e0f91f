#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "beamdisp/modes.hpp"

namespace beamdisp::detection {

// Signal/noise conventions used throughout:
//  - split detection: mean_signal = <n_->/N, noise_std = photocurrent noise
//    per sqrt(N) (1 for a coherent beam);
//  - TEM10 homodyne: mean_signal = <n_-> / (sqrt(N_LO) sqrt(N)), noise_std =
//    quadrature noise per sqrt(N_LO), so the local oscillator power drops out;
//  - idealised array: mean_signal = the position estimate d, noise_std =
//    w0 / (2 sqrt(N)), both in length units.
// In all cases sensitivity = sqrt(N) * |d mean/d d| / noise_std for the
// normalised schemes, and 1/noise_std for the array.

enum class Scheme { array_qnl, split, tem10_homodyne };
enum class SqueezeTarget { flipped_v0, tem10 };

const char* scheme_name(Scheme s);

/// Squeezed-vacuum injection: amplitude-quadrature noise suppression in dB
/// on the target spatial mode.  0 dB is ordinary vacuum.
struct SqueezeSpec {
    double magnitude_db;
    SqueezeTarget target;

    double variance() const;  // 10^(-magnitude_db/10), in (0, 1]
    void validate() const;
};

struct SchemeConfig {
    Scheme scheme;
    std::optional<SqueezeSpec> squeeze{};
    int n_max = 40;  // basis truncation for the noise sum-rule check

    void validate() const;
};

/// Per-displacement evaluation of one detection scheme.
struct SchemeResult {
    double displacement;
    double mean_signal;
    double noise_std;
    double sensitivity;      // inverse length units
    double relative_to_qnl;  // sensitivity / (2 sqrt(N) / w0)
};

/// Thrown when the truncated noise sum rule leaves a tail above 1e-6 at the
/// configured n_max.
struct TruncationError : std::runtime_error {
    TruncationError(double tail, int n_max);
    double tail;
    int n_max;
};

double db_to_variance(double db);
double variance_to_db(double v);

/// Quantum noise limit 2 sqrt(N) / w0, displacement-independent.
double qnl_sensitivity(const modes::BeamState& beam);

double split_mean(const modes::BeamState& beam);
double split_noise(const SchemeConfig& config, const modes::BeamState& beam);
SchemeResult split_sensitivity(const SchemeConfig& config, const modes::BeamState& beam);

double homodyne_mean(const modes::BeamState& beam);
double homodyne_noise(const SchemeConfig& config, const modes::BeamState& beam);
SchemeResult homodyne_sensitivity(const SchemeConfig& config, const modes::BeamState& beam);

/// Smallest squeezing (dB) at which the small-displacement sensitivity
/// reaches the quantum noise limit: bisection to 1e-6 dB for split detection
/// (closed form 10 log10(pi/2)), identically 0 for TEM10 homodyne.
double qnl_crossover_db(Scheme scheme);

/// Dispatch on config.scheme; array_qnl rows use length-unit conventions.
SchemeResult evaluate(const SchemeConfig& config, const modes::BeamState& beam);

namespace detail {
/// Truncated sum of xi_n(d)^2 over n = 0..n_max; the weights are the Poisson
/// factors (d/w0)^{2n} e^{-(d/w0)^2} / n!.
double xi_squared_partial_sum(double d, double w0, int n_max);
/// Truncated sum of chi_n(d)^2 over n = 0..n_max.
double chi_squared_partial_sum(double d, double w0, int n_max);
}  // namespace detail

}  // namespace beamdisp::detection
