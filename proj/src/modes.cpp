#include "beamdisp/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamdisp::modes {

void BeamState::validate() const {
    if (!(waist > 0.0)) throw std::invalid_argument("BeamState: waist must be positive");
    if (!(photons > 0.0)) throw std::invalid_argument("BeamState: photons must be positive");
}

void ModeSpec::validate() const {
    if (order < 0) throw std::invalid_argument("ModeSpec: order must be non-negative");
    if (order > numerics::kMaxHermiteOrder) throw numerics::OrderTooLargeError(order);
    if (!(waist > 0.0)) throw std::invalid_argument("ModeSpec: waist must be positive");
}

double mode_amplitude(const ModeSpec& spec, double x) {
    spec.validate();
    const double t = std::numbers::sqrt2 * (x - spec.center) / spec.waist;
    // g_n = H_n(t) exp(-t^2/2) / sqrt(2^n n!), bounded for all n, via
    // g_{n+1} = sqrt(2/(n+1)) t g_n - sqrt(n/(n+1)) g_{n-1}.
    double g_prev = std::exp(-0.5 * t * t);
    double g = g_prev;
    for (int k = 0; k < spec.order; ++k) {
        const double g_next =
            std::sqrt(2.0 / (k + 1)) * t * g - (k > 0 ? std::sqrt(double(k) / (k + 1)) * g_prev : 0.0);
        g_prev = g;
        g = g_next;
    }
    double value = std::pow(2.0 / (std::numbers::pi * spec.waist * spec.waist), 0.25) * g;
    if (spec.flip && x < *spec.flip) value = -value;
    return value;
}

double displaced_coeff(int n, const BeamState& beam) {
    beam.validate();
    if (n < 0) throw std::invalid_argument("displaced_coeff: order must be non-negative");
    const double r = beam.displacement / beam.waist;
    if (r == 0.0) return n == 0 ? 1.0 : 0.0;
    const double log_mag = n * std::log(std::abs(r)) - 0.5 * std::lgamma(n + 1.0) - 0.5 * r * r;
    const double sign = (r < 0.0 && (n & 1)) ? -1.0 : 1.0;
    return sign * std::exp(log_mag);
}

CoeffVector decompose(const BeamState& beam, int n_max) {
    if (n_max < 0) throw std::invalid_argument("decompose: n_max must be non-negative");
    CoeffVector out;
    out.n_max = n_max;
    out.values.resize(n_max + 1);
    double sumsq = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        out.values[n] = displaced_coeff(n, beam);
        sumsq += out.values[n] * out.values[n];
    }
    out.truncation_tail = 1.0 - sumsq;
    out.truncated = out.truncation_tail > 1e-6;
    return out;
}

CoeffVector decompose_auto(const BeamState& beam, double tail_tol) {
    int n_max = 20;
    CoeffVector out = decompose(beam, n_max);
    while (out.truncation_tail > tail_tol && n_max < numerics::kMaxHermiteOrder) {
        n_max = std::min(2 * n_max, int(numerics::kMaxHermiteOrder));
        out = decompose(beam, n_max);
    }
    return out;
}

double zeta0(double d, double w0) {
    if (!(w0 > 0.0)) throw std::invalid_argument("zeta0: waist must be positive");
    return numerics::erf(std::numbers::sqrt2 * d / w0);
}

double zeta0_slope(double d, double w0) {
    if (!(w0 > 0.0)) throw std::invalid_argument("zeta0_slope: waist must be positive");
    const double r = d / w0;
    return 2.0 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi / w0 * std::exp(-2.0 * r * r);
}

numerics::QuadSpec overlap_window(std::initializer_list<double> centers, double w0,
                                  std::vector<double> breakpoints) {
    const auto [lo_it, hi_it] = std::minmax_element(centers.begin(), centers.end());
    numerics::QuadSpec spec{*lo_it - 10.0 * w0, *hi_it + 10.0 * w0};
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    for (double b : breakpoints)
        if (b > spec.lower && b < spec.upper) spec.breakpoints.push_back(b);
    return spec;
}

double xi_coeff(int n, double d, double w0) {
    if (n < 0) throw std::invalid_argument("xi_coeff: order must be non-negative");
    if (!(w0 > 0.0)) throw std::invalid_argument("xi_coeff: waist must be positive");
    const ModeSpec flipped_v0{0, w0, 0.0, d};      // v0(x, d)
    const ModeSpec displaced_vn{n, w0, d, d};      // v_n(x-d, 0): flip rides at x = d
    const auto spec = overlap_window({0.0, d}, w0, {d});
    return numerics::integrate(
        [&](double x) { return mode_amplitude(flipped_v0, x) * mode_amplitude(displaced_vn, x); },
        spec);
}

double chi_coeff(int n, double d, double w0) {
    if (n < 0) throw std::invalid_argument("chi_coeff: order must be non-negative");
    if (!(w0 > 0.0)) throw std::invalid_argument("chi_coeff: waist must be positive");
    const double r = d / w0;
    if (n == 0) return r * std::exp(-0.5 * r * r);
    if (n == 1) return (1.0 - r * r) * std::exp(-0.5 * r * r);
    const ModeSpec u1{1, w0, 0.0};
    const ModeSpec un{n, w0, d};
    const auto spec = overlap_window({0.0, d}, w0);
    return numerics::integrate(
        [&](double x) { return mode_amplitude(u1, x) * mode_amplitude(un, x); }, spec);
}

}  // namespace beamdisp::modes
