#pragma once

#include <optional>
#include <vector>

#include "beamdisp/numerics.hpp"

namespace beamdisp::modes {

/// The interrogated TEM00 beam.  Amplitude convention
/// u0(x-d) = (2/(pi w0^2))^{1/4} exp[-((x-d)/w0)^2], so the single-photon
/// position distribution is Gaussian with standard deviation waist/2.
struct BeamState {
    double waist;         // w0 > 0, length units
    double photons;       // mean photon number N > 0
    double displacement;  // d, length units

    void validate() const;
};

/// One transverse Hermite-Gauss basis function u_n(x - center), optionally
/// with a pi phase flip: when `flip` is set the mode is negated for x < flip.
struct ModeSpec {
    int order;                   // Hermite-Gauss index n >= 0
    double waist;                // w0 > 0
    double center = 0.0;         // 0 for detector-centred modes, d for beam-centred ones
    std::optional<double> flip;  // flip position, if this is a flipped mode

    void validate() const;
};

/// Decomposition of a displaced beam over the centred basis, orders 0..n_max.
struct CoeffVector {
    std::vector<double> values;  // values[n] = alpha_n / sqrt(N)
    int n_max;
    double truncation_tail;  // 1 - sum of squares; >= -1e-12 by completeness
    bool truncated;          // tail above 1e-6
};

/// Evaluate the mode function at x.
/// u_n(x-c) = (2/(pi w0^2))^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2)(x-c)/w0) exp[-((x-c)/w0)^2],
/// sign-flipped below `flip` when present.  Uses the normalised Hermite
/// recurrence, stable for all allowed orders.
double mode_amplitude(const ModeSpec& spec, double x);

/// Coefficient of the displaced fundamental over the centred basis:
/// alpha_n / sqrt(N) = (d/w0)^n (n!)^{-1/2} exp[-d^2/(2 w0^2)].
/// Evaluated in log space so large |d|/w0 cannot overflow intermediates.
double displaced_coeff(int n, const BeamState& beam);

CoeffVector decompose(const BeamState& beam, int n_max);

/// decompose() with n_max grown from 20 until the tail drops below tail_tol
/// (or the order cap is reached).
CoeffVector decompose_auto(const BeamState& beam, double tail_tol = 1e-6);

/// Normalised split-detector mean signal <n_->/N for a beam displaced by d:
/// the half-plane intensity difference, in closed form erf(sqrt(2) d / w0).
double zeta0(double d, double w0);

/// d(zeta0)/dd in closed form: (2 sqrt(2) / (sqrt(pi) w0)) exp(-2 d^2 / w0^2).
double zeta0_slope(double d, double w0);

/// Overlap of the flipped fundamental v0(x, d) with the displaced flipped
/// mode v_n(x-d, 0), by quadrature with a breakpoint at the (shared) flip
/// position x = d.
double xi_coeff(int n, double d, double w0);

/// Overlap of the centred u1 with the displaced u_n:
/// chi_n = integral of u1(x) u_n(x-d) dx.  Closed forms for n in {0, 1},
/// quadrature otherwise.
double chi_coeff(int n, double d, double w0);

/// Quadrature window covering every listed mode centre plus 10 waists of
/// Gaussian tail on each side (tail magnitude < 1e-43 of peak).
numerics::QuadSpec overlap_window(std::initializer_list<double> centers, double w0,
                                  std::vector<double> breakpoints = {});

}  // namespace beamdisp::modes
