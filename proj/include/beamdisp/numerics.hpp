#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace beamdisp::numerics {

// Largest order the Hermite recurrence is allowed to evaluate before
// intermediate terms risk overflowing.
inline constexpr int kMaxHermiteOrder = 200;

struct OrderTooLargeError : std::domain_error {
    explicit OrderTooLargeError(int n);
    int order;
};

/// Thrown by integrate() when the subdivision budget is exhausted before the
/// requested tolerance is met. Carries the error estimate achieved so far.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(double achieved, int subdivisions);
    double achieved_error;
    int subdivisions_used;
};

/// Physicists' Hermite polynomial H_n(y) via the three-term recurrence
/// H_0 = 1, H_1 = 2y, H_{n+1} = 2y H_n - 2n H_{n-1}.
double hermite(int n, double y);

/// Error function, accurate to better than 1e-12 absolute everywhere.
/// Odd symmetry erf(-x) = -erf(x) holds exactly (computed on |x|).
double erf(double x);

/// Definite integral request over a finite interval.  Interior jump
/// discontinuities of the integrand must be listed as breakpoints; the
/// domain is cut there so no quadrature panel straddles a discontinuity.
struct QuadSpec {
    double lower;
    double upper;
    std::vector<double> breakpoints{};  // strictly increasing, strictly inside (lower, upper)
    double rel_tol = 1e-10;
    int max_subdivisions = 1 << 16;

    void validate() const;  // throws std::invalid_argument on a malformed spec
};

/// Deterministic adaptive Gauss-Kronrod (7/15) quadrature.
///
/// The interval is cut at every breakpoint, then each piece is bisected
/// depth-first until the local error estimate fits a per-length share of the
/// global tolerance max(rel_tol * |integral|, 1e-14).  Evaluation and
/// accumulation order are fixed, so identical inputs give bit-identical
/// results.
double integrate(const std::function<double(double)>& f, const QuadSpec& spec);

}  // namespace beamdisp::numerics
