#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "beamdisp/modes.hpp"
#include "beamdisp/numerics.hpp"
#include "oracles.hpp"

using namespace beamdisp;

namespace {

// Quadrature of the product of two mode functions over their shared window.
double overlap_quad(const modes::ModeSpec& a, const modes::ModeSpec& b,
                    std::vector<double> breakpoints = {}) {
    auto spec = modes::overlap_window({a.center, b.center}, std::max(a.waist, b.waist),
                                      std::move(breakpoints));
    return numerics::integrate(
        [&](double x) { return modes::mode_amplitude(a, x) * modes::mode_amplitude(b, x); }, spec);
}

}  // namespace

TEST_SUITE_BEGIN("modes");

TEST_CASE("mode amplitude peak, node and flip") {
    const double peak = std::pow(2.0 / std::numbers::pi, 0.25);
    CHECK(modes::mode_amplitude({0, 1.0, 0.3}, 0.3) == doctest::Approx(peak).epsilon(1e-14));
    CHECK(modes::mode_amplitude({1, 1.0, 0.0}, 0.0) == 0.0);
    // flipped fundamental evaluated below its flip position
    const double expected = -peak * std::exp(-1.0);
    CHECK(modes::mode_amplitude({0, 1.0, 0.0, 0.0}, -1.0) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("mode functions are unit-normalised, flipped or not") {
    for (int n : {0, 1, 2, 5, 10}) {
        for (double w0 : {0.37, 1.0, 2.5}) {
            const modes::ModeSpec plain{n, w0, 0.0};
            const modes::ModeSpec flipped{n, w0, 0.0, 0.3 * w0};
            CHECK(overlap_quad(plain, plain) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(overlap_quad(flipped, flipped, {0.3 * w0}) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("orthonormality over orders 0..10") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> dw(0.2, 5.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double w0 = dw(gen);
        for (int m = 0; m <= 10; ++m) {
            for (int n = m; n <= 10; ++n) {
                const double plain = overlap_quad({m, w0, 0.0}, {n, w0, 0.0});
                CHECK(plain == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-8));
            }
        }
        // flipped modes with a common flip position stay orthonormal
        const double flip = 0.4 * w0;
        for (int m = 0; m <= 4; ++m) {
            for (int n = m; n <= 4; ++n) {
                const double val =
                    overlap_quad({m, w0, 0.0, flip}, {n, w0, 0.0, flip}, {flip});
                CHECK(val == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("displaced coefficient closed form") {
    CHECK(modes::displaced_coeff(0, {1.0, 1.0, 0.0}) == 1.0);
    CHECK(modes::displaced_coeff(2, {1.0, 1.0, 0.0}) == 0.0);
    CHECK(modes::displaced_coeff(1, {1.0, 1.0, 1.0}) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("displaced coefficient agrees with the overlap quadrature") {
    // n <= 8 and d/w0 in {0.1, 0.5, 1, 2}, absolute 1e-8
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const modes::BeamState beam{1.0, 1.0, r};
        const modes::ModeSpec displaced{0, 1.0, r};
        for (int n = 0; n <= 8; ++n) {
            const double quad = overlap_quad(displaced, {n, 1.0, 0.0});
            CHECK(std::abs(modes::displaced_coeff(n, beam) - quad) < 1e-8);
        }
    }
}

TEST_CASE("decompose reports the truncation tail") {
    const auto centred = modes::decompose({1.0, 1.0, 0.0}, 5);
    CHECK(centred.values[0] == 1.0);
    for (int n = 1; n <= 5; ++n) CHECK(centred.values[n] == 0.0);
    CHECK(std::abs(centred.truncation_tail) < 1e-12);
    CHECK_FALSE(centred.truncated);

    const auto one_waist = modes::decompose({1.0, 1.0, 1.0}, 1);
    CHECK(one_waist.values[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(one_waist.values[1] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    // tail oracle: 1 - partial Poisson sum at lambda = 1, orders 0..1
    const double expected_tail = 1.0 - oracles::poisson_partial_sum(1.0, 1);
    CHECK(one_waist.truncation_tail == doctest::Approx(expected_tail).epsilon(1e-12));
    CHECK(one_waist.truncated);

    const auto half_waist = modes::decompose({1.0, 1.0, 0.5}, 20);
    CHECK(1.0 - oracles::poisson_partial_sum(0.25, 20) < 1e-12);  // oracle tail bound
    CHECK(std::abs(half_waist.truncation_tail) < 1e-12);
}

TEST_CASE("decompose_auto extends the basis until the tail is small") {
    const auto far = modes::decompose_auto({1.0, 1.0, 3.0});
    CHECK(far.truncation_tail < 1e-6);
    CHECK(far.n_max > 20);
}

TEST_CASE("completeness: squared coefficients sum to one") {
    for (double r : {0.1, 0.7, 1.5, 2.5}) {
        const auto coeffs = modes::decompose_auto({2.0, 1.0, r * 2.0}, 1e-10);
        double sumsq = 0.0;
        for (double c : coeffs.values) sumsq += c * c;
        CHECK(sumsq == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(coeffs.truncation_tail >= -1e-12);
    }
}

TEST_CASE("zeta0 endpoints and small-displacement slope") {
    CHECK(modes::zeta0(0.0, 1.0) == 0.0);
    CHECK(modes::zeta0(10.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double small = modes::zeta0(0.001, 1.0);
    CHECK(small ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * 0.002).epsilon(1e-5));
}

TEST_CASE("zeta0 closed form equals the half-plane quadrature") {
    const double w0 = 1.3;
    for (double r = -3.0; r <= 3.0; r += 0.25) {
        const double d = r * w0;
        auto signed_density = [&](double x) {
            const double u = modes::mode_amplitude({0, w0, d}, x);
            return (x >= 0.0 ? 1.0 : -1.0) * u * u;
        };
        numerics::QuadSpec spec{d - 10.0 * w0, d + 10.0 * w0};
        if (spec.lower < 0.0 && spec.upper > 0.0) spec.breakpoints = {0.0};
        const double quad = numerics::integrate(signed_density, spec);
        CHECK(std::abs(modes::zeta0(d, w0) - quad) < 1e-9);
    }
}

TEST_CASE("zeta0 slope matches a finite difference") {
    for (double d : {0.0, 0.4, 1.0, 2.2}) {
        const double fd =
            oracles::central_difference([](double x) { return modes::zeta0(x, 1.0); }, d, 1e-6);
        CHECK(modes::zeta0_slope(d, 1.0) == doctest::Approx(fd).epsilon(1e-9));
    }
}

TEST_CASE("xi coefficients: self-overlap, parity zeros, quadrature oracle") {
    CHECK(modes::xi_coeff(0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    // sign factors cancel, leaving u_n-u_0 orthogonality
    CHECK(std::abs(modes::xi_coeff(3, 0.0, 1.0)) < 1e-10);

    // independent fine-grid trapezoidal oracle; the shared flip makes the
    // product smooth, so a uniform grid is adequate
    const double d = 0.2;
    auto integrand = [&](double x) {
        return modes::mode_amplitude({0, 1.0, 0.0, d}, x) *
               modes::mode_amplitude({0, 1.0, d, d}, x);
    };
    const double oracle = oracles::trapezoid(integrand, d - 10.0, d + 10.0, 1 << 21);
    CHECK(std::abs(modes::xi_coeff(0, d, 1.0) - oracle) < 1e-8);
}

TEST_CASE("xi magnitudes equal the displaced coefficients") {
    // The two flips coincide, so the signs cancel and |xi_n(d)| matches the
    // displaced-beam coefficient magnitude.
    for (double r : {0.2, 0.8, 1.5}) {
        for (int n : {0, 1, 3}) {
            const double coeff = modes::displaced_coeff(n, {1.0, 1.0, r});
            CHECK(std::abs(modes::xi_coeff(n, r, 1.0)) ==
                  doctest::Approx(std::abs(coeff)).epsilon(1e-9));
        }
    }
}

TEST_CASE("chi coefficients: closed forms and quadrature") {
    CHECK(modes::chi_coeff(1, 0.0, 1.0) == 1.0);
    CHECK(modes::chi_coeff(0, 0.0, 1.0) == 0.0);
    CHECK(std::abs(modes::chi_coeff(1, 1.0, 1.0)) < 1e-9);  // (1 - r^2) zero at r = 1

    auto chi_oracle = [](int n, double d) {
        auto integrand = [&](double x) {
            return modes::mode_amplitude({1, 1.0, 0.0}, x) *
                   modes::mode_amplitude({n, 1.0, d}, x);
        };
        const double lo = std::min(0.0, d) - 10.0;
        const double hi = std::max(0.0, d) + 10.0;
        return oracles::trapezoid(integrand, lo, hi, 1 << 21);
    };
    for (double d : {0.3, 1.7})
        for (int n : {0, 1}) CHECK(std::abs(modes::chi_coeff(n, d, 1.0) - chi_oracle(n, d)) < 1e-9);
    CHECK(std::abs(modes::chi_coeff(2, 0.4, 1.0) - chi_oracle(2, 0.4)) < 1e-8);
    CHECK(std::abs(modes::chi_coeff(5, 1.2, 1.0) - chi_oracle(5, 1.2)) < 1e-8);
}

TEST_CASE("xi and chi sum rules") {
    for (double r : {0.0, 0.25, 0.5, 1.0}) {
        double xi_sum = 0.0, chi_sum = 0.0;
        for (int n = 0; n <= 40; ++n) {
            const double xi = modes::xi_coeff(n, r, 1.0);
            const double chi = modes::chi_coeff(n, r, 1.0);
            xi_sum += xi * xi;
            chi_sum += chi * chi;
        }
        CHECK(xi_sum == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(chi_sum == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("dimensionless coefficients depend only on d/w0") {
    std::mt19937 gen(4242);
    std::uniform_real_distribution<double> scale(0.1, 8.0);
    for (int i = 0; i < 5; ++i) {
        const double s = scale(gen);
        const double r = 0.6;
        CHECK(modes::zeta0(r * s, s) == doctest::Approx(modes::zeta0(r, 1.0)).epsilon(1e-12));
        CHECK(modes::displaced_coeff(3, {s, 1.0, r * s}) ==
              doctest::Approx(modes::displaced_coeff(3, {1.0, 1.0, r})).epsilon(1e-12));
        CHECK(modes::xi_coeff(0, r * s, s) ==
              doctest::Approx(modes::xi_coeff(0, r, 1.0)).epsilon(1e-9));
        CHECK(modes::chi_coeff(2, r * s, s) ==
              doctest::Approx(modes::chi_coeff(2, r, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("symmetry under displacement reversal") {
    for (double d : {0.1, 0.7, 2.0}) {
        CHECK(modes::zeta0(-d, 1.0) == -modes::zeta0(d, 1.0));
        for (int n = 0; n <= 5; ++n) {
            const double plus = modes::displaced_coeff(n, {1.0, 1.0, d});
            const double minus = modes::displaced_coeff(n, {1.0, 1.0, -d});
            CHECK(minus == (n % 2 == 0 ? plus : -plus));
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(modes::mode_amplitude({-1, 1.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(modes::mode_amplitude({0, -1.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(modes::mode_amplitude({201, 1.0, 0.0}, 0.0), numerics::OrderTooLargeError);
    CHECK_THROWS_AS(modes::displaced_coeff(0, {0.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(modes::displaced_coeff(0, {1.0, -1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(modes::zeta0(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(modes::xi_coeff(-1, 0.0, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
