#include "beamdisp/detection.hpp"

#include <cmath>
#include <numbers>

namespace beamdisp::detection {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::array_qnl: return "array_qnl";
        case Scheme::split: return "split";
        case Scheme::tem10_homodyne: return "tem10_homodyne";
    }
    return "unknown";
}

TruncationError::TruncationError(double tail_, int n_max_)
    : std::runtime_error("noise sum rule tail " + std::to_string(tail_) +
                         " exceeds 1e-6 at n_max " + std::to_string(n_max_)),
      tail(tail_),
      n_max(n_max_) {}

double db_to_variance(double db) {
    if (!(db >= 0.0)) throw std::domain_error("db_to_variance: squeezing must be >= 0 dB");
    return std::pow(10.0, -db / 10.0);
}

double variance_to_db(double v) {
    if (!(v > 0.0) || !(v <= 1.0))
        throw std::domain_error("variance_to_db: variance must be in (0, 1]");
    return -10.0 * std::log10(v);
}

double SqueezeSpec::variance() const { return db_to_variance(magnitude_db); }

void SqueezeSpec::validate() const {
    if (!(magnitude_db >= 0.0)) throw std::invalid_argument("SqueezeSpec: magnitude_db must be >= 0");
}

void SchemeConfig::validate() const {
    if (n_max < 1) throw std::invalid_argument("SchemeConfig: n_max must be >= 1");
    if (!squeeze) return;
    squeeze->validate();
    switch (scheme) {
        case Scheme::array_qnl:
            throw std::invalid_argument("SchemeConfig: the idealised array accepts no squeezing");
        case Scheme::split:
            if (squeeze->target != SqueezeTarget::flipped_v0)
                throw std::invalid_argument("SchemeConfig: split detection squeezes the flipped mode");
            break;
        case Scheme::tem10_homodyne:
            if (squeeze->target != SqueezeTarget::tem10)
                throw std::invalid_argument("SchemeConfig: homodyne detection squeezes the TEM10 mode");
            break;
    }
}

double qnl_sensitivity(const modes::BeamState& beam) {
    beam.validate();
    return 2.0 * std::sqrt(beam.photons) / beam.waist;
}

double split_mean(const modes::BeamState& beam) {
    beam.validate();
    return modes::zeta0(beam.displacement, beam.waist);
}

namespace detail {

double xi_squared_partial_sum(double d, double w0, int n_max) {
    const double lambda = (d / w0) * (d / w0);
    // Poisson(lambda) mass summed up to n_max, by the stable ratio recurrence.
    double p = std::exp(-lambda);
    double sum = p;
    for (int n = 1; n <= n_max; ++n) {
        p *= lambda / n;
        sum += p;
    }
    return sum;
}

double chi_squared_partial_sum(double d, double w0, int n_max) {
    const double lambda = (d / w0) * (d / w0);
    if (lambda == 0.0) return n_max >= 1 ? 1.0 : 0.0;
    // chi_n^2 = Poisson(n; lambda) * (n - lambda)^2 / lambda; the full sum is
    // Var[Poisson]/lambda = 1.
    double p = std::exp(-lambda);
    double sum = p * lambda;  // n = 0 term: p * (0 - lambda)^2 / lambda
    for (int n = 1; n <= n_max; ++n) {
        p *= lambda / n;
        sum += p * (n - lambda) * (n - lambda) / lambda;
    }
    return sum;
}

}  // namespace detail

namespace {

void check_tail(double partial_sum, int n_max) {
    const double tail = 1.0 - partial_sum;
    if (tail > 1e-6) throw TruncationError(tail, n_max);
}

}  // namespace

double split_noise(const SchemeConfig& config, const modes::BeamState& beam) {
    config.validate();
    beam.validate();
    if (config.scheme != Scheme::split)
        throw std::invalid_argument("split_noise: config.scheme must be split");
    if (!config.squeeze) return 1.0;
    const double v = config.squeeze->variance();
    if (v == 1.0) return 1.0;  // 0 dB reduces to the coherent case exactly
    check_tail(detail::xi_squared_partial_sum(beam.displacement, beam.waist, config.n_max),
               config.n_max);
    const double xi0 = modes::xi_coeff(0, beam.displacement, beam.waist);
    return std::sqrt(1.0 - xi0 * xi0 * (1.0 - v));
}

SchemeResult split_sensitivity(const SchemeConfig& config, const modes::BeamState& beam) {
    const double noise = split_noise(config, beam);
    const double slope = modes::zeta0_slope(beam.displacement, beam.waist);
    const double sensitivity = std::sqrt(beam.photons) * slope / noise;
    return {beam.displacement, split_mean(beam), noise, sensitivity,
            sensitivity / qnl_sensitivity(beam)};
}

double homodyne_mean(const modes::BeamState& beam) {
    beam.validate();
    return 2.0 * modes::displaced_coeff(1, beam);
}

double homodyne_noise(const SchemeConfig& config, const modes::BeamState& beam) {
    config.validate();
    beam.validate();
    if (config.scheme != Scheme::tem10_homodyne)
        throw std::invalid_argument("homodyne_noise: config.scheme must be tem10_homodyne");
    if (!config.squeeze) return 1.0;
    const double v = config.squeeze->variance();
    if (v == 1.0) return 1.0;
    check_tail(detail::chi_squared_partial_sum(beam.displacement, beam.waist, config.n_max),
               config.n_max);
    const double chi1 = modes::chi_coeff(1, beam.displacement, beam.waist);
    return std::sqrt(1.0 - chi1 * chi1 * (1.0 - v));
}

SchemeResult homodyne_sensitivity(const SchemeConfig& config, const modes::BeamState& beam) {
    const double noise = homodyne_noise(config, beam);
    const double r = beam.displacement / beam.waist;
    // |d/dd of 2 (d/w0) e^{-d^2/(2 w0^2)}| = (2/w0) |1 - r^2| e^{-r^2/2}
    const double slope = 2.0 / beam.waist * std::abs(1.0 - r * r) * std::exp(-0.5 * r * r);
    const double sensitivity = std::sqrt(beam.photons) * slope / noise;
    return {beam.displacement, homodyne_mean(beam), noise, sensitivity,
            sensitivity / qnl_sensitivity(beam)};
}

double qnl_crossover_db(Scheme scheme) {
    switch (scheme) {
        case Scheme::tem10_homodyne:
            return 0.0;
        case Scheme::split: {
            // Small-d relative sensitivity sqrt(2/pi)/sqrt(V(db)) is strictly
            // increasing in db; bisect it against 1.
            auto relative = [](double db) {
                return std::sqrt(2.0 / std::numbers::pi) / std::sqrt(db_to_variance(db)) - 1.0;
            };
            double lo = 0.0, hi = 20.0;
            while (hi - lo > 1e-7) {
                const double mid = 0.5 * (lo + hi);
                (relative(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        case Scheme::array_qnl:
            break;
    }
    throw std::invalid_argument("qnl_crossover_db: scheme must be split or tem10_homodyne");
}

SchemeResult evaluate(const SchemeConfig& config, const modes::BeamState& beam) {
    config.validate();
    beam.validate();
    switch (config.scheme) {
        case Scheme::split: return split_sensitivity(config, beam);
        case Scheme::tem10_homodyne: return homodyne_sensitivity(config, beam);
        case Scheme::array_qnl: {
            const double noise = 0.5 * beam.waist / std::sqrt(beam.photons);
            const double s = qnl_sensitivity(beam);
            return {beam.displacement, beam.displacement, noise, s, 1.0};
        }
    }
    throw std::invalid_argument("evaluate: unknown scheme");
}

}  // namespace beamdisp::detection
