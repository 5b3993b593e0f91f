#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "beamdisp/detection.hpp"
#include "beamdisp/modes.hpp"
#include "beamdisp/philox.hpp"

namespace beamdisp::mc {

enum class PhotonSampling { fixed_n, poissonian };

/// Photon-level simulation setup.  Identical configs give bit-identical
/// results: every trial draws from its own counter-based stream keyed by
/// (seed, trial index), so trials are independent and order-insensitive.
struct McConfig {
    modes::BeamState beam;
    std::int64_t trials;
    std::uint64_t seed;
    PhotonSampling photon_sampling = PhotonSampling::poissonian;

    void validate() const;
};

/// Aggregate outcome over all trials of one ensemble.
struct McResult {
    double estimator_mean;
    double estimator_std;
    double predicted_std;   // w0/(2 sqrt(N)) for the array, 1/sqrt(N) for split
    double n_effective;     // mean photons per trial
    double standard_error;  // of the std estimate: estimator_std / sqrt(2 (trials - 1))
    std::int64_t empty_trials;
    std::int64_t used_trials;
};

struct SensitivityEstimate {
    double sensitivity;
    double bootstrap_stderr;
    std::int64_t used_trials;
    std::int64_t empty_trials;
};

struct EmptyTrialError : std::runtime_error {
    EmptyTrialError() : std::runtime_error("trial produced no photons") {}
};

/// Draw the photon transverse positions of one trial: K i.i.d. Gaussians with
/// mean d and standard deviation w0/2, where K is round(N) (fixed_n) or
/// Poisson(N).  The photon count is drawn before the positions.
std::vector<double> sample_positions(const McConfig& config, std::uint64_t trial_index);

/// Mean arrival position: the idealised-array displacement estimator.
/// Throws EmptyTrialError on an empty trial.
double array_estimate(std::span<const double> positions);

/// Split-detector count difference (#positions > 0) - (#positions < 0);
/// positions exactly at 0 land on neither side.
std::int64_t split_trial(std::span<const double> positions);

/// Run every trial of `config` under `scheme` (array_qnl or split) and
/// aggregate.  Array trials with no photons are excluded and counted; empty
/// split trials contribute a zero count difference.
McResult run_trials(const McConfig& config, detection::Scheme scheme);

/// Finite-difference sensitivity (d mean / d d) / std from paired ensembles
/// at d -/+ delta/2.  The two arms share each trial's photon count and
/// Gaussian draws (common random numbers), which the pairing in the mean
/// difference exploits; the noise is the pooled per-arm standard deviation.
/// The standard error comes from 200 bootstrap resamples of the trial pairs.
SensitivityEstimate empirical_sensitivity(const McConfig& config, detection::Scheme scheme,
                                          double delta);

}  // namespace beamdisp::mc
