#pragma once

// Forward-model data generators used for sample files and round-trip tests.

#include "kerrsq/characterization.hpp"
#include "kerrsq/steady_state.hpp"

#include <random>
#include <utility>
#include <vector>

namespace kerrsq {

/// Evenly spaced grid of `points` values from start to stop (inclusive).
[[nodiscard]] std::vector<double> linspace(double start, double stop, int points);

/// Cold-cavity transmission dip centred at `center` on a detuning axis.
[[nodiscard]] TransmissionTrace linear_transmission_trace(double kappa, double gamma, double center,
                                                          const std::vector<double>& grid);

/// Transmission of a branch-continued sweep, samples stored in grid order.
[[nodiscard]] TransmissionTrace sweep_transmission_trace(const ResonatorParams& params,
                                                         const PumpConfig& pump);

/// Multiplies every sample by (1 + rel * n), n standard normal.
void add_multiplicative_noise(TransmissionTrace& trace, double rel, std::mt19937_64& rng);

/// omega_mu = omega_0 + d1 mu + d2 mu^2 / 2 for mu in [mu_min, mu_max].
[[nodiscard]] ResonanceList quadratic_resonances(double omega_0, double d1, double d2, int mu_min,
                                                 int mu_max);

/// Zero-span pair for a linear LO phase ramp over `phase_span` rad: the trace
/// follows the locked variance at y = 1 on top of a flat reference level.
[[nodiscard]] std::pair<ZeroSpanTrace, ZeroSpanTrace> homodyne_traces(
    double sigma_tilde, double c, double reference_dbm, int samples, double duration_s,
    double phase_span, const ZeroSpanMetadata& metadata);

}  // namespace kerrsq
