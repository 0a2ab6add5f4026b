#pragma once

#include "kerrsq/core_model.hpp"
#include "kerrsq/steady_state.hpp"

#include <complex>

namespace kerrsq {

/// Above this distance to the critical point the linearized fluctuation
/// equations are no longer trusted (breakdown expected around x = 0.995).
inline constexpr double kLinearizationLimit = 0.99;

/// Quadrature variances at the injection-locking point, normalized to vacuum.
struct SqueezingResult {
    double v_s = 1.0;
    double v_as = 1.0;
    double phi_opt = 0.0;      // rad, in (-pi/4, 0]; anti-squeezing at phi_opt + pi/2
    double sigma = 0.0;        // 2 g_opt alpha_p^2 = sigma_tilde * Gamma, rad/s
    double sigma_tilde = 0.0;  // P_in / P_th
    double x = 0.0;            // distance to the critical point
    double eta = 1.0;
    bool beyond_linearization = false;  // x > kLinearizationLimit
};

/// Closed-form squeezing and anti-squeezing at locking:
///   V_s  = 1 - (8 eta kappa / Gamma) s^2 (sqrt(1 + 1/(4 s^2)) - 1)
///   V_as = 1 + (8 eta kappa / Gamma) s^2 (sqrt(1 + 1/(4 s^2)) + 1)
/// with s = P_in / P_th. p_th may be +inf (no Kerr gain), giving vacuum.
/// For P_in = 0 every phase is equivalent and phi_opt is reported as 0.
[[nodiscard]] SqueezingResult locked_variances(double p_in, double p_th, double kappa,
                                               double gamma, double eta);

/// phi_opt = (1/2) atan(-P_th / (2 P_in)). Throws ZeroPower when P_in / P_th is 0.
[[nodiscard]] double optimal_phase(double p_in, double p_th);

/// y = 1 + (2 omega / Gamma)^2.
[[nodiscard]] double dimensionless_frequency(double omega, double big_gamma);

/// Locked variance spectrum in dimensionless form,
///   1 + (c/y^2) ( [i s/2 (y + 2 i s)] e^{-2i phi} - [i s/2 (y - 2 i s)] e^{2i phi} + 2 s^2 ),
/// s = sigma_tilde, c = 4 eta kappa / Gamma. At y = 1 its extrema over phi are
/// V_s and V_as; it returns to 1 for y -> infinity.
[[nodiscard]] double locked_raw_variance(double sigma_tilde, double y, double c, double phi_lo);

/// Same expression evaluated with complex arithmetic; the imaginary part is
/// rounding noise and is exposed only for checking.
[[nodiscard]] std::complex<double> locked_raw_variance_complex(double sigma_tilde, double y,
                                                               double c, double phi_lo);

struct SpectrumPoint {
    double omega = 0.0;
    double phi_lo = 0.0;
    double v = 1.0;
    double y = 1.0;
    double c = 0.0;
    double sigma_tilde = 0.0;  // |sigma| / Gamma
};

/// phi-dependence of the output quadrature variance at one sideband:
/// V(phi) = mean + 2 Re(rotating e^{2 i phi}).
struct QuadratureMoments {
    double mean = 1.0;
    std::complex<double> rotating{0.0, 0.0};

    [[nodiscard]] double at(double phi) const;
    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] double argmin() const;  // in (-pi/2, pi/2]
};

/// Output quadrature moments from the linearized transfer matrix
///   T = [[-i Df - gamma/2, -i sigma/2], [i sigma*/2, i Df - gamma/2]],
/// sigma = 2 g_opt alpha_p^2, Df = branch.delta_f. The output doublet is
///   B_out = -M B_in - sqrt(gamma/kappa) (M - 1) B_gamma,
///   M = (Omega - T - kappa/2)(Omega - T + kappa/2)^{-1}, Omega = -i omega,
/// followed by a beam splitter of transmission eta that admits vacuum. The
/// vacuum correlators <b(w) b^dag(w')> = delta(w + w') reduce the second
/// moments to the spectral density at the conjugate pair (omega, -omega).
///
/// Throws SingularMatrix when Omega - T + kappa/2 has condition number above
/// 1e12 (a classical turning point), InvalidEfficiency for eta outside [0, 1].
[[nodiscard]] QuadratureMoments quadrature_moments(const ResonatorParams& params,
                                                   const SteadyStateBranch& branch, double omega,
                                                   double eta);

[[nodiscard]] SpectrumPoint variance_spectrum(const ResonatorParams& params,
                                              const SteadyStateBranch& branch, double omega,
                                              double phi_lo, double eta);

/// Output fluctuation photon flux 4 eta kappa |sigma|^2 Gamma / (4 Df^2 + Gamma^2 - |sigma|^2)^2.
/// At locking this is (4 eta kappa / Gamma) (P_in/P_th)^2. Throws UnstablePoint
/// when the denominator base is not positive.
[[nodiscard]] double fluctuation_flux(const ResonatorParams& params,
                                      const SteadyStateBranch& branch, double eta);

/// Same quantity read off the transfer-matrix path at omega = 0.
[[nodiscard]] double fluctuation_flux_matrix(const ResonatorParams& params,
                                             const SteadyStateBranch& branch, double eta);

}  // namespace kerrsq
