#pragma once

#include "kerrsq/core_model.hpp"

#include <optional>
#include <vector>

namespace kerrsq {

/// One classical steady state of the driven Kerr + thermal cavity.
struct SteadyStateBranch {
    double n = 0.0;            // intracavity photon number |alpha_p|^2
    double delta_cl = 0.0;     // delta_p + n (g_opt + g_th)
    double delta_f = 0.0;      // delta_cl + g_opt n
    bool stable = true;
    double alpha_phase = 0.0;  // arg(alpha_p) relative to beta_in
};

/// All steady states at one pump detuning, sorted by increasing n. One root
/// outside the bistable window, three inside, two at a tangency.
///
/// The cubic is solved in the scaled variable u = n / n_lock, where
/// n_lock = 4 kappa |beta_in|^2 / Gamma^2 is the largest photon number any
/// detuning can reach, so every root lies in (0, 1]. The depressed-cubic closed
/// form seeds the roots; each is then polished by bracketed Newton iteration
/// inside the monotone interval that contains it. A branch is stable when the
/// drive curve N ((Gamma/2)^2 + delta_cl^2) is increasing in N there.
[[nodiscard]] std::vector<SteadyStateBranch> steady_roots(const ResonatorParams& params,
                                                          double delta_p, double p_in,
                                                          double omega_p);

/// Photon number at the locking point, 4 kappa |beta_in|^2 / Gamma^2.
[[nodiscard]] double locked_photon_number(const ResonatorParams& params, double p_in,
                                          double omega_p);

/// Relative residual |N((Gamma/2)^2 + delta_cl^2) - kappa |beta_in|^2| / (kappa |beta_in|^2).
[[nodiscard]] double steady_residual(const ResonatorParams& params, double delta_p, double p_in,
                                     double omega_p, double n);

/// |t|^2 for b_out = sqrt(kappa) a - b_in, as a function of the classical detuning.
[[nodiscard]] double transmission(const ResonatorParams& params, double delta_cl);
[[nodiscard]] double transmission(const ResonatorParams& params, const SteadyStateBranch& branch);

struct SweepPoint {
    double delta_p = 0.0;
    SteadyStateBranch branch;
    double transmission = 1.0;
    int root_count = 1;
};

struct SweepTrace {
    SweepDirection direction = SweepDirection::Decreasing;
    double p_in = 0.0;
    std::vector<SweepPoint> points;  // in traversal order
};

/// Branch-continued sweep over pump.delta_p_grid, traversed in the order given
/// by pump.direction (the grid itself may be ascending or descending).
///
/// Outside the bistable window there is one root. Entering the window the
/// continuing branch is the upper one when arriving from the blue side
/// (decreasing frequency) and the lower one when arriving from the red side,
/// so the selection never lands on the unstable middle root. Inside the
/// window the selected branch is kept until it disappears, after which the
/// single remaining root is taken. A sweep that starts inside the window
/// starts on the lower (cold-cavity) branch.
[[nodiscard]] SweepTrace sweep(const ResonatorParams& params, const PumpConfig& pump);

struct LockingPoint {
    double delta_p = 0.0;
    SteadyStateBranch branch;
};

/// The detuning delta_p = -(g_opt + g_th) n_lock at which the shifted
/// resonance coincides with the pump (delta_cl = 0).
[[nodiscard]] LockingPoint injection_locking_point(const ResonatorParams& params, double p_in,
                                                   double omega_p);

/// hbar omega_p n.
[[nodiscard]] double stored_energy(double n, double omega_p);

/// Stored energy divided by the round-trip time 2 pi R n_eff / c. Requires the
/// ring geometry; returns nullopt without it.
[[nodiscard]] std::optional<double> circulating_power(const ResonatorParams& params, double n,
                                                      double omega_p);

}  // namespace kerrsq
