#include "kerrsq/steady_state.hpp"

#include "kerrsq/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kerrsq {

namespace {

// f(u) = eps^2 u^3 + 2 eps d u^2 + (1 + d^2) u - 1, the drive balance in
// scaled units u = N / n_lock, d = delta_p / (Gamma/2), eps = s n_lock / (Gamma/2).
struct ScaledCubic {
    double d;
    double eps;

    [[nodiscard]] double value(double u) const {
        const double shift = d + eps * u;
        return u * (1.0 + shift * shift) - 1.0;
    }
    [[nodiscard]] double slope(double u) const {
        const double shift = d + eps * u;
        return 1.0 + shift * shift + 2.0 * eps * u * shift;
    }
};

// Real roots of the depressed cubic form of f, used only as Newton seeds.
std::vector<double> closed_form_seeds(const ScaledCubic& f) {
    const double a = 2.0 * f.d / f.eps;
    const double b = (1.0 + f.d * f.d) / (f.eps * f.eps);
    const double c = -1.0 / (f.eps * f.eps);
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::vector<double> out;
    if (disc < 0.0 && p < 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            out.push_back(m * std::cos(theta - 2.0 * constants::pi * k / 3.0) + shift);
        }
    } else {
        const double r = std::sqrt(std::max(disc, 0.0));
        out.push_back(std::cbrt(-q / 2.0 + r) + std::cbrt(-q / 2.0 - r) + shift);
    }
    return out;
}

// Newton iteration safeguarded by bisection on [lo, hi], f(lo) and f(hi) of
// opposite sign (or one of them zero).
double polish(const ScaledCubic& f, double lo, double hi, double seed) {
    double flo = f.value(lo);
    double fhi = f.value(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo > 0.0) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    double u = (seed > std::min(lo, hi) && seed < std::max(lo, hi)) ? seed : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fu = f.value(u);
        if (fu == 0.0) return u;
        if (fu < 0.0) lo = u; else hi = u;
        const double df = f.slope(u);
        double next = (df != 0.0) ? u - fu / df : 0.5 * (lo + hi);
        if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 4e-16 * std::max(std::abs(u), 1e-300)) return next;
        u = next;
        if (std::abs(hi - lo) <= 4e-16 * std::abs(u)) return u;
    }
    return u;
}

// Right end of the bracket above the local minimum; all roots lie in (0, 1].
double upper_end(double u2) { return u2 < 1.0 ? 1.0 : 2.0 * u2; }

std::vector<double> scaled_roots(const ScaledCubic& f) {
    // Linear-cavity limit and tiny shifts: f is monotone on [0, 1].
    if (f.eps < 1e-6) {
        const double seed = 1.0 / (1.0 + f.d * f.d);
        return {polish(f, 0.0, 1.0, seed)};
    }
    const std::vector<double> seeds = closed_form_seeds(f);
    auto nearest_seed = [&](double lo, double hi) {
        double best = 0.5 * (lo + hi);
        double best_dist = std::numeric_limits<double>::infinity();
        for (double s : seeds) {
            const double dist = (s < lo) ? lo - s : (s > hi ? s - hi : 0.0);
            if (dist < best_dist) {
                best_dist = dist;
                best = s;
            }
        }
        return best;
    };

    // Turning points of f exist only for d < -sqrt(3).
    const double disc = f.d * f.d - 3.0;
    if (f.d >= 0.0 || disc <= 0.0) {
        return {polish(f, 0.0, 1.0, nearest_seed(0.0, 1.0))};
    }
    const double root_disc = std::sqrt(disc);
    const double u1 = (-2.0 * f.d - root_disc) / (3.0 * f.eps);  // local max of f
    const double u2 = (-2.0 * f.d + root_disc) / (3.0 * f.eps);  // local min of f
    if (u1 >= 1.0) {
        return {polish(f, 0.0, 1.0, nearest_seed(0.0, 1.0))};
    }
    const double f1 = f.value(u1);
    const double f2 = f.value(u2);
    const double tangent_tol = 1e-14;
    std::vector<double> roots;
    if (f1 < -tangent_tol || f2 > tangent_tol) {
        // single crossing
        const double lo = (f1 < 0.0) ? u2 : 0.0;
        const double hi = (f1 < 0.0) ? upper_end(u2) : u1;
        roots.push_back(polish(f, lo, hi, nearest_seed(lo, hi)));
        return roots;
    }
    if (std::abs(f1) <= tangent_tol) {
        roots.push_back(u1);
        roots.push_back(polish(f, u2, upper_end(u2), nearest_seed(u2, 1.0)));
        return roots;
    }
    if (std::abs(f2) <= tangent_tol) {
        roots.push_back(polish(f, 0.0, u1, nearest_seed(0.0, u1)));
        roots.push_back(u2);
        return roots;
    }
    roots.push_back(polish(f, 0.0, u1, nearest_seed(0.0, u1)));
    roots.push_back(polish(f, u1, u2, nearest_seed(u1, u2)));
    roots.push_back(polish(f, u2, upper_end(u2), nearest_seed(u2, 1.0)));
    return roots;
}

SteadyStateBranch make_branch(const ResonatorParams& params, double delta_p, double n,
                              bool stable) {
    SteadyStateBranch b;
    b.n = n;
    b.delta_cl = delta_p + n * (params.g_opt + params.g_th);
    b.delta_f = b.delta_cl + params.g_opt * n;
    b.stable = stable;
    b.alpha_phase = std::atan2(b.delta_cl, 0.5 * total_loss(params));
    return b;
}

}  // namespace

double locked_photon_number(const ResonatorParams& params, double p_in, double omega_p) {
    const double big_gamma = total_loss(params);
    return 4.0 * params.kappa * input_photon_flux(p_in, omega_p) / (big_gamma * big_gamma);
}

double steady_residual(const ResonatorParams& params, double delta_p, double p_in, double omega_p,
                       double n) {
    const double drive = params.kappa * input_photon_flux(p_in, omega_p);
    const double half = 0.5 * total_loss(params);
    const double dcl = delta_p + n * (params.g_opt + params.g_th);
    const double lhs = n * (half * half + dcl * dcl);
    if (drive == 0.0) return std::abs(lhs);
    return std::abs(lhs - drive) / drive;
}

std::vector<SteadyStateBranch> steady_roots(const ResonatorParams& params, double delta_p,
                                            double p_in, double omega_p) {
    params.validate();
    if (!(p_in >= 0.0) || !std::isfinite(p_in)) {
        throw Error(ErrorCode::InvalidParameter, "p_in must be >= 0");
    }
    if (p_in == 0.0) return {make_branch(params, delta_p, 0.0, true)};

    const double half = 0.5 * total_loss(params);
    const double n_lock = locked_photon_number(params, p_in, omega_p);
    const double s = params.g_opt + params.g_th;
    const ScaledCubic f{delta_p / half, s * n_lock / half};

    const std::vector<double> us = scaled_roots(f);
    std::vector<SteadyStateBranch> out;
    out.reserve(us.size());
    for (double u : us) {
        out.push_back(make_branch(params, delta_p, u * n_lock, f.slope(u) > 0.0));
    }
    if (out.size() == 2) {
        // the tangent (double) root is marginal
        const double s0 = std::abs(f.slope(us[0]));
        const double s1 = std::abs(f.slope(us[1]));
        (s0 < s1 ? out[0] : out[1]).stable = false;
    }
    std::sort(out.begin(), out.end(),
              [](const SteadyStateBranch& a, const SteadyStateBranch& b) { return a.n < b.n; });
    return out;
}

double transmission(const ResonatorParams& params, double delta_cl) {
    const double half = 0.5 * total_loss(params);
    const double diff = 0.5 * (params.kappa - params.gamma);
    const double d2 = delta_cl * delta_cl;
    return (diff * diff + d2) / (half * half + d2);
}

double transmission(const ResonatorParams& params, const SteadyStateBranch& branch) {
    return transmission(params, branch.delta_cl);
}

SweepTrace sweep(const ResonatorParams& params, const PumpConfig& pump) {
    params.validate();
    pump.validate();

    SweepTrace trace;
    trace.direction = pump.direction;
    trace.p_in = pump.p_in;
    const auto& grid = pump.delta_p_grid;
    if (grid.empty()) return trace;

    const bool ascending = grid.size() < 2 || grid[1] > grid[0];
    const bool traverse_up = pump.direction == SweepDirection::Increasing;
    std::vector<double> order(grid.begin(), grid.end());
    if (ascending != traverse_up) std::reverse(order.begin(), order.end());

    enum class Track { Lower, Upper, Single };
    Track track = Track::Single;
    bool first = true;

    trace.points.reserve(order.size());
    for (double dp : order) {
        const auto roots = steady_roots(params, dp, pump.p_in, pump.omega_p);
        SweepPoint pt;
        pt.delta_p = dp;
        pt.root_count = static_cast<int>(roots.size());
        if (roots.size() == 1) {
            pt.branch = roots.front();
            track = Track::Single;
        } else {
            if (first) {
                track = Track::Lower;
            } else if (track == Track::Single) {
                // Blue side of the window connects to the upper branch.
                track = traverse_up ? Track::Lower : Track::Upper;
            }
            pt.branch = (track == Track::Upper) ? roots.back() : roots.front();
        }
        first = false;
        pt.transmission = transmission(params, pt.branch);
        trace.points.push_back(pt);
    }
    return trace;
}

LockingPoint injection_locking_point(const ResonatorParams& params, double p_in, double omega_p) {
    params.validate();
    const double n_lock = locked_photon_number(params, p_in, omega_p);
    LockingPoint lp;
    lp.delta_p = -(params.g_opt + params.g_th) * n_lock;
    const auto roots = steady_roots(params, lp.delta_p, p_in, omega_p);
    lp.branch = *std::min_element(roots.begin(), roots.end(),
                                  [&](const SteadyStateBranch& a, const SteadyStateBranch& b) {
                                      return std::abs(a.n - n_lock) < std::abs(b.n - n_lock);
                                  });
    return lp;
}

double stored_energy(double n, double omega_p) { return constants::hbar * omega_p * n; }

std::optional<double> circulating_power(const ResonatorParams& params, double n, double omega_p) {
    if (!params.geometry) return std::nullopt;
    const double round_trip =
        2.0 * constants::pi * params.geometry->radius_m * params.geometry->n_eff / constants::c;
    return stored_energy(n, omega_p) / round_trip;
}

}  // namespace kerrsq
