#pragma once

// Reference implementations used only by the tests. None of these share code
// with the library solvers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Positive real roots N of
//   s^2 N^3 + 2 s dp N^2 + (h^2 + dp^2) N - drive = 0,
// h = Gamma/2, from the companion matrix eigenvalues, each refined by
// bisection on the original polynomial in long double.
struct CubicInN {
    long double s, dp, h, drive;
    [[nodiscard]] long double value(long double n) const {
        const long double shift = dp + s * n;
        return n * (h * h + shift * shift) - drive;
    }
};

inline std::vector<double> companion_roots(double s, double dp, double h, double drive) {
    std::vector<double> out;
    const CubicInN f{s, dp, h, drive};
    if (s == 0.0) {
        out.push_back(drive / (h * h + dp * dp));
        return out;
    }
    // monic: N^3 + a2 N^2 + a1 N + a0; scale N = n_ref * v to keep entries O(1)
    const double n_ref = 2.0 * drive / (h * h);  // twice the largest possible root
    const double a2 = 2.0 * dp / s / n_ref;
    const double a1 = (h * h + dp * dp) / (s * s) / (n_ref * n_ref);
    const double a0 = -drive / (s * s) / (n_ref * n_ref * n_ref);
    Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
    c(0, 0) = -a2;
    c(0, 1) = -a1;
    c(0, 2) = -a0;
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(c);
    std::vector<double> candidates;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.imag()) <= 1e-7 * std::max(std::abs(z), 1e-12) && z.real() > 0.0) {
            candidates.push_back(z.real() * n_ref);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (double r : candidates) {
        // bisection on a small bracket around the eigenvalue estimate
        long double lo = r * (1.0L - 1e-5L);
        long double hi = r * (1.0L + 1e-5L);
        if ((f.value(lo) < 0) == (f.value(hi) < 0)) {
            out.push_back(r);  // tangent or unresolvable: keep the eigenvalue
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-30L * hi; ++it) {
            const long double mid = 0.5L * (lo + hi);
            if ((f.value(mid) < 0) == (f.value(lo) < 0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    return out;
}

// Roots by scanning for sign changes on a uniform grid of [0, n_max] and
// bisecting each bracket.
inline std::vector<double> scan_roots(double s, double dp, double h, double drive, double n_max,
                                      int cells = 20000) {
    const CubicInN f{s, dp, h, drive};
    std::vector<double> out;
    long double prev_n = 0.0L;
    long double prev_f = f.value(0.0L);
    for (int i = 1; i <= cells; ++i) {
        const long double n = n_max * static_cast<long double>(i) / cells;
        const long double fn = f.value(n);
        if ((prev_f < 0) != (fn < 0) || fn == 0) {
            long double lo = prev_n;
            long double hi = n;
            for (int it = 0; it < 200 && hi - lo > 1e-30L * hi; ++it) {
                const long double mid = 0.5L * (lo + hi);
                if ((f.value(mid) < 0) == (f.value(lo) < 0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push_back(static_cast<double>(0.5L * (lo + hi)));
        }
        prev_n = n;
        prev_f = fn;
    }
    return out;
}

inline double golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-13) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::abs(b - a) > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Locked variance at zero sideband frequency written directly in phi.
inline double locked_variance_y1(double s, double c, double phi) {
    return 1.0 + c * (s * std::sin(2.0 * phi) - 2.0 * s * s * std::cos(2.0 * phi) + 2.0 * s * s);
}

// Closed forms at locking in the unsimplified square-root form.
inline double v_s_closed(double s, double eta, double kappa, double big_gamma) {
    return 1.0 - 8.0 * eta * kappa / big_gamma * s * s * (std::sqrt(1.0 + 1.0 / (4.0 * s * s)) - 1.0);
}
inline double v_as_closed(double s, double eta, double kappa, double big_gamma) {
    return 1.0 + 8.0 * eta * kappa / big_gamma * s * s * (std::sqrt(1.0 + 1.0 / (4.0 * s * s)) + 1.0);
}

// Output quadrature variance in the real (X, P) basis, X = a + a^dag,
// P = -i (a - a^dag), for the linear drift
//   da/dt = (-i df - Gamma/2) a - i (sigma/2) a^dag + sqrt(kappa) b_in + sqrt(gamma) b_g,
// output sqrt(kappa) a - b_in. The LO selects a e^{i phi} + a^dag e^{-i phi},
// i.e. u = (cos phi, -sin phi) in the (X, P) basis. Vacuum: <q q^T> = I + iJ.
inline double quadrature_variance(double kappa, double gamma, double delta_f,
                                  std::complex<double> sigma, double omega, double phi,
                                  double eta) {
    using cd = std::complex<double>;
    const cd i(0.0, 1.0);
    const double big_gamma = kappa + gamma;
    Eigen::Matrix2cd a;
    a << -i * delta_f - big_gamma / 2.0, -i * sigma / 2.0, i * std::conj(sigma) / 2.0,
        i * delta_f - big_gamma / 2.0;
    Eigen::Matrix2cd l;
    l << 1.0, 1.0, -i, i;
    const Eigen::Matrix2cd aq = l * a * l.inverse();
    const Eigen::Matrix2cd chi = (-i * omega * Eigen::Matrix2cd::Identity() - aq).inverse();
    const Eigen::Matrix2cd g_in = kappa * chi - Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd g_loss = std::sqrt(kappa * gamma) * chi;
    Eigen::Matrix2cd vac;
    vac << 1.0, i, -i, 1.0;
    const Eigen::Matrix2cd s = g_in * vac * g_in.adjoint() + g_loss * vac * g_loss.adjoint();
    const Eigen::Vector2cd u(std::cos(phi), -std::sin(phi));
    const double v = (u.adjoint() * s * u)(0).real();
    return (1.0 - eta) + eta * v;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
