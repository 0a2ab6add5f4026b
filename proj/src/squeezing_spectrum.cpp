#include "kerrsq/squeezing_spectrum.hpp"

#include "kerrsq/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace kerrsq {

namespace {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

constexpr double kMaxCondition = 1e12;

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "eta must lie in [0, 1]");
    }
}

struct OutputResponse {
    Mat2 in;     // coefficient of (db_in, db_in^dag)
    Mat2 loss;   // coefficient of (db_gamma, db_gamma^dag)
};

OutputResponse output_response(const ResonatorParams& params, const SteadyStateBranch& branch,
                               double omega) {
    const double kappa = params.kappa;
    const double gamma = params.gamma;
    const cd sigma = 2.0 * params.g_opt * branch.n * std::polar(1.0, 2.0 * branch.alpha_phase);
    const cd i(0.0, 1.0);
    const double df = branch.delta_f;

    Mat2 t;
    t << -i * df - 0.5 * gamma, -i * sigma / 2.0,
         i * std::conj(sigma) / 2.0, i * df - 0.5 * gamma;
    const Mat2 big_omega = Mat2::Identity() * (-i * omega);
    const Mat2 lhs = big_omega - t - 0.5 * kappa * Mat2::Identity();
    const Mat2 rhs = big_omega - t + 0.5 * kappa * Mat2::Identity();

    Eigen::JacobiSVD<Mat2> svd(rhs);
    const auto sv = svd.singularValues();
    if (!(sv(1) > 0.0) || sv(0) / sv(1) > kMaxCondition) {
        throw Error(ErrorCode::SingularMatrix,
                    "fluctuation matrix is singular at this operating point (classical turning point)");
    }
    const Mat2 m = lhs * rhs.inverse();

    OutputResponse r;
    r.in = -m;
    r.loss = -std::sqrt(gamma / kappa) * (m - Mat2::Identity());
    return r;
}

}  // namespace

SqueezingResult locked_variances(double p_in, double p_th, double kappa, double gamma, double eta) {
    check_eta(eta);
    if (!(p_th > 0.0)) throw Error(ErrorCode::InvalidParameter, "p_th must be > 0");
    if (!(p_in >= 0.0) || !std::isfinite(p_in)) {
        throw Error(ErrorCode::InvalidParameter, "p_in must be >= 0");
    }
    if (!(kappa > 0.0) || !(gamma >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "kappa must be > 0 and gamma >= 0");
    }
    const double big_gamma = kappa + gamma;
    SqueezingResult res;
    res.eta = eta;
    res.sigma_tilde = p_in / p_th;
    res.sigma = res.sigma_tilde * big_gamma;
    res.x = critical_distance(res.sigma_tilde);
    res.beyond_linearization = res.x > kLinearizationLimit;

    const double s2 = res.sigma_tilde * res.sigma_tilde;
    const double coeff = 8.0 * eta * kappa / big_gamma;
    // w = s^2 sqrt(1 + 1/(4 s^2)); w - s^2 rewritten without cancellation
    const double w = std::sqrt(s2 * s2 + 0.25 * s2);
    res.v_s = s2 > 0.0 ? 1.0 - coeff * (0.25 * s2) / (w + s2) : 1.0;
    res.v_as = 1.0 + coeff * (w + s2);
    res.phi_opt = res.sigma_tilde > 0.0 ? optimal_phase(p_in, p_th) : 0.0;
    return res;
}

double optimal_phase(double p_in, double p_th) {
    const double s = p_in / p_th;
    if (!(s > 0.0)) throw Error(ErrorCode::ZeroPower, "optimal phase undefined without drive");
    return 0.5 * std::atan(-1.0 / (2.0 * s));
}

double dimensionless_frequency(double omega, double big_gamma) {
    const double r = 2.0 * omega / big_gamma;
    return 1.0 + r * r;
}

double locked_raw_variance(double sigma_tilde, double y, double c, double phi_lo) {
    const double s = sigma_tilde;
    const double s2 = s * s;
    return 1.0 + c / (y * y) *
                     (s * y * std::sin(2.0 * phi_lo) - 2.0 * s2 * std::cos(2.0 * phi_lo) + 2.0 * s2);
}

std::complex<double> locked_raw_variance_complex(double sigma_tilde, double y, double c,
                                                 double phi_lo) {
    const cd i(0.0, 1.0);
    const double s = sigma_tilde;
    const cd down = (i * s / 2.0) * (y + 2.0 * i * s) * std::exp(-2.0 * i * phi_lo);
    const cd up = (i * s / 2.0) * (y - 2.0 * i * s) * std::exp(2.0 * i * phi_lo);
    return 1.0 + c / (y * y) * (down - up + 2.0 * s * s);
}

double QuadratureMoments::at(double phi) const {
    return mean + 2.0 * std::real(rotating * std::polar(1.0, 2.0 * phi));
}

double QuadratureMoments::min() const { return mean - 2.0 * std::abs(rotating); }

double QuadratureMoments::max() const { return mean + 2.0 * std::abs(rotating); }

double QuadratureMoments::argmin() const {
    if (std::abs(rotating) == 0.0) return 0.0;
    double phi = 0.5 * (constants::pi - std::arg(rotating));
    while (phi > 0.5 * constants::pi) phi -= constants::pi;
    while (phi <= -0.5 * constants::pi) phi += constants::pi;
    return phi;
}

QuadratureMoments quadrature_moments(const ResonatorParams& params,
                                     const SteadyStateBranch& branch, double omega, double eta) {
    check_eta(eta);
    const OutputResponse pos = output_response(params, branch, omega);
    const OutputResponse neg = output_response(params, branch, -omega);

    // Column 0 multiplies b, column 1 multiplies b^dag; row 0 is db_out,
    // row 1 is db_out^dag. Only <b(w) b^dag(-w)> survives.
    cd constant{0.0, 0.0};
    cd plus{0.0, 0.0};   // e^{+2 i phi}
    cd minus{0.0, 0.0};  // e^{-2 i phi}
    for (const auto& [u, v] : {std::pair{&pos.in, &neg.in}, std::pair{&pos.loss, &neg.loss}}) {
        constant += (*u)(0, 0) * (*v)(1, 1) + (*u)(1, 0) * (*v)(0, 1);
        plus += (*u)(0, 0) * (*v)(0, 1);
        minus += (*u)(1, 0) * (*v)(1, 1);
    }
    QuadratureMoments q;
    q.mean = (1.0 - eta) + eta * constant.real();
    q.rotating = eta * 0.5 * (plus + std::conj(minus));
    return q;
}

SpectrumPoint variance_spectrum(const ResonatorParams& params, const SteadyStateBranch& branch,
                                double omega, double phi_lo, double eta) {
    const QuadratureMoments q = quadrature_moments(params, branch, omega, eta);
    const double big_gamma = total_loss(params);
    SpectrumPoint p;
    p.omega = omega;
    p.phi_lo = phi_lo;
    p.v = q.at(phi_lo);
    p.y = dimensionless_frequency(omega, big_gamma);
    p.c = 4.0 * eta * params.kappa / big_gamma;
    p.sigma_tilde = 2.0 * params.g_opt * branch.n / big_gamma;
    return p;
}

double fluctuation_flux(const ResonatorParams& params, const SteadyStateBranch& branch,
                        double eta) {
    check_eta(eta);
    const double big_gamma = total_loss(params);
    const double sigma = 2.0 * params.g_opt * branch.n;
    const double base =
        4.0 * branch.delta_f * branch.delta_f + big_gamma * big_gamma - sigma * sigma;
    if (!(base > 0.0)) {
        throw Error(ErrorCode::UnstablePoint, "fluctuations are unstable at this operating point");
    }
    return 4.0 * eta * params.kappa * sigma * sigma * big_gamma / (base * base);
}

double fluctuation_flux_matrix(const ResonatorParams& params, const SteadyStateBranch& branch,
                               double eta) {
    check_eta(eta);
    const OutputResponse r = output_response(params, branch, 0.0);
    // <db_out^dag db_out>: row 1 column 0 times row 0 column 1, per channel
    const cd n = r.in(1, 0) * r.in(0, 1) + r.loss(1, 0) * r.loss(0, 1);
    return eta * n.real();
}

}  // namespace kerrsq
