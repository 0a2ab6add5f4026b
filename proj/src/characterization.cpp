#include "kerrsq/characterization.hpp"

#include "kerrsq/error.hpp"
#include "kerrsq/least_squares.hpp"
#include "kerrsq/steady_state.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace kerrsq {

namespace {

bool strictly_monotone(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    }
    return true;
}

double median_spacing(const std::vector<double>& x) {
    std::vector<double> d;
    d.reserve(x.size());
    for (std::size_t i = 1; i < x.size(); ++i) d.push_back(std::abs(x[i] - x[i - 1]));
    return percentile(std::move(d), 50.0);
}

// Full width of the dip at half depth, measured from the samples.
double half_depth_width(const std::vector<double>& x, const std::vector<double>& t,
                        std::size_t imin) {
    const double level = 0.5 * (1.0 + t[imin]);
    auto crossing = [&](int step) -> std::optional<double> {
        for (auto i = static_cast<long>(imin); i + step >= 0 && i + step < static_cast<long>(t.size());
             i += step) {
            const auto j = static_cast<std::size_t>(i + step);
            const auto k = static_cast<std::size_t>(i);
            if (t[j] >= level) {
                const double frac = (level - t[k]) / (t[j] - t[k]);
                return x[k] + frac * (x[j] - x[k]);
            }
        }
        return std::nullopt;
    };
    const auto left = crossing(-1);
    const auto right = crossing(+1);
    const double span = std::abs(x.back() - x.front());
    if (left && right) return std::max(std::abs(*right - *left), 1e-9 * span);
    if (left) return 2.0 * std::abs(x[imin] - *left);
    if (right) return 2.0 * std::abs(*right - x[imin]);
    return 0.25 * span;
}

}  // namespace

void TransmissionTrace::validate() const {
    if (frequency.size() != transmission.size()) {
        throw Error(ErrorCode::SchemaError, "frequency and transmission columns differ in length");
    }
    if (frequency.empty()) throw Error(ErrorCode::EmptyTrace, "transmission trace has no samples");
    if (!strictly_monotone(frequency)) {
        throw Error(ErrorCode::InvalidParameter, "frequency axis must be strictly monotone");
    }
    for (double v : transmission) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "non-finite transmission");
    }
    if (!(p_in >= 0.0)) throw Error(ErrorCode::InvalidParameter, "p_in must be >= 0");
}

ResonanceFit fit_linear_resonance(const TransmissionTrace& trace, CouplingRegime regime,
                                  const ResonanceFitOptions& options) {
    trace.validate();
    const auto& x = trace.frequency;
    const auto& t = trace.transmission;
    if (x.size() < 4) throw Error(ErrorCode::RankDeficient, "need at least 4 samples");
    const auto imin = static_cast<std::size_t>(std::min_element(t.begin(), t.end()) - t.begin());
    if (t[imin] > options.no_dip_threshold) {
        throw Error(ErrorCode::NoDip, "no resonance dip below the detection threshold");
    }

    const double x_ref = x[imin];
    const double width0 = half_depth_width(x, t, imin);
    const double depth0 = std::sqrt(std::max(t[imin], 0.0));
    const auto m = static_cast<Eigen::Index>(x.size());

    // p = [(x0 - x_ref)/w, Gamma/w, (kappa - gamma)/w]
    auto model = [&](const Eigen::VectorXd& p, std::size_t i, double* grad) {
        const double delta = x[i] - (x_ref + width0 * p(0));
        const double h = 0.5 * width0 * p(1);
        const double d = 0.5 * width0 * p(2);
        const double den = h * h + delta * delta;
        const double num = d * d + delta * delta;
        if (grad != nullptr) {
            grad[0] = -width0 * 2.0 * delta * (h * h - d * d) / (den * den);
            grad[1] = 0.5 * width0 * (-2.0 * h * num / (den * den));
            grad[2] = 0.5 * width0 * (2.0 * d / den);
        }
        return num / den;
    };

    LeastSquaresProblem problem;
    problem.residual_count = static_cast<int>(m);
    problem.residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        r.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            r(i) = model(p, static_cast<std::size_t>(i), nullptr) - t[static_cast<std::size_t>(i)];
        }
    };
    problem.jacobian = [&](const Eigen::VectorXd& p, Eigen::MatrixXd& jac) {
        jac.resize(m, 3);
        double g[3];
        for (Eigen::Index i = 0; i < m; ++i) {
            model(p, static_cast<std::size_t>(i), g);
            jac(i, 0) = g[0];
            jac(i, 1) = g[1];
            jac(i, 2) = g[2];
        }
    };

    Eigen::VectorXd p0(3);
    p0 << 0.0, 1.0, std::max(depth0, 1e-3);
    const LeastSquaresResult ls = solve_least_squares(problem, p0);

    const double big_gamma = width0 * std::abs(ls.x(1));
    const double diff = std::min(width0 * std::abs(ls.x(2)), big_gamma);
    ResonanceFit fit;
    fit.omega_r = x_ref + width0 * ls.x(0);
    const double larger = 0.5 * (big_gamma + diff);
    const double smaller = 0.5 * (big_gamma - diff);
    fit.kappa = regime == CouplingRegime::Over ? larger : smaller;
    fit.gamma = regime == CouplingRegime::Over ? smaller : larger;

    const auto& cov = ls.covariance;
    const double var_g = width0 * width0 * cov(1, 1);
    const double var_d = width0 * width0 * cov(2, 2);
    // sign of the (Gamma, |kappa-gamma|) covariance follows the fitted signs
    const double cov_gd = width0 * width0 * cov(1, 2) *
                          (ls.x(1) < 0.0 ? -1.0 : 1.0) * (ls.x(2) < 0.0 ? -1.0 : 1.0);
    const double var_larger = 0.25 * (var_g + var_d + 2.0 * cov_gd);
    const double var_smaller = 0.25 * (var_g + var_d - 2.0 * cov_gd);
    fit.omega_r_err = width0 * std::sqrt(std::max(cov(0, 0), 0.0));
    fit.kappa_err = std::sqrt(std::max(regime == CouplingRegime::Over ? var_larger : var_smaller, 0.0));
    fit.gamma_err = std::sqrt(std::max(regime == CouplingRegime::Over ? var_smaller : var_larger, 0.0));
    fit.residual_norm = ls.residual_norm;
    fit.evaluations = ls.evaluations;

    double depth_norm = 0.0;
    for (double v : t) depth_norm += (1.0 - v) * (1.0 - v);
    depth_norm = std::sqrt(depth_norm);
    fit.relative_residual = depth_norm > 0.0 ? ls.residual_norm / depth_norm : 0.0;
    if (fit.relative_residual > options.poor_fit_threshold) {
        throw Error(ErrorCode::PoorFit, "relative residual " + std::to_string(fit.relative_residual) +
                                            " exceeds threshold");
    }
    return fit;
}

ShiftFit fit_shift_coefficient(const std::vector<TransmissionTrace>& traces,
                               const ShiftFitSetup& setup, const ShiftFitOptions& options) {
    if (!(setup.kappa > 0.0) || !(setup.gamma >= 0.0) || !(setup.omega_r > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "shift fit needs kappa > 0, gamma >= 0, omega_r > 0");
    }
    int powered = 0;
    for (const auto& tr : traces) {
        tr.validate();
        if (tr.p_in > 0.0) ++powered;
    }
    if (powered < 2) {
        throw Error(ErrorCode::InvalidParameter, "shift fit needs traces at two or more powers");
    }
    const double omega_p = setup.omega_p > 0.0 ? setup.omega_p : setup.omega_r;

    ResonatorParams base;
    base.kappa = setup.kappa;
    base.gamma = setup.gamma;
    base.omega_r = setup.omega_r;

    // Detuning grids and the strongest drive.
    std::vector<std::vector<double>> grids;
    double n_lock_max = 0.0;
    double spacing_at_max = 0.0;
    double span_max = 0.0;
    std::size_t total = 0;
    for (const auto& tr : traces) {
        std::vector<double> g = tr.frequency;
        if (tr.axis == FrequencyAxis::AbsoluteOmega) {
            for (double& v : g) v -= setup.omega_r;
        }
        const double n_lock = locked_photon_number(base, tr.p_in, omega_p);
        if (n_lock > n_lock_max) {
            n_lock_max = n_lock;
            spacing_at_max = median_spacing(g);
        }
        span_max = std::max(span_max, std::abs(g.back() - g.front()));
        total += g.size();
        grids.push_back(std::move(g));
    }
    if (options.g_sum_max * n_lock_max < spacing_at_max) {
        throw Error(ErrorCode::Degenerate,
                    "input powers too low: the largest admissible shift stays below one sample");
    }

    auto residuals = [&](double g_sum, std::vector<double>& r) {
        r.clear();
        ResonatorParams p = base;
        p.g_opt = g_sum;  // only the sum enters the classical model
        for (std::size_t k = 0; k < traces.size(); ++k) {
            PumpConfig pump;
            pump.p_in = traces[k].p_in;
            pump.omega_p = omega_p;
            pump.delta_p_grid = grids[k];
            pump.direction = traces[k].direction;
            const SweepTrace sw = sweep(p, pump);
            const bool ascending = grids[k].size() < 2 || grids[k][1] > grids[k][0];
            const bool same_order = ascending == (traces[k].direction == SweepDirection::Increasing);
            const std::size_t n = grids[k].size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& pt = sw.points[same_order ? i : n - 1 - i];
                r.push_back(pt.transmission - traces[k].transmission[i]);
            }
        }
    };
    std::vector<double> buf;
    buf.reserve(total);
    auto cost = [&](double g_sum) {
        residuals(g_sum, buf);
        double s = 0.0;
        for (double v : buf) s += v * v;
        return s;
    };

    const double g_hi = std::min(options.g_sum_max, 2.0 * span_max / n_lock_max);
    const int k_max = std::max(options.scan_points, 3);
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_max; ++k) {
        const double c = cost(g_hi * k / (k_max - 1));
        if (c < best_cost) {
            best_cost = c;
            best = k;
        }
    }
    const double lo = g_hi * std::max(best - 1, 0) / (k_max - 1);
    const double hi = g_hi * std::min(best + 1, k_max - 1) / (k_max - 1);
    auto [g_opt_sum, refined_cost] = boost::math::tools::brent_find_minima(cost, lo, hi, 40);
    if (best_cost < refined_cost) {
        g_opt_sum = g_hi * best / (k_max - 1);
        refined_cost = best_cost;
    }

    ShiftFit fit;
    fit.g_sum = g_opt_sum;
    fit.residual_norm = std::sqrt(refined_cost);

    // The drop point of a sweep moves in whole samples, so the cost is only
    // piecewise smooth in g_sum. Take its curvature over a step that moves the
    // strongest locking point by a few samples.
    const double h = std::max({1e-4 * fit.g_sum, 3.0 * spacing_at_max / n_lock_max, 1e-9});
    const double c0 = refined_cost;
    const double c_hi = cost(fit.g_sum + h);
    const double c_lo = fit.g_sum - h >= 0.0 ? cost(fit.g_sum - h) : cost(fit.g_sum + 2.0 * h);
    const double curvature = fit.g_sum - h >= 0.0 ? (c_hi - 2.0 * c0 + c_lo) / (h * h)
                                                  : (c_lo - 2.0 * c_hi + c0) / (h * h);
    const double dof = static_cast<double>(total) - 1.0;
    const double smooth_var = (curvature > 0.0 && dof > 0.0) ? 2.0 * (c0 / dof) / curvature
                                                             : std::numeric_limits<double>::infinity();
    // plus the uniform uncertainty of where between two samples the drop sits
    const double quantum = spacing_at_max / n_lock_max;
    fit.g_sum_err = std::sqrt(smooth_var + quantum * quantum / 12.0);

    double depth = 0.0;
    for (const auto& tr : traces) {
        for (double v : tr.transmission) depth += (1.0 - v) * (1.0 - v);
    }
    fit.relative_residual = depth > 0.0 ? fit.residual_norm / std::sqrt(depth) : 0.0;
    return fit;
}

double g_opt_from_threshold(double p_th, double kappa, double gamma, double lambda_p) {
    if (!(p_th > 0.0)) throw Error(ErrorCode::InvalidParameter, "p_th must be > 0");
    if (!(kappa > 0.0) || !(gamma >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "kappa must be > 0 and gamma >= 0");
    }
    const double big_gamma = kappa + gamma;
    const double omega_p = omega_from_wavelength(lambda_p);
    return big_gamma * big_gamma * big_gamma * constants::hbar * omega_p / (8.0 * kappa * p_th);
}

const char* to_string(DispersionRegime r) noexcept {
    switch (r) {
    case DispersionRegime::Anomalous: return "anomalous";
    case DispersionRegime::Normal: return "normal";
    case DispersionRegime::Zero: return "zero";
    }
    return "zero";
}

DispersionFit fit_dispersion(const ResonanceList& resonances) {
    const auto& e = resonances.entries;
    std::set<int> distinct;
    for (const auto& r : e) {
        if (!std::isfinite(r.omega)) throw Error(ErrorCode::InvalidParameter, "non-finite resonance");
        if (!distinct.insert(r.mu).second) {
            throw Error(ErrorCode::InvalidParameter, "duplicate mode number " + std::to_string(r.mu));
        }
    }
    if (distinct.size() < 3) {
        throw Error(ErrorCode::RankDeficient, "dispersion fit needs at least 3 distinct modes");
    }

    // Work relative to the mode nearest mu = 0 so the offsets are exact and the
    // quadratic term is not lost against omega ~ 1e15.
    const auto ref_it = std::min_element(e.begin(), e.end(), [](const auto& a, const auto& b) {
        return std::abs(a.mu) < std::abs(b.mu);
    });
    const double omega_ref = ref_it->omega;
    double mu_scale = 0.0;
    for (const auto& r : e) mu_scale = std::max(mu_scale, std::abs(static_cast<double>(r.mu)));

    const auto m = static_cast<Eigen::Index>(e.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mu = e[static_cast<std::size_t>(i)].mu / mu_scale;
        a(i, 0) = 1.0;
        a(i, 1) = mu;
        a(i, 2) = 0.5 * mu * mu;
        y(i) = e[static_cast<std::size_t>(i)].omega - omega_ref;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient");
    const Eigen::VectorXd c = qr.solve(y);
    const Eigen::VectorXd r = y - a * c;

    DispersionFit fit;
    fit.omega_0 = omega_ref + c(0);
    fit.d1 = c(1) / mu_scale;
    fit.d2 = c(2) / (mu_scale * mu_scale);
    fit.residual_norm = r.norm();

    const double dof = static_cast<double>(m) - 3.0;
    if (dof > 0.0) {
        const double s2 = r.squaredNorm() / dof;
        const Eigen::MatrixXd cov = s2 * (a.transpose() * a).inverse();
        fit.omega_0_err = std::sqrt(std::max(cov(0, 0), 0.0));
        fit.d1_err = std::sqrt(std::max(cov(1, 1), 0.0)) / mu_scale;
        fit.d2_err = std::sqrt(std::max(cov(2, 2), 0.0)) / (mu_scale * mu_scale);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const int mu = e[static_cast<std::size_t>(i)].mu;
        fit.mu.push_back(mu);
        fit.dint.push_back(y(i) - c(0) - fit.d1 * mu);
        fit.residual.push_back(r(i));
    }
    fit.regime = fit.d2 > 0.0   ? DispersionRegime::Anomalous
                 : fit.d2 < 0.0 ? DispersionRegime::Normal
                                : DispersionRegime::Zero;
    return fit;
}

double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw Error(ErrorCode::EmptyTrace, "percentile of an empty set");
    if (!(pct >= 0.0 && pct <= 100.0)) {
        throw Error(ErrorCode::InvalidParameter, "percentile must lie in [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
}

namespace {

void check_zero_span(const ZeroSpanTrace& z, const char* what) {
    if (z.t.empty() || z.power_dbm.empty()) {
        throw Error(ErrorCode::EmptyTrace, std::string(what) + " trace has no samples");
    }
    if (z.t.size() != z.power_dbm.size()) {
        throw Error(ErrorCode::SchemaError, std::string(what) + " trace columns differ in length");
    }
    if (!strictly_monotone(z.t)) {
        throw Error(ErrorCode::InvalidParameter, std::string(what) + " time axis is not monotone");
    }
}

bool same_setting(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TraceReduction reduce_homodyne_trace(const ZeroSpanTrace& trace, const ZeroSpanTrace& reference,
                                     const TraceReductionOptions& options) {
    check_zero_span(trace, "measurement");
    check_zero_span(reference, "reference");
    const auto& a = trace.metadata;
    const auto& b = reference.metadata;
    if (!same_setting(a.center_hz, b.center_hz) || !same_setting(a.rbw_hz, b.rbw_hz) ||
        !same_setting(a.vbw_hz, b.vbw_hz)) {
        throw Error(ErrorCode::MetadataMismatch,
                    "measurement and reference were taken with different analyzer settings");
    }

    TraceReduction out;
    const auto n_ref = static_cast<double>(reference.power_dbm.size());
    const double mean_ref =
        std::accumulate(reference.power_dbm.begin(), reference.power_dbm.end(), 0.0) / n_ref;
    out.reference_level_dbm = mean_ref;

    std::vector<double> rel(trace.power_dbm.size());
    if (options.detrend_reference && reference.t.size() >= 2) {
        const double mean_t = std::accumulate(reference.t.begin(), reference.t.end(), 0.0) / n_ref;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < reference.t.size(); ++i) {
            const double dt = reference.t[i] - mean_t;
            sxy += dt * (reference.power_dbm[i] - mean_ref);
            sxx += dt * dt;
        }
        const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
        out.reference_slope_db_s = slope;
        for (std::size_t i = 0; i < rel.size(); ++i) {
            rel[i] = trace.power_dbm[i] - (mean_ref + slope * (trace.t[i] - mean_t));
        }
    } else {
        for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = trace.power_dbm[i] - mean_ref;
    }
    out.v_s_db = percentile(rel, options.low_percentile);
    out.v_as_db = percentile(std::move(rel), options.high_percentile);
    return out;
}

}  // namespace kerrsq
