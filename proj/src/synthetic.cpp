#include "kerrsq/synthetic.hpp"

#include "kerrsq/error.hpp"
#include "kerrsq/squeezing_spectrum.hpp"

#include <cmath>

namespace kerrsq {

std::vector<double> linspace(double start, double stop, int points) {
    if (points < 1) throw Error(ErrorCode::InvalidParameter, "grid needs at least one point");
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = start;
        return out;
    }
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = start + step * i;
    out.back() = stop;
    return out;
}

TransmissionTrace linear_transmission_trace(double kappa, double gamma, double center,
                                            const std::vector<double>& grid) {
    ResonatorParams p;
    p.kappa = kappa;
    p.gamma = gamma;
    TransmissionTrace tr;
    tr.frequency = grid;
    tr.transmission.reserve(grid.size());
    for (double d : grid) tr.transmission.push_back(transmission(p, d - center));
    return tr;
}

TransmissionTrace sweep_transmission_trace(const ResonatorParams& params, const PumpConfig& pump) {
    const SweepTrace sw = sweep(params, pump);
    const auto& g = pump.delta_p_grid;
    const bool ascending = g.size() < 2 || g[1] > g[0];
    const bool same_order = ascending == (pump.direction == SweepDirection::Increasing);
    TransmissionTrace tr;
    tr.frequency = g;
    tr.p_in = pump.p_in;
    tr.direction = pump.direction;
    const std::size_t n = g.size();
    tr.transmission.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tr.transmission[i] = sw.points[same_order ? i : n - 1 - i].transmission;
    }
    return tr;
}

void add_multiplicative_noise(TransmissionTrace& trace, double rel, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : trace.transmission) v *= 1.0 + rel * normal(rng);
}

ResonanceList quadratic_resonances(double omega_0, double d1, double d2, int mu_min, int mu_max) {
    ResonanceList list;
    for (int mu = mu_min; mu <= mu_max; ++mu) {
        const double m = mu;
        list.entries.push_back({mu, omega_0 + d1 * m + 0.5 * d2 * m * m});
    }
    return list;
}

std::pair<ZeroSpanTrace, ZeroSpanTrace> homodyne_traces(double sigma_tilde, double c,
                                                        double reference_dbm, int samples,
                                                        double duration_s, double phase_span,
                                                        const ZeroSpanMetadata& metadata) {
    ZeroSpanTrace trace;
    ZeroSpanTrace reference;
    trace.metadata = metadata;
    reference.metadata = metadata;
    trace.t = linspace(0.0, duration_s, samples);
    reference.t = trace.t;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const double phi = phase_span * trace.t[i] / duration_s;
        const double v = locked_raw_variance(sigma_tilde, 1.0, c, phi);
        trace.power_dbm.push_back(reference_dbm + db_from_linear(v));
        reference.power_dbm.push_back(reference_dbm);
    }
    return {trace, reference};
}

}  // namespace kerrsq
