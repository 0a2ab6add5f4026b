#include "kerrsq/detection_chain.hpp"

#include "kerrsq/core_model.hpp"
#include "kerrsq/error.hpp"

#include <cmath>

namespace kerrsq {

double LossBudget::total_db() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.loss_db;
    return sum;
}

double efficiency_from_budget(const LossBudget& budget) {
    for (const auto& e : budget.entries) {
        if (!std::isfinite(e.loss_db)) {
            throw Error(ErrorCode::InvalidParameter, "loss entry '" + e.label + "' is not finite");
        }
        if (e.loss_db > 0.0) {
            throw Error(ErrorCode::PositiveLossEntry,
                        "loss entry '" + e.label + "' is positive; losses are given as dB <= 0");
        }
    }
    return linear_from_db(budget.total_db());
}

double propagate_variance(double v_chip, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "eta must lie in [0, 1]");
    }
    if (!(v_chip > 0.0)) throw Error(ErrorCode::NonPositive, "variance ratio must be > 0");
    return (1.0 - eta) + eta * v_chip;
}

double infer_chip_variance(double v_measured, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "eta must lie in (0, 1]");
    }
    const double floor = 1.0 - eta;
    if (!(v_measured > floor)) {
        throw Error(ErrorCode::InfeasibleMeasurement,
                    "measured variance is at or below the loss floor 1 - eta");
    }
    return (v_measured - floor) / eta;
}

}  // namespace kerrsq
