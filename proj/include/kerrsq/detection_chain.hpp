#pragma once

#include <string>
#include <vector>

namespace kerrsq {

struct LossEntry {
    std::string label;
    double loss_db = 0.0;  // <= 0
};

struct LossBudget {
    std::vector<LossEntry> entries;

    [[nodiscard]] double total_db() const;
};

/// eta = 10^(sum(loss_db) / 10). Throws PositiveLossEntry for any entry > 0 dB.
[[nodiscard]] double efficiency_from_budget(const LossBudget& budget);

/// Vacuum admixture through a loss eta: (1 - eta) + eta * v_chip.
[[nodiscard]] double propagate_variance(double v_chip, double eta);

/// Inverse of propagate_variance. Throws InfeasibleMeasurement when v_measured
/// is at or below the loss floor 1 - eta.
[[nodiscard]] double infer_chip_variance(double v_measured, double eta);

}  // namespace kerrsq
