#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "flocksim/errors.hpp"

namespace flocksim {

using RhsFn = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

/// Classical fixed-step RK4.
void rk4_step(const RhsFn& rhs, double t, double dt, std::vector<double>& y);

struct StepControl {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double dt_init = 1e-3;
    double dt_floor = 0.0;  // StepSizeUnderflow below this
    double dt_max = std::numeric_limits<double>::infinity();
};

/// Embedded Dormand-Prince 5(4) with a component-wise mixed tolerance
/// abs_tol + rel_tol * |y|. An optional admissibility gate can reject an
/// otherwise accepted step (the controller then halves the step).
class AdaptiveRk45 {
  public:
    AdaptiveRk45(RhsFn rhs, StepControl control)
        : rhs_(std::move(rhs)), control_(control), dt_(control.dt_init) {}

    void set_admissibility(std::function<bool(double, const std::vector<double>&)> gate) {
        admissible_ = std::move(gate);
    }

    /// One accepted step from (t, y), clamped so t never passes t_end.
    /// Returns the new time.
    double step(double t, std::vector<double>& y, double t_end);

    double current_dt() const { return dt_; }

  private:
    double attempt(double t, const std::vector<double>& y, double dt,
                   std::vector<double>& y_out);

    RhsFn rhs_;
    StepControl control_;
    double dt_;
    std::function<bool(double, const std::vector<double>&)> admissible_;
    std::vector<double> k_[7], scratch_;
};

}  // namespace flocksim
