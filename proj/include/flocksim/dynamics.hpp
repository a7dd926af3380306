#pragma once

#include <functional>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/metrics.hpp"
#include "flocksim/rk45.hpp"

namespace flocksim {

struct SimConfig {
    enum class Integrator { rk4, adaptive_rk45 };

    double dt_init = 1e-3;
    double dt_max = std::numeric_limits<double>::infinity();  // cap on adaptive steps
    double t_final = 10.0;
    Integrator integrator = Integrator::adaptive_rk45;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int record_every = 10;
    double min_separation_guard = -1.0;  // < 0: auto, 1e-9 x initial diameter
    bool deterministic_reduction = true;

    void validate() const;
};

/// Pairwise forces: a_i = -Σ_{j≠i} m_j ∇W(η_i-η_j) - Σ_{j≠i} m_j ψ(|η_i-η_j|)(v_i-v_j).
/// Sums run in fixed index order. With a singular kernel, separations below
/// the guard raise SeparationUnderflow.
void accelerations(const Ensemble& e, const PotentialSpec& potential, const KernelSpec& kernel,
                   double separation_guard, std::vector<double>& out);

/// One integrator step (RK4: exactly dt_init; adaptive: one accepted step).
Ensemble step(const Ensemble& e, const SimConfig& config, const PotentialSpec& potential,
              const KernelSpec& kernel);

struct TrajectoryRecord {
    double t = 0.0;
    Ensemble state;
    DiagnosticsFrame frame;
};

using FrameFn = std::function<DiagnosticsFrame(const Ensemble&)>;

/// Integrates to t_final, recording a frame every record_every accepted steps
/// and at the final time. Step failures carry the failing time.
std::vector<TrajectoryRecord> simulate(const Ensemble& e0, const SimConfig& config,
                                       const PotentialSpec& potential, const KernelSpec& kernel,
                                       const FrameFn& frame_fn);

}  // namespace flocksim
