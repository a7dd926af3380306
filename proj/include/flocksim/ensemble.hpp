#pragma once

#include <span>
#include <string>
#include <vector>

#include "flocksim/kernels.hpp"
#include "flocksim/potentials.hpp"

namespace flocksim {

/// Weighted particle snapshot. Weights sum to one; 1D ensembles are kept
/// sorted by position. Snapshots are immutable values: the simulation loop
/// produces a new one per step.
struct Ensemble {
    int dim = 1;
    double time = 0.0;
    std::vector<double> positions;   // N x dim, row major
    std::vector<double> velocities;  // N x dim
    std::vector<double> weights;     // N

    int size() const { return int(weights.size()); }
    std::span<const double> position(int i) const { return {positions.data() + size_t(i) * dim, size_t(dim)}; }
    std::span<const double> velocity(int i) const { return {velocities.data() + size_t(i) * dim, size_t(dim)}; }
};

Ensemble init_particles(std::vector<double> positions, std::vector<double> velocities,
                        std::vector<double> weights, int dim);

struct InitialCondition {
    enum class Positions { uniform_box, quantile_uniform, explicit_list };
    enum class Velocities { zero, uniform_box, sine, explicit_list };

    Positions positions_kind = Positions::quantile_uniform;
    Velocities velocities_kind = Velocities::zero;
    int dim = 1;
    int count = 0;
    unsigned seed = 0;
    std::vector<double> pos_lo, pos_hi;  // per-coordinate box (or 1D quantile interval)
    std::vector<double> vel_lo, vel_hi;
    double sine_amplitude = 0.0;  // 1D: v(x) = amplitude * sin(frequency * x)
    double sine_frequency = 1.0;
    std::vector<double> explicit_positions, explicit_velocities, explicit_weights;
};

/// Deterministic given the descriptor (the seed drives all random draws).
Ensemble sample_initial(const InitialCondition& ic);

/// CSV with columns x1..xd, v1..vd, m ('#' lines ignored).
Ensemble load_initial_csv(const std::string& path);

std::vector<double> center_of_mass(const Ensemble& e);
std::vector<double> mean_velocity(const Ensemble& e);

/// Asymptotic Lagrangian map: a drifting Dirac point for convex potentials,
/// the drifting uniform-interval quantiles for the Coulomb-quadratic case.
struct ReferenceMap {
    enum class Kind { dirac_at_center, coulomb_uniform };

    Kind kind = Kind::dirac_at_center;
    int dim = 1;
    std::vector<double> center0;  // initial center of mass
    std::vector<double> drift;    // conserved mean velocity
    std::vector<double> offsets;  // per-particle stationary offsets (Coulomb only)

    /// Positions of the reference atoms at time t (count rows).
    std::vector<double> evaluate(double t, int count) const;
};

ReferenceMap reference_map(const Ensemble& e0, const PotentialSpec& potential);

/// 1D modified velocity: ω_i = v_i + Σ_j m_j Ψ(η_i - η_j).
std::vector<double> aux_omega(const Ensemble& e, const KernelSpec& kernel);

/// Coulomb perturbation variant: ω̃_i = v_i + Σ_j m_j [Ψ(η_i-η_j) - Ψ(η∞_i-η∞_j)].
std::vector<double> aux_omega_tilde(const Ensemble& e, const ReferenceMap& ref, const KernelSpec& kernel);

/// Raises OrderViolation if a 1D ensemble is out of order.
void require_sorted_1d(const Ensemble& e);

}  // namespace flocksim
