#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/ensemble.hpp"

namespace flocksim {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// One recorded diagnostics row. Fields that do not apply to the run mode
/// stay NaN and serialize as "nan". Column order is fixed (see columns()).
struct DiagnosticsFrame {
    double t = kNan;
    double d_eta = kNan, d_v = kNan;
    double d_omega = kNan, d_eta_tilde = kNan, d_omega_tilde = kNan;
    double x = kNan, y = kNan, z = kNan, z_tilde = kNan;
    double e_diss = kNan;
    double e_zeta = kNan, e_tilde_xi = kNan, l_cal = kNan;
    double w2_to_ref = kNan, winf_to_ref = kNan, w2_to_dirac = kNan;

    static const std::vector<std::string>& columns();
    std::vector<double> row() const;
};

struct Diameters {
    double positions = kNan;
    double velocities = kNan;
    double omega = kNan;
    double eta_tilde = kNan;
    double omega_tilde = kNan;
};

/// Exact max pairwise diameters (1D: max - min; otherwise O(N^2) scan).
/// Optional arrays add the ω / perturbation diameters.
Diameters diameters(const Ensemble& e, const std::vector<double>* omega = nullptr,
                    const ReferenceMap* ref = nullptr,
                    const std::vector<double>* omega_tilde = nullptr);

enum class DeviationMode { plain, coulomb_perturbation };

struct PairwiseDeviations {
    double x = kNan, y = kNan, z = kNan, z_tilde = kNan;
};

/// Weighted double sums of squared pairwise differences. Plain mode uses raw
/// positions/velocities (ω when defined); the Coulomb mode measures against
/// the uniform-profile reference (η̃, ω̃).
PairwiseDeviations pairwise_l2(const Ensemble& e, const ReferenceMap* ref,
                               const KernelSpec& kernel, DeviationMode mode);

/// Energy of the dissipation identity: ½ΣΣ m m |v_i-v_j|² + ΣΣ m m (W(η_i-η_j)-W(0)).
double dissipation_energy(const Ensemble& e, const PotentialSpec& potential);

struct LyapunovValues {
    double e_zeta = kNan, e_tilde_xi = kNan, l_cal = kNan;
};

/// Multi-dimensional Lyapunov functionals. ζ and ξ are validated against
/// their admissibility windows; a violation raises rather than clamping.
LyapunovValues lyapunov_multid(const Ensemble& e, const PotentialSpec& potential,
                               const KernelSpec& kernel, std::optional<double> zeta,
                               std::optional<double> xi);

/// Largest admissible-window suprema for (ζ, ξ); useful for picking defaults.
std::pair<double, double> admissibility_limits(const PotentialSpec& potential,
                                               const KernelSpec& kernel);

enum class WassersteinOrder { w1, w2, winf };

struct WassersteinTarget {
    enum class Kind { dirac, uniform_interval, atoms };
    Kind kind = Kind::dirac;
    double point = 0.0;
    double center = 0.0, half_width = 1.0;
    std::vector<double> positions;  // atoms target (1D, sorted on construction)
    std::vector<double> weights;

    static WassersteinTarget dirac(double x);
    static WassersteinTarget uniform(double center, double half_width);
    static WassersteinTarget atoms(std::vector<double> positions, std::vector<double> weights);
};

/// Exact 1D optimal transport distance via the monotone (quantile) coupling.
double wasserstein_1d(WassersteinOrder p, const Ensemble& e, const WassersteinTarget& target);

/// d2 to the Dirac mass at the center of mass (exact in any dimension).
double wasserstein_2_to_dirac(const Ensemble& e);

/// Uniform-in-time diameter bound for the 1D Coulomb-quadratic flow, from the
/// initial diameters and Ψ(1).
double diameter_bound(const DiagnosticsFrame& frame0, const KernelSpec& kernel);

struct DiagnosticsConfig {
    enum class Mode { convex_1d, coulomb_1d, multi_d };
    Mode mode = Mode::convex_1d;
    std::optional<double> zeta;
    std::optional<double> xi;
};

DiagnosticsFrame compute_frame(const Ensemble& e, const PotentialSpec& potential,
                               const KernelSpec& kernel, const ReferenceMap* ref,
                               const DiagnosticsConfig& config);

}  // namespace flocksim
