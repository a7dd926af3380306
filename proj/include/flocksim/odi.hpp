#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/kernels.hpp"
#include "flocksim/ratefit.hpp"

namespace flocksim {

/// Reduced scalar systems behind the decay lemmas. Only the equality-boundary
/// instances are integrated directly; interior trajectories come from bounded
/// modulations of the right-hand side.
struct OdiSystem {
    enum class Kind { basic, linear, singular, flock };
    enum class Boundary { upper_equality, lower_equality };
    enum class Barrier { zero, linear, kernel_primitive };

    Kind kind = Kind::linear;
    Boundary boundary = Boundary::upper_equality;
    double lambda = 1.0, Lambda = 1.0;
    double c1 = 1.0, c2 = 1.0;
    double alpha = 0.5;   // singular kind
    double kappa = 1.0;   // basic kind, lower boundary
    double shift = 2.0;   // flock kind: the r in Ydot = -(X - r)
    Barrier barrier = Barrier::zero;
    double barrier_slope = 0.0;
    std::optional<KernelSpec> barrier_kernel;  // f(x) = 2 Psi(x/2)
    double x0 = 1.0, y0 = 1.0;

    void validate() const;
    double barrier_value(double x) const;
};

struct OdiSample {
    double t, x, y;
};

/// Interior fuzz: both blends take values in [0, 1] and interpolate between
/// the two admissible boundaries of the corresponding inequality.
struct OdiModulation {
    std::function<double(double)> damping_blend;
    std::function<double(double)> restoring_blend;
};

/// Smooth random blend in [0, 1], deterministic in the seed.
OdiModulation random_modulation(unsigned seed, double t_final);

struct OdiResult {
    std::vector<OdiSample> samples;
    bool exited = false;  // X reached 0; the lemmas presuppose X > 0
    double exit_time = 0.0;
};

OdiResult integrate_odi(const OdiSystem& sys, double t_final, double rel_tol = 1e-10,
                        double abs_tol = 1e-13, const OdiModulation* modulation = nullptr);

struct CheckItem {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    bool explicit_constant = true;  // false: prefactor fitted, rate asserted
    std::string detail;
};

struct LemmaReport {
    bool pass = true;
    std::vector<CheckItem> items;
    void add(CheckItem item);
    std::string summary() const;
};

/// Evaluates the lemma conclusions matching the system kind against an
/// integrated trajectory.
LemmaReport check_lemma(const OdiSystem& sys, const OdiResult& result);

/// Raises EnvelopeViolation naming the first failing check (and, for the
/// envelope checks, the first violating time).
void require_pass(const LemmaReport& report);

/// Scalar Lyapunov model Ldot = -kappa delta(t)^{2 alpha} L + delta(t)^3 with
/// the profile delta(t) = c0 (1+t)^{-1/(2 alpha)}.
struct DeltaGameModel {
    double kappa = 1.0;
    double alpha = 0.5;
    double c0 = 0.0;  // <= 0: the smallest admissible profile constant times 1.25
    double l0 = 1.0;

    double resolved_c0() const;
};

std::vector<std::pair<double, double>> integrate_delta_game(const DeltaGameModel& model,
                                                            double t_final, double rel_tol = 1e-10,
                                                            double abs_tol = 1e-13);

/// L(t) (1+t)^{3/(2 alpha) - 1} stays below the explicit constant.
CheckItem check_delta_game(const DeltaGameModel& model,
                           const std::vector<std::pair<double, double>>& series);

}  // namespace flocksim
