#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "flocksim/errors.hpp"

namespace flocksim {

enum class KernelFamily { constant, bounded_band, power_law, table_piecewise };

/// Communication weight ψ: nonnegative, radially nonincreasing. Carries the
/// primitive Ψ(r) = ∫_0^r ψ and the increment estimates used by the 1D
/// auxiliary-variable machinery. Immutable after construction; all methods
/// are pure.
struct KernelSpec {
    KernelFamily family = KernelFamily::constant;

    double value = 1.0;              // constant family: ψ̄
    double psi_m = 0.0;              // bounded band: lower bound on [0, radius]
    double psi_M = 0.0;              // bounded band: upper bound
    double alpha = 0.0;              // power law: singularity exponent in (0, 2)
    double coefficient = 0.0;        // power law: ψ(r) = coefficient · r^{-α}
    double lower_coefficient = 0.0;  // power law: lower band coefficient (≤ coefficient)
    double floor = 0.0;              // power law: global lower bound on ψ (0 disables)
    double radius = std::numeric_limits<double>::infinity();  // validity radius of the local bounds
    std::vector<std::pair<double, double>> knots;  // table family: (radius, value)
    double regularization = 0.0;     // ψ_ε(r) = ψ(max(r, ε)); 0 disables

    static KernelSpec constant_weight(double value);
    static KernelSpec bounded_band(double lo, double hi, double radius);
    static KernelSpec power_law(double alpha, double coefficient, double floor = 0.0,
                                double radius = std::numeric_limits<double>::infinity(),
                                double lower_coefficient = -1.0);
    static KernelSpec table(std::vector<std::pair<double, double>> knots);

    /// Copy with the ψ_ε(r) = ψ(max(r, ε)) stabilization enabled.
    KernelSpec regularized(double eps) const;

    double psi(double r) const;
    bool primitive_finite() const;

    /// Ψ(r) = ∫_0^r ψ(s) ds, extended oddly to r < 0.
    double primitive(double r) const;

    /// ∫_0^r s ψ(s) ds for r ≥ 0 (finite for all α < 2).
    double alignment_potential(double r) const;

    /// Ψ by adaptive quadrature; reference path for families without a closed
    /// form and for cross-checking the closed forms.
    double primitive_quadrature(double r, double abs_tol = 1e-10) const;

    /// Bounds on Ψ(a - c) - Ψ(b - c) over admissible shifts c, for a > b and
    /// pairwise diameter D ≥ a - b.
    std::pair<double, double> increment_bounds(double a, double b, double diameter) const;

    /// min{Ψ(a)/a, Ψ(b)/b}; a Lipschitz constant for the increment |Ψ(a)-Ψ(b)|
    /// when a and b share a sign.
    double averaged_lipschitz(double a, double b) const;

    double lower_bound() const;  // global inf of ψ
    double upper_bound() const;  // global sup of ψ (may be +inf)
    const char* family_name() const;
};

}  // namespace flocksim
