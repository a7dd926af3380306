#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "flocksim/errors.hpp"

namespace flocksim {

enum class PotentialFamily { quadratic, custom_convex, coulomb_quadratic_1d };

/// Symmetric interaction potential W with its gradient and, for convex
/// families, declared convexity moduli 0 < λ ≤ Λ. Immutable and pure.
struct PotentialSpec {
    PotentialFamily family = PotentialFamily::quadratic;
    int dim = 1;
    double lambda = 1.0;
    double Lambda = 1.0;
    std::function<double(std::span<const double>)> custom_value;
    std::function<void(std::span<const double>, std::span<double>)> custom_gradient;

    static PotentialSpec quadratic(double lambda, int dim = 1);
    static PotentialSpec coulomb_quadratic_1d();

    /// User-supplied (λ,Λ)-convex potential. The declared moduli are
    /// spot-checked on random pairs at construction; a violation aborts.
    static PotentialSpec custom_convex(int dim, double lambda, double Lambda,
                                       std::function<double(std::span<const double>)> value,
                                       std::function<void(std::span<const double>, std::span<double>)> gradient,
                                       unsigned spot_check_seed = 314159u, int spot_checks = 10000);

    /// Built-in non-quadratic convex family
    /// W(x) = a|x|²/2 + b(√(1+|x|²) − 1) with moduli (a, a+b).
    static PotentialSpec quadratic_sqrt(double a, double b, int dim = 1);

    double value(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> out) const;
    std::vector<double> gradient_of(std::span<const double> x) const;

    /// Declared (λ, Λ); nullopt for the Coulomb-quadratic family.
    std::optional<std::pair<double, double>> convexity_moduli() const;
    const char* family_name() const;
};

}  // namespace flocksim
