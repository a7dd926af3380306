#include "flocksim/potentials.hpp"

#include <cmath>
#include <random>

namespace flocksim {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

}  // namespace

PotentialSpec PotentialSpec::quadratic(double lambda, int dim) {
    if (!(lambda > 0.0)) raise(Errc::bad_argument, "quadratic potential requires lambda > 0");
    if (dim < 1) raise(Errc::bad_argument, "dimension must be at least 1");
    PotentialSpec p;
    p.family = PotentialFamily::quadratic;
    p.dim = dim;
    p.lambda = lambda;
    p.Lambda = lambda;
    return p;
}

PotentialSpec PotentialSpec::coulomb_quadratic_1d() {
    PotentialSpec p;
    p.family = PotentialFamily::coulomb_quadratic_1d;
    p.dim = 1;
    return p;
}

PotentialSpec PotentialSpec::custom_convex(
    int dim, double lambda, double Lambda,
    std::function<double(std::span<const double>)> value,
    std::function<void(std::span<const double>, std::span<double>)> gradient,
    unsigned spot_check_seed, int spot_checks) {
    if (dim < 1) raise(Errc::bad_argument, "dimension must be at least 1");
    if (!(lambda > 0.0 && lambda <= Lambda))
        raise(Errc::bad_argument, "custom potential requires 0 < lambda <= Lambda");
    if (!value || !gradient) raise(Errc::bad_argument, "custom potential needs value and gradient");

    PotentialSpec p;
    p.family = PotentialFamily::custom_convex;
    p.dim = dim;
    p.lambda = lambda;
    p.Lambda = Lambda;
    p.custom_value = std::move(value);
    p.custom_gradient = std::move(gradient);

    std::mt19937 rng(spot_check_seed);
    std::uniform_real_distribution<double> box(-5.0, 5.0);
    std::vector<double> x(dim), y(dim), gx(dim), gy(dim);
    for (int k = 0; k < spot_checks; ++k) {
        double sep_sq = 0.0;
        for (int i = 0; i < dim; ++i) {
            x[i] = box(rng);
            y[i] = box(rng);
            sep_sq += (x[i] - y[i]) * (x[i] - y[i]);
        }
        if (sep_sq < 1e-12) continue;
        p.custom_gradient(x, gx);
        p.custom_gradient(y, gy);
        double inc = 0.0;
        for (int i = 0; i < dim; ++i) inc += (gx[i] - gy[i]) * (x[i] - y[i]);
        const double tol = 1e-9 * sep_sq;
        if (inc < lambda * sep_sq - tol || inc > Lambda * sep_sq + tol)
            raise(Errc::bad_argument, "declared convexity moduli violated on a sampled pair");
    }
    // ∇W(0) = 0 must hold for every family.
    std::vector<double> zero(dim, 0.0), g0(dim);
    p.custom_gradient(zero, g0);
    if (std::sqrt(norm_sq(g0)) > 1e-10)
        raise(Errc::bad_argument, "custom potential must have vanishing gradient at the origin");
    return p;
}

PotentialSpec PotentialSpec::quadratic_sqrt(double a, double b, int dim) {
    if (!(a > 0.0) || !(b >= 0.0)) raise(Errc::bad_argument, "quadratic_sqrt requires a > 0, b >= 0");
    auto value = [a, b](std::span<const double> x) {
        const double r2 = norm_sq(x);
        return a * r2 / 2.0 + b * (std::sqrt(1.0 + r2) - 1.0);
    };
    auto gradient = [a, b](std::span<const double> x, std::span<double> out) {
        const double scale = a + b / std::sqrt(1.0 + norm_sq(x));
        for (size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
    };
    return custom_convex(dim, a, a + b, value, gradient);
}

double PotentialSpec::value(std::span<const double> x) const {
    if (int(x.size()) != dim) raise(Errc::dimension_mismatch, "potential argument has wrong dimension");
    switch (family) {
        case PotentialFamily::quadratic:
            return lambda * norm_sq(x) / 2.0;
        case PotentialFamily::coulomb_quadratic_1d:
            return -std::abs(x[0]) + x[0] * x[0] / 2.0;
        case PotentialFamily::custom_convex:
            return custom_value(x);
    }
    raise(Errc::bad_argument, "unknown potential family");
}

void PotentialSpec::gradient(std::span<const double> x, std::span<double> out) const {
    if (int(x.size()) != dim || out.size() != x.size())
        raise(Errc::dimension_mismatch, "potential argument has wrong dimension");
    switch (family) {
        case PotentialFamily::quadratic:
            for (int i = 0; i < dim; ++i) out[i] = lambda * x[i];
            return;
        case PotentialFamily::coulomb_quadratic_1d: {
            // sgn(0) := 0 keeps the pair force antisymmetric.
            const double s = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
            out[0] = -s + x[0];
            return;
        }
        case PotentialFamily::custom_convex:
            custom_gradient(x, out);
            return;
    }
    raise(Errc::bad_argument, "unknown potential family");
}

std::vector<double> PotentialSpec::gradient_of(std::span<const double> x) const {
    std::vector<double> out(x.size());
    gradient(x, out);
    return out;
}

std::optional<std::pair<double, double>> PotentialSpec::convexity_moduli() const {
    if (family == PotentialFamily::coulomb_quadratic_1d) return std::nullopt;
    return std::make_pair(lambda, Lambda);
}

const char* PotentialSpec::family_name() const {
    switch (family) {
        case PotentialFamily::quadratic: return "quadratic";
        case PotentialFamily::custom_convex: return "custom_convex";
        case PotentialFamily::coulomb_quadratic_1d: return "coulomb_quadratic";
    }
    return "unknown";
}

}  // namespace flocksim
