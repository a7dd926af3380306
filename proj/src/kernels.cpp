#include "flocksim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace flocksim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Tanh-sinh quadrature over (a, b). Nodes never touch the endpoints, so an
// integrable singularity at either end is fine. Levels are refined until two
// successive estimates agree within abs_tol.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    const double half = 0.5 * (b - a);
    if (!(half > 0.0)) return 0.0;
    const double pi_half = 0.5 * kPi;
    const double t_max = 5.0;

    double prev = 0.0;
    double result = 0.0;
    for (int level = 0; level <= 10; ++level) {
        const double h = 1.0 / double(1 << level);
        const int n = int(std::ceil(t_max / h));
        double sum = 0.0;
        for (int k = -n; k <= n; ++k) {
            const double t = k * h;
            const double u = pi_half * std::sinh(t);
            const double cu = std::cosh(u);
            const double w = pi_half * std::cosh(t) / (cu * cu);
            // Distance to the endpoint the node is approaching, cancellation-free:
            // 1 - tanh|u| = 2 e^{-2|u|} / (1 + e^{-2|u|}).
            const double e2 = std::exp(-2.0 * std::abs(u));
            const double off = half * 2.0 * e2 / (1.0 + e2);
            if (!(off > 0.0) || !(w > 0.0)) continue;
            const double x = (t >= 0.0) ? b - off : a + off;
            sum += w * f(x);
        }
        result = sum * h * half;
        if (level >= 3 && std::abs(result - prev) <= abs_tol) return result;
        prev = result;
    }
    return result;
}

// ∫_lo^hi s^{-α} ds for 0 < lo ≤ hi, any α (handles α = 1).
double power_integral(double alpha, double lo, double hi) {
    if (hi <= lo) return 0.0;
    if (std::abs(alpha - 1.0) < 1e-14) return std::log(hi / lo);
    return (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha)) / (1.0 - alpha);
}

// ∫_lo^hi s^{1-α} ds for 0 ≤ lo ≤ hi, α < 2.
double power_moment_integral(double alpha, double lo, double hi) {
    if (hi <= lo) return 0.0;
    return (std::pow(hi, 2.0 - alpha) - std::pow(lo, 2.0 - alpha)) / (2.0 - alpha);
}

}  // namespace

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::singular_at_zero: return "SingularAtZero";
        case Errc::non_integrable: return "NonIntegrable";
        case Errc::bad_ordering: return "BadOrdering";
        case Errc::sign_mismatch: return "SignMismatch";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::empty_ensemble: return "EmptyEnsemble";
        case Errc::nonpositive_weight: return "NonpositiveWeight";
        case Errc::unsupported_descriptor: return "UnsupportedDescriptor";
        case Errc::incompatible_potential: return "IncompatiblePotential";
        case Errc::separation_underflow: return "SeparationUnderflow";
        case Errc::step_size_underflow: return "StepSizeUnderflow";
        case Errc::order_violation: return "OrderViolation";
        case Errc::admissibility_violation: return "AdmissibilityViolation";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::nonpositive_value: return "NonpositiveValue";
        case Errc::inconclusive: return "Inconclusive";
        case Errc::state_exit: return "StateExit";
        case Errc::envelope_violation: return "EnvelopeViolation";
        case Errc::config_parse: return "ConfigParse";
        case Errc::column_missing: return "ColumnMissing";
        case Errc::bad_argument: return "BadArgument";
    }
    return "Error";
}

KernelSpec KernelSpec::constant_weight(double value) {
    if (!(value > 0.0)) raise(Errc::bad_argument, "constant kernel requires a positive value");
    KernelSpec k;
    k.family = KernelFamily::constant;
    k.value = value;
    k.psi_m = value;
    k.psi_M = value;
    return k;
}

KernelSpec KernelSpec::bounded_band(double lo, double hi, double radius) {
    if (!(lo > 0.0) || !(hi >= lo)) raise(Errc::bad_argument, "bounded band requires 0 < psi_m <= psi_M");
    if (!(radius > 0.0)) raise(Errc::bad_argument, "bounded band requires a positive radius");
    KernelSpec k;
    k.family = KernelFamily::bounded_band;
    k.psi_m = lo;
    k.psi_M = hi;
    k.radius = radius;
    return k;
}

KernelSpec KernelSpec::power_law(double alpha, double coefficient, double floor, double radius,
                                 double lower_coefficient) {
    if (!(alpha > 0.0 && alpha < 2.0)) raise(Errc::bad_argument, "power law requires alpha in (0, 2)");
    if (!(coefficient > 0.0)) raise(Errc::bad_argument, "power law requires a positive coefficient");
    if (!(floor >= 0.0)) raise(Errc::bad_argument, "power law floor must be nonnegative");
    if (!(radius > 0.0)) raise(Errc::bad_argument, "power law requires a positive radius");
    KernelSpec k;
    k.family = KernelFamily::power_law;
    k.alpha = alpha;
    k.coefficient = coefficient;
    k.lower_coefficient = lower_coefficient < 0.0 ? coefficient : lower_coefficient;
    if (!(k.lower_coefficient > 0.0 && k.lower_coefficient <= coefficient))
        raise(Errc::bad_argument, "power law requires 0 < A <= B");
    k.floor = floor;
    k.radius = radius;
    k.psi_m = floor;
    return k;
}

KernelSpec KernelSpec::table(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) raise(Errc::bad_argument, "table kernel requires at least one knot");
    for (size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].first >= 0.0) || !(knots[i].second >= 0.0))
            raise(Errc::bad_argument, "table knots must have nonnegative radius and value");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            raise(Errc::bad_argument, "table knot radii must be strictly increasing");
        if (i > 0 && knots[i].second > knots[i - 1].second + 1e-15)
            raise(Errc::bad_argument, "table knot values must be nonincreasing");
    }
    KernelSpec k;
    k.family = KernelFamily::table_piecewise;
    k.knots = std::move(knots);
    k.psi_m = k.knots.back().second;
    k.psi_M = k.knots.front().second;
    return k;
}

KernelSpec KernelSpec::regularized(double eps) const {
    if (!(eps >= 0.0)) raise(Errc::bad_argument, "regularization scale must be nonnegative");
    KernelSpec k = *this;
    k.regularization = eps;
    return k;
}

double KernelSpec::psi(double r) const {
    if (!(r >= 0.0)) raise(Errc::bad_argument, "psi takes a nonnegative radius");
    if (regularization > 0.0) r = std::max(r, regularization);
    switch (family) {
        case KernelFamily::constant:
            return value;
        case KernelFamily::bounded_band: {
            const double q = r / radius;
            return psi_m + (psi_M - psi_m) * std::exp(-q * q);
        }
        case KernelFamily::power_law: {
            if (r == 0.0)
                raise(Errc::singular_at_zero,
                      "power-law kernel diverges at r = 0 (enable regularization to cap it)");
            return std::max(coefficient * std::pow(r, -alpha), floor);
        }
        case KernelFamily::table_piecewise: {
            if (r <= knots.front().first) return knots.front().second;
            if (r >= knots.back().first) return knots.back().second;
            auto it = std::upper_bound(knots.begin(), knots.end(), r,
                                       [](double v, const auto& kn) { return v < kn.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double s = (r - lo.first) / (hi.first - lo.first);
            return lo.second + s * (hi.second - lo.second);
        }
    }
    raise(Errc::bad_argument, "unknown kernel family");
}

bool KernelSpec::primitive_finite() const {
    if (family != KernelFamily::power_law) return true;
    return alpha < 1.0 || regularization > 0.0;
}

double KernelSpec::primitive(double r) const {
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double s = std::abs(r);
    switch (family) {
        case KernelFamily::constant:
            return sign * value * s;
        case KernelFamily::bounded_band: {
            const double scale = radius * std::sqrt(kPi) / 2.0;
            return sign * (psi_m * s + (psi_M - psi_m) * scale * std::erf(s / radius));
        }
        case KernelFamily::power_law: {
            // ∫_lo^hi max(B u^{-α}, floor) du with crossover at r* = (B/floor)^{1/α}.
            const double crossover =
                floor > 0.0 ? std::pow(coefficient / floor, 1.0 / alpha) : kInf;
            auto segment = [&](double lo, double hi) {
                if (hi <= lo) return 0.0;
                double acc = 0.0;
                const double mid = std::clamp(crossover, lo, hi);
                acc += coefficient * power_integral(alpha, lo, mid);
                acc += floor * (hi - mid);
                return acc;
            };
            if (regularization > 0.0) {
                const double eps = regularization;
                const double head = std::min(s, eps) * psi(eps);
                return sign * (head + segment(eps, s));
            }
            if (alpha >= 1.0)
                raise(Errc::non_integrable, "power-law primitive diverges for alpha >= 1");
            // lim_{lo→0} of the segment is finite for α < 1.
            const double mid = std::min(crossover, s);
            double acc = coefficient * std::pow(mid, 1.0 - alpha) / (1.0 - alpha);
            if (s > crossover) acc += floor * (s - crossover);
            return sign * acc;
        }
        case KernelFamily::table_piecewise:
            return sign * primitive_quadrature(s);
    }
    raise(Errc::bad_argument, "unknown kernel family");
}

double KernelSpec::alignment_potential(double r) const {
    if (!(r >= 0.0)) raise(Errc::bad_argument, "alignment potential takes a nonnegative radius");
    switch (family) {
        case KernelFamily::constant:
            return value * r * r / 2.0;
        case KernelFamily::bounded_band: {
            const double q = r / radius;
            return psi_m * r * r / 2.0 +
                   (psi_M - psi_m) * (radius * radius / 2.0) * (1.0 - std::exp(-q * q));
        }
        case KernelFamily::power_law: {
            const double crossover =
                floor > 0.0 ? std::pow(coefficient / floor, 1.0 / alpha) : kInf;
            auto segment = [&](double lo, double hi) {
                if (hi <= lo) return 0.0;
                const double mid = std::clamp(crossover, lo, hi);
                return coefficient * power_moment_integral(alpha, lo, mid) +
                       floor * (hi * hi - mid * mid) / 2.0;
            };
            if (regularization > 0.0) {
                const double eps = regularization;
                const double head = std::min(r, eps);
                return psi(eps) * head * head / 2.0 + segment(eps, r);
            }
            return segment(0.0, r);
        }
        case KernelFamily::table_piecewise: {
            std::vector<double> cuts{0.0};
            for (const auto& kn : knots)
                if (kn.first > 0.0 && kn.first < r) cuts.push_back(kn.first);
            cuts.push_back(r);
            double acc = 0.0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
                acc += tanh_sinh([&](double s) { return s * psi(s); }, cuts[i], cuts[i + 1], 1e-12);
            return acc;
        }
    }
    raise(Errc::bad_argument, "unknown kernel family");
}

double KernelSpec::primitive_quadrature(double r, double abs_tol) const {
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double s = std::abs(r);
    if (s == 0.0) return 0.0;
    if (!primitive_finite())
        raise(Errc::non_integrable, "primitive diverges for this kernel");

    // Split at interior kinks so each piece is smooth for the quadrature.
    std::vector<double> cuts{0.0};
    auto add_cut = [&](double c) {
        if (c > 0.0 && c < s) cuts.push_back(c);
    };
    if (family == KernelFamily::table_piecewise)
        for (const auto& kn : knots) add_cut(kn.first);
    if (family == KernelFamily::power_law && floor > 0.0)
        add_cut(std::pow(coefficient / floor, 1.0 / alpha));
    if (regularization > 0.0) add_cut(regularization);
    cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());

    double acc = 0.0;
    const double piece_tol = abs_tol / double(cuts.size());
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += tanh_sinh([&](double u) { return psi(u); }, cuts[i], cuts[i + 1], piece_tol);
    return sign * acc;
}

std::pair<double, double> KernelSpec::increment_bounds(double a, double b, double diameter) const {
    if (!(a > b)) raise(Errc::bad_ordering, "increment bounds require a > b");
    const double gap = a - b;
    if (!(diameter >= gap)) raise(Errc::bad_argument, "diameter must dominate the increment a - b");

    if (family == KernelFamily::bounded_band && gap <= radius)
        return {psi_m * gap, psi_M * gap};
    if (family == KernelFamily::power_law && floor == 0.0 && regularization == 0.0 &&
        alpha < 1.0 && gap <= radius) {
        const double lower = lower_coefficient * std::pow(diameter, -alpha) * gap;
        const double upper = std::pow(2.0, alpha) * coefficient * std::pow(gap, 1.0 - alpha) / (1.0 - alpha);
        return {lower, upper};
    }
    return {psi(diameter) * gap, 2.0 * primitive(gap / 2.0)};
}

double KernelSpec::averaged_lipschitz(double a, double b) const {
    if (!(a * b > 0.0)) raise(Errc::sign_mismatch, "averaged Lipschitz estimate requires a*b > 0");
    const double ra = std::abs(a);
    const double rb = std::abs(b);
    return std::min(primitive(ra) / ra, primitive(rb) / rb);
}

double KernelSpec::lower_bound() const {
    switch (family) {
        case KernelFamily::constant: return value;
        case KernelFamily::bounded_band: return psi_m;
        case KernelFamily::power_law: return floor;
        case KernelFamily::table_piecewise: return knots.back().second;
    }
    return 0.0;
}

double KernelSpec::upper_bound() const {
    switch (family) {
        case KernelFamily::constant: return value;
        case KernelFamily::bounded_band: return psi_M;
        case KernelFamily::power_law:
            return regularization > 0.0 ? psi(regularization) : kInf;
        case KernelFamily::table_piecewise: return knots.front().second;
    }
    return kInf;
}

const char* KernelSpec::family_name() const {
    switch (family) {
        case KernelFamily::constant: return "constant";
        case KernelFamily::bounded_band: return "bounded_band";
        case KernelFamily::power_law: return "power_law";
        case KernelFamily::table_piecewise: return "table";
    }
    return "unknown";
}

}  // namespace flocksim
