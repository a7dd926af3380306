#include "flocksim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flocksim {

namespace {

double pair_distance(const Ensemble& e, int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < e.dim; ++k) {
        const double d = e.positions[size_t(i) * e.dim + k] - e.positions[size_t(j) * e.dim + k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double velocity_gap_sq(const Ensemble& e, int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < e.dim; ++k) {
        const double d = e.velocities[size_t(i) * e.dim + k] - e.velocities[size_t(j) * e.dim + k];
        acc += d * d;
    }
    return acc;
}

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace

const std::vector<std::string>& DiagnosticsFrame::columns() {
    static const std::vector<std::string> names = {
        "t",          "D_eta",     "D_v",          "D_omega", "D_eta_tilde", "D_omega_tilde",
        "X",          "Y",         "Z",            "Z_tilde", "E_diss",      "E_zeta",
        "E_tilde_xi", "L_cal",     "w2_to_ref",    "winf_to_ref", "w2_to_dirac"};
    return names;
}

std::vector<double> DiagnosticsFrame::row() const {
    return {t, d_eta, d_v,    d_omega, d_eta_tilde, d_omega_tilde, x,           y,
            z, z_tilde, e_diss, e_zeta, e_tilde_xi,  l_cal,         w2_to_ref,
            winf_to_ref, w2_to_dirac};
}

Diameters diameters(const Ensemble& e, const std::vector<double>* omega, const ReferenceMap* ref,
                    const std::vector<double>* omega_tilde) {
    Diameters d;
    const int n = e.size();
    if (e.dim == 1) {
        d.positions = spread(e.positions);
        d.velocities = spread(e.velocities);
    } else {
        double dp = 0.0, dv = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                dp = std::max(dp, pair_distance(e, i, j));
                dv = std::max(dv, std::sqrt(velocity_gap_sq(e, i, j)));
            }
        d.positions = dp;
        d.velocities = dv;
    }
    if (omega) d.omega = spread(*omega);
    if (omega_tilde) d.omega_tilde = spread(*omega_tilde);
    if (ref) {
        const auto target = ref->evaluate(e.time, n);
        if (e.dim == 1) {
            std::vector<double> tilde(n);
            for (int i = 0; i < n; ++i) tilde[i] = e.positions[i] - target[i];
            d.eta_tilde = spread(tilde);
        }
    }
    return d;
}

PairwiseDeviations pairwise_l2(const Ensemble& e, const ReferenceMap* ref,
                               const KernelSpec& kernel, DeviationMode mode) {
    PairwiseDeviations out;
    const int n = e.size();

    std::vector<double> eta_like;  // the field entering X
    if (mode == DeviationMode::coulomb_perturbation) {
        if (e.dim != 1) raise(Errc::dimension_mismatch, "Coulomb perturbation mode is 1D only");
        if (!ref || ref->kind != ReferenceMap::Kind::coulomb_uniform)
            raise(Errc::incompatible_potential,
                  "Coulomb perturbation mode needs the uniform-profile reference");
        const auto target = ref->evaluate(e.time, n);
        eta_like.resize(n);
        for (int i = 0; i < n; ++i) eta_like[i] = e.positions[i] - target[i];
    }

    double x = 0.0, z = 0.0, zt = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double mm = e.weights[i] * e.weights[j];
            double dx_sq = 0.0;
            if (mode == DeviationMode::coulomb_perturbation) {
                const double d = eta_like[i] - eta_like[j];
                dx_sq = d * d;
            } else {
                const double d = pair_distance(e, i, j);
                dx_sq = d * d;
            }
            const double dv_sq = velocity_gap_sq(e, i, j);
            x += mm * dx_sq;
            z += mm * dv_sq;
            // Coincident pairs contribute only where psi(0) is finite.
            const double r = pair_distance(e, i, j);
            if (r > 0.0 || std::isfinite(kernel.upper_bound()))
                zt += mm * kernel.psi(r) * dv_sq;
        }
    out.x = x;
    out.z = z;
    out.z_tilde = zt;

    if (e.dim == 1 && kernel.primitive_finite()) {
        std::vector<double> w;
        if (mode == DeviationMode::coulomb_perturbation)
            w = aux_omega_tilde(e, *ref, kernel);
        else
            w = aux_omega(e, kernel);
        double y = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = w[i] - w[j];
                y += e.weights[i] * e.weights[j] * d * d;
            }
        out.y = y;
    } else if (mode == DeviationMode::coulomb_perturbation) {
        raise(Errc::non_integrable, "Coulomb perturbation mode needs a finite kernel primitive");
    }
    return out;
}

double dissipation_energy(const Ensemble& e, const PotentialSpec& potential) {
    const int n = e.size();
    const std::vector<double> zero(e.dim, 0.0);
    const double w0 = potential.value(zero);
    std::vector<double> diff(e.dim);
    double kinetic = 0.0, interaction = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double mm = e.weights[i] * e.weights[j];
            kinetic += mm * velocity_gap_sq(e, i, j);
            for (int k = 0; k < e.dim; ++k)
                diff[k] = e.positions[size_t(i) * e.dim + k] - e.positions[size_t(j) * e.dim + k];
            interaction += mm * (potential.value(diff) - w0);
        }
    return 0.5 * kinetic + interaction;
}

std::pair<double, double> admissibility_limits(const PotentialSpec& potential,
                                               const KernelSpec& kernel) {
    const auto moduli = potential.convexity_moduli();
    if (!moduli)
        raise(Errc::admissibility_violation,
              "Lyapunov admissibility requires a (lambda, Lambda)-convex potential");
    const double lambda = moduli->first;
    const double psi_lo = kernel.lower_bound();
    const double psi_hi = kernel.upper_bound();
    double zeta_sup = std::min(lambda / 2.0, 0.5);
    if (psi_lo > 0.0 && std::isfinite(psi_hi))
        zeta_sup = std::min(zeta_sup, psi_lo / (1.0 + psi_hi * psi_hi / (2.0 * lambda)));
    else
        zeta_sup = 0.0;  // the mixed functional needs 0 < ψ_m and ψ_M < ∞
    const double xi_sup = std::min({lambda, 1.0, psi_lo});
    return {zeta_sup, xi_sup};
}

LyapunovValues lyapunov_multid(const Ensemble& e, const PotentialSpec& potential,
                               const KernelSpec& kernel, std::optional<double> zeta,
                               std::optional<double> xi) {
    LyapunovValues out;
    const auto moduli = potential.convexity_moduli();
    if (!moduli)
        raise(Errc::admissibility_violation,
              "Lyapunov functionals require a (lambda, Lambda)-convex potential");
    const double lambda = moduli->first;
    const double psi_lo = kernel.lower_bound();
    const double psi_hi = kernel.upper_bound();

    if (zeta) {
        if (!(psi_lo > 0.0))
            raise(Errc::admissibility_violation, "zeta requires psi_m > 0 (violated: psi_m = 0)");
        if (!std::isfinite(psi_hi))
            raise(Errc::admissibility_violation, "zeta requires a bounded kernel (violated: psi_M = inf)");
        const double cap = psi_lo / (1.0 + psi_hi * psi_hi / (2.0 * lambda));
        if (!(*zeta >= 0.0 && *zeta < lambda / 2.0 && *zeta < 0.5 && *zeta < cap))
            raise(Errc::admissibility_violation,
                  "zeta violates zeta < min{lambda/2, 1/2, psi_m (1 + psi_M^2/(2 lambda))^{-1}}");
    }
    if (xi) {
        if (!(*xi >= 0.0 && *xi < lambda && *xi < 1.0 && *xi < psi_lo))
            raise(Errc::admissibility_violation, "xi violates xi < min{lambda, 1, psi_m}");
    }

    const int n = e.size();
    const std::vector<double> zero(e.dim, 0.0);
    const double w0 = potential.value(zero);
    std::vector<double> diff(e.dim);
    double interaction = 0.0, kinetic = 0.0, cross = 0.0, alignment = 0.0;
    double x_plain = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double mm = e.weights[i] * e.weights[j];
            double dot = 0.0, r_sq = 0.0;
            for (int k = 0; k < e.dim; ++k) {
                diff[k] = e.positions[size_t(i) * e.dim + k] - e.positions[size_t(j) * e.dim + k];
                const double dv =
                    e.velocities[size_t(i) * e.dim + k] - e.velocities[size_t(j) * e.dim + k];
                dot += diff[k] * dv;
                r_sq += diff[k] * diff[k];
            }
            interaction += mm * (potential.value(diff) - w0);
            kinetic += mm * velocity_gap_sq(e, i, j);
            cross += mm * dot;
            x_plain += mm * r_sq;
            if (xi) alignment += mm * kernel.alignment_potential(std::sqrt(r_sq));
        }

    out.l_cal = x_plain + kinetic;
    if (zeta) out.e_zeta = interaction + 0.5 * kinetic + *zeta * cross;
    if (xi) out.e_tilde_xi = interaction + 0.5 * kinetic + *xi * cross + *xi * alignment;
    return out;
}

WassersteinTarget WassersteinTarget::dirac(double x) {
    WassersteinTarget t;
    t.kind = Kind::dirac;
    t.point = x;
    return t;
}

WassersteinTarget WassersteinTarget::uniform(double center, double half_width) {
    if (!(half_width > 0.0)) raise(Errc::bad_argument, "uniform target needs a positive half-width");
    WassersteinTarget t;
    t.kind = Kind::uniform_interval;
    t.center = center;
    t.half_width = half_width;
    return t;
}

WassersteinTarget WassersteinTarget::atoms(std::vector<double> positions, std::vector<double> weights) {
    if (positions.empty() || positions.size() != weights.size())
        raise(Errc::bad_argument, "atom target needs matching positions and weights");
    std::vector<int> order(positions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return positions[a] < positions[b]; });
    WassersteinTarget t;
    t.kind = Kind::atoms;
    t.positions.reserve(positions.size());
    t.weights.reserve(weights.size());
    double total = 0.0;
    for (int idx : order) {
        if (!(weights[idx] > 0.0)) raise(Errc::nonpositive_weight, "atom weights must be positive");
        t.positions.push_back(positions[idx]);
        t.weights.push_back(weights[idx]);
        total += weights[idx];
    }
    for (double& w : t.weights) w /= total;
    return t;
}

double wasserstein_1d(WassersteinOrder p, const Ensemble& e, const WassersteinTarget& target) {
    if (e.dim != 1) raise(Errc::dimension_mismatch, "quantile-coupling distances are 1D only");
    const int n = e.size();

    switch (target.kind) {
        case WassersteinTarget::Kind::dirac: {
            double acc = 0.0, worst = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = std::abs(e.positions[i] - target.point);
                worst = std::max(worst, d);
                acc += e.weights[i] * (p == WassersteinOrder::w1 ? d : d * d);
            }
            if (p == WassersteinOrder::winf) return worst;
            return p == WassersteinOrder::w1 ? acc : std::sqrt(acc);
        }

        case WassersteinTarget::Kind::uniform_interval: {
            // Atom i is coupled with the target quantiles over its mass slab
            // [C_{i-1}, C_i]; Q(s) = center + half_width (2s - 1).
            const double c = target.center, h = target.half_width;
            double acc = 0.0, worst = 0.0, cum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double xi = e.positions[i];
                const double a = c + h * (2.0 * cum - 1.0);
                cum += e.weights[i];
                const double b = c + h * (2.0 * cum - 1.0);
                worst = std::max(worst, std::max(std::abs(xi - a), std::abs(xi - b)));
                if (p == WassersteinOrder::w2) {
                    const double ea = xi - a, eb = xi - b;
                    acc += (ea * ea * ea - eb * eb * eb) / (6.0 * h);
                } else if (p == WassersteinOrder::w1) {
                    if (xi <= a || xi >= b) {
                        acc += std::abs(xi - 0.5 * (a + b)) * (b - a) / (2.0 * h);
                    } else {
                        acc += ((xi - a) * (xi - a) + (b - xi) * (b - xi)) / (2.0 * (2.0 * h));
                    }
                }
            }
            if (p == WassersteinOrder::winf) return worst;
            return p == WassersteinOrder::w1 ? acc : std::sqrt(acc);
        }

        case WassersteinTarget::Kind::atoms: {
            // Merge the cumulative-weight breakpoints of the two atom lists.
            double acc = 0.0, worst = 0.0;
            size_t i = 0, j = 0;
            double rem_i = e.weights[0], rem_j = target.weights[0];
            while (i < size_t(n) && j < target.positions.size()) {
                const double mass = std::min(rem_i, rem_j);
                const double d = std::abs(e.positions[i] - target.positions[j]);
                worst = std::max(worst, d);
                acc += mass * (p == WassersteinOrder::w1 ? d : d * d);
                rem_i -= mass;
                rem_j -= mass;
                if (rem_i <= 1e-15 && ++i < size_t(n)) rem_i = e.weights[i];
                if (rem_j <= 1e-15 && ++j < target.positions.size()) rem_j = target.weights[j];
            }
            if (p == WassersteinOrder::winf) return worst;
            return p == WassersteinOrder::w1 ? acc : std::sqrt(acc);
        }
    }
    raise(Errc::bad_argument, "unknown Wasserstein target");
}

double wasserstein_2_to_dirac(const Ensemble& e) {
    const auto c = center_of_mass(e);
    double acc = 0.0;
    for (int i = 0; i < e.size(); ++i) {
        double r_sq = 0.0;
        for (int k = 0; k < e.dim; ++k) {
            const double d = e.positions[size_t(i) * e.dim + k] - c[k];
            r_sq += d * d;
        }
        acc += e.weights[i] * r_sq;
    }
    return std::sqrt(acc);
}

double diameter_bound(const DiagnosticsFrame& frame0, const KernelSpec& kernel) {
    if (std::isnan(frame0.d_omega))
        raise(Errc::bad_argument, "diameter bound needs D_omega of the initial frame");
    if (!kernel.primitive_finite())
        raise(Errc::non_integrable, "diameter bound needs a finite kernel primitive");
    const double d_eta0 = frame0.d_eta;
    const double d_omega0 = frame0.d_omega;
    const double psi1 = kernel.primitive(1.0);
    return 2.0 + std::max(std::hypot(d_eta0 - 2.0, d_omega0),
                          std::max(d_omega0, 2.0 * psi1 + 1.0) + 2.0);
}

DiagnosticsFrame compute_frame(const Ensemble& e, const PotentialSpec& potential,
                               const KernelSpec& kernel, const ReferenceMap* ref,
                               const DiagnosticsConfig& config) {
    DiagnosticsFrame f;
    f.t = e.time;
    f.e_diss = dissipation_energy(e, potential);

    const bool omega_ok = e.dim == 1 && kernel.primitive_finite();

    switch (config.mode) {
        case DiagnosticsConfig::Mode::convex_1d: {
            std::vector<double> omega;
            if (omega_ok) omega = aux_omega(e, kernel);
            const auto d = diameters(e, omega_ok ? &omega : nullptr);
            f.d_eta = d.positions;
            f.d_v = d.velocities;
            f.d_omega = d.omega;
            const auto dev = pairwise_l2(e, nullptr, kernel, DeviationMode::plain);
            f.x = dev.x;
            f.y = dev.y;
            f.z = dev.z;
            f.z_tilde = dev.z_tilde;
            f.w2_to_dirac = wasserstein_2_to_dirac(e);
            f.w2_to_ref = f.w2_to_dirac;
            const double c = center_of_mass(e)[0];
            f.winf_to_ref = wasserstein_1d(WassersteinOrder::winf, e, WassersteinTarget::dirac(c));
            break;
        }
        case DiagnosticsConfig::Mode::coulomb_1d: {
            if (!ref || ref->kind != ReferenceMap::Kind::coulomb_uniform)
                raise(Errc::incompatible_potential, "Coulomb diagnostics need the uniform reference");
            std::vector<double> omega, omega_tilde;
            if (omega_ok) {
                omega = aux_omega(e, kernel);
                omega_tilde = aux_omega_tilde(e, *ref, kernel);
            }
            const auto d = diameters(e, omega_ok ? &omega : nullptr, ref,
                                     omega_ok ? &omega_tilde : nullptr);
            f.d_eta = d.positions;
            f.d_v = d.velocities;
            f.d_omega = d.omega;
            f.d_eta_tilde = d.eta_tilde;
            f.d_omega_tilde = d.omega_tilde;
            const auto dev = pairwise_l2(e, ref, kernel, DeviationMode::coulomb_perturbation);
            f.x = dev.x;
            f.y = dev.y;
            f.z = dev.z;
            f.z_tilde = dev.z_tilde;
            const auto target_pos = ref->evaluate(e.time, e.size());
            const auto target = WassersteinTarget::atoms(target_pos, e.weights);
            f.w2_to_ref = wasserstein_1d(WassersteinOrder::w2, e, target);
            f.winf_to_ref = wasserstein_1d(WassersteinOrder::winf, e, target);
            f.w2_to_dirac = wasserstein_2_to_dirac(e);
            break;
        }
        case DiagnosticsConfig::Mode::multi_d: {
            const auto d = diameters(e);
            f.d_eta = d.positions;
            f.d_v = d.velocities;
            const auto dev = pairwise_l2(e, nullptr, kernel, DeviationMode::plain);
            f.x = dev.x;
            f.y = dev.y;
            f.z = dev.z;
            f.z_tilde = dev.z_tilde;
            const auto lyap = lyapunov_multid(e, potential, kernel, config.zeta, config.xi);
            f.e_zeta = lyap.e_zeta;
            f.e_tilde_xi = lyap.e_tilde_xi;
            f.l_cal = lyap.l_cal;
            f.w2_to_dirac = wasserstein_2_to_dirac(e);
            f.w2_to_ref = f.w2_to_dirac;
            // d_inf to a point target is the farthest atom in any dimension.
            const auto c = center_of_mass(e);
            double worst = 0.0;
            for (int i = 0; i < e.size(); ++i) {
                double r_sq = 0.0;
                for (int k = 0; k < e.dim; ++k) {
                    const double dd = e.positions[size_t(i) * e.dim + k] - c[k];
                    r_sq += dd * dd;
                }
                worst = std::max(worst, std::sqrt(r_sq));
            }
            f.winf_to_ref = worst;
            break;
        }
    }
    return f;
}

}  // namespace flocksim
