#include "flocksim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace flocksim {

Ensemble init_particles(std::vector<double> positions, std::vector<double> velocities,
                        std::vector<double> weights, int dim) {
    if (dim < 1) raise(Errc::bad_argument, "dimension must be at least 1");
    const size_t n = weights.size();
    if (n < 2) raise(Errc::empty_ensemble, "need at least two particles");
    if (positions.size() != n * size_t(dim) || velocities.size() != n * size_t(dim))
        raise(Errc::dimension_mismatch, "positions/velocities shape does not match weights");

    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) raise(Errc::nonpositive_weight, "weights must be positive");
        total += w;
    }
    for (double& w : weights) w /= total;

    Ensemble e;
    e.dim = dim;
    e.positions = std::move(positions);
    e.velocities = std::move(velocities);
    e.weights = std::move(weights);

    if (dim == 1) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return e.positions[a] < e.positions[b]; });
        Ensemble sorted = e;
        for (size_t i = 0; i < n; ++i) {
            sorted.positions[i] = e.positions[order[i]];
            sorted.velocities[i] = e.velocities[order[i]];
            sorted.weights[i] = e.weights[order[i]];
        }
        return sorted;
    }
    return e;
}

Ensemble sample_initial(const InitialCondition& ic) {
    using P = InitialCondition::Positions;
    using V = InitialCondition::Velocities;

    if (ic.positions_kind == P::explicit_list)
        return init_particles(ic.explicit_positions, ic.explicit_velocities, ic.explicit_weights, ic.dim);

    const int n = ic.count;
    const int d = ic.dim;
    if (n < 2) raise(Errc::empty_ensemble, "need at least two particles");
    if (int(ic.pos_lo.size()) != d || int(ic.pos_hi.size()) != d)
        raise(Errc::unsupported_descriptor, "position bounds must have one entry per coordinate");

    std::mt19937 rng(ic.seed);
    std::vector<double> pos(size_t(n) * d);

    switch (ic.positions_kind) {
        case P::quantile_uniform: {
            if (d != 1) raise(Errc::unsupported_descriptor, "quantile positions are 1D only");
            const double lo = ic.pos_lo[0], hi = ic.pos_hi[0];
            if (!(hi > lo)) raise(Errc::unsupported_descriptor, "quantile interval must be nonempty");
            for (int i = 0; i < n; ++i) pos[i] = lo + (hi - lo) * (i + 0.5) / n;
            break;
        }
        case P::uniform_box: {
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < d; ++k) {
                    std::uniform_real_distribution<double> u(ic.pos_lo[k], ic.pos_hi[k]);
                    pos[size_t(i) * d + k] = u(rng);
                }
            break;
        }
        default:
            raise(Errc::unsupported_descriptor, "unknown position descriptor");
    }

    std::vector<double> vel(size_t(n) * d, 0.0);
    switch (ic.velocities_kind) {
        case V::zero:
            break;
        case V::uniform_box: {
            if (int(ic.vel_lo.size()) != d || int(ic.vel_hi.size()) != d)
                raise(Errc::unsupported_descriptor, "velocity bounds must have one entry per coordinate");
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < d; ++k) {
                    std::uniform_real_distribution<double> u(ic.vel_lo[k], ic.vel_hi[k]);
                    vel[size_t(i) * d + k] = u(rng);
                }
            break;
        }
        case V::sine: {
            if (d != 1) raise(Errc::unsupported_descriptor, "sine velocity profile is 1D only");
            for (int i = 0; i < n; ++i)
                vel[i] = ic.sine_amplitude * std::sin(ic.sine_frequency * pos[i]);
            break;
        }
        case V::explicit_list:
            if (ic.explicit_velocities.size() != size_t(n) * d)
                raise(Errc::unsupported_descriptor, "explicit velocities have the wrong shape");
            vel = ic.explicit_velocities;
            break;
    }

    return init_particles(std::move(pos), std::move(vel), std::vector<double>(n, 1.0 / n), d);
}

Ensemble load_initial_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::config_parse, "cannot open initial data file: " + path);

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
        break;
    }
    int d = 0;
    while (size_t(d) < header.size() && header[d] == "x" + std::to_string(d + 1)) ++d;
    if (d < 1 || header.size() != size_t(2 * d + 1) || header.back() != "m")
        raise(Errc::config_parse, "initial data header must be x1..xd,v1..vd,m");
    for (int k = 0; k < d; ++k)
        if (header[d + k] != "v" + std::to_string(k + 1))
            raise(Errc::config_parse, "initial data header must be x1..xd,v1..vd,m");

    std::vector<double> pos, vel, w;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != size_t(2 * d + 1))
            raise(Errc::config_parse, "initial data row has wrong arity");
        for (int k = 0; k < d; ++k) pos.push_back(row[k]);
        for (int k = 0; k < d; ++k) vel.push_back(row[d + k]);
        w.push_back(row[2 * d]);
    }
    return init_particles(std::move(pos), std::move(vel), std::move(w), d);
}

std::vector<double> center_of_mass(const Ensemble& e) {
    std::vector<double> c(e.dim, 0.0);
    for (int i = 0; i < e.size(); ++i)
        for (int k = 0; k < e.dim; ++k) c[k] += e.weights[i] * e.positions[size_t(i) * e.dim + k];
    return c;
}

std::vector<double> mean_velocity(const Ensemble& e) {
    std::vector<double> c(e.dim, 0.0);
    for (int i = 0; i < e.size(); ++i)
        for (int k = 0; k < e.dim; ++k) c[k] += e.weights[i] * e.velocities[size_t(i) * e.dim + k];
    return c;
}

std::vector<double> ReferenceMap::evaluate(double t, int count) const {
    std::vector<double> out(size_t(count) * dim);
    if (kind == Kind::coulomb_uniform && count != int(offsets.size()))
        raise(Errc::bad_argument, "reference map holds offsets for a different particle count");
    for (int i = 0; i < count; ++i)
        for (int k = 0; k < dim; ++k) {
            double v = center0[k] + t * drift[k];
            if (kind == Kind::coulomb_uniform) v += offsets[i];
            out[size_t(i) * dim + k] = v;
        }
    return out;
}

ReferenceMap reference_map(const Ensemble& e0, const PotentialSpec& potential) {
    ReferenceMap ref;
    ref.dim = e0.dim;
    ref.drift = mean_velocity(e0);
    ref.center0 = center_of_mass(e0);
    // The center of mass moves linearly, so the t = 0 intercept is exact
    // even when the map is built from a later snapshot.
    for (int k = 0; k < e0.dim; ++k) ref.center0[k] -= e0.time * ref.drift[k];

    if (potential.family == PotentialFamily::coulomb_quadratic_1d) {
        if (e0.dim != 1)
            raise(Errc::incompatible_potential, "Coulomb-quadratic reference requires dimension 1");
        ref.kind = ReferenceMap::Kind::coulomb_uniform;
        // Midpoint-of-atom quantiles of the uniform law on [-1, 1]: the exact
        // stationary configuration of the discrete dynamics.
        ref.offsets.resize(e0.size());
        double cum = 0.0;
        for (int i = 0; i < e0.size(); ++i) {
            ref.offsets[i] = 2.0 * (cum + e0.weights[i] / 2.0) - 1.0;
            cum += e0.weights[i];
        }
    } else {
        if (!potential.convexity_moduli())
            raise(Errc::incompatible_potential, "reference map needs a convex or Coulomb-quadratic potential");
        ref.kind = ReferenceMap::Kind::dirac_at_center;
    }
    return ref;
}

std::vector<double> aux_omega(const Ensemble& e, const KernelSpec& kernel) {
    if (e.dim != 1) raise(Errc::dimension_mismatch, "the auxiliary variable is 1D only");
    if (!kernel.primitive_finite())
        raise(Errc::non_integrable, "the auxiliary variable needs a finite kernel primitive");
    const int n = e.size();
    std::vector<double> omega(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;  // Ψ(0) = 0
            acc += e.weights[j] * kernel.primitive(e.positions[i] - e.positions[j]);
        }
        omega[i] = e.velocities[i] + acc;
    }
    return omega;
}

std::vector<double> aux_omega_tilde(const Ensemble& e, const ReferenceMap& ref,
                                    const KernelSpec& kernel) {
    if (e.dim != 1) raise(Errc::dimension_mismatch, "the auxiliary variable is 1D only");
    if (ref.kind != ReferenceMap::Kind::coulomb_uniform)
        raise(Errc::incompatible_potential, "omega-tilde needs the Coulomb uniform reference");
    if (!kernel.primitive_finite())
        raise(Errc::non_integrable, "the auxiliary variable needs a finite kernel primitive");
    const int n = e.size();
    if (int(ref.offsets.size()) != n)
        raise(Errc::bad_argument, "reference map holds offsets for a different particle count");
    std::vector<double> omega(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += e.weights[j] * (kernel.primitive(e.positions[i] - e.positions[j]) -
                                   kernel.primitive(ref.offsets[i] - ref.offsets[j]));
        }
        omega[i] = e.velocities[i] + acc;
    }
    return omega;
}

void require_sorted_1d(const Ensemble& e) {
    if (e.dim != 1) return;
    for (int i = 0; i + 1 < e.size(); ++i)
        if (e.positions[i + 1] < e.positions[i])
            raise(Errc::order_violation,
                  "1D particle order violated between indices " + std::to_string(i) + " and " +
                      std::to_string(i + 1) + " at t = " + std::to_string(e.time));
}

}  // namespace flocksim
