#include "flocksim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace flocksim {

void SimConfig::validate() const {
    if (!(dt_init > 0.0)) raise(Errc::bad_argument, "dt_init must be positive");
    if (!(dt_max > 0.0)) raise(Errc::bad_argument, "dt_max must be positive");
    if (!(t_final > 0.0)) raise(Errc::bad_argument, "t_final must be positive");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) raise(Errc::bad_argument, "tolerances must be positive");
    if (record_every < 1) raise(Errc::bad_argument, "record_every must be at least 1");
}

namespace {

void accelerations_raw(const double* pos, const double* vel, const double* w, int n, int dim,
                       const PotentialSpec& potential, const KernelSpec& kernel,
                       double separation_guard, bool guard_active, double* out) {
    std::vector<double> diff(dim), grad(dim);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dim; ++k) out[size_t(i) * dim + k] = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double r_sq = 0.0;
            for (int k = 0; k < dim; ++k) {
                diff[k] = pos[size_t(i) * dim + k] - pos[size_t(j) * dim + k];
                r_sq += diff[k] * diff[k];
            }
            const double r = std::sqrt(r_sq);
            if (guard_active && r < separation_guard)
                raise(Errc::separation_underflow,
                      "pair separation " + std::to_string(r) + " under the guard");
            potential.gradient(diff, grad);
            const double align = kernel.psi(r);
            const double mj = w[j];
            for (int k = 0; k < dim; ++k) {
                const double dv = vel[size_t(i) * dim + k] - vel[size_t(j) * dim + k];
                out[size_t(i) * dim + k] -= mj * (grad[k] + align * dv);
            }
        }
    }
}

// Integration state shared between the rhs closure and the label maintenance:
// weights travel with the particles when 1D labels are re-sorted.
struct Driver {
    int n = 0;
    int dim = 1;
    std::shared_ptr<std::vector<double>> weights;
    const PotentialSpec* potential = nullptr;
    const KernelSpec* kernel = nullptr;
    double guard = 0.0;
    bool guard_active = false;
    bool strict_order = false;  // singular kernel or Coulomb potential: no label exchange

    static Driver make(const Ensemble& e0, const SimConfig& config,
                       const PotentialSpec& potential, const KernelSpec& kernel) {
        Driver d;
        d.n = e0.size();
        d.dim = e0.dim;
        d.weights = std::make_shared<std::vector<double>>(e0.weights);
        d.potential = &potential;
        d.kernel = &kernel;
        d.guard = config.min_separation_guard >= 0.0
                      ? config.min_separation_guard
                      : 1e-9 * diameters(e0).positions;
        d.guard_active = !std::isfinite(kernel.upper_bound());
        d.strict_order =
            e0.dim == 1 && (d.guard_active ||
                            potential.family == PotentialFamily::coulomb_quadratic_1d);
        return d;
    }

    RhsFn rhs() const {
        const int nn = n;
        const int dd = dim;
        auto w = weights;
        const PotentialSpec* pot = potential;
        const KernelSpec* ker = kernel;
        const double g = guard;
        const bool active = guard_active;
        return [nn, dd, w, pot, ker, g, active](double, const std::vector<double>& y,
                                                std::vector<double>& dydt) {
            dydt.resize(y.size());
            const size_t nd = size_t(nn) * dd;
            std::copy(y.begin() + nd, y.end(), dydt.begin());
            accelerations_raw(y.data(), y.data() + nd, w->data(), nn, dd, *pot, *ker, g, active,
                              dydt.data() + nd);
        };
    }

    bool ordered(const std::vector<double>& y) const {
        if (dim != 1) return true;
        for (int i = 0; i + 1 < n; ++i)
            if (y[i + 1] < y[i]) return false;
        return true;
    }

    // 1D label exchange after an atom crossing. The pair force is symmetric
    // under particle exchange, so sorting (position, velocity, weight) rows is
    // a pure relabeling of the same trajectory set.
    void relabel(std::vector<double>& y) {
        if (dim != 1 || ordered(y)) return;
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return y[a] < y[b]; });
        std::vector<double> ny(y.size());
        std::vector<double> nw(n);
        for (int i = 0; i < n; ++i) {
            ny[i] = y[order[i]];
            ny[size_t(n) + i] = y[size_t(n) + order[i]];
            nw[i] = (*weights)[order[i]];
        }
        y.swap(ny);
        weights->swap(nw);
    }

    Ensemble snapshot(const Ensemble& like, const std::vector<double>& y, double t) const {
        Ensemble e = like;
        const size_t nd = size_t(n) * dim;
        e.positions.assign(y.begin(), y.begin() + nd);
        e.velocities.assign(y.begin() + nd, y.end());
        e.weights = *weights;
        e.time = t;
        return e;
    }
};

std::vector<double> pack(const Ensemble& e) {
    std::vector<double> y(e.positions.size() * 2);
    std::copy(e.positions.begin(), e.positions.end(), y.begin());
    std::copy(e.velocities.begin(), e.velocities.end(), y.begin() + e.positions.size());
    return y;
}

}  // namespace

void accelerations(const Ensemble& e, const PotentialSpec& potential, const KernelSpec& kernel,
                   double separation_guard, std::vector<double>& out) {
    if (potential.dim != e.dim) raise(Errc::dimension_mismatch, "potential dimension mismatch");
    out.resize(e.positions.size());
    const bool guard_active = !std::isfinite(kernel.upper_bound());
    accelerations_raw(e.positions.data(), e.velocities.data(), e.weights.data(), e.size(), e.dim,
                      potential, kernel, separation_guard, guard_active, out.data());
}

Ensemble step(const Ensemble& e, const SimConfig& config, const PotentialSpec& potential,
              const KernelSpec& kernel) {
    config.validate();
    Driver driver = Driver::make(e, config, potential, kernel);
    auto rhs = driver.rhs();
    std::vector<double> y = pack(e);

    if (config.integrator == SimConfig::Integrator::rk4) {
        rk4_step(rhs, e.time, config.dt_init, y);
        if (driver.strict_order && !driver.ordered(y))
            raise(Errc::order_violation, "1D particle order violated (reduce dt_init)");
        driver.relabel(y);
        return driver.snapshot(e, y, e.time + config.dt_init);
    }

    StepControl ctrl{config.rel_tol, config.abs_tol, config.dt_init, 1e-12 * config.t_final,
                     config.dt_max};
    AdaptiveRk45 solver(rhs, ctrl);
    if (driver.strict_order)
        solver.set_admissibility(
            [&driver](double, const std::vector<double>& y_new) { return driver.ordered(y_new); });
    const double t = solver.step(e.time, y, e.time + config.t_final);
    driver.relabel(y);
    return driver.snapshot(e, y, t);
}

std::vector<TrajectoryRecord> simulate(const Ensemble& e0, const SimConfig& config,
                                       const PotentialSpec& potential, const KernelSpec& kernel,
                                       const FrameFn& frame_fn) {
    config.validate();
    if (potential.dim != e0.dim) raise(Errc::dimension_mismatch, "potential dimension mismatch");
    require_sorted_1d(e0);

    Driver driver = Driver::make(e0, config, potential, kernel);
    auto rhs = driver.rhs();

    std::vector<TrajectoryRecord> records;
    auto record = [&](const Ensemble& state) {
        records.push_back({state.time, state, frame_fn ? frame_fn(state) : DiagnosticsFrame{}});
    };
    record(e0);

    std::vector<double> y = pack(e0);
    double t = e0.time;
    const double t_end = e0.time + config.t_final;
    long step_index = 0;

    try {
        if (config.integrator == SimConfig::Integrator::rk4) {
            while (t < t_end - 1e-15 * config.t_final) {
                const double dt = std::min(config.dt_init, t_end - t);
                rk4_step(rhs, t, dt, y);
                t += dt;
                if (driver.strict_order && !driver.ordered(y))
                    raise(Errc::order_violation, "1D particle order violated (reduce dt_init)");
                driver.relabel(y);
                ++step_index;
                if (step_index % config.record_every == 0 || t >= t_end - 1e-15 * config.t_final)
                    record(driver.snapshot(e0, y, t));
            }
        } else {
            StepControl ctrl{config.rel_tol, config.abs_tol, config.dt_init,
                             1e-12 * config.t_final, config.dt_max};
            AdaptiveRk45 solver(rhs, ctrl);
            if (driver.strict_order)
                solver.set_admissibility([&driver](double, const std::vector<double>& y_new) {
                    return driver.ordered(y_new);
                });
            while (t < t_end - 1e-15 * config.t_final) {
                t = solver.step(t, y, t_end);
                driver.relabel(y);
                ++step_index;
                if (step_index % config.record_every == 0 || t >= t_end - 1e-15 * config.t_final)
                    record(driver.snapshot(e0, y, t));
            }
        }
    } catch (const Error& err) {
        throw Error(err.code(), std::string(err.what()) + " [simulation failed at t = " +
                                    std::to_string(t) + "]");
    }
    return records;
}

}  // namespace flocksim
