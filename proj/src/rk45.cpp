#include "flocksim/rk45.hpp"

#include <algorithm>

namespace flocksim {

void rk4_step(const RhsFn& rhs, double t, double dt, std::vector<double>& y) {
    const size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    rhs(t, y, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (size_t i = 0; i < n; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

double AdaptiveRk45::attempt(double t, const std::vector<double>& y, double dt,
                             std::vector<double>& y_out) {
    const size_t n = y.size();
    for (auto& k : k_) k.resize(n);
    scratch_.resize(n);

    rhs_(t, y, k_[0]);
    for (int stage = 1; stage < 7; ++stage) {
        for (size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int s = 0; s < stage; ++s) acc += kA[stage][s] * k_[s][i];
            scratch_[i] = y[i] + dt * acc;
        }
        rhs_(t + kC[stage] * dt, scratch_, k_[stage]);
    }

    y_out.resize(n);
    double err_sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double y5 = 0.0, y4 = 0.0;
        for (int s = 0; s < 7; ++s) {
            y5 += kB5[s] * k_[s][i];
            y4 += kB4[s] * k_[s][i];
        }
        y_out[i] = y[i] + dt * y5;
        const double scale =
            control_.abs_tol + control_.rel_tol * std::max(std::abs(y[i]), std::abs(y_out[i]));
        const double e = dt * (y5 - y4) / scale;
        err_sq += e * e;
    }
    return std::sqrt(err_sq / double(n));
}

double AdaptiveRk45::step(double t, std::vector<double>& y, double t_end) {
    if (t >= t_end) return t;
    std::vector<double> y_next;
    dt_ = std::min(dt_, control_.dt_max);
    while (true) {
        const bool clamped = dt_ >= t_end - t;
        const double dt = clamped ? t_end - t : dt_;
        if (dt < control_.dt_floor)
            raise(Errc::step_size_underflow, "step size underflow at t = " + std::to_string(t));

        double err;
        bool rhs_rejected = false;
        try {
            err = attempt(t, y, dt, y_next);
        } catch (const Error& e) {
            if (e.code() != Errc::separation_underflow) throw;
            rhs_rejected = true;
            err = 0.0;
        }

        if (!rhs_rejected && !(err > 1.0)) {
            if (admissible_ && !admissible_(t + dt, y_next)) {
                dt_ = dt * 0.5;
                continue;
            }
            y.swap(y_next);
            if (!clamped) {
                const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                dt_ = std::min(dt * fac, control_.dt_max);
            }
            return t + dt;
        }

        const double fac = rhs_rejected
                               ? 0.5
                               : std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        dt_ = dt * fac;
    }
}

}  // namespace flocksim
