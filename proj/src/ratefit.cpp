#include "flocksim/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flocksim {

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_rms = 0.0;
};

LinearFit least_squares(const std::vector<double>& u, const std::vector<double>& w) {
    const size_t n = u.size();
    double su = 0.0, sw = 0.0;
    for (size_t i = 0; i < n; ++i) {
        su += u[i];
        sw += w[i];
    }
    const double mu = su / double(n);
    const double mw = sw / double(n);
    double suu = 0.0, suw = 0.0;
    for (size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suw += (u[i] - mu) * (w[i] - mw);
    }
    LinearFit fit;
    fit.slope = suu > 0.0 ? suw / suu : 0.0;
    fit.intercept = mw - fit.slope * mu;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = w[i] - (fit.intercept + fit.slope * u[i]);
        ss_res += r * r;
        ss_tot += (w[i] - mw) * (w[i] - mw);
    }
    fit.r_squared = ss_tot > 1e-30 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
    fit.residual_rms = std::sqrt(ss_res / double(n));
    return fit;
}

Series window_slice(const Series& series, const std::optional<FitWindow>& window) {
    if (!window) return series;
    Series out;
    for (const auto& [t, y] : series)
        if (t >= window->t_lo && t <= window->t_hi) out.push_back({t, y});
    return out;
}

RateFit fit_impl(const Series& series, const std::optional<FitWindow>& window, bool log_time) {
    Series pts = window_slice(series, window);
    if (pts.size() < 8) raise(Errc::insufficient_data, "need at least 8 points in the fit window");

    std::vector<double> u, w;
    u.reserve(pts.size());
    w.reserve(pts.size());
    for (const auto& [t, y] : pts) {
        if (!(y > 0.0)) raise(Errc::nonpositive_value, "fit values must be positive");
        if (log_time && !(t > 0.0)) raise(Errc::nonpositive_value, "log-log fit needs positive times");
        u.push_back(log_time ? std::log(t) : t);
        w.push_back(std::log(y));
    }
    const LinearFit fit = least_squares(u, w);

    RateFit out;
    out.law = log_time ? RateFit::Law::algebraic : RateFit::Law::exponential;
    out.value = -fit.slope;
    out.intercept = fit.intercept;
    out.t_lo = pts.front().first;
    out.t_hi = pts.back().first;
    out.r_squared = fit.r_squared;
    out.residual_rms = fit.residual_rms;

    // Flat last quartile flags a measurement floor.
    const size_t q = pts.size() - pts.size() / 4;
    if (pts.size() - q >= 3) {
        const std::vector<double> u4(u.begin() + q, u.end());
        const std::vector<double> w4(w.begin() + q, w.end());
        const LinearFit tail = least_squares(u4, w4);
        out.floor_detected = std::abs(tail.slope) < 0.1 * std::abs(fit.slope);
    }
    return out;
}

}  // namespace

std::string RateFit::summary() const {
    std::ostringstream os;
    os << law_name() << " " << (law == Law::exponential ? "rate" : "exponent") << " = " << value
       << " on [" << t_lo << ", " << t_hi << "], r^2 = " << r_squared
       << ", residual rms = " << residual_rms << (floor_detected ? ", floor detected" : "");
    return os.str();
}

RateFit fit_exponential(const Series& series, std::optional<FitWindow> window) {
    return fit_impl(series, window, false);
}

RateFit fit_algebraic(const Series& series, std::optional<FitWindow> window) {
    return fit_impl(series, window, true);
}

FitWindow late_window(const Series& series) {
    if (series.size() < 4) raise(Errc::insufficient_data, "series too short for a late window");
    double t_lo = 0.5 * (series.front().first + series.back().first);
    double t_hi = series.back().first;
    // Peel floor-flagged tails (at most a few times).
    for (int pass = 0; pass < 3; ++pass) {
        Series pts = window_slice(series, FitWindow{t_lo, t_hi});
        if (pts.size() < 8) break;
        bool positive = true;
        for (const auto& [t, y] : pts)
            if (!(y > 0.0)) positive = false;
        if (!positive) break;
        const RateFit fit = fit_exponential(series, FitWindow{t_lo, t_hi});
        if (!fit.floor_detected) break;
        t_hi = t_lo + 0.75 * (t_hi - t_lo);
    }
    return {t_lo, t_hi};
}

RateFit classify_decay(const Series& series) {
    if (series.size() < 16) raise(Errc::insufficient_data, "need at least 16 points to classify");
    const FitWindow window = late_window(series);

    const Series pts = window_slice(series, FitWindow{window.t_lo, window.t_hi});
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = 0.0;
    for (const auto& [t, y] : pts) {
        if (!(y > 0.0)) raise(Errc::nonpositive_value, "classification needs positive values");
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    if (y_hi < 1.5 * y_lo)
        raise(Errc::inconclusive, "no appreciable decay over the late window");

    const RateFit exp_fit = fit_exponential(series, window);
    RateFit alg_fit;
    bool have_alg = true;
    try {
        alg_fit = fit_algebraic(series, window);
    } catch (const Error&) {
        have_alg = false;  // nonpositive times in the window
    }
    if (!have_alg) return exp_fit;
    if (std::abs(exp_fit.r_squared - alg_fit.r_squared) >= 0.01)
        return exp_fit.r_squared > alg_fit.r_squared ? exp_fit : alg_fit;

    // Near-tie in goodness of fit (short late windows make an exponential look
    // like a steep power law). Break it by parameter stability: the true law's
    // fitted parameter is the same on both halves of the window, the wrong
    // law's parameter drifts with the window location.
    const double t_mid = 0.5 * (window.t_lo + window.t_hi);
    const FitWindow first{window.t_lo, t_mid}, second{t_mid, window.t_hi};
    try {
        const double exp_drift =
            std::abs(fit_exponential(series, second).value - fit_exponential(series, first).value) /
            std::max(std::abs(exp_fit.value), 1e-12);
        const double alg_drift =
            std::abs(fit_algebraic(series, second).value - fit_algebraic(series, first).value) /
            std::max(std::abs(alg_fit.value), 1e-12);
        if (exp_drift < 0.5 * alg_drift) return exp_fit;
        if (alg_drift < 0.5 * exp_drift) return alg_fit;
    } catch (const Error&) {
        // half-windows too thin to compare
    }
    raise(Errc::inconclusive, "exponential and algebraic fits are indistinguishable");
}

double theta_window_ratio(const Series& series, double exponent, FitWindow window) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& [t, y] : series) {
        if (t < window.t_lo || t > window.t_hi) continue;
        if (!(t > 0.0) || !(y > 0.0))
            raise(Errc::nonpositive_value, "theta ratio needs positive times and values");
        const double v = y * std::pow(t, exponent);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo < std::numeric_limits<double>::infinity()))
        raise(Errc::insufficient_data, "no points in the theta window");
    return hi / lo;
}

}  // namespace flocksim
