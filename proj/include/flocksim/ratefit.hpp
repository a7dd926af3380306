#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flocksim/errors.hpp"

namespace flocksim {

using Series = std::vector<std::pair<double, double>>;  // (t, y)

struct RateFit {
    enum class Law { exponential, algebraic };

    Law law = Law::exponential;
    double value = 0.0;  // decay rate (exponential) or exponent (algebraic)
    double intercept = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    double r_squared = 0.0;
    double residual_rms = 0.0;
    bool floor_detected = false;

    const char* law_name() const { return law == Law::exponential ? "exponential" : "algebraic"; }
    std::string summary() const;
};

struct FitWindow {
    double t_lo;
    double t_hi;
};

/// Least squares on (t, log y); the decay rate is minus the slope.
RateFit fit_exponential(const Series& series, std::optional<FitWindow> window = std::nullopt);

/// Least squares on (log t, log y); the exponent is minus the slope.
RateFit fit_algebraic(const Series& series, std::optional<FitWindow> window = std::nullopt);

/// Fits both laws on the late half and keeps the better one; near-ties are
/// Inconclusive.
RateFit classify_decay(const Series& series);

/// Ratio max/min of y * t^exponent over the window; < bound certifies the
/// two-sided part of a Theta claim.
double theta_window_ratio(const Series& series, double exponent, FitWindow window);

/// Default asymptotic window: the last 50% of recorded times, minus a
/// floor-flagged tail.
FitWindow late_window(const Series& series);

}  // namespace flocksim
