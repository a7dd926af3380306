#include <doctest.h>

#include <cmath>

#include "flocksim/ratefit.hpp"

using namespace flocksim;

namespace {

Series sample(double t_lo, double t_hi, int n, double (*f)(double)) {
    Series s;
    for (int i = 0; i < n; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (n - 1);
        s.push_back({t, f(t)});
    }
    return s;
}

}  // namespace

TEST_CASE("exponential fit on exact data") {
    const auto s = sample(0.0, 5.0, 40, [](double t) { return std::exp(-2.0 * t); });
    const auto fit = fit_exponential(s);
    CHECK(fit.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK_FALSE(fit.floor_detected);

    const auto scaled = sample(0.0, 5.0, 40, [](double t) { return 3.0 * std::exp(-0.5 * t); });
    CHECK(fit_exponential(scaled).value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("algebraic fit on exact data") {
    const auto s = sample(10.0, 100.0, 50, [](double t) { return std::pow(t, -2.0); });
    CHECK(fit_algebraic(s).value == doctest::Approx(2.0).epsilon(1e-9));
    const auto scaled = sample(10.0, 100.0, 50, [](double t) { return 5.0 * std::pow(t, -1.5); });
    CHECK(fit_algebraic(scaled).value == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("scaling leaves the fitted value unchanged") {
    const auto s = sample(1.0, 20.0, 30, [](double t) { return std::pow(t, -1.2); });
    auto scaled = s;
    for (auto& [t, y] : scaled) y *= 1234.5;
    CHECK(fit_algebraic(s).value == doctest::Approx(fit_algebraic(scaled).value));
    CHECK(fit_algebraic(s).intercept != fit_algebraic(scaled).intercept);
}

TEST_CASE("window restriction on exact laws changes nothing") {
    const auto s = sample(0.0, 10.0, 100, [](double t) { return std::exp(-0.7 * t); });
    const auto full = fit_exponential(s);
    const auto windowed = fit_exponential(s, FitWindow{4.0, 9.0});
    CHECK(full.value == doctest::Approx(windowed.value).epsilon(1e-12));
}

TEST_CASE("classification") {
    const auto e = sample(0.0, 8.0, 40, [](double t) { return std::exp(-t); });
    const auto fe = classify_decay(e);
    CHECK(fe.law == RateFit::Law::exponential);
    CHECK(fe.value == doctest::Approx(1.0).epsilon(0.05));

    const auto a = sample(1.0, 60.0, 60, [](double t) { return std::pow(t, -2.0); });
    const auto fa = classify_decay(a);
    CHECK(fa.law == RateFit::Law::algebraic);
    CHECK(fa.value == doctest::Approx(2.0).epsilon(0.05));

    const auto c = sample(0.0, 10.0, 32, [](double) { return 0.7; });
    CHECK_THROWS_AS(classify_decay(c), Error);
}

TEST_CASE("reduced-system envelope shape fits to the limit exponent") {
    // (a + b t)^{-(1-alpha)/alpha} with alpha = 0.5 behaves like t^{-1} late.
    const auto s = sample(50.0, 400.0, 60, [](double t) { return std::pow(2.0 + 0.3 * t, -1.0); });
    CHECK(fit_algebraic(s, late_window(s)).value == doctest::Approx(1.0).epsilon(0.04));
}

TEST_CASE("floor detection and late-window trimming") {
    auto floored = [](double t) { return std::exp(-1.5 * t) + 1e-9; };
    const auto s = sample(0.0, 30.0, 120, floored);
    const auto fit = fit_exponential(s);
    CHECK(fit.floor_detected);
    const auto w = late_window(s);
    CHECK(w.t_hi < 30.0);  // the flat tail is excluded
}

TEST_CASE("theta window ratio") {
    const auto s = sample(10.0, 100.0, 40, [](double t) { return 3.0 * std::pow(t, -2.0); });
    CHECK(theta_window_ratio(s, 2.0, FitWindow{10.0, 100.0}) == doctest::Approx(1.0));
    CHECK(theta_window_ratio(s, 1.0, FitWindow{10.0, 100.0}) > 5.0);
}

TEST_CASE("error paths") {
    Series tiny{{0.0, 1.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(fit_exponential(tiny), Error);
    auto s = sample(0.0, 5.0, 20, [](double t) { return std::exp(-t); });
    s[3].second = -1.0;
    CHECK_THROWS_AS(fit_exponential(s), Error);
    const auto zero_t = sample(0.0, 5.0, 20, [](double t) { return std::exp(-t); });
    CHECK_THROWS_AS(fit_algebraic(zero_t), Error);  // t = 0 in a log-log fit
}
