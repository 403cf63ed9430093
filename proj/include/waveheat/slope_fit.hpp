#pragma once

// Least-squares slope fitting of sampled decay curves, on log-log axes for
// power laws and on log-linear axes for exponential rates.

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace waveheat {

struct CurveSample {
    double t;
    double value;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t used = 0;
    bool exponential_like = false;  // steeper than any power law plausibly is in the window
};

struct EnergyCurve {
    std::vector<CurveSample> samples;
    double fitted_slope = 0.0;
    double fit_t_min = 0.0;
    double fit_t_max = 0.0;
};

namespace detail {
inline SlopeFit linear_fit(const std::vector<std::pair<double, double>>& xy) {
    const double n = static_cast<double>(xy.size());
    double sx = 0.0, sy = 0.0;
    for (auto& [x, y] : xy) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit: degenerate abscissa");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (auto& [x, y] : xy) {
        double r = y - (f.intercept + f.slope * x);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    f.used = xy.size();
    return f;
}
}  // namespace detail

// Log-log least-squares slope over the window [t_min, t_max]. Requires at
// least 10 in-window samples, all with positive values.
inline SlopeFit slope_fit(std::span<const CurveSample> samples, double t_min, double t_max) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : samples) {
        if (s.t < t_min || s.t > t_max) continue;
        if (!(s.value > 0.0))
            throw std::domain_error("slope_fit: non-positive value inside fit window");
        xy.emplace_back(std::log(s.t), std::log(s.value));
    }
    if (xy.size() < 10) throw std::invalid_argument("slope_fit: fewer than 10 samples in window");
    SlopeFit f = detail::linear_fit(xy);
    f.exponential_like = f.slope <= -4.0;
    return f;
}

// Exponential rate c from a log-linear fit of value ~ exp(-c t); returns the
// positive rate (negative values mean growth).
inline SlopeFit exp_rate_fit(std::span<const CurveSample> samples, double t_min, double t_max) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& s : samples) {
        if (s.t < t_min || s.t > t_max) continue;
        if (!(s.value > 0.0))
            throw std::domain_error("exp_rate_fit: non-positive value inside fit window");
        xy.emplace_back(s.t, std::log(s.value));
    }
    if (xy.size() < 4) throw std::invalid_argument("exp_rate_fit: fewer than 4 samples in window");
    SlopeFit f = detail::linear_fit(xy);
    f.slope = -f.slope;  // report the decay rate, positive when decaying
    return f;
}

}  // namespace waveheat
