#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ddc {

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 1; i < t.size(); ++i)
        s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

/// Least-squares slope of y against t.
inline double linear_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const size_t n = t.size();
    if (n < 2) return 0.0;
    double mt = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= double(n);
    my /= double(n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    return (den > 0.0) ? num / den : 0.0;
}

struct DecayFit {
    bool ok = false;
    double rate = 0.0;  // y ~ exp(-rate * t) over the fit window
};

/// Fit the exponential decay rate over the final decade of a positive,
/// decaying series (all samples with y <= 10 * y_final).
inline DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
    DecayFit fit;
    if (y.size() < 5 || y.back() <= 0.0) return fit;
    const double lo = y.back();
    std::vector<double> ts, ls;
    for (size_t i = 0; i < y.size(); ++i)
        if (y[i] > 0.0 && y[i] <= 10.0 * lo) {
            ts.push_back(t[i]);
            ls.push_back(std::log(y[i]));
        }
    if (ts.size() < 5) return fit;
    const double slope = linear_slope(ts, ls);
    if (!(slope < 0.0)) return fit;
    fit.ok = true;
    fit.rate = -slope;
    return fit;
}

}  // namespace ddc
