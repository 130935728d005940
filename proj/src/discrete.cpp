#include "ddc/discrete.hpp"

#include <cmath>

namespace ddc {

namespace {

double int_pow(double x, long e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

// sum of (f/fmax)^p over cells; ratios are in [0,1], so no overflow for any p
double ratio_power_sum(const ScalarField& f, double p, double fmax) {
    if (fmax <= 0.0) return 0.0;
    const int n = f.size();
    const bool integral = (p == std::floor(p)) && p > 0.0 && p < 1e6;
    const long pi = integral ? static_cast<long>(p) : 0;
    std::vector<double> terms(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double r = f.data[static_cast<size_t>(i)] / fmax;
        terms[static_cast<size_t>(i)] = (r <= 0.0) ? 0.0
                                        : integral ? int_pow(r, pi)
                                                   : std::exp(p * std::log(r));
    }
    return kern::sum(terms);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
    const double fmax = max_value(f);
    if (fmax <= 0.0) return 0.0;
    const double s = ratio_power_sum(f, p, fmax) * f.grid.cell_area;
    return fmax * std::exp(std::log(s) / p);
}

double lp_norm_normalized(const ScalarField& f, double p) {
    const double fmax = max_value(f);
    if (fmax <= 0.0) return 0.0;
    const double s = ratio_power_sum(f, p, fmax) * f.grid.cell_area / f.grid.area();
    return fmax * std::exp(std::log(s) / p);
}

}  // namespace ddc
