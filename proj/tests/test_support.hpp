#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's kernel code paths: dense matrix assembly,
// plain Gaussian elimination, shuffled compensated summation.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ddc/config.hpp"
#include "ddc/discrete.hpp"
#include "ddc/model.hpp"
#include "ddc/solver.hpp"

namespace testsup {

using namespace ddc;

inline ScalarField random_field(const Grid& g, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField f(g);
    for (double& x : f.data) x = dist(rng);
    return f;
}

inline ScalarField constant_field(const Grid& g, double c) {
    ScalarField f(g);
    for (double& x : f.data) x = c;
    return f;
}

/// Kahan sum of a shuffled copy: an order-independent summation oracle.
inline double shuffled_kahan_sum(std::vector<double> values, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(values.begin(), values.end(), rng);
    double s = 0.0, c = 0.0;
    for (double v : values) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

/// Dense 5-point Neumann Laplacian, assembled row by row.
inline std::vector<std::vector<double>> assemble_laplacian(const Grid& g) {
    const int n = g.ncells();
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            auto couple = [&](int nb, double w) {
                A[c][nb] += w;
                A[c][c] -= w;
            };
            if (i > 0) couple(g.idx(i - 1, j), ax);
            if (i < g.nx - 1) couple(g.idx(i + 1, j), ax);
            if (j > 0) couple(g.idx(i, j - 1), ay);
            if (j < g.ny - 1) couple(g.idx(i, j + 1), ay);
        }
    return A;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
    const size_t n = b.size();
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t r = k + 1; r < n; ++r)
            if (std::fabs(A[r][k]) > std::fabs(A[piv][k])) piv = r;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (size_t r = k + 1; r < n; ++r) {
            const double f = A[r][k] / A[k][k];
            if (f == 0.0) continue;
            for (size_t c = k; c < n; ++c) A[r][c] -= f * A[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t k = n; k-- > 0;) {
        double s = b[k];
        for (size_t c = k + 1; c < n; ++c) s -= A[k][c] * x[c];
        x[k] = s / A[k][k];
    }
    return x;
}

/// Independent explicit update of u: dense mobility matrix for the diffusive
/// part plus a direct upwind scan for the taxis part, straight from the
/// scheme definition.
inline ScalarField dense_step_u(const ScalarField& u, const ScalarField& v, double dt,
                                const ModelParams& p) {
    const Grid& g = u.grid;
    const int n = g.ncells();

    // diffusion matrix with frozen face mobilities mean(u)^(m-1) * mean(v)
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    auto mob = [&](int ca, int cb) {
        const double um = 0.5 * (u[ca] + u[cb]);
        const double vm = 0.5 * (v[ca] + v[cb]);
        return std::pow(um, p.m - 1.0) * vm;
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            auto couple = [&](int nb, double w) {
                A[c][nb] += w;
                A[c][c] -= w;
            };
            if (i > 0) couple(g.idx(i - 1, j), mob(c, g.idx(i - 1, j)) / (g.hx * g.hx));
            if (i < g.nx - 1)
                couple(g.idx(i + 1, j), mob(c, g.idx(i + 1, j)) / (g.hx * g.hx));
            if (j > 0) couple(g.idx(i, j - 1), mob(c, g.idx(i, j - 1)) / (g.hy * g.hy));
            if (j < g.ny - 1)
                couple(g.idx(i, j + 1), mob(c, g.idx(i, j + 1)) / (g.hy * g.hy));
        }

    // taxis flux divergence, donor-cell upwind on the sign of mean(v) dv/h
    std::vector<double> taxdiv(n, 0.0);
    auto upwind_flux = [&](int cl, int cr, double h) {
        const double w = 0.5 * (v[cl] + v[cr]) * (v[cr] - v[cl]) / h;
        const double fu = (w > 0.0) ? f_eval(u[cl], p) : f_eval(u[cr], p);
        return fu * w;
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            const int cl = g.idx(i, j), cr = g.idx(i + 1, j);
            const double q = upwind_flux(cl, cr, g.hx);
            taxdiv[cl] += q / g.hx;   // flux leaves cl in +x
            taxdiv[cr] -= q / g.hx;
        }
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int cl = g.idx(i, j), cr = g.idx(i, j + 1);
            const double q = upwind_flux(cl, cr, g.hy);
            taxdiv[cl] += q / g.hy;
            taxdiv[cr] -= q / g.hy;
        }

    ScalarField out(g);
    for (int c = 0; c < n; ++c) {
        double diff = 0.0;
        for (int cc = 0; cc < n; ++cc) diff += A[c][cc] * u[cc];
        out[c] = u[c] + dt * (diff - taxdiv[c] + p.ell * u[c] * v[c]);
    }
    return out;
}

/// Dense solve of the implicit nutrient step.
inline ScalarField dense_step_v(const ScalarField& u, const ScalarField& v, double dt) {
    const Grid& g = u.grid;
    const int n = g.ncells();
    std::vector<std::vector<double>> A = assemble_laplacian(g);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) A[r][c] *= -dt;
        A[r][r] += 1.0 + dt * u[r];
    }
    std::vector<double> x = dense_solve(std::move(A), v.data);
    ScalarField out(g);
    out.data = std::move(x);
    return out;
}

inline InitialData gaussian_data(const Grid& g, double floor_val = 0.1) {
    InitialSpec u0;
    u0.kind = InitialSpec::Kind::Gaussian;
    u0.cx = 0.4;
    u0.cy = 0.55;
    u0.width = 0.15;
    u0.amplitude = 1.0;
    u0.floor_val = floor_val;
    InitialData data;
    data.u0 = make_field(u0, g);
    data.v0 = constant_field(g, 1.0);
    return data;
}

inline InitialData constant_data(const Grid& g, double cu, double cv) {
    InitialData data;
    data.u0 = constant_field(g, cu);
    data.v0 = constant_field(g, cv);
    return data;
}

inline ModelParams standard_params(double ell = 0.0) {
    ModelParams p;
    p.m = 2.0;
    p.alpha = 1.5;
    p.ell = ell;
    p.Cf = 1.0;
    p.f_kind = FKind::Power;
    p.epsilon = 1e-3;
    return p;
}

}  // namespace testsup
