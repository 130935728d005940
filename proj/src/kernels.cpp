#include "ddc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddc {

namespace detail {

double pow_pos(double x, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 0.5) return std::sqrt(x);
    if (e == 1.5) return x * std::sqrt(x);
    if (e == 2.5) return x * x * std::sqrt(x);
    return std::pow(x, e);
}

struct Chunk {
    int lo, hi;
};

// Fixed contiguous partition of [0,n) by thread id; independent of schedule.
inline Chunk chunk_of(int n, int nthreads, int tid) {
    const int base = n / nthreads;
    const int rem = n % nthreads;
    const int lo = tid * base + std::min(tid, rem);
    const int hi = lo + base + (tid < rem ? 1 : 0);
    return {lo, hi};
}

inline double kahan_sum_range(const double* v, int lo, int hi) {
    double s = 0.0, c = 0.0;
    for (int i = lo; i < hi; ++i) {
        double y = v[i] - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

inline double dot_range(const double* a, const double* b, int lo, int hi) {
    double s = 0.0, c = 0.0;
    for (int i = lo; i < hi; ++i) {
        double y = a[i] * b[i] - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

template <class F>
double reduce_deterministic(int n, F&& partial) {
    int nthreads = 1;
#ifdef _OPENMP
    nthreads = std::max(1, omp_get_max_threads());
#endif
    if (nthreads == 1 || n < 4096) return partial(0, n);
    std::vector<double> parts(static_cast<size_t>(nthreads), 0.0);
#pragma omp parallel num_threads(nthreads)
    {
#ifdef _OPENMP
        const int tid = omp_get_thread_num();
#else
        const int tid = 0;
#endif
        const Chunk ck = chunk_of(n, nthreads, tid);
        parts[static_cast<size_t>(tid)] = partial(ck.lo, ck.hi);
    }
    // combine in thread order
    double s = 0.0, c = 0.0;
    for (double p : parts) {
        double y = p - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// reductions

namespace kern {

double sum(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    return detail::reduce_deterministic(
        n, [&](int lo, int hi) { return detail::kahan_sum_range(v.data(), lo, hi); });
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    return detail::reduce_deterministic(
        n, [&](int lo, int hi) { return detail::dot_range(a.data(), b.data(), lo, hi); });
}

double max_val(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    double m = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : m) schedule(static)
    for (int i = 0; i < n; ++i) m = std::max(m, v[static_cast<size_t>(i)]);
    return m;
}

double min_val(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    double m = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : m) schedule(static)
    for (int i = 0; i < n; ++i) m = std::min(m, v[static_cast<size_t>(i)]);
    return m;
}

double max_abs(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(v[static_cast<size_t>(i)]));
    return m;
}

bool all_finite(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    bool ok = true;
#pragma omp parallel for reduction(&& : ok) schedule(static)
    for (int i = 0; i < n; ++i) ok = ok && std::isfinite(v[static_cast<size_t>(i)]);
    return ok;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] += a * x[static_cast<size_t>(i)];
}

void xpay(const std::vector<double>& x, double a, const std::vector<double>& p,
          std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        y[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + a * p[static_cast<size_t>(i)];
}

void face_gradient(const ScalarField& f, FaceField& out) {
    const Grid& g = f.grid;
    const double* v = f.data.data();
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    double* gx = out.x.data();
    double* gy = out.y.data();
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx - 1; ++i) {
                const int c = i + nx * j;
                gx[i + (nx - 1) * j] = (v[c + 1] - v[c]) * ihx;
            }
#pragma omp for schedule(static)
        for (int j = 0; j < ny - 1; ++j)
            for (int i = 0; i < nx; ++i) {
                const int c = i + nx * j;
                gy[c] = (v[c + nx] - v[c]) * ihy;
            }
    }
}

void laplacian(const ScalarField& f, ScalarField& out) {
    const Grid& g = f.grid;
    const double* v = f.data.data();
    double* r = out.data.data();
    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            const double fc = v[c];
            double acc = 0.0;
            if (i < nx - 1) acc += (v[c + 1] - fc) * ihx2;
            if (i > 0) acc -= (fc - v[c - 1]) * ihx2;
            if (j < ny - 1) acc += (v[c + nx] - fc) * ihy2;
            if (j > 0) acc -= (fc - v[c - nx]) * ihy2;
            r[c] = acc;
        }
}

void helmholtz_apply(const ScalarField& x, const ScalarField& u, double dt,
                     ScalarField& y) {
    const Grid& g = x.grid;
    const double* v = x.data.data();
    const double* uu = u.data.data();
    double* r = y.data.data();
    const int nx = g.nx, ny = g.ny;
    const double ax = dt / (g.hx * g.hx), ay = dt / (g.hy * g.hy);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            const double fc = v[c];
            double lap = 0.0;
            if (i < nx - 1) lap += (v[c + 1] - fc) * ax;
            if (i > 0) lap -= (fc - v[c - 1]) * ax;
            if (j < ny - 1) lap += (v[c + nx] - fc) * ay;
            if (j > 0) lap -= (fc - v[c - nx]) * ay;
            r[c] = fc + dt * uu[c] * fc - lap;
        }
}

void transport_fluxes(const ScalarField& u, const ScalarField& c,
                      const std::vector<double>& f_of_u, const FaceField& drift,
                      const TransportCoeffs& tc, FaceField& flux) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double* uv = u.data.data();
    const double* cv = c.data.data();
    const double* fv = f_of_u.data();
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    const double me = tc.mexp;
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx - 1; ++i) {
                const int cl = i + nx * j;
                const int cr = cl + 1;
                const double mob =
                    detail::pow_pos(0.5 * (uv[cl] + uv[cr]), me) * 0.5 * (cv[cl] + cv[cr]);
                const double w = drift.x[static_cast<size_t>(i + (nx - 1) * j)];
                const double fup = (w > 0.0) ? fv[cl] : fv[cr];
                flux.x[static_cast<size_t>(i + (nx - 1) * j)] =
                    mob * (uv[cr] - uv[cl]) * ihx - fup * w;
            }
#pragma omp for schedule(static)
        for (int j = 0; j < ny - 1; ++j)
            for (int i = 0; i < nx; ++i) {
                const int cl = i + nx * j;
                const int cr = cl + nx;
                const double mob =
                    detail::pow_pos(0.5 * (uv[cl] + uv[cr]), me) * 0.5 * (cv[cl] + cv[cr]);
                const double w = drift.y[static_cast<size_t>(cl)];
                const double fup = (w > 0.0) ? fv[cl] : fv[cr];
                flux.y[static_cast<size_t>(cl)] = mob * (uv[cr] - uv[cl]) * ihy - fup * w;
            }
    }
}

void apply_update(const ScalarField& u, const ScalarField& c,
                  const FaceField& flux, double dt, double ell, ScalarField& unew) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double* uv = u.data.data();
    const double* cv = c.data.data();
    const double* fx = flux.x.data();
    const double* fy = flux.y.data();
    double* out = unew.data.data();
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int cc = i + nx * j;
            double div = 0.0;
            if (i < nx - 1) div += fx[i + (nx - 1) * j] * ihx;
            if (i > 0) div -= fx[(i - 1) + (nx - 1) * j] * ihx;
            if (j < ny - 1) div += fy[cc] * ihy;
            if (j > 0) div -= fy[cc - nx] * ihy;
            out[cc] = uv[cc] + dt * (div + ell * cv[cc] * uv[cc]);
        }
}

}  // namespace kern

// ---------------------------------------------------------------------------
// serial references: same arithmetic, plain loops

namespace ref {

double sum(const std::vector<double>& v) {
    return detail::kahan_sum_range(v.data(), 0, static_cast<int>(v.size()));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return detail::dot_range(a.data(), b.data(), 0, static_cast<int>(a.size()));
}

double max_val(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    return m;
}

double min_val(const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) m = std::min(m, x);
    return m;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpay(const std::vector<double>& x, double a, const std::vector<double>& p,
          std::vector<double>& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + a * p[i];
}

void face_gradient(const ScalarField& f, FaceField& out) {
    const Grid& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx - 1; ++i) {
            const int c = i + nx * j;
            out.x[static_cast<size_t>(i + (nx - 1) * j)] = (f.data[c + 1] - f.data[c]) * ihx;
        }
    for (int j = 0; j < ny - 1; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            out.y[static_cast<size_t>(c)] = (f.data[c + nx] - f.data[c]) * ihy;
        }
}

void laplacian(const ScalarField& f, ScalarField& out) {
    const Grid& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            const double fc = f.data[c];
            double acc = 0.0;
            if (i < nx - 1) acc += (f.data[c + 1] - fc) * ihx2;
            if (i > 0) acc -= (fc - f.data[c - 1]) * ihx2;
            if (j < ny - 1) acc += (f.data[c + nx] - fc) * ihy2;
            if (j > 0) acc -= (fc - f.data[c - nx]) * ihy2;
            out.data[c] = acc;
        }
}

void helmholtz_apply(const ScalarField& x, const ScalarField& u, double dt,
                     ScalarField& y) {
    const Grid& g = x.grid;
    const int nx = g.nx, ny = g.ny;
    const double ax = dt / (g.hx * g.hx), ay = dt / (g.hy * g.hy);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            const double fc = x.data[c];
            double lap = 0.0;
            if (i < nx - 1) lap += (x.data[c + 1] - fc) * ax;
            if (i > 0) lap -= (fc - x.data[c - 1]) * ax;
            if (j < ny - 1) lap += (x.data[c + nx] - fc) * ay;
            if (j > 0) lap -= (fc - x.data[c - nx]) * ay;
            y.data[c] = fc + dt * u.data[c] * fc - lap;
        }
}

void transport_fluxes(const ScalarField& u, const ScalarField& c,
                      const std::vector<double>& f_of_u, const FaceField& drift,
                      const TransportCoeffs& tc, FaceField& flux) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx - 1; ++i) {
            const int cl = i + nx * j;
            const int cr = cl + 1;
            const double mob = detail::pow_pos(0.5 * (u.data[cl] + u.data[cr]), tc.mexp) *
                               0.5 * (c.data[cl] + c.data[cr]);
            const double w = drift.x[static_cast<size_t>(i + (nx - 1) * j)];
            const double fup = (w > 0.0) ? f_of_u[static_cast<size_t>(cl)]
                                         : f_of_u[static_cast<size_t>(cr)];
            flux.x[static_cast<size_t>(i + (nx - 1) * j)] =
                mob * (u.data[cr] - u.data[cl]) * ihx - fup * w;
        }
    for (int j = 0; j < ny - 1; ++j)
        for (int i = 0; i < nx; ++i) {
            const int cl = i + nx * j;
            const int cr = cl + nx;
            const double mob = detail::pow_pos(0.5 * (u.data[cl] + u.data[cr]), tc.mexp) *
                               0.5 * (c.data[cl] + c.data[cr]);
            const double w = drift.y[static_cast<size_t>(cl)];
            const double fup = (w > 0.0) ? f_of_u[static_cast<size_t>(cl)]
                                         : f_of_u[static_cast<size_t>(cr)];
            flux.y[static_cast<size_t>(cl)] = mob * (u.data[cr] - u.data[cl]) * ihy - fup * w;
        }
}

void apply_update(const ScalarField& u, const ScalarField& c,
                  const FaceField& flux, double dt, double ell, ScalarField& unew) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int cc = i + nx * j;
            double div = 0.0;
            if (i < nx - 1) div += flux.x[static_cast<size_t>(i + (nx - 1) * j)] * ihx;
            if (i > 0) div -= flux.x[static_cast<size_t>((i - 1) + (nx - 1) * j)] * ihx;
            if (j < ny - 1) div += flux.y[static_cast<size_t>(cc)] * ihy;
            if (j > 0) div -= flux.y[static_cast<size_t>(cc - nx)] * ihy;
            unew.data[cc] = u.data[cc] + dt * (div + ell * c.data[cc] * u.data[cc]);
        }
}

}  // namespace ref
}  // namespace ddc
