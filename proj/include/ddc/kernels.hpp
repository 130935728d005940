#pragma once

#include <cstdint>

#include "ddc/field.hpp"

// Stencil and reduction kernels. ddc::kern holds the OpenMP-parallel versions
// used by the solver; ddc::ref holds serial reference implementations kept for
// testing and benchmarking. Map kernels (fluxes, updates, matvecs) produce
// bitwise-identical results in both namespaces; reductions agree to rounding.
//
// All reductions are deterministic for a fixed thread count: each thread
// accumulates a fixed contiguous chunk and the partials are combined in
// thread order.

namespace ddc {

/// Per-cell coefficients of the transport step
///   du/dt = div( mean(u)^(m-1) * mean(c) * grad u - f(u_upwind) * drift )
///           + ell * c * u
/// where `drift` is a signed face field (the advective flux scale) and `c` is
/// a cell field (nutrient v in the primal chart, a(x,tau) in the rescaled
/// chart). f values are supplied per cell, precomputed by the caller.
struct TransportCoeffs {
    double mexp = 1.0;  // diffusion exponent m-1
    double ell = 0.0;
};

namespace kern {

// reductions
double sum(const std::vector<double>& v);                              // compensated
double dot(const std::vector<double>& a, const std::vector<double>& b);
double max_val(const std::vector<double>& v);
double min_val(const std::vector<double>& v);
double max_abs(const std::vector<double>& v);
bool all_finite(const std::vector<double>& v);

// y = a*x + y
void axpy(double a, const std::vector<double>& x, std::vector<double>& y);
// y = x + a*p
void xpay(const std::vector<double>& x, double a, const std::vector<double>& p,
          std::vector<double>& y);

/// Centered difference across each interior face; boundary faces are zero.
void face_gradient(const ScalarField& f, FaceField& out);

/// Divergence of the face gradient (5-point Neumann Laplacian).
void laplacian(const ScalarField& f, ScalarField& out);

/// y = x + dt*(u .* x) - dt*Lap(x); the implicit nutrient operator.
void helmholtz_apply(const ScalarField& x, const ScalarField& u, double dt,
                     ScalarField& y);

/// Combined diffusive + upwinded advective face fluxes (see TransportCoeffs).
void transport_fluxes(const ScalarField& u, const ScalarField& c,
                      const std::vector<double>& f_of_u, const FaceField& drift,
                      const TransportCoeffs& tc, FaceField& flux);

/// unew = u + dt * (div flux + ell * c .* u)
void apply_update(const ScalarField& u, const ScalarField& c,
                  const FaceField& flux, double dt, double ell, ScalarField& unew);

}  // namespace kern

namespace ref {

double sum(const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double max_val(const std::vector<double>& v);
double min_val(const std::vector<double>& v);
double max_abs(const std::vector<double>& v);
bool all_finite(const std::vector<double>& v);

void axpy(double a, const std::vector<double>& x, std::vector<double>& y);
void xpay(const std::vector<double>& x, double a, const std::vector<double>& p,
          std::vector<double>& y);

void face_gradient(const ScalarField& f, FaceField& out);
void laplacian(const ScalarField& f, ScalarField& out);
void helmholtz_apply(const ScalarField& x, const ScalarField& u, double dt,
                     ScalarField& y);
void transport_fluxes(const ScalarField& u, const ScalarField& c,
                      const std::vector<double>& f_of_u, const FaceField& drift,
                      const TransportCoeffs& tc, FaceField& flux);
void apply_update(const ScalarField& u, const ScalarField& c,
                  const FaceField& flux, double dt, double ell, ScalarField& unew);

}  // namespace ref

namespace detail {

/// x^e for x >= 0 with fast paths for the half-integer exponents the model
/// actually uses; falls back to std::pow otherwise.
double pow_pos(double x, double e);

}  // namespace detail

}  // namespace ddc
