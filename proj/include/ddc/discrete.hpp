#pragma once

#include "ddc/field.hpp"
#include "ddc/kernels.hpp"

namespace ddc {

/// Midpoint-rule integral over the domain, compensated summation.
inline double integrate(const ScalarField& f) {
    return kern::sum(f.data) * f.grid.cell_area;
}

/// Integral of the pointwise product f*g.
inline double integrate_product(const ScalarField& f, const ScalarField& g) {
    return kern::dot(f.data, g.data) * f.grid.cell_area;
}

/// Cell-area inner product.
inline double inner(const ScalarField& f, const ScalarField& g) {
    return integrate_product(f, g);
}

inline double sup_norm(const ScalarField& f) { return kern::max_abs(f.data); }
inline double min_value(const ScalarField& f) { return kern::min_val(f.data); }
inline double max_value(const ScalarField& f) { return kern::max_val(f.data); }

inline FaceField face_gradient(const ScalarField& f) {
    FaceField out(f.grid);
    kern::face_gradient(f, out);
    return out;
}

inline ScalarField neumann_laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    kern::laplacian(f, out);
    return out;
}

/// L^p norm of a nonnegative field, (integral of f^p)^(1/p), computed against
/// the field maximum so arbitrarily large p cannot overflow.
double lp_norm(const ScalarField& f, double p);

/// Same but normalized by the domain area: (integral f^p / area)^(1/p).
double lp_norm_normalized(const ScalarField& f, double p);

}  // namespace ddc
