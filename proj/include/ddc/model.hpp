#pragma once

#include <stdexcept>
#include <string>

#include "ddc/field.hpp"

namespace ddc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape of the taxis sensitivity f(u).
enum class FKind {
    Product,  // f(u) = Cf * u * (u+1)^(alpha-1)
    Power,    // f(u) = Cf * u^alpha
};

enum class CaseLabel { I, II, III };

std::string to_string(CaseLabel c);
std::string to_string(FKind k);
FKind fkind_from_string(const std::string& s);

struct ModelParams {
    double m = 2.0;        // diffusion exponent, 1 <= m < 4
    double alpha = 1.5;    // taxis exponent
    double ell = 0.0;      // proliferation rate, >= 0
    double Cf = 1.0;       // sensitivity scale, > 0
    FKind f_kind = FKind::Power;
    double epsilon = 1e-3; // regularization, in (0,1)
};

struct ClassifyResult {
    bool ok = false;
    CaseLabel label = CaseLabel::I;
    std::string reason;  // violated inequality when !ok
};

/// Admissible parameter windows:
///   I:   1 <= m < 2, product law, m-1 < alpha < m
///   II:  2 <= m < 3, power law,   m-1 < alpha < m/2+1
///   III: 3 <= m < 4, power law,   m-1 < alpha < m/2+1 (needs min u0 > 0)
/// Ties are rejected; the inequalities are strict.
ClassifyResult classify(const ModelParams& p);

/// classify or throw ConfigError with the violated inequality.
CaseLabel require_case(const ModelParams& p);

/// Sensitivity law value; rejects negative u.
double f_eval(double u, const ModelParams& p);

/// Pointwise bound on the advective wave speed factor:
/// max(f'(u), f(u)/u), used by the CFL estimate.
double f_slope_bound(double u, const ModelParams& p);

struct InitialData {
    ScalarField u0;  // >= 0, not identically zero
    ScalarField v0;  // > 0
};

/// Checks the admissibility of (u0, v0) for the given parameters; throws
/// ConfigError naming the violated condition.
void validate_initial(const InitialData& data, const ModelParams& p);

/// u0 + epsilon for m in [1,3); u0 unchanged for m in [3,4).
ScalarField regularize_initial(const InitialData& data, const ModelParams& p);

}  // namespace ddc
