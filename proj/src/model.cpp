#include "ddc/model.hpp"

#include <cmath>
#include <sstream>

#include "ddc/discrete.hpp"
#include "ddc/kernels.hpp"

namespace ddc {

std::string to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::I: return "I";
        case CaseLabel::II: return "II";
        case CaseLabel::III: return "III";
    }
    return "?";
}

std::string to_string(FKind k) {
    return k == FKind::Product ? "product" : "power";
}

FKind fkind_from_string(const std::string& s) {
    if (s == "product") return FKind::Product;
    if (s == "power") return FKind::Power;
    throw ConfigError("f_kind must be \"product\" or \"power\", got \"" + s + "\"");
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

ClassifyResult classify(const ModelParams& p) {
    ClassifyResult r;
    if (!(p.m >= 1.0) || !(p.m < 4.0)) {
        r.reason = "m = " + fmt(p.m) + " outside 1 <= m < 4";
        return r;
    }
    if (!(p.ell >= 0.0)) {
        r.reason = "ell = " + fmt(p.ell) + " violates ell >= 0";
        return r;
    }
    if (!(p.Cf > 0.0)) {
        r.reason = "Cf = " + fmt(p.Cf) + " violates Cf > 0";
        return r;
    }
    if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0)) {
        r.reason = "epsilon = " + fmt(p.epsilon) + " outside (0,1)";
        return r;
    }

    if (p.m < 2.0) {
        // case I window
        if (p.f_kind != FKind::Product) {
            r.reason = "1 <= m < 2 requires the product-law sensitivity f(u) = Cf*u*(u+1)^(alpha-1)";
            return r;
        }
        if (!(p.alpha > p.m - 1.0)) {
            r.reason = "alpha = " + fmt(p.alpha) + " violates the strict m-1 < alpha (case I needs alpha > " + fmt(p.m - 1.0) + ")";
            return r;
        }
        if (!(p.alpha < p.m)) {
            r.reason = "alpha = " + fmt(p.alpha) + " violates the strict alpha < m (case I needs alpha < " + fmt(p.m) + ")";
            return r;
        }
        r.ok = true;
        r.label = CaseLabel::I;
        return r;
    }

    // cases II and III share the power-law window m-1 < alpha < m/2+1
    if (p.f_kind != FKind::Power) {
        r.reason = "2 <= m < 4 requires the power-law sensitivity f(u) = Cf*u^alpha";
        return r;
    }
    if (!(p.alpha > p.m - 1.0)) {
        r.reason = "alpha = " + fmt(p.alpha) + " violates the strict m-1 < alpha (needs alpha > " + fmt(p.m - 1.0) + ")";
        return r;
    }
    if (!(p.alpha < 0.5 * p.m + 1.0)) {
        r.reason = "alpha = " + fmt(p.alpha) + " violates the strict alpha < m/2+1 (needs alpha < " + fmt(0.5 * p.m + 1.0) + ")";
        return r;
    }
    r.ok = true;
    r.label = (p.m < 3.0) ? CaseLabel::II : CaseLabel::III;
    return r;
}

CaseLabel require_case(const ModelParams& p) {
    ClassifyResult r = classify(p);
    if (!r.ok) throw ConfigError("invalid model parameters: " + r.reason);
    return r.label;
}

double f_eval(double u, const ModelParams& p) {
    if (u < 0.0) throw std::domain_error("f_eval: negative density");
    if (u == 0.0) return 0.0;
    if (p.f_kind == FKind::Product)
        return p.Cf * u * detail::pow_pos(u + 1.0, p.alpha - 1.0);
    return p.Cf * detail::pow_pos(u, p.alpha);
}

double f_slope_bound(double u, const ModelParams& p) {
    if (u < 0.0) throw std::domain_error("f_slope_bound: negative density");
    if (p.f_kind == FKind::Product) {
        // f'(u) = Cf (u+1)^(alpha-2) (alpha u + 1), f(u)/u = Cf (u+1)^(alpha-1)
        const double fp =
            p.Cf * detail::pow_pos(u + 1.0, p.alpha - 2.0) * (p.alpha * u + 1.0);
        const double sec = p.Cf * detail::pow_pos(u + 1.0, p.alpha - 1.0);
        return std::max(fp, sec);
    }
    // power law: alpha > 1 in every admissible case, f'(u) >= f(u)/u
    if (u == 0.0) return 0.0;
    return p.Cf * p.alpha * detail::pow_pos(u, p.alpha - 1.0);
}

void validate_initial(const InitialData& data, const ModelParams& p) {
    const CaseLabel label = require_case(p);
    if (!data.u0.grid.same_as(data.v0.grid))
        throw ConfigError("initial data: u0 and v0 live on different grids");
    if (!kern::all_finite(data.u0.data) || !kern::all_finite(data.v0.data))
        throw ConfigError("initial data: non-finite values");
    if (min_value(data.u0) < 0.0)
        throw ConfigError("initial data: u0 must be nonnegative");
    if (!(integrate(data.u0) > 0.0))
        throw ConfigError("initial data: u0 must not be identically zero");
    if (!(min_value(data.v0) > 0.0))
        throw ConfigError("initial data: v0 must be strictly positive");
    if (label == CaseLabel::III && !(min_value(data.u0) > 0.0))
        throw ConfigError("initial data: case III (3 <= m < 4) requires u0 > 0 everywhere");
}

ScalarField regularize_initial(const InitialData& data, const ModelParams& p) {
    require_case(p);
    ScalarField u = data.u0;
    if (p.m < 3.0) {
        for (double& x : u.data) x += p.epsilon;
    }
    return u;
}

}  // namespace ddc
