#include "xamm/curve.hpp"

#include <cmath>

#include "xamm/errors.hpp"

namespace xamm {

std::string_view to_string(CurveKind kind) {
    return kind == CurveKind::Stable ? "stable" : "volatile";
}

CurveKind curve_kind_from_string(std::string_view text) {
    if (text == "volatile") return CurveKind::Volatile;
    if (text == "stable") return CurveKind::Stable;
    throw DomainError("unknown curve kind '" + std::string(text) + "'");
}

Curve Curve::volatile_curve(double weight) {
    Curve c{CurveKind::Volatile, weight, 0.0, 0.0};
    c.validate();
    return c;
}

Curve Curve::stable(double weight, double x_stable, double amplification) {
    Curve c{CurveKind::Stable, weight, x_stable, amplification};
    c.validate();
    return c;
}

void Curve::validate() const {
    if (!(std::isfinite(weight) && weight > 0.0)) {
        throw DomainError("curve weight must be positive and finite");
    }
    if (kind == CurveKind::Stable) {
        if (!(std::isfinite(x_stable) && x_stable > 0.0)) {
            throw DomainError("stable curve x_stable must be positive and finite");
        }
        if (!(std::isfinite(amplification) && amplification > 0.0)) {
            throw DomainError("stable curve amplification must be positive and finite");
        }
    }
}

Curve Curve::scaled(double factor) const {
    if (!(std::isfinite(factor) && factor > 0.0)) {
        throw DomainError("curve scale factor must be positive");
    }
    Curve c = *this;
    if (c.kind == CurveKind::Stable) {
        c.x_stable *= factor;
        c.amplification *= factor;
    }
    return c;
}

}  // namespace xamm
