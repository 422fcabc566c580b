#pragma once

#include <string>
#include <string_view>

namespace xamm {

enum class CurveKind { Volatile, Stable };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view text);

/// Univariate price curve of a single pooled asset.
///
/// Volatile curves price an asset as `weight / x`. Stable curves blend that
/// hyperbola with the flat price `weight / x_stable` through a bell factor
/// `A^2 / ((x - x_stable)^2 + A^2)`, so the price stays close to the
/// equilibrium value over a window whose width is set by the amplification A.
/// `amplification` is a quantity (same units as the balance).
struct Curve {
    CurveKind kind = CurveKind::Volatile;
    double weight = 1.0;
    double x_stable = 0.0;       // stable only
    double amplification = 0.0;  // stable only

    static Curve volatile_curve(double weight);
    static Curve stable(double weight, double x_stable, double amplification);

    bool is_stable() const noexcept { return kind == CurveKind::Stable; }

    /// Throws DomainError when the parameters violate the curve invariants.
    void validate() const;

    /// Same curve with every quantity-valued parameter multiplied by `factor`.
    /// Volatile curves have none and are returned unchanged.
    Curve scaled(double factor) const;

    friend bool operator==(const Curve&, const Curve&) = default;
};

}  // namespace xamm
