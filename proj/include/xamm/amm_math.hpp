#pragma once

#include <cstddef>
#include <span>

#include "xamm/curve.hpp"

namespace xamm {

/// Amount in the pool's shared value numeraire. Signed: positive when value
/// flowed into the pool for the integrated asset.
using Value = double;

/// Pool balances may not be pushed below this by a swap.
inline constexpr double kDustFloor = 1e-9;
inline constexpr double kDefaultValueTolerance = 1e-12;
inline constexpr int kBisectionBudget = 128;

double price(const Curve& curve, double x);

/// Primitive of `price`. Volatile: w ln x. Stable: the closed form with the
/// ln/arctan terms, constant of integration zero.
double antiderivative(const Curve& curve, double x);

/// Integral of the price from `x_from` to `x_to`.
///
/// Equal to antiderivative(x_to) - antiderivative(x_from), but evaluated in
/// grouped difference form (log of ratios, arctan of a difference) so that
/// narrow intervals keep full relative precision.
Value value_between(const Curve& curve, double x_from, double x_to);

struct Inversion {
    double amount = 0.0;     // withdrawn: balance - remaining, rounded
    double remaining = 0.0;  // balance left behind
    int iterations = 0;      // bisection steps; 0 for closed forms
    double residual = 0.0;   // |value_between(remaining, balance) - v|
};

/// Amount that must leave a balance of `balance` so that the withdrawn
/// interval carries `v` units of value. Volatile curves use the closed form.
/// Stable curves bisect on the remaining balance with a geometric midpoint,
/// which resolves small remainders as finely as large ones. Callers that
/// update pool state should store `remaining` rather than recompute
/// `balance - amount`. Throws InsufficientLiquidity if the balance would end
/// below `dust_floor` and NoConvergence if the bisection budget runs out.
Inversion invert_out_detailed(const Curve& curve, double balance, Value v,
                              double tol = kDefaultValueTolerance,
                              double dust_floor = kDustFloor);

double invert_out(const Curve& curve, double balance, Value v,
                  double tol = kDefaultValueTolerance, double dust_floor = kDustFloor);

/// Checks a claimed output instead of searching for it.
bool verify_out(const Curve& curve, double balance, Value v, double claimed_out,
                double tol = kDefaultValueTolerance, double dust_floor = kDustFloor);

/// Both halves of a cross-chain swap evaluated in one place: the value gained
/// by crediting `amount_in` to `balance_in`, inverted against `balance_out`.
double atomic_swap_out(const Curve& curve_in, double balance_in, double amount_in,
                       const Curve& curve_out, double balance_out,
                       double tol = kDefaultValueTolerance,
                       double dust_floor = kDustFloor);

/// Geometric mean of the initial balances.
double initial_shares(std::span<const double> balances);

/// Shift of the reference balance that keeps the integrated value unchanged
/// when `delta_balance` is added to `balance`.
double reference_shift(double reference, double balance, double delta_balance);

/// Shares to mint (positive) or burn (negative) for a proportional deposit or
/// withdrawal of `delta_balance` against `balance`.
double proportional_shares(double delta_balance, double balance, double supply);

}  // namespace xamm
