#pragma once

#include <cstddef>

#include "xamm/curve.hpp"

// Brute-force references for the closed forms in amm_math. Everything here is
// built on price() alone: no antiderivative, no invert_out.
namespace xamm::oracle {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

inline constexpr int kMaxSubdivisionDepth = 60;

/// Adaptive quadrature of price(curve, .) over [a, b] to relative tolerance
/// `tol`. Each interval is compared against its two halves (5-point
/// Gauss-Legendre on both levels) and split until they agree.
QuadratureResult quad_value(const Curve& curve, double a, double b, double tol);

/// Bisection on delta -> quad_value(j - delta, j) until the bracket on delta
/// is narrower than `tol`.
double brute_invert(const Curve& curve, double balance, double v, double tol);

/// Uniswap-style x*y=k output for an input of `amount_in`.
double constant_product_out(double balance_in, double balance_out, double amount_in);

}  // namespace xamm::oracle
