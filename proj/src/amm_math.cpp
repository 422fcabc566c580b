#include "xamm/amm_math.hpp"

#include <cmath>
#include <string>

#include "xamm/errors.hpp"

namespace xamm {
namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(x));
    }
}

// ln(b / a) without losing the relative precision of b - a.
double log_ratio(double a, double b) {
    return std::log1p((b - a) / a);
}

// Bell factor A^2 / ((x - s)^2 + A^2).
double bell(const Curve& c, double x) {
    const double d = x - c.x_stable;
    const double a2 = c.amplification * c.amplification;
    return a2 / (d * d + a2);
}

}  // namespace

double price(const Curve& curve, double x) {
    require_positive(x, "balance");
    if (curve.kind == CurveKind::Volatile) {
        return curve.weight / x;
    }
    const double theta = bell(curve, x);
    return (curve.weight / x) * (1.0 - theta) + (curve.weight / curve.x_stable) * theta;
}

double antiderivative(const Curve& curve, double x) {
    require_positive(x, "balance");
    const double w = curve.weight;
    if (curve.kind == CurveKind::Volatile) {
        return w * std::log(x);
    }
    const double s = curve.x_stable;
    const double A = curve.amplification;
    const double t = std::atan((s - x) / A);
    const double lx = std::log(x);
    return w * lx - (w * A / s) * t +
           w * A * (-2.0 * A * lx + 2.0 * s * t + A * std::log(A * A + (s - x) * (s - x))) /
               (2.0 * s * s + 2.0 * A * A);
}

Value value_between(const Curve& curve, double x_from, double x_to) {
    require_positive(x_from, "lower bound");
    require_positive(x_to, "upper bound");
    if (x_from == x_to) return 0.0;

    const double w = curve.weight;
    if (curve.kind == CurveKind::Volatile) {
        return w * log_ratio(x_from, x_to);
    }

    // Same terms as antiderivative(), regrouped:
    //   w s^2/D * ln x  -  w A^3/(s D) * atan((s-x)/A)  +  w A^2/(2D) * ln(A^2 + (s-x)^2)
    // with D = s^2 + A^2.
    const double s = curve.x_stable;
    const double A = curve.amplification;
    const double D = s * s + A * A;

    const double log_term = log_ratio(x_from, x_to);

    const double u = (s - x_to) / A;
    const double v = (s - x_from) / A;
    const double atan_term = std::atan2((x_from - x_to) / A, 1.0 + u * v);

    const double q_from = A * A + (s - x_from) * (s - x_from);
    const double dq = (x_from - x_to) * (2.0 * s - x_from - x_to);
    const double q_term = std::log1p(dq / q_from);

    return w * (s * s / D) * log_term - w * (A * A * A / (s * D)) * atan_term +
           w * (A * A / (2.0 * D)) * q_term;
}

Inversion invert_out_detailed(const Curve& curve, double balance, Value v, double tol,
                              double dust_floor) {
    require_positive(balance, "balance");
    require_positive(tol, "tolerance");
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("inversion value must be non-negative and finite");
    }
    if (v == 0.0) return Inversion{0.0, balance, 0, 0.0};
    if (balance <= dust_floor) {
        throw InsufficientLiquidity("balance already at dust floor");
    }

    Inversion out;
    if (curve.kind == CurveKind::Volatile) {
        out.remaining = balance * std::exp(-v / curve.weight);
        if (out.remaining < dust_floor) {
            throw InsufficientLiquidity("output would drain balance below dust floor");
        }
        out.amount = -balance * std::expm1(-v / curve.weight);
        out.residual = std::fabs(value_between(curve, out.remaining, balance) - v);
        return out;
    }

    const double drainable = value_between(curve, dust_floor, balance);
    if (v > drainable) {
        throw InsufficientLiquidity("value exceeds drainable value of the balance");
    }

    // value_between(r, balance) is strictly decreasing in the remaining balance r.
    double lo = dust_floor;
    double hi = balance;
    for (int it = 1; it <= kBisectionBudget; ++it) {
        double mid = std::sqrt(lo) * std::sqrt(hi);
        if (!(mid > lo && mid < hi)) mid = lo + 0.5 * (hi - lo);
        const double err = value_between(curve, mid, balance) - v;
        out.iterations = it;
        out.remaining = mid;
        out.residual = std::fabs(err);
        if (out.residual <= tol) {
            // One Newton step on the bracketed root sharpens the payout well below tol.
            const double polished = mid + err / price(curve, mid);
            if (polished > lo && polished < hi) {
                const double perr = std::fabs(value_between(curve, polished, balance) - v);
                if (perr < out.residual) {
                    out.remaining = polished;
                    out.residual = perr;
                }
            }
            out.amount = balance - out.remaining;
            return out;
        }
        if (mid <= lo || mid >= hi) break;
        if (err > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw NoConvergence("bisection did not reach value tolerance " + std::to_string(tol) +
                        " (residual " + std::to_string(out.residual) + ")");
}

double invert_out(const Curve& curve, double balance, Value v, double tol, double dust_floor) {
    return invert_out_detailed(curve, balance, v, tol, dust_floor).amount;
}

bool verify_out(const Curve& curve, double balance, Value v, double claimed_out, double tol,
                double dust_floor) {
    require_positive(balance, "balance");
    if (!(claimed_out >= 0.0) || !std::isfinite(claimed_out)) return false;
    if (balance - claimed_out < dust_floor) return false;
    if (claimed_out == 0.0) return std::fabs(v) <= tol;
    return std::fabs(value_between(curve, balance - claimed_out, balance) - v) <= tol;
}

double atomic_swap_out(const Curve& curve_in, double balance_in, double amount_in,
                       const Curve& curve_out, double balance_out, double tol,
                       double dust_floor) {
    require_positive(amount_in, "swap amount");
    const Value v = value_between(curve_in, balance_in, balance_in + amount_in);
    return invert_out(curve_out, balance_out, v, tol, dust_floor);
}

double initial_shares(std::span<const double> balances) {
    if (balances.empty()) throw DomainError("initial_shares needs at least one balance");
    for (double b : balances) require_positive(b, "initial balance");
    if (balances.size() == 1) return balances.front();
    if (balances.size() == 2) return std::sqrt(balances[0] * balances[1]);
    double log_sum = 0.0;
    for (double b : balances) log_sum += std::log(b);
    return std::exp(log_sum / static_cast<double>(balances.size()));
}

double reference_shift(double reference, double balance, double delta_balance) {
    require_positive(reference, "reference");
    require_positive(balance, "balance");
    if (!(balance + delta_balance > 0.0)) {
        throw DomainError("shifted balance would be non-positive");
    }
    return reference * delta_balance / balance;
}

double proportional_shares(double delta_balance, double balance, double supply) {
    require_positive(balance, "balance");
    require_positive(supply, "share supply");
    if (!(delta_balance > -balance)) {
        throw DomainError("burn would exceed the share supply");
    }
    return delta_balance / balance * supply;
}

}  // namespace xamm
