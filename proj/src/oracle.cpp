#include "xamm/oracle.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "xamm/amm_math.hpp"
#include "xamm/errors.hpp"

namespace xamm::oracle {
namespace {

constexpr std::array<double, 5> kNodes = {
    0.0,
    0.538469310105683091036314420700208805,
    -0.538469310105683091036314420700208805,
    0.906179845938663992797626878299392965,
    -0.906179845938663992797626878299392965,
};
constexpr std::array<double, 5> kWeights = {
    0.568888888888888888888888888888888889,
    0.478628670499366468041982127647931004,
    0.478628670499366468041982127647931004,
    0.236926885056189087514264040719917363,
    0.236926885056189087514264040719917363,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Integrator {
    const Curve& curve;
    std::size_t evaluations = 0;
    double error = 0.0;
    double magnitude = 0.0;

    double gauss5(double a, double b) {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t k = 0; k < kNodes.size(); ++k) {
            sum += kWeights[k] * price(curve, mid + half * kNodes[k]);
        }
        evaluations += kNodes.size();
        return half * sum;
    }

    double refine(double a, double b, double whole, double abs_tol, int depth) {
        const double m = 0.5 * (a + b);
        const double left = gauss5(a, m);
        const double right = gauss5(m, b);
        const double halves = left + right;
        const double diff = std::fabs(halves - whole);
        if (diff <= abs_tol || diff <= 64.0 * kEps * std::fabs(halves) || m <= a || m >= b) {
            error += diff;
            magnitude += std::fabs(halves);
            return halves;
        }
        if (depth >= kMaxSubdivisionDepth) {
            throw NoConvergence("quadrature exceeded subdivision depth " +
                                std::to_string(kMaxSubdivisionDepth));
        }
        return refine(a, m, left, 0.5 * abs_tol, depth + 1) +
               refine(m, b, right, 0.5 * abs_tol, depth + 1);
    }
};

}  // namespace

QuadratureResult quad_value(const Curve& curve, double a, double b, double tol) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("quadrature bounds must be positive");
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (a == b) return {};

    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::fmin(a, b);
    const double hi = std::fmax(a, b);

    Integrator integ{curve};
    const double whole = integ.gauss5(lo, hi);
    const double abs_tol = tol * std::fabs(whole);
    const double value = integ.refine(lo, hi, whole, abs_tol, 0);

    QuadratureResult out;
    out.value = sign * value;
    // Summation roundoff is not covered by the leaf differences.
    out.error_estimate = integ.error + 16.0 * kEps * integ.magnitude;
    out.evaluations = integ.evaluations;
    return out;
}

double brute_invert(const Curve& curve, double balance, double v, double tol) {
    if (!(balance > 0.0)) throw DomainError("balance must be positive");
    if (!(v >= 0.0)) throw DomainError("value must be non-negative");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (v == 0.0) return 0.0;

    constexpr double kQuadTol = 1e-13;
    auto withdrawn_value = [&](double delta) {
        return quad_value(curve, balance - delta, balance, kQuadTol).value;
    };

    double lo = 0.0;
    double hi = 0.5 * balance;
    while (withdrawn_value(hi) < v) {
        lo = hi;
        hi = balance - 0.5 * (balance - hi);
        if (balance - hi < 1e-300 || hi == lo) {
            throw NoConvergence("value exceeds what the balance can supply");
        }
    }
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (withdrawn_value(mid) < v) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo > tol) {
        throw NoConvergence("bracket did not shrink below tolerance");
    }
    return 0.5 * (lo + hi);
}

double constant_product_out(double balance_in, double balance_out, double amount_in) {
    return balance_out * amount_in / (balance_in + amount_in);
}

}  // namespace xamm::oracle
