#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "poly.hpp"

namespace anchova {

/// Gauss-Legendre rule mapped to [0,1]; exact for polynomials of degree
/// 2n - 1.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Newton iteration on the Legendre recurrence; nodes accurate to ~1e-15.
inline GaussLegendreRule build_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace detail

inline const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1 || n > 4096) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::build_gauss_legendre(n)).first;
    return it->second;
}

template <typename F>
double gauss_legendre_integrate(F&& f, double a, double b, int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double len = b - a;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(a + len * rule.nodes[i]);
    return acc * len;
}

/// Adaptive bisection on a 25-point base rule. Accepts a panel when the
/// half-panel sum agrees with the whole-panel estimate to the local absolute
/// tolerance.
template <typename F>
double adaptive_gauss_legendre(F&& f, double a, double b, double rel_tol, int max_depth = 40) {
    constexpr int kOrder = 25;
    const double whole = gauss_legendre_integrate(f, a, b, kOrder);
    const double tol0 = rel_tol * std::max(std::abs(whole), 1e-30);

    struct Frame {
        double a, b, estimate, tol;
        int depth;
    };
    double total = 0.0;
    std::vector<Frame> stack{{a, b, whole, tol0, 0}};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        const double left = gauss_legendre_integrate(f, fr.a, m, kOrder);
        const double right = gauss_legendre_integrate(f, m, fr.b, kOrder);
        if (std::abs(left + right - fr.estimate) <= fr.tol || fr.depth >= max_depth) {
            total += left + right;
            continue;
        }
        stack.push_back({fr.a, m, left, 0.5 * fr.tol, fr.depth + 1});
        stack.push_back({m, fr.b, right, 0.5 * fr.tol, fr.depth + 1});
    }
    return total;
}

/// Integral over [0,1] of |h(t)|^p for finite p >= 1.
///
/// Even integer p: exact, expand h^p and integrate coefficients. Otherwise:
/// split (0,1) at the real roots of h so the integrand is sign-constant per
/// piece, then adaptive Gauss-Legendre per piece to relative tolerance 1e-12
/// (exact in effect for odd integer p, where the piece integrand is +-h^p).
inline double integral01_abs_pow(const Poly1& h, double p) {
    if (h.is_zero()) return 0.0;
    if (!(p >= 1.0)) throw std::invalid_argument("integral01_abs_pow: p must be >= 1");

    const double pr = std::round(p);
    if (p == pr && std::fmod(pr, 2.0) == 0.0 && pr <= 64.0)
        return h.pow(static_cast<unsigned>(pr)).integral01();

    std::vector<double> cuts = isolate_roots(h, 0.0, 1.0);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);

    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (!(b - a > 0.0)) continue;
        acc += adaptive_gauss_legendre(
            [&h, p](double t) { return std::pow(std::abs(h(t)), p); }, a, b, 1e-12);
    }
    return acc;
}

/// sup over [0,1] of |h|: candidates are the endpoints and the critical
/// points of h in (0,1).
inline double sup01_abs(const Poly1& h) {
    if (h.is_zero()) return 0.0;
    double best = std::max(std::abs(h(0.0)), std::abs(h(1.0)));
    for (double r : isolate_roots(h.derivative(), 0.0, 1.0))
        best = std::max(best, std::abs(h(r)));
    return best;
}

}  // namespace anchova
