#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pexponent.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "subset.hpp"
#include "tensor.hpp"

namespace anchova {

/// L_p([0,1]) norm of a univariate polynomial. Even integer p is exact
/// (expand h^p); other finite p splits at the roots of h and integrates each
/// sign-constant piece by adaptive Gauss-Legendre; p = inf evaluates |h| at
/// the endpoints and the critical points.
inline double lp_norm_1d(const Poly1& h, PExponent p) {
    if (h.is_zero()) return 0.0;
    if (p.is_infinite()) return sup01_abs(h);
    return std::pow(integral01_abs_pow(h, p.value()), p.inverse());
}

enum class NormPath {
    Auto,            // exact single-term / even-p routes when available
    ForceQuadrature  // always take the grid route (used for cross-checks)
};

namespace detail {

inline double pow_abs(double v, double p) {
    const double a = std::abs(v);
    if (p == 1.0) return a;
    if (p == 2.0) return v * v;
    if (p == 3.0) return a * v * v;
    if (p == std::round(p) && p <= 8.0) {
        double acc = 1.0;
        for (int k = 0; k < static_cast<int>(p); ++k) acc *= a;
        return acc;
    }
    return std::pow(a, p);
}

// Node-count ramp for the tensorized rule, sized so a full ramp stays around
// ~1e7 node tuples. Smooth integrands converge well before the end; kinked
// ones (|g|^p across a sign change) bottom out near the last level, which
// the callers' tolerances account for.
inline std::vector<int> tensor_ramp(std::size_t n_axes) {
    switch (n_axes) {
        case 1:
        case 2: return {8, 12, 16, 24, 32, 48, 64, 96};
        case 3: return {8, 12, 16, 24, 32, 48};
        case 4: return {8, 12, 16, 24, 32};
        case 5: return {6, 8, 12, 16};
        case 6: return {6, 8, 10, 12};
        case 7: return {4, 6, 8};
        default: return {4, 6, 8};
    }
}

// Per-term values of the factor on `axis` at the given nodes (1 when the
// term has no factor there).
inline std::vector<std::vector<double>> factor_values_at(const TensorFunction& g,
                                                         const std::vector<int>& axes,
                                                         const std::vector<double>& nodes) {
    std::vector<std::vector<double>> fv(g.term_count() * axes.size());
    for (std::size_t t = 0; t < g.term_count(); ++t) {
        for (std::size_t a = 0; a < axes.size(); ++a) {
            std::vector<double>& vals = fv[t * axes.size() + a];
            vals.resize(nodes.size(), 1.0);
            if (const Poly1* h = g.terms()[t].factor_on(axes[a]))
                for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = (*h)(nodes[i]);
        }
    }
    return fv;
}

// sum over node tuples of w * |g(x)|^p on [0,1]^axes with an n-point
// Gauss-Legendre rule per axis.
inline double tensor_gl_abs_pow(const TensorFunction& g, const std::vector<int>& axes, double p,
                                int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const std::size_t m = g.term_count();
    const std::size_t k = axes.size();
    const auto fv = factor_values_at(g, axes, rule.nodes);

    // parts[a * m + t]: partial product for term t after fixing axes < a
    std::vector<double> parts((k + 1) * m);
    for (std::size_t t = 0; t < m; ++t) parts[t] = g.terms()[t].coefficient();

    double acc = 0.0;
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> wpart(k + 1);
    wpart[0] = 1.0;
    std::size_t a = 0;
    while (true) {
        if (a == k) {
            double val = 0.0;
            for (std::size_t t = 0; t < m; ++t) val += parts[k * m + t];
            acc += wpart[k] * pow_abs(val, p);
            // advance odometer
            while (a > 0 && idx[a - 1] + 1 == rule.nodes.size()) idx[--a] = 0;
            if (a == 0) break;
            ++idx[a - 1];
            --a;
        }
        const std::size_t i = idx[a];
        for (std::size_t t = 0; t < m; ++t)
            parts[(a + 1) * m + t] = parts[a * m + t] * fv[t * k + a][i];
        wpart[a + 1] = wpart[a] * rule.weights[i];
        ++a;
    }
    return acc;
}

struct GridMaximum {
    double value = -1.0;
    std::vector<double> point;
};

// Dense scan of |g| on a uniform grid, keeping the best few well-separated
// points as starts for local refinement.
inline std::vector<GridMaximum> grid_scan_max(const TensorFunction& g,
                                              const std::vector<int>& axes, int points_per_axis,
                                              std::size_t keep) {
    std::vector<double> nodes(static_cast<std::size_t>(points_per_axis));
    for (int i = 0; i < points_per_axis; ++i)
        nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points_per_axis - 1);
    const std::size_t m = g.term_count();
    const std::size_t k = axes.size();
    const auto fv = factor_values_at(g, axes, nodes);
    const double min_sep = 1.5 / (points_per_axis - 1);

    std::vector<GridMaximum> best;
    std::vector<double> parts((k + 1) * m);
    for (std::size_t t = 0; t < m; ++t) parts[t] = g.terms()[t].coefficient();
    std::vector<std::size_t> idx(k, 0);
    std::size_t a = 0;
    while (true) {
        if (a == k) {
            double val = 0.0;
            for (std::size_t t = 0; t < m; ++t) val += parts[k * m + t];
            val = std::abs(val);
            // insert into the separated top list
            std::vector<double> pt(k);
            for (std::size_t b = 0; b < k; ++b) pt[b] = nodes[idx[b]];
            bool absorbed = false;
            for (GridMaximum& gm : best) {
                double sep = 0.0;
                for (std::size_t b = 0; b < k; ++b)
                    sep = std::max(sep, std::abs(gm.point[b] - pt[b]));
                if (sep < min_sep) {
                    if (val > gm.value) {
                        gm.value = val;
                        gm.point = pt;
                    }
                    absorbed = true;
                    break;
                }
            }
            if (!absorbed) {
                if (best.size() < keep) {
                    best.push_back({val, std::move(pt)});
                } else {
                    auto worst = std::min_element(
                        best.begin(), best.end(),
                        [](const GridMaximum& x, const GridMaximum& y) { return x.value < y.value; });
                    if (val > worst->value) *worst = {val, std::move(pt)};
                }
            }
            while (a > 0 && idx[a - 1] + 1 == nodes.size()) idx[--a] = 0;
            if (a == 0) break;
            ++idx[a - 1];
            --a;
        } else {
            const std::size_t i = idx[a];
            for (std::size_t t = 0; t < m; ++t)
                parts[(a + 1) * m + t] = parts[a * m + t] * fv[t * k + a][i];
            ++a;
        }
    }
    std::sort(best.begin(), best.end(),
              [](const GridMaximum& x, const GridMaximum& y) { return x.value > y.value; });
    return best;
}

struct Sup1d {
    double value;
    double argmax;
};

inline Sup1d sup01_abs_argmax(const Poly1& h) {
    Sup1d best{std::abs(h(0.0)), 0.0};
    const double at1 = std::abs(h(1.0));
    if (at1 > best.value) best = {at1, 1.0};
    for (double r : isolate_roots(h.derivative(), 0.0, 1.0)) {
        const double v = std::abs(h(r));
        if (v > best.value) best = {v, r};
    }
    return best;
}

// Coordinate ascent from a grid start: each axis step maximizes the exact
// univariate restriction of |g|, so every sweep is nondecreasing.
inline double refine_max(const TensorFunction& g, const std::vector<int>& axes,
                         std::vector<double> x) {
    const std::size_t k = axes.size();
    double best = -1.0;
    for (int sweep = 0; sweep < 40; ++sweep) {
        double before = best;
        for (std::size_t a = 0; a < k; ++a) {
            Poly1 section;  // g restricted to the line through x along axes[a]
            for (const TensorTerm& t : g.terms()) {
                double scalar = t.coefficient();
                for (std::size_t b = 0; b < k; ++b)
                    if (b != a)
                        if (const Poly1* h = t.factor_on(axes[b])) scalar *= (*h)(x[b]);
                if (const Poly1* h = t.factor_on(axes[a]))
                    section += scalar * (*h);
                else
                    section += Poly1::constant(scalar);
            }
            const Sup1d s = sup01_abs_argmax(section);
            x[a] = s.argmax;
            best = s.value;
        }
        if (best <= before * (1.0 + 1e-13)) break;
    }
    return best;
}

}  // namespace detail

/// L_p([0,1]^u) norm of a function depending only on the coordinates in u.
///
/// Routes: |u| = 0 -> |constant|. Single term -> |coeff| times the product
/// of univariate factor norms (the norm factorizes over coordinates). Even
/// integer p -> exact expansion of g^p. Other finite p -> tensorized
/// Gauss-Legendre, node count ramped per axis until two refinements agree to
/// 1e-10 relative (|u| <= 8). p = inf -> 33-points-per-axis grid scan plus
/// exact coordinate-ascent refinement (|u| <= 6); a heuristic lower bound.
inline double lp_norm_subset(const TensorFunction& g_in, const CoordSubset& u, PExponent p,
                             NormPath path = NormPath::Auto) {
    if (u.dim() != g_in.dim()) throw std::invalid_argument("lp_norm_subset: dim mismatch");
    const TensorFunction g = g_in.combined(0.0);
    if (g.term_count() == 0) return 0.0;
    if (!g.monomial_support().subset_of(u))
        throw std::invalid_argument(
            "lp_norm_subset: function is not constant in the coordinates outside " +
            u.to_string());

    if (u.empty()) return std::abs(g.value_at_origin());

    if (path == NormPath::Auto) {
        if (g.term_count() == 1) {
            const TensorTerm& t = g.terms()[0];
            double norm = std::abs(t.coefficient());
            for (const auto& [j, h] : t.factors()) norm *= lp_norm_1d(h, p);
            return norm;
        }
        if (p.is_finite() && p.is_even_integer() && p.value() <= 16.0) {
            const TensorFunction power = g.pow(static_cast<unsigned>(p.value())).combined(0.0);
            double integral = 0.0;
            for (const TensorTerm& t : power.terms()) {
                double v = t.coefficient();
                for (const auto& [j, h] : t.factors()) v *= h.integral01();
                integral += v;
            }
            return std::pow(std::max(integral, 0.0), p.inverse());
        }
    }

    const std::vector<int> axes = u.indices();

    if (p.is_finite()) {
        if (u.cardinality() > 8)
            throw capacity_error("multi-term L_p quadrature requires |u| <= 8, got |u| = " +
                                 std::to_string(u.cardinality()));
        const double pv = p.value();
        double prev = -1.0;
        double cur = 0.0;
        for (int n : detail::tensor_ramp(axes.size())) {
            cur = detail::tensor_gl_abs_pow(g, axes, pv, n);
            if (prev >= 0.0 && std::abs(cur - prev) <= 1e-10 * std::max(std::abs(cur), 1e-30))
                break;
            prev = cur;
        }
        return std::pow(std::max(cur, 0.0), 1.0 / pv);
    }

    if (u.cardinality() > 6)
        throw capacity_error("sup-norm grid search requires |u| <= 6, got |u| = " +
                             std::to_string(u.cardinality()));
    double best = 0.0;
    for (const detail::GridMaximum& start : detail::grid_scan_max(g, axes, 33, 5))
        best = std::max(best, detail::refine_max(g, axes, start.point));
    return best;
}

}  // namespace anchova
