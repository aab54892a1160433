#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "norms.hpp"
#include "pexponent.hpp"
#include "subset.hpp"
#include "tensor.hpp"
#include "weights.hpp"

namespace anchova {

/// The 2^d-tuple (g_u) of component functions, g_u depending only on the
/// coordinates in u. Only nonzero components are stored; iteration is in
/// ascending bitmask order. Immutable use after filling.
class ComponentTuple {
public:
    explicit ComponentTuple(int dim) : dim_(dim) {
        if (dim < 0 || dim > 20)
            throw capacity_error("ComponentTuple: dim must be in [0, 20] (2^d components)");
    }

    int dim() const noexcept { return dim_; }

    /// Stores g as the component on u; a g whose terms cancel exactly clears
    /// the slot. Components that are merely tiny are kept: small gamma_u
    /// rescale small components back to order one, so an absolute drop
    /// threshold here would corrupt weighted norms.
    /// g must be constant in every coordinate outside u.
    void set(const CoordSubset& u, TensorFunction g) {
        if (u.dim() != dim_ || g.dim() != dim_)
            throw std::invalid_argument("ComponentTuple::set: dim mismatch");
        g = g.combined(0.0);
        if (g.term_count() == 0) {
            components_.erase(u.bits());
            return;
        }
        if (!g.monomial_support().subset_of(u))
            throw std::invalid_argument("ComponentTuple::set: component on " + u.to_string() +
                                        " depends on coordinates outside its subset");
        components_[u.bits()] = std::move(g);
    }

    /// Component on u; the zero function if the slot is empty.
    TensorFunction get(const CoordSubset& u) const {
        auto it = components_.find(u.bits());
        return it != components_.end() ? it->second : TensorFunction(dim_);
    }

    const TensorFunction* find(const CoordSubset& u) const {
        auto it = components_.find(u.bits());
        return it != components_.end() ? &it->second : nullptr;
    }

    const std::map<std::uint64_t, TensorFunction>& components() const noexcept {
        return components_;
    }

    std::size_t nonzero_count() const noexcept { return components_.size(); }

private:
    int dim_;
    std::map<std::uint64_t, TensorFunction> components_;
};

/// Anchored decomposition map: g_u = f^{(u)} with the coordinates outside u
/// anchored at 0; g_{} is f(0). Exact on tensor polynomials.
inline ComponentTuple anchored_components(const TensorFunction& f) {
    ComponentTuple out(f.dim());
    const std::uint64_t n = std::uint64_t{1} << f.dim();
    for (std::uint64_t u = 0; u < n; ++u) {
        const CoordSubset su(u, f.dim());
        out.set(su, restrict_to(mixed_derivative(f, su), su, RestrictMode::AnchorAtZero));
    }
    return out;
}

/// ANOVA decomposition map: g_u = integral of f^{(u)} over the coordinates
/// outside u; g_{} is the mean of f over the cube. Exact.
inline ComponentTuple anova_components(const TensorFunction& f) {
    ComponentTuple out(f.dim());
    const std::uint64_t n = std::uint64_t{1} << f.dim();
    for (std::uint64_t u = 0; u < n; ++u) {
        const CoordSubset su(u, f.dim());
        out.set(su, restrict_to(mixed_derivative(f, su), su, RestrictMode::IntegrateOut));
    }
    return out;
}

/// Inverse of the anchored map: f = sum_u int_{[0,x]^u} g_u. Per coordinate
/// j in u a factor h is replaced by its antiderivative from 0 (a missing
/// factor, the constant 1, becomes x_j). Exact polynomial output.
inline TensorFunction anchored_reconstruct(const ComponentTuple& g) {
    TensorFunction f(g.dim());
    for (const auto& [bits, comp] : g.components()) {
        const CoordSubset u(bits, g.dim());
        for (const TensorTerm& t : comp.terms()) {
            std::vector<std::pair<int, Poly1>> fs;
            for (int j : u.indices()) {
                const Poly1* h = t.factor_on(j);
                fs.emplace_back(j, h ? h->antiderivative() : Poly1::identity());
            }
            f.push_term(TensorTerm(t.coefficient(), std::move(fs)));
        }
    }
    return f;
}

namespace detail {

// The univariate ANOVA reconstruction kernel
//   K[h](x) = int_0^1 t h(t) dt - (H(1) - H(x)),   H' = h, H(0) = 0.
// K[h] has zero mean on [0,1] and d/dx K[h] = h, which is what makes the
// reconstruction invert the ANOVA map. For h = 1 it is x - 1/2.
inline Poly1 anova_kernel(const Poly1& h) {
    const Poly1 H = h.antiderivative();
    const double moment = (Poly1::identity() * h).integral01();
    return H + Poly1::constant(moment - H(1.0));
}

}  // namespace detail

/// Inverse of the ANOVA map: per coordinate j in u each factor is replaced
/// by its mean-zero kernel image (a missing factor becomes x_j - 1/2).
/// Exact polynomial output.
inline TensorFunction anova_reconstruct(const ComponentTuple& g) {
    static const Poly1 one = Poly1::constant(1.0);
    TensorFunction f(g.dim());
    for (const auto& [bits, comp] : g.components()) {
        const CoordSubset u(bits, g.dim());
        for (const TensorTerm& t : comp.terms()) {
            std::vector<std::pair<int, Poly1>> fs;
            for (int j : u.indices()) {
                const Poly1* h = t.factor_on(j);
                fs.emplace_back(j, detail::anova_kernel(h ? *h : one));
            }
            f.push_term(TensorTerm(t.coefficient(), std::move(fs)));
        }
    }
    return f;
}

namespace detail {

// (sum_u (|g_u|_p / gamma_u)^p)^(1/p), factored around the largest term so
// extreme weights do not overflow; max form at p = inf. A zero-weight subset
// must carry a zero component, where zero means every combined coefficient
// is below 1e-12: exact-zero tests are meaningless after floating arithmetic.
inline double weighted_lp_combination(const ComponentTuple& comps, const WeightSchedule& w,
                                      PExponent p, const char* which) {
    std::vector<double> scaled;
    scaled.reserve(comps.nonzero_count());
    for (const auto& [bits, g] : comps.components()) {
        const CoordSubset u(bits, comps.dim());
        const double gamma = w.weight(u);
        if (gamma <= 0.0) {
            if (g.is_negligible(1e-12)) continue;
            throw membership_error(std::string(which) + " component on " + u.to_string() +
                                       " is nonzero but gamma" + u.to_string() +
                                       " = 0: function lies outside the weighted subspace",
                                   bits);
        }
        scaled.push_back(lp_norm_subset(g, u, p) / gamma);
    }
    if (scaled.empty()) return 0.0;
    double peak = 0.0;
    for (double t : scaled) peak = std::max(peak, t);
    if (p.is_infinite() || peak == 0.0) return peak;
    double sum = 0.0;
    for (double t : scaled) sum += std::pow(t / peak, p.value());
    return peak * std::pow(sum, p.inverse());
}

}  // namespace detail

/// Weighted anchored norm (sum_u gamma_u^-p |g_u|_{L_p([0,1]^u)}^p)^(1/p),
/// max over u at p = inf. Zero-weight subsets contribute nothing, and a
/// nonzero component there raises membership_error.
inline double anchored_norm(const TensorFunction& f, const WeightSchedule& w, PExponent p) {
    if (w.dim() != f.dim()) throw std::invalid_argument("anchored_norm: dim mismatch");
    return detail::weighted_lp_combination(anchored_components(f), w, p, "anchored");
}

/// Weighted ANOVA norm; same combination over the ANOVA components.
inline double anova_norm(const TensorFunction& f, const WeightSchedule& w, PExponent p) {
    if (w.dim() != f.dim()) throw std::invalid_argument("anova_norm: dim mismatch");
    return detail::weighted_lp_combination(anova_components(f), w, p, "anova");
}

}  // namespace anchova
