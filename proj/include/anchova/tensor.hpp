#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "subset.hpp"

namespace anchova {

/// One elementary tensor c * prod_j h_j(x_j). Factors are kept sorted by
/// coordinate; a coordinate without a factor carries the constant 1, and
/// constant factors are folded into the coefficient on construction.
class TensorTerm {
public:
    TensorTerm() = default;

    TensorTerm(double coefficient, std::vector<std::pair<int, Poly1>> factors)
        : coeff_(coefficient) {
        std::sort(factors.begin(), factors.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [j, h] : factors) {
            if (h.is_zero()) {
                coeff_ = 0.0;
                break;
            }
            if (h.is_constant()) {
                coeff_ *= h.coeff(0);
                continue;
            }
            if (!factors_.empty() && factors_.back().first == j)
                throw std::invalid_argument("TensorTerm: duplicate factor for coordinate " +
                                            std::to_string(j + 1));
            factors_.emplace_back(j, std::move(h));
        }
        if (coeff_ == 0.0) factors_.clear();
    }

    double coefficient() const noexcept { return coeff_; }
    const std::vector<std::pair<int, Poly1>>& factors() const noexcept { return factors_; }
    bool is_dead() const noexcept { return coeff_ == 0.0; }

    /// Bitmask of coordinates with a non-constant factor.
    std::uint64_t support_bits() const noexcept {
        std::uint64_t s = 0;
        for (const auto& [j, h] : factors_) s |= std::uint64_t{1} << j;
        return s;
    }

    const Poly1* factor_on(int j) const noexcept {
        for (const auto& [k, h] : factors_)
            if (k == j) return &h;
        return nullptr;
    }

    double eval(std::span<const double> x) const {
        double v = coeff_;
        for (const auto& [j, h] : factors_) v *= h(x[static_cast<std::size_t>(j)]);
        return v;
    }

private:
    double coeff_ = 0.0;
    std::vector<std::pair<int, Poly1>> factors_;
};

/// Finite sum of elementary tensor-product polynomials on [0,1]^dim.
/// Two functions are equal iff they evaluate equally; the stored term list is
/// one representation among many.
class TensorFunction {
public:
    TensorFunction() = default;

    explicit TensorFunction(int dim) : dim_(dim) { check_dim(dim); }

    TensorFunction(int dim, std::vector<TensorTerm> terms) : dim_(dim) {
        check_dim(dim);
        for (TensorTerm& t : terms) push_term(std::move(t));
    }

    static TensorFunction constant(int dim, double v) {
        TensorFunction f(dim);
        f.push_term(TensorTerm(v, {}));
        return f;
    }

    int dim() const noexcept { return dim_; }
    const std::vector<TensorTerm>& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }

    void push_term(TensorTerm t) {
        if (t.is_dead()) return;
        if (dim_ < 64 && (t.support_bits() >> dim_) != 0)
            throw std::invalid_argument("TensorFunction: term touches coordinate >= dim");
        terms_.push_back(std::move(t));
    }

    double operator()(std::span<const double> x) const {
        if (x.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("TensorFunction: point has wrong dimension");
        double acc = 0.0;
        for (const TensorTerm& t : terms_) acc += t.eval(x);
        return acc;
    }

    double operator()(const std::vector<double>& x) const {
        return (*this)(std::span<const double>(x));
    }

    double value_at_origin() const {
        const std::vector<double> z(static_cast<std::size_t>(dim_), 0.0);
        return (*this)(z);
    }

    /// Union of the term supports. An upper bound for the true support;
    /// cancellation across terms is invisible here (see monomial_support).
    CoordSubset support() const {
        std::uint64_t s = 0;
        for (const TensorTerm& t : terms_) s |= t.support_bits();
        return CoordSubset(s, dim_);
    }

    TensorFunction& operator+=(const TensorFunction& o) {
        if (o.dim_ != dim_) throw std::invalid_argument("TensorFunction: dim mismatch in +");
        for (const TensorTerm& t : o.terms_) push_term(t);
        return *this;
    }

    TensorFunction& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        std::vector<TensorTerm> scaled;
        scaled.reserve(terms_.size());
        for (const TensorTerm& t : terms_) {
            std::vector<std::pair<int, Poly1>> fs(t.factors().begin(), t.factors().end());
            scaled.emplace_back(t.coefficient() * s, std::move(fs));
        }
        terms_ = std::move(scaled);
        return *this;
    }

    friend TensorFunction operator+(TensorFunction a, const TensorFunction& b) { return a += b; }
    friend TensorFunction operator*(TensorFunction a, double s) { return a *= s; }
    friend TensorFunction operator*(double s, TensorFunction a) { return a *= s; }

    friend TensorFunction operator*(const TensorFunction& a, const TensorFunction& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("TensorFunction: dim mismatch in *");
        if (a.terms_.size() * b.terms_.size() > 2'000'000)
            throw capacity_error("TensorFunction product exceeds 2e6 terms");
        TensorFunction out(a.dim_);
        out.terms_.reserve(a.terms_.size() * b.terms_.size());
        for (const TensorTerm& s : a.terms_) {
            for (const TensorTerm& t : b.terms_) {
                std::vector<std::pair<int, Poly1>> fs;
                fs.reserve(s.factors().size() + t.factors().size());
                for (const auto& [j, h] : s.factors()) {
                    if (const Poly1* g = t.factor_on(j))
                        fs.emplace_back(j, h * (*g));
                    else
                        fs.emplace_back(j, h);
                }
                for (const auto& [j, g] : t.factors())
                    if (!s.factor_on(j)) fs.emplace_back(j, g);
                out.push_term(TensorTerm(s.coefficient() * t.coefficient(), std::move(fs)));
            }
        }
        return out;
    }

    TensorFunction pow(unsigned n) const {
        TensorFunction acc = TensorFunction::constant(dim_, 1.0);
        for (unsigned k = 0; k < n; ++k) acc = acc * (*this);
        return acc;
    }

    /// Merges terms whose factor maps coincide coefficient-for-coefficient
    /// and drops terms with |coefficient| <= tol.
    TensorFunction combined(double tol = 0.0) const {
        std::vector<TensorTerm> sorted = terms_;
        auto factor_less = [](const TensorTerm& a, const TensorTerm& b) {
            const auto& fa = a.factors();
            const auto& fb = b.factors();
            if (fa.size() != fb.size()) return fa.size() < fb.size();
            for (std::size_t i = 0; i < fa.size(); ++i) {
                if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
                if (fa[i].second.coeffs() != fb[i].second.coeffs())
                    return fa[i].second.coeffs() < fb[i].second.coeffs();
            }
            return false;
        };
        auto factor_equal = [&factor_less](const TensorTerm& a, const TensorTerm& b) {
            return !factor_less(a, b) && !factor_less(b, a);
        };
        std::stable_sort(sorted.begin(), sorted.end(), factor_less);
        TensorFunction out(dim_);
        for (std::size_t i = 0; i < sorted.size();) {
            double c = sorted[i].coefficient();
            std::size_t k = i + 1;
            while (k < sorted.size() && factor_equal(sorted[i], sorted[k]))
                c += sorted[k++].coefficient();
            if (std::abs(c) > tol) {
                std::vector<std::pair<int, Poly1>> fs(sorted[i].factors().begin(),
                                                      sorted[i].factors().end());
                out.push_term(TensorTerm(c, std::move(fs)));
            }
            i = k;
        }
        return out;
    }

    /// Canonical sparse monomial expansion: exponent vector -> coefficient.
    /// The finest term combination, so cross-term cancellation is exact here.
    std::map<std::vector<int>, double> expand_monomials() const {
        std::map<std::vector<int>, double> mono;
        for (const TensorTerm& t : terms_) {
            // odometer over one coefficient index per factor
            const auto& fs = t.factors();
            std::vector<std::size_t> idx(fs.size(), 0);
            while (true) {
                double c = t.coefficient();
                std::vector<int> expo(static_cast<std::size_t>(dim_), 0);
                for (std::size_t k = 0; k < fs.size(); ++k) {
                    c *= fs[k].second.coeff(idx[k]);
                    expo[static_cast<std::size_t>(fs[k].first)] = static_cast<int>(idx[k]);
                }
                if (c != 0.0) mono[expo] += c;
                std::size_t k = 0;
                for (; k < fs.size(); ++k) {
                    if (++idx[k] <= static_cast<std::size_t>(fs[k].second.degree())) break;
                    idx[k] = 0;
                }
                if (k == fs.size()) break;
            }
        }
        return mono;
    }

    /// Zero test after full monomial combination: every combined coefficient
    /// has magnitude <= tol. Exact-zero tests are meaningless after floating
    /// arithmetic, so tol defaults to 1e-12.
    bool is_negligible(double tol = 1e-12) const {
        for (const auto& [expo, c] : expand_monomials())
            if (std::abs(c) > tol) return false;
        return true;
    }

    /// Coordinates that survive monomial combination with |coeff| > tol.
    CoordSubset monomial_support(double tol = 1e-12) const {
        std::uint64_t s = 0;
        for (const auto& [expo, c] : expand_monomials()) {
            if (std::abs(c) <= tol) continue;
            for (std::size_t j = 0; j < expo.size(); ++j)
                if (expo[j] > 0) s |= std::uint64_t{1} << j;
        }
        return CoordSubset(s, dim_);
    }

private:
    static void check_dim(int dim) {
        if (dim < 0 || dim > 63)
            throw std::invalid_argument("TensorFunction: dim must be in [0, 63]");
    }

    int dim_ = 0;
    std::vector<TensorTerm> terms_;
};

/// Applies d/dx_j for every j in u, term by term; terms without a factor on
/// some j in u are constant in x_j and vanish. Exact.
inline TensorFunction mixed_derivative(const TensorFunction& f, const CoordSubset& u) {
    if (u.dim() != f.dim()) throw std::invalid_argument("mixed_derivative: dim mismatch");
    TensorFunction out(f.dim());
    for (const TensorTerm& t : f.terms()) {
        if ((u.bits() & ~t.support_bits()) != 0) continue;
        std::vector<std::pair<int, Poly1>> fs;
        fs.reserve(t.factors().size());
        bool dead = false;
        for (const auto& [j, h] : t.factors()) {
            Poly1 g = u.contains(j) ? h.derivative() : h;
            if (g.is_zero()) {
                dead = true;
                break;
            }
            fs.emplace_back(j, std::move(g));
        }
        if (!dead) out.push_term(TensorTerm(t.coefficient(), std::move(fs)));
    }
    return out;
}

enum class RestrictMode {
    AnchorAtZero,  // substitute x_j = 0 outside u
    IntegrateOut   // integrate x_j over [0,1] outside u
};

/// Projection onto functions of the coordinates in u: each factor on a
/// coordinate outside u collapses to the scalar h(0) (AnchorAtZero) or
/// int_0^1 h (IntegrateOut). Exact.
inline TensorFunction restrict_to(const TensorFunction& f, const CoordSubset& u,
                                  RestrictMode mode) {
    if (u.dim() != f.dim()) throw std::invalid_argument("restrict_to: dim mismatch");
    TensorFunction out(f.dim());
    for (const TensorTerm& t : f.terms()) {
        double c = t.coefficient();
        std::vector<std::pair<int, Poly1>> fs;
        for (const auto& [j, h] : t.factors()) {
            if (u.contains(j)) {
                fs.emplace_back(j, h);
                continue;
            }
            c *= (mode == RestrictMode::AnchorAtZero) ? h(0.0) : h.integral01();
            if (c == 0.0) break;
        }
        if (c != 0.0) out.push_term(TensorTerm(c, std::move(fs)));
    }
    return out;
}

}  // namespace anchova
