#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace anchova {

/// Univariate real polynomial on [0,1], coefficients in ascending degree.
/// Normalized: trailing zero coefficients are stripped, the zero polynomial
/// has an empty coefficient list (degree -1).
class Poly1 {
public:
    Poly1() = default;

    Poly1(std::initializer_list<double> coeffs) : c_(coeffs) { normalize(); }
    explicit Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) { normalize(); }

    static Poly1 constant(double v) { return Poly1({v}); }
    static Poly1 identity() { return Poly1({0.0, 1.0}); }  // t

    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }

    double coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0.0; }
    const std::vector<double>& coeffs() const noexcept { return c_; }

    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly1 derivative() const {
        if (c_.size() <= 1) return Poly1();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
        return Poly1(std::move(d));
    }

    /// Antiderivative with zero constant term: H(0) = 0.
    Poly1 antiderivative() const {
        if (c_.empty()) return Poly1();
        std::vector<double> a(c_.size() + 1, 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
        return Poly1(std::move(a));
    }

    double integral(double a, double b) const {
        Poly1 h = antiderivative();
        return h(b) - h(a);
    }

    double integral01() const { return integral(0.0, 1.0); }

    double max_abs_coeff() const noexcept {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    Poly1& operator+=(const Poly1& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        normalize();
        return *this;
    }

    Poly1& operator-=(const Poly1& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        normalize();
        return *this;
    }

    Poly1& operator*=(double s) {
        if (s == 0.0) {
            c_.clear();
            return *this;
        }
        for (double& v : c_) v *= s;
        return *this;
    }

    friend Poly1 operator+(Poly1 a, const Poly1& b) { return a += b; }
    friend Poly1 operator-(Poly1 a, const Poly1& b) { return a -= b; }
    friend Poly1 operator*(Poly1 a, double s) { return a *= s; }
    friend Poly1 operator*(double s, Poly1 a) { return a *= s; }

    friend Poly1 operator*(const Poly1& a, const Poly1& b) {
        if (a.is_zero() || b.is_zero()) return Poly1();
        std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return Poly1(std::move(out));
    }

    friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }

    Poly1 pow(unsigned n) const {
        Poly1 acc = Poly1::constant(1.0);
        for (unsigned k = 0; k < n; ++k) acc = acc * (*this);
        return acc;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

namespace detail {

// Sign with a hard zero-clamp used when counting Sturm sign changes: values
// below this floor carry no sign information.
inline int sturm_sign(double v) {
    if (std::abs(v) <= 1e-300) return 0;
    return v > 0.0 ? 1 : -1;
}

// Remainder of a / b, coefficients below 1e-14 * scale treated as zero so the
// chain terminates on near-gcd degeneracy.
inline Poly1 poly_remainder(const Poly1& a, const Poly1& b) {
    std::vector<double> r = a.coeffs();
    const std::vector<double>& d = b.coeffs();
    const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    while (r.size() >= d.size() && !r.empty()) {
        double q = r.back() / d.back();
        std::size_t shift = r.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= q * d[i];
        r.pop_back();
    }
    for (double& v : r)
        if (std::abs(v) <= 1e-14 * scale) v = 0.0;
    return Poly1(std::move(r));
}

// Sturm chain of h, each member scaled to unit max coefficient (positive
// scaling preserves signs). Ends at the last nonzero remainder.
inline std::vector<Poly1> sturm_chain(const Poly1& h) {
    std::vector<Poly1> chain;
    Poly1 p0 = h;
    if (p0.max_abs_coeff() > 0.0) p0 *= 1.0 / p0.max_abs_coeff();
    chain.push_back(p0);
    Poly1 p1 = p0.derivative();
    if (p1.is_zero()) return chain;
    p1 *= 1.0 / p1.max_abs_coeff();
    chain.push_back(p1);
    while (chain.back().degree() > 0) {
        Poly1 rem = poly_remainder(chain[chain.size() - 2], chain.back());
        if (rem.is_zero()) break;
        rem *= -1.0 / rem.max_abs_coeff();
        chain.push_back(std::move(rem));
    }
    return chain;
}

inline int sturm_sign_changes(const std::vector<Poly1>& chain, double x) {
    int changes = 0;
    int prev = 0;
    for (const Poly1& p : chain) {
        int s = sturm_sign(p(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace detail

/// Distinct real roots of h in the open interval (lo, hi), ascending, located
/// by Sturm bracketing and bisection on the root count to width 1e-14.
/// Roots within 1e-12 of lo or hi are excluded (merged into the endpoint).
inline std::vector<double> isolate_roots(const Poly1& h, double lo = 0.0, double hi = 1.0) {
    std::vector<double> roots;
    if (h.degree() <= 0) return roots;  // constants have no interior roots

    const double margin = 1e-12;
    double a = lo + margin, b = hi - margin;
    if (!(a < b)) return roots;

    const auto chain = detail::sturm_chain(h);
    const auto count = [&chain](double x, double y) {
        return detail::sturm_sign_changes(chain, x) - detail::sturm_sign_changes(chain, y);
    };

    // (bracket, root count) work list; split until each bracket holds one root.
    struct Bracket {
        double a, b;
        int n;
    };
    std::vector<Bracket> work{{a, b, count(a, b)}};
    while (!work.empty()) {
        Bracket w = work.back();
        work.pop_back();
        if (w.n <= 0) continue;
        if (w.n == 1) {
            // Bisect on the Sturm count; robust for roots of any multiplicity.
            double x = w.a, y = w.b;
            while (y - x > 1e-14) {
                double m = 0.5 * (x + y);
                if (count(x, m) >= 1)
                    y = m;
                else
                    x = m;
            }
            roots.push_back(0.5 * (x + y));
            continue;
        }
        double m = 0.5 * (w.a + w.b);
        int left = count(w.a, m);
        work.push_back({w.a, m, left});
        work.push_back({m, w.b, w.n - left});
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace anchova
