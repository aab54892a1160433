#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace anchova {

/// Integrability exponent p in [1, inf]. Infinity is a first-class value;
/// 1/p is derived (0 at p = inf), never stored.
class PExponent {
public:
    PExponent() : p_(2.0) {}

    static PExponent finite(double p) {
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("PExponent: finite p must satisfy p >= 1");
        PExponent e;
        e.p_ = p;
        return e;
    }

    static PExponent infinity() {
        PExponent e;
        e.p_ = std::numeric_limits<double>::infinity();
        return e;
    }

    bool is_infinite() const noexcept { return std::isinf(p_); }
    bool is_finite() const noexcept { return !is_infinite(); }

    /// Finite value; throws on p = inf.
    double value() const {
        if (is_infinite()) throw std::logic_error("PExponent: value() on p = inf");
        return p_;
    }

    double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / p_; }

    bool is_even_integer() const noexcept {
        if (is_infinite()) return false;
        double r = std::round(p_);
        return p_ == r && std::fmod(r, 2.0) == 0.0;
    }

    /// Accepts a decimal value or the token "inf".
    static PExponent parse(const std::string& token) {
        if (token == "inf" || token == "Inf" || token == "INF") return infinity();
        std::size_t pos = 0;
        double v = std::stod(token, &pos);
        if (pos != token.size())
            throw std::invalid_argument("PExponent: cannot parse '" + token + "'");
        return finite(v);
    }

    /// "inf" for infinity, shortest decimal otherwise (exact for integers).
    std::string to_string() const {
        if (is_infinite()) return "inf";
        if (p_ == std::round(p_) && p_ < 1e15) return std::to_string(static_cast<long long>(p_));
        std::string s = std::to_string(p_);
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
        return s;
    }

    friend bool operator==(const PExponent& a, const PExponent& b) { return a.p_ == b.p_; }

private:
    double p_;
};

}  // namespace anchova
