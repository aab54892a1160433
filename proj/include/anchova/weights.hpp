#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "pexponent.hpp"
#include "subset.hpp"

namespace anchova {

/// A family (gamma_u) of nonnegative subset weights, either an explicit
/// 2^d table or one of the parametric families:
///   Product:            gamma_u = prod_{j in u} gamma_j
///   FiniteOrder:        gamma_u = c * omega^|u| for |u| <= q, else 0
///   DimensionDependent: gamma_u = d^-|u|
/// Immutable after construction. Explicit tables are capped at dim <= 20
/// (2^d storage and brute-force constants stay seconds-scale there).
class WeightSchedule {
public:
    enum class Family { Explicit, Product, FiniteOrder, DimensionDependent };

    static WeightSchedule explicit_table(int dim, std::vector<double> table) {
        check_dim(dim);
        if (dim > 20)
            throw capacity_error("explicit weight tables are capped at dim <= 20, got dim = " +
                                 std::to_string(dim));
        if (table.size() != (std::size_t{1} << dim))
            throw std::invalid_argument("explicit weight table must have 2^dim entries");
        for (double g : table)
            if (!(g >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        WeightSchedule w(Family::Explicit, dim);
        w.table_ = std::move(table);
        return w;
    }

    static WeightSchedule product(std::vector<double> gammas) {
        check_dim(static_cast<int>(gammas.size()));
        for (double g : gammas)
            if (!(g > 0.0)) throw std::invalid_argument("product weights require gamma_j > 0");
        WeightSchedule w(Family::Product, static_cast<int>(gammas.size()));
        w.gammas_ = std::move(gammas);
        return w;
    }

    static WeightSchedule finite_order(int dim, double c, double omega, int order) {
        check_dim(dim);
        if (!(c > 0.0) || !(omega > 0.0))
            throw std::invalid_argument("finite-order weights require c > 0 and omega > 0");
        if (order < 1) throw std::invalid_argument("finite-order weights require order >= 1");
        WeightSchedule w(Family::FiniteOrder, dim);
        w.c_ = c;
        w.omega_ = omega;
        w.order_ = order;
        return w;
    }

    static WeightSchedule dimension_dependent(int dim) {
        check_dim(dim);
        return WeightSchedule(Family::DimensionDependent, dim);
    }

    int dim() const noexcept { return dim_; }
    Family family() const noexcept { return family_; }

    double weight(const CoordSubset& u) const {
        if (u.dim() != dim_)
            throw std::invalid_argument("weight: subset dim " + std::to_string(u.dim()) +
                                        " does not match schedule dim " + std::to_string(dim_));
        return weight_bits(u.bits());
    }

    double weight_bits(std::uint64_t bits) const {
        switch (family_) {
            case Family::Explicit:
                return table_[bits];
            case Family::Product: {
                double g = 1.0;
                for (std::uint64_t b = bits; b != 0; b &= b - 1)
                    g *= gammas_[static_cast<std::size_t>(std::countr_zero(b))];
                return g;
            }
            case Family::FiniteOrder: {
                int k = std::popcount(bits);
                return k <= order_ ? c_ * std::pow(omega_, k) : 0.0;
            }
            case Family::DimensionDependent:
                return std::pow(static_cast<double>(dim_), -std::popcount(bits));
        }
        return 0.0;
    }

    const std::vector<double>& product_gammas() const {
        if (family_ != Family::Product)
            throw std::logic_error("product_gammas: not a product schedule");
        return gammas_;
    }

    double finite_order_c() const { return c_; }
    double finite_order_omega() const { return omega_; }
    int finite_order_q() const { return order_; }

    /// Full 2^d lookup table; capped at dim <= 20.
    std::vector<double> all_weights() const {
        if (dim_ > 20)
            throw capacity_error("weight table materialization is capped at dim <= 20");
        const std::size_t n = std::size_t{1} << dim_;
        if (family_ == Family::Explicit) return table_;
        std::vector<double> t(n);
        t[0] = weight_bits(0);
        if (family_ == Family::Product) {
            // gamma_{u + j} = gamma_u * gamma_j
            for (std::uint64_t u = 1; u < n; ++u) {
                int j = std::countr_zero(u);
                t[u] = t[u & (u - 1)] * gammas_[static_cast<std::size_t>(j)];
            }
        } else {
            for (std::uint64_t u = 1; u < n; ++u) t[u] = weight_bits(u);
        }
        return t;
    }

private:
    WeightSchedule(Family f, int dim) : family_(f), dim_(dim) {}

    static void check_dim(int dim) {
        if (dim < 1 || dim > 63)
            throw std::invalid_argument("weight schedule dim must be in [1, 63]");
    }

    Family family_;
    int dim_;
    std::vector<double> table_;   // Explicit
    std::vector<double> gammas_;  // Product
    double c_ = 0.0, omega_ = 0.0;
    int order_ = 0;  // FiniteOrder
};

/// Pairs (u, v) with gamma_u > 0, v subset of u, gamma_v == 0, sorted by
/// (u, v) bitmask. Empty iff the schedule is downward closed. Parametric
/// families are closed by construction and return empty without enumeration.
inline std::vector<std::pair<CoordSubset, CoordSubset>> check_compatibility(
    const WeightSchedule& w) {
    std::vector<std::pair<CoordSubset, CoordSubset>> violations;
    if (w.family() != WeightSchedule::Family::Explicit) return violations;

    const std::vector<double> table = w.all_weights();
    const std::uint64_t n = std::uint64_t{1} << w.dim();
    for (std::uint64_t u = 0; u < n; ++u) {
        if (table[u] <= 0.0) continue;
        for_each_subset_of(u, [&](std::uint64_t v) {
            if (table[v] == 0.0)
                violations.emplace_back(CoordSubset(u, w.dim()), CoordSubset(v, w.dim()));
        });
    }
    std::sort(violations.begin(), violations.end(), [](const auto& a, const auto& b) {
        return a.first.bits() != b.first.bits() ? a.first.bits() < b.first.bits()
                                                : a.second.bits() < b.second.bits();
    });
    return violations;
}

/// Value of a maximized subset sum together with the maximizing subset
/// (smallest bitmask on ties).
struct ConstantWithMaximizer {
    double value;
    CoordSubset maximizer;
};

namespace detail {

struct ChunkMax {
    double value = -1.0;
    std::uint64_t argmax = 0;
    bool violation = false;
    std::uint64_t bad_u = 0, bad_v = 0;
};

// Splits [0, 2^d) into chunks scanned in parallel; the serial ascending
// reduce keeps results independent of the worker count.
template <typename PerSubset>
ChunkMax subset_max_scan(int dim, PerSubset&& per_subset) {
    const std::uint64_t n = std::uint64_t{1} << dim;
    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(n, 128));
    const std::uint64_t chunk_len = (n + chunks - 1) / chunks;
    std::vector<ChunkMax> results(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        ChunkMax local;
        const std::uint64_t lo = c * chunk_len;
        const std::uint64_t hi = std::min(n, lo + chunk_len);
        for (std::uint64_t u = lo; u < hi && !local.violation; ++u) per_subset(u, local);
        results[c] = local;
    });
    ChunkMax best;
    for (const ChunkMax& r : results) {
        if (r.violation && !best.violation) {
            best = r;
            break;  // earliest violating subset wins
        }
        if (r.value > best.value) {
            best.value = r.value;
            best.argmax = r.argmax;
        }
    }
    return best;
}

inline double product_log_space(const std::vector<double>& factors_minus_one) {
    // prod (1 + x_j), accumulated in log space for long sequences
    if (factors_minus_one.size() <= 30) {
        double p = 1.0;
        for (double x : factors_minus_one) p *= 1.0 + x;
        return p;
    }
    double s = 0.0;
    for (double x : factors_minus_one) s += std::log1p(x);
    return std::exp(s);
}

}  // namespace detail

/// C1 = prod (1 + gamma_j), Cinf = prod (1 + gamma_j / 2); the closed forms
/// of the subset maxima under product weights. Empty list gives (1, 1).
inline std::pair<double, double> closed_form_constants_product(const std::vector<double>& gammas) {
    for (double g : gammas)
        if (!(g > 0.0)) throw std::invalid_argument("product weights require gamma_j > 0");
    std::vector<double> half(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) half[i] = 0.5 * gammas[i];
    return {detail::product_log_space(gammas), detail::product_log_space(half)};
}

/// Brute force over all 2^d subsets:
///   C_{d,1} = max_u sum_{v subset u} gamma_u / gamma_v.
/// Subsets with gamma_u = 0 index trivial component spaces and are excluded
/// from the max; a positive gamma_u over a zero gamma_v is a compatibility
/// error. Requires dim <= 20.
inline ConstantWithMaximizer constant_c1_with_maximizer(const WeightSchedule& w) {
    const std::vector<double> table = w.all_weights();
    detail::ChunkMax best = detail::subset_max_scan(w.dim(), [&](std::uint64_t u,
                                                                 detail::ChunkMax& local) {
        const double gu = table[u];
        if (gu <= 0.0) return;
        double sum = 0.0;
        std::uint64_t v = u;
        while (true) {
            const double gv = table[v];
            if (gv <= 0.0) {
                local.violation = true;
                local.bad_u = u;
                local.bad_v = v;
                return;
            }
            sum += gu / gv;
            if (v == 0) break;
            v = (v - 1) & u;
        }
        if (sum > local.value) {
            local.value = sum;
            local.argmax = u;
        }
    });
    if (best.violation)
        throw compatibility_error("incompatible weights: gamma" +
                                  CoordSubset(best.bad_u, w.dim()).to_string() +
                                  " > 0 but gamma" + CoordSubset(best.bad_v, w.dim()).to_string() +
                                  " = 0");
    if (best.value < 0.0) throw std::invalid_argument("all weights are zero");
    return {best.value, CoordSubset(best.argmax, w.dim())};
}

/// Brute force:
///   C_{d,inf} = max_u sum_{v subset u^c} 2^-|v| gamma_{u union v} / gamma_u.
/// Zero-weight u are skipped; zero gamma_{u union v} contributes nothing.
inline ConstantWithMaximizer constant_cinf_with_maximizer(const WeightSchedule& w) {
    const std::vector<double> table = w.all_weights();
    const std::uint64_t full = (std::uint64_t{1} << w.dim()) - 1;
    detail::ChunkMax best =
        detail::subset_max_scan(w.dim(), [&](std::uint64_t u, detail::ChunkMax& local) {
            const double gu = table[u];
            if (gu <= 0.0) return;
            double sum = 0.0;
            for_each_subset_of(~u & full, [&](std::uint64_t v) {
                sum += std::ldexp(table[u | v], -std::popcount(v)) / gu;
            });
            if (sum > local.value) {
                local.value = sum;
                local.argmax = u;
            }
        });
    if (best.value < 0.0) throw std::invalid_argument("all weights are zero");
    return {best.value, CoordSubset(best.argmax, w.dim())};
}

namespace detail {

// Closed forms for the parametric families, used past the brute-force cap.
// FiniteOrder: the C1 max sits at any |u| = min(d, q) and equals
// (1 + omega)^min(d,q); the Cinf max sits at u = {} and equals
// sum_{k <= min(d,q)} binom(d,k) (omega/2)^k. DimensionDependent peaks at
// u = [d] resp. u = {} with (1 + 1/d)^d and (1 + 1/(2d))^d.
inline std::optional<double> closed_form_c1(const WeightSchedule& w) {
    switch (w.family()) {
        case WeightSchedule::Family::Product:
            return closed_form_constants_product(w.product_gammas()).first;
        case WeightSchedule::Family::FiniteOrder: {
            int m = std::min(w.dim(), w.finite_order_q());
            return std::pow(1.0 + w.finite_order_omega(), m);
        }
        case WeightSchedule::Family::DimensionDependent:
            return std::pow(1.0 + 1.0 / w.dim(), w.dim());
        case WeightSchedule::Family::Explicit:
            return std::nullopt;
    }
    return std::nullopt;
}

inline std::optional<double> closed_form_cinf(const WeightSchedule& w) {
    switch (w.family()) {
        case WeightSchedule::Family::Product: {
            return closed_form_constants_product(w.product_gammas()).second;
        }
        case WeightSchedule::Family::FiniteOrder: {
            const double x = 0.5 * w.finite_order_omega();
            const int kmax = std::min(w.dim(), w.finite_order_q());
            double sum = 1.0, term = 1.0;
            for (int k = 1; k <= kmax; ++k) {
                term *= x * static_cast<double>(w.dim() - k + 1) / static_cast<double>(k);
                sum += term;
            }
            return sum;
        }
        case WeightSchedule::Family::DimensionDependent:
            return std::pow(1.0 + 0.5 / w.dim(), w.dim());
        case WeightSchedule::Family::Explicit:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

inline double constant_c1(const WeightSchedule& w) {
    if (w.dim() <= 20) return constant_c1_with_maximizer(w).value;
    return *detail::closed_form_c1(w);  // Explicit never reaches dim > 20
}

inline double constant_cinf(const WeightSchedule& w) {
    if (w.dim() <= 20) return constant_cinf_with_maximizer(w).value;
    return *detail::closed_form_cinf(w);
}

/// C_{d,p} = C_{d,1}^{1/p} * C_{d,inf}^{1-1/p}: log-linear interpolation of
/// the two endpoint constants, returned exactly at p = 1 and p = inf.
inline double constant_cdp(double c1, double cinf, PExponent p) {
    if (p.is_infinite()) return cinf;
    if (p.value() == 1.0) return c1;
    const double inv_p = p.inverse();
    return std::pow(c1, inv_p) * std::pow(cinf, 1.0 - inv_p);
}

inline double constant_cdp(const WeightSchedule& w, PExponent p) {
    return constant_cdp(constant_c1(w), constant_cinf(w), p);
}

/// Largest value of sum_{j<=d} gamma_j / ln(d+1) over 1 <= d <= d_max, and
/// the smallest maximizing d. Any finite scan is only a lower bound for the
/// supremum over all d; a maximizer at d_max signals non-convergence.
struct TauZeroEstimate {
    double value;
    std::size_t maximizer;
};

inline TauZeroEstimate tau_zero(const std::vector<double>& gammas, std::size_t d_max) {
    if (d_max < 1) throw std::invalid_argument("tau_zero: d_max must be >= 1");
    if (gammas.size() < d_max)
        throw std::invalid_argument("tau_zero: need gamma_1..gamma_d_max");
    for (double g : gammas)
        if (!(g >= 0.0)) throw std::invalid_argument("tau_zero: gammas must be nonnegative");
    TauZeroEstimate best{0.0, 1};
    double partial = 0.0;
    for (std::size_t d = 1; d <= d_max; ++d) {
        partial += gammas[d - 1];
        const double ratio = partial / std::log(static_cast<double>(d) + 1.0);
        if (ratio > best.value) best = {ratio, d};
    }
    return best;
}

enum class EquivalenceRegime { Uniform, Polynomial, Divergent };

inline const char* to_string(EquivalenceRegime r) {
    switch (r) {
        case EquivalenceRegime::Uniform: return "Uniform";
        case EquivalenceRegime::Polynomial: return "Polynomial";
        case EquivalenceRegime::Divergent: return "Divergent";
    }
    return "?";
}

/// Regime report for a product-weight sequence. Raw diagnostics (partial
/// sums, tau0 estimate and its maximizer) accompany the verdict; `confident`
/// is false whenever the verdict rests on the scan hitting its horizon.
struct ClassificationReport {
    EquivalenceRegime regime;
    std::optional<double> exponent_bound;  // (tau0/2)(1 + 1/p), Polynomial only
    double tau0;
    std::size_t tau0_maximizer;
    double partial_sum_total;
    double tail_sum;
    std::vector<double> partial_sums;  // partial_sums[d-1] = sum_{j<=d} gamma_j
    bool confident;
    PExponent p;
    std::size_t d_max;
};

/// Numeric stand-in for the summability / tau0 dichotomy: a finite scan
/// cannot decide convergence, so the rules are
///   Uniform     iff tail sum over [d_max/2, d_max] < 1e-9 * total sum,
///   Polynomial  iff the tau0 maximizer sits in the first half of the scan,
///   Divergent   otherwise (reported with confident = false).
inline ClassificationReport classify_equivalence(const std::vector<double>& gammas, PExponent p,
                                                 std::size_t d_max) {
    if (d_max < 2) throw std::invalid_argument("classify_equivalence: d_max must be >= 2");
    if (gammas.size() < d_max)
        throw std::invalid_argument("classify_equivalence: need gamma_1..gamma_d_max");
    for (std::size_t j = 0; j < d_max; ++j)
        if (!(gammas[j] > 0.0))
            throw std::invalid_argument("classify_equivalence: product weights require gamma_j > 0");

    ClassificationReport rep;
    rep.p = p;
    rep.d_max = d_max;
    rep.partial_sums.resize(d_max);
    double partial = 0.0;
    for (std::size_t d = 1; d <= d_max; ++d) {
        partial += gammas[d - 1];
        rep.partial_sums[d - 1] = partial;
    }
    rep.partial_sum_total = partial;
    const std::size_t tail_start = std::max<std::size_t>(1, d_max / 2);
    rep.tail_sum = rep.partial_sum_total -
                   (tail_start >= 2 ? rep.partial_sums[tail_start - 2] : 0.0);

    const TauZeroEstimate tz = tau_zero(gammas, d_max);
    rep.tau0 = tz.value;
    rep.tau0_maximizer = tz.maximizer;

    if (rep.tail_sum < 1e-9 * rep.partial_sum_total) {
        rep.regime = EquivalenceRegime::Uniform;
        rep.exponent_bound = std::nullopt;
        rep.confident = true;
    } else if (tz.maximizer < d_max / 2) {
        rep.regime = EquivalenceRegime::Polynomial;
        rep.exponent_bound = 0.5 * tz.value * (1.0 + p.inverse());
        rep.confident = true;
    } else {
        rep.regime = EquivalenceRegime::Divergent;
        rep.exponent_bound = std::nullopt;
        rep.confident = false;  // divergence cannot be certified by a finite scan
    }
    return rep;
}

}  // namespace anchova
