#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "decomp.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "pexponent.hpp"
#include "random.hpp"
#include "subset.hpp"
#include "tensor.hpp"
#include "weights.hpp"

namespace anchova {

/// Both weighted norms of one function, their mutual ratios, and the
/// interpolation bound C_{d,p} they are checked against.
struct EquivalenceReport {
    int dim = 0;
    PExponent p;
    double anchored_norm = 0.0;
    double anova_norm = 0.0;
    double ratio_a_over_anch = 1.0;
    double ratio_anch_over_a = 1.0;
    double bound_cdp = 1.0;
    bool bound_satisfied = true;
};

/// The product function f(x) = prod_j (1 + gamma_j x_j), expanded into its
/// 2^d monomial terms gamma_u prod_{j in u} x_j. Its anchored components are
/// the constants gamma_u, which makes it the extremal probe for the norm
/// ratio. d = 0 gives f = 1.
inline TensorFunction witness_function(const std::vector<double>& gammas) {
    const int d = static_cast<int>(gammas.size());
    if (d > 20) throw capacity_error("witness_function: dim capped at 20 (2^d terms)");
    for (double g : gammas)
        if (!(g > 0.0)) throw std::invalid_argument("witness_function: gammas must be positive");
    TensorFunction f(d);
    const std::uint64_t n = std::uint64_t{1} << d;
    for (std::uint64_t u = 0; u < n; ++u) {
        double coeff = 1.0;
        std::vector<std::pair<int, Poly1>> fs;
        for (std::uint64_t b = u; b != 0; b &= b - 1) {
            const int j = std::countr_zero(b);
            coeff *= gammas[static_cast<std::size_t>(j)];
            fs.emplace_back(j, Poly1::identity());
        }
        f.push_term(TensorTerm(coeff, std::move(fs)));
    }
    return f;
}

/// Closed-form witness norms under product weights.
///
/// Finite p: every anchored component is the constant gamma_u, so
/// |f|^p = sum_u 1 = 2^d; the ANOVA components are
/// gamma_u prod_{j notin u}(1 + gamma_j/2), giving
/// |f|^p = prod_j (1 + (1 + gamma_j/2)^p).
///
/// p = inf follows from the same constants: the weighted anchored max is 1,
/// and the ANOVA max over u is attained at u = {} with prod_j (1+gamma_j/2).
struct WitnessNorms {
    double anchored;
    double anova;
};

inline WitnessNorms witness_norms_closed(const std::vector<double>& gammas, PExponent p) {
    const std::size_t d = gammas.size();
    for (double g : gammas)
        if (!(g > 0.0))
            throw std::invalid_argument("witness_norms_closed: gammas must be positive");
    if (p.is_infinite()) {
        std::vector<double> half(d);
        for (std::size_t j = 0; j < d; ++j) half[j] = 0.5 * gammas[j];
        return {1.0, detail::product_log_space(half)};
    }
    const double pv = p.value();
    const double anchored = std::exp2(static_cast<double>(d) / pv);
    std::vector<double> factors(d);
    for (std::size_t j = 0; j < d; ++j)
        factors[j] = std::pow(1.0 + 0.5 * gammas[j], pv);  // 1 + this, under the product
    const double anova_pow_p = detail::product_log_space(factors);
    return {anchored, std::pow(anova_pow_p, 1.0 / pv)};
}

/// Runs both decompositions of f through the weighted norms and compares
/// the larger ratio with C_{d,p}. A single zero norm (the other nonzero) is
/// an inconsistency: the two subspaces select the same functions.
inline EquivalenceReport measure_ratio(const TensorFunction& f, const WeightSchedule& w,
                                       PExponent p) {
    EquivalenceReport rep;
    rep.dim = f.dim();
    rep.p = p;
    rep.anchored_norm = anchored_norm(f, w, p);
    rep.anova_norm = anova_norm(f, w, p);
    if ((rep.anchored_norm == 0.0) != (rep.anova_norm == 0.0))
        throw inconsistency_error("measure_ratio: exactly one of the two norms vanished "
                                  "(anchored = " + std::to_string(rep.anchored_norm) +
                                  ", anova = " + std::to_string(rep.anova_norm) + ")");
    if (rep.anchored_norm == 0.0) {
        rep.ratio_a_over_anch = 1.0;  // zero function: both norms vanish
        rep.ratio_anch_over_a = 1.0;
    } else {
        rep.ratio_a_over_anch = rep.anova_norm / rep.anchored_norm;
        rep.ratio_anch_over_a = rep.anchored_norm / rep.anova_norm;
    }
    rep.bound_cdp = constant_cdp(w, p);
    rep.bound_satisfied =
        std::max(rep.ratio_a_over_anch, rep.ratio_anch_over_a) <= rep.bound_cdp * (1.0 + 1e-9);
    return rep;
}

/// Sampling distribution for the verification sweeps: term count uniform in
/// {1..max_terms}; each term touches a uniform subset of at most
/// min(dim, max_support) coordinates; factor degrees uniform in
/// {0..max_degree}; coefficients uniform in [-1,1].
struct RandomFunctionOptions {
    int max_terms = 3;
    int max_support = 4;
    int max_degree = 3;
};

inline TensorFunction random_tensor_function(RandomEngine& rng, int dim,
                                             const RandomFunctionOptions& opts = {}) {
    if (dim < 1) throw std::invalid_argument("random_tensor_function: dim must be >= 1");
    TensorFunction f(dim);
    const int n_terms = uniform_int(rng, 1, opts.max_terms);
    for (int t = 0; t < n_terms; ++t) {
        const int k = uniform_int(rng, 1, std::min(dim, opts.max_support));
        std::uint64_t support = 0;
        while (std::popcount(support) < k)
            support |= std::uint64_t{1} << uniform_int(rng, 0, dim - 1);
        std::vector<std::pair<int, Poly1>> fs;
        for (std::uint64_t b = support; b != 0; b &= b - 1) {
            const int j = std::countr_zero(b);
            const int degree = uniform_int(rng, 0, opts.max_degree);
            std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
            for (double& c : coeffs) c = uniform_signed(rng);
            fs.emplace_back(j, Poly1(std::move(coeffs)));
        }
        f.push_term(TensorTerm(1.0, std::move(fs)));
    }
    return f;
}

/// Random tuple for inverse-direction round trips: a handful of distinct
/// subsets, each holding a function of its own coordinates.
inline ComponentTuple random_component_tuple(RandomEngine& rng, int dim, int max_subsets = 6,
                                             int max_terms = 2, int max_degree = 3) {
    ComponentTuple tuple(dim);
    const std::uint64_t full = dim == 0 ? 0 : (std::uint64_t{1} << dim) - 1;
    const int n_subsets = uniform_int(rng, 1, max_subsets);
    for (int s = 0; s < n_subsets; ++s) {
        const CoordSubset u(rng() & full, dim);
        TensorFunction g(dim);
        const int n_terms = uniform_int(rng, 1, max_terms);
        for (int t = 0; t < n_terms; ++t) {
            std::vector<std::pair<int, Poly1>> fs;
            for (int j : u.indices()) {
                if ((rng() & 1u) == 0) continue;
                const int degree = uniform_int(rng, 0, max_degree);
                std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
                for (double& c : coeffs) c = uniform_signed(rng);
                fs.emplace_back(j, Poly1(std::move(coeffs)));
            }
            g.push_term(TensorTerm(uniform_signed(rng), std::move(fs)));
        }
        tuple.set(u, std::move(g));
    }
    return tuple;
}

/// Reports for n_samples random functions at every p in p_grid, plus the
/// running maximum ratio per p (an empirical lower bound for the operator
/// norm, never asserted to match C_{d,p}).
struct SweepResult {
    /// Ordered by p-grid index, then sample index.
    std::vector<EquivalenceReport> reports;
    std::vector<double> max_ratio_per_p;
};

inline SweepResult verify_bound_sweep(const WeightSchedule& w, const std::vector<PExponent>& p_grid,
                                      std::size_t n_samples, std::uint64_t seed,
                                      const RandomFunctionOptions& opts = {}) {
    SweepResult result;
    result.reports.resize(p_grid.size() * n_samples);
    result.max_ratio_per_p.assign(p_grid.size(), 0.0);
    if (n_samples == 0 || p_grid.empty()) {
        result.reports.clear();
        return result;
    }
    // One engine per sample index: parallel and serial runs agree.
    parallel_for(n_samples, [&](std::size_t i) {
        RandomEngine rng = engine_for_sample(seed, i);
        const TensorFunction f = random_tensor_function(rng, w.dim(), opts);
        for (std::size_t k = 0; k < p_grid.size(); ++k)
            result.reports[k * n_samples + i] = measure_ratio(f, w, p_grid[k]);
    });
    for (std::size_t k = 0; k < p_grid.size(); ++k)
        for (std::size_t i = 0; i < n_samples; ++i) {
            const EquivalenceReport& r = result.reports[k * n_samples + i];
            result.max_ratio_per_p[k] = std::max(
                result.max_ratio_per_p[k], std::max(r.ratio_a_over_anch, r.ratio_anch_over_a));
        }
    return result;
}

/// The per-factor lower-bound chain for the witness under product weights:
///   ratio_p = |f|_A^p / |f|_anch^p = prod_j (1 + (1 + gamma_j/2)^p) / 2
///   >= prod_j (1 + gamma_j/4),
/// with per-factor equality at p = 1.
struct WitnessLowerBound {
    double ratio_p;
    double product_bound;
    bool holds;
};

inline WitnessLowerBound witness_lower_bound_check(const std::vector<double>& gammas,
                                                   PExponent p) {
    if (p.is_infinite())
        throw std::invalid_argument("witness_lower_bound_check: requires finite p");
    for (double g : gammas)
        if (!(g > 0.0))
            throw std::invalid_argument("witness_lower_bound_check: gammas must be positive");
    const double pv = p.value();
    std::vector<double> ratio_factors(gammas.size());
    std::vector<double> bound_factors(gammas.size());
    for (std::size_t j = 0; j < gammas.size(); ++j) {
        ratio_factors[j] = 0.5 * (1.0 + std::pow(1.0 + 0.5 * gammas[j], pv)) - 1.0;
        bound_factors[j] = 0.25 * gammas[j];
    }
    WitnessLowerBound out;
    out.ratio_p = detail::product_log_space(ratio_factors);
    out.product_bound = detail::product_log_space(bound_factors);
    out.holds = out.ratio_p >= out.product_bound * (1.0 - 1e-12);
    return out;
}

}  // namespace anchova
