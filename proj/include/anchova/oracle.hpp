#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "subset.hpp"

namespace anchova {

/// Evaluation point passed to oracle callbacks: full-dimension coordinates.
using PointFunction = std::function<double(const std::vector<double>&)>;

/// Regular grid over [0,1]^axes; the product size is capped at 1e7 points.
struct GridSpec {
    int points_per_axis;
    CoordSubset axes;

    GridSpec(int n, CoordSubset u) : points_per_axis(n), axes(u) {
        if (n < 2) throw std::invalid_argument("GridSpec: need at least 2 points per axis");
        double total = 1.0;
        for (int k = 0; k < u.cardinality(); ++k) total *= static_cast<double>(n);
        if (total > 1e7)
            throw capacity_error("GridSpec: grid of " + std::to_string(total) +
                                 " points exceeds the 1e7 cap");
    }
};

/// Composite midpoint estimate of int_{[0,1]^u} |eval|^p, coordinates
/// outside u fixed at 0. Deliberately a different rule from the production
/// quadrature so agreement between the two is evidence, not a tautology.
/// Error is O(n^-2) per axis for smooth integrands.
inline double integral_oracle(const PointFunction& eval, const CoordSubset& u, double power,
                              const GridSpec& grid) {
    if (!(power >= 0.0)) throw std::invalid_argument("integral_oracle: power must be >= 0");
    if (!(grid.axes == u)) throw std::invalid_argument("integral_oracle: grid axes differ from u");
    const std::vector<int> axes = u.indices();
    const int n = grid.points_per_axis;
    std::vector<double> x(static_cast<std::size_t>(u.dim()), 0.0);

    double sum = 0.0;
    std::size_t count = 0;
    std::vector<int> idx(axes.size(), 0);
    while (true) {
        for (std::size_t a = 0; a < axes.size(); ++a)
            x[static_cast<std::size_t>(axes[a])] = (idx[a] + 0.5) / n;
        sum += std::pow(std::abs(eval(x)), power);
        ++count;
        std::size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < n) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    // single final division keeps constant integrands exact
    return sum / static_cast<double>(count);
}

/// Tensorized central difference of order |u| at x: the mixed derivative
/// with one differentiation per coordinate in u. Error O(h^2) for smooth
/// functions. Every stencil corner must stay inside [0,1]^d.
inline double fd_mixed_derivative(const PointFunction& eval, const CoordSubset& u,
                                  std::vector<double> x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_mixed_derivative: h must be > 0");
    if (x.size() != static_cast<std::size_t>(u.dim()))
        throw std::invalid_argument("fd_mixed_derivative: point has wrong dimension");
    for (int j : u.indices()) {
        const double v = x[static_cast<std::size_t>(j)];
        if (v - h < 0.0 || v + h > 1.0)
            throw std::domain_error("fd_mixed_derivative: stencil leaves [0,1]^d at coordinate " +
                                    std::to_string(j + 1));
    }
    const std::vector<int> axes = u.indices();
    // sum over sign patterns of prod(signs) * f(x + h * signs) / (2h)^|u|
    const std::size_t corners = std::size_t{1} << axes.size();
    double acc = 0.0;
    std::vector<double> y = x;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        int sign = 1;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const bool plus = (mask >> a) & 1u;
            y[static_cast<std::size_t>(axes[a])] =
                x[static_cast<std::size_t>(axes[a])] + (plus ? h : -h);
            if (!plus) sign = -sign;
        }
        acc += sign * eval(y);
    }
    return acc / std::pow(2.0 * h, static_cast<double>(axes.size()));
}

}  // namespace anchova
