#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <anchova/equivalence.hpp>
#include <anchova/norms.hpp>
#include <anchova/oracle.hpp>
#include <anchova/random.hpp>

using namespace anchova;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("midpoint integral oracle") {
    SECTION("x1 x2 over the square") {
        const CoordSubset u = CoordSubset::full_set(2);
        const double got = integral_oracle(
            [](const std::vector<double>& x) { return x[0] * x[1]; }, u, 1.0, GridSpec(200, u));
        CHECK_THAT(got, WithinAbs(0.25, 1e-4));
    }
    SECTION("constants integrate exactly") {
        const CoordSubset u = CoordSubset::of({0, 2}, 3);
        const double got = integral_oracle([](const std::vector<double>&) { return 1.0; }, u, 3.0,
                                           GridSpec(50, u));
        CHECK(got == 1.0);
    }
    SECTION("squared monomial") {
        const CoordSubset u = CoordSubset::full_set(1);
        const double got = integral_oracle(
            [](const std::vector<double>& x) { return x[0]; }, u, 2.0, GridSpec(200, u));
        CHECK_THAT(got, WithinAbs(1.0 / 3.0, 1e-5));
    }
    SECTION("coordinates outside u are pinned to zero") {
        const CoordSubset u = CoordSubset::of({0}, 2);
        const double got = integral_oracle(
            [](const std::vector<double>& x) { return x[0] + 10.0 * x[1]; }, u, 1.0,
            GridSpec(100, u));
        CHECK_THAT(got, WithinAbs(0.5, 1e-4));
    }
    SECTION("grid capacity cap at 1e7 points") {
        CHECK_THROWS_AS(GridSpec(500, CoordSubset::full_set(3)), capacity_error);
        CHECK_NOTHROW(GridSpec(200, CoordSubset::full_set(3)));
        CHECK_THROWS_AS(GridSpec(1, CoordSubset::full_set(2)), std::invalid_argument);
    }
}

TEST_CASE("integral oracle corroborates the norm pipeline") {
    RandomEngine rng(301);
    for (int rep = 0; rep < 8; ++rep) {
        const int dim = uniform_int(rng, 1, 3);
        const TensorFunction g = random_tensor_function(rng, dim, {2, dim, 3});
        const CoordSubset u = CoordSubset::full_set(dim);
        for (double p : {1.0, 2.0}) {
            const double norm = lp_norm_subset(g, u, PExponent::finite(p));
            const double oracle = integral_oracle(
                [&g](const std::vector<double>& x) { return g(x); }, u, p, GridSpec(200, u));
            // midpoint at 200/axis carries ~1e-5 of its own error
            CHECK_THAT(oracle, WithinAbs(std::pow(norm, p), 5e-4 * (1.0 + std::pow(norm, p))));
        }
    }
}

TEST_CASE("finite-difference mixed derivatives") {
    SECTION("constant mixed derivative of x1 x2") {
        const CoordSubset u = CoordSubset::full_set(2);
        const double got = fd_mixed_derivative(
            [](const std::vector<double>& x) { return x[0] * x[1]; }, u, {0.5, 0.5}, 1e-3);
        CHECK_THAT(got, WithinAbs(1.0, 1e-6));
    }
    SECTION("constants differentiate to zero") {
        const CoordSubset u = CoordSubset::of({0}, 2);
        const double got = fd_mixed_derivative(
            [](const std::vector<double>&) { return 4.25; }, u, {0.5, 0.5}, 1e-3);
        CHECK_THAT(got, WithinAbs(0.0, 1e-9));
    }
    SECTION("quadratic slope") {
        const CoordSubset u = CoordSubset::of({0}, 2);
        const double got = fd_mixed_derivative(
            [](const std::vector<double>& x) { return x[0] * x[0]; }, u, {0.3, 0.5}, 1e-4);
        CHECK_THAT(got, WithinAbs(0.6, 1e-7));
    }
    SECTION("stencil leaving the cube is a domain error") {
        const CoordSubset u = CoordSubset::of({0}, 1);
        CHECK_THROWS_AS(fd_mixed_derivative([](const std::vector<double>& x) { return x[0]; }, u,
                                            {0.0005}, 1e-3),
                        std::domain_error);
    }
    SECTION("halving h quarters the truncation error") {
        // needs a third derivative: use degree-4 factors away from roundoff
        RandomEngine rng(302);
        for (int rep = 0; rep < 6; ++rep) {
            const int dim = 2;
            TensorFunction f(dim);
            for (int t = 0; t < 2; ++t) {
                std::vector<std::pair<int, Poly1>> fs;
                for (int j = 0; j < dim; ++j) {
                    std::vector<double> c(5);
                    for (double& v : c) v = 1.0 + uniform01(rng);
                    fs.emplace_back(j, Poly1(std::move(c)));
                }
                f.push_term(TensorTerm(1.0, fs));
            }
            const CoordSubset u = CoordSubset::full_set(dim);
            const std::vector<double> x{0.4, 0.55};
            const double exact = mixed_derivative(f, u)(x);
            const auto eval = [&f](const std::vector<double>& y) { return f(y); };
            const double e1 = std::abs(fd_mixed_derivative(eval, u, x, 2e-2) - exact);
            const double e2 = std::abs(fd_mixed_derivative(eval, u, x, 1e-2) - exact);
            if (e1 > 1e-8) {  // skip accidental cancellation cases near roundoff
                CHECK(e1 / e2 > 3.0);
                CHECK(e1 / e2 < 5.0);
            }
        }
    }
}
