#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <anchova/decomp.hpp>
#include <anchova/equivalence.hpp>
#include <anchova/random.hpp>

using namespace anchova;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TensorFunction product_x1x2() {
    TensorFunction f(2);
    f.push_term(TensorTerm(1.0, {{0, Poly1::identity()}, {1, Poly1::identity()}}));
    return f;
}

TensorFunction line_1d() {  // f(x) = x
    TensorFunction f(1);
    f.push_term(TensorTerm(1.0, {{0, Poly1::identity()}}));
    return f;
}

double eval_at(const TensorFunction& f, std::vector<double> x) { return f(x); }

double max_diff_on_points(const TensorFunction& a, const TensorFunction& b, RandomEngine& rng,
                          int n = 100) {
    std::vector<double> x(static_cast<std::size_t>(a.dim()));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (double& v : x) v = uniform01(rng);
        worst = std::max(worst, std::abs(a(x) - b(x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("anchored components of hand-computed cases") {
    SECTION("x1 x2: only the full-set component survives") {
        const ComponentTuple t = anchored_components(product_x1x2());
        CHECK(t.nonzero_count() == 1);
        const TensorFunction g = t.get(CoordSubset::full_set(2));
        CHECK_THAT(eval_at(g, {0.3, 0.9}), WithinAbs(1.0, 1e-15));
    }
    SECTION("constants sit in the empty component") {
        const ComponentTuple t = anchored_components(TensorFunction::constant(2, 5.0));
        CHECK(t.nonzero_count() == 1);
        CHECK_THAT(eval_at(t.get(CoordSubset::empty_set(2)), {0.1, 0.2}), WithinAbs(5.0, 0.0));
    }
    SECTION("f(x) = x in one dimension") {
        const ComponentTuple t = anchored_components(line_1d());
        CHECK(t.find(CoordSubset::empty_set(1)) == nullptr);  // f(0) = 0
        CHECK_THAT(eval_at(t.get(CoordSubset::full_set(1)), {0.5}), WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("anova components of hand-computed cases") {
    SECTION("x1 x2 has all four components") {
        const ComponentTuple t = anova_components(product_x1x2());
        CHECK(t.nonzero_count() == 4);
        CHECK_THAT(eval_at(t.get(CoordSubset::empty_set(2)), {0.0, 0.0}), WithinAbs(0.25, 1e-15));
        CHECK_THAT(eval_at(t.get(CoordSubset::of({0}, 2)), {0.7, 0.0}), WithinAbs(0.5, 1e-15));
        CHECK_THAT(eval_at(t.get(CoordSubset::of({1}, 2)), {0.0, 0.7}), WithinAbs(0.5, 1e-15));
        CHECK_THAT(eval_at(t.get(CoordSubset::full_set(2)), {0.2, 0.8}), WithinAbs(1.0, 1e-15));
    }
    SECTION("f(x) = x in one dimension") {
        const ComponentTuple t = anova_components(line_1d());
        CHECK_THAT(eval_at(t.get(CoordSubset::empty_set(1)), {0.0}), WithinAbs(0.5, 1e-15));
        CHECK_THAT(eval_at(t.get(CoordSubset::full_set(1)), {0.4}), WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("reconstruction of hand-computed tuples") {
    SECTION("anchored: unit derivative component gives f(x) = x") {
        ComponentTuple t(1);
        t.set(CoordSubset::full_set(1), TensorFunction::constant(1, 1.0));
        const TensorFunction f = anchored_reconstruct(t);
        for (double x : {0.0, 0.3, 1.0}) CHECK_THAT(eval_at(f, {x}), WithinAbs(x, 1e-15));
    }
    SECTION("anchored: constant-only tuple reconstructs the constant") {
        ComponentTuple t(2);
        t.set(CoordSubset::empty_set(2), TensorFunction::constant(2, 4.5));
        const TensorFunction f = anchored_reconstruct(t);
        CHECK_THAT(eval_at(f, {0.2, 0.9}), WithinAbs(4.5, 1e-15));
    }
    SECTION("anchored: full-set unit component gives x1 x2") {
        ComponentTuple t(2);
        t.set(CoordSubset::full_set(2), TensorFunction::constant(2, 1.0));
        const TensorFunction f = anchored_reconstruct(t);
        CHECK_THAT(eval_at(f, {0.25, 0.5}), WithinAbs(0.125, 1e-15));
    }
    SECTION("anova: mean 1/2 plus unit derivative gives f(x) = x") {
        ComponentTuple t(1);
        t.set(CoordSubset::empty_set(1), TensorFunction::constant(1, 0.5));
        t.set(CoordSubset::full_set(1), TensorFunction::constant(1, 1.0));
        const TensorFunction f = anova_reconstruct(t);
        for (double x : {0.0, 0.3, 1.0}) CHECK_THAT(eval_at(f, {x}), WithinAbs(x, 1e-14));
    }
    SECTION("anova: the x1 x2 component tuple reconstructs x1 x2") {
        ComponentTuple t(2);
        t.set(CoordSubset::empty_set(2), TensorFunction::constant(2, 0.25));
        t.set(CoordSubset::of({0}, 2), TensorFunction::constant(2, 0.5));
        t.set(CoordSubset::of({1}, 2), TensorFunction::constant(2, 0.5));
        t.set(CoordSubset::full_set(2), TensorFunction::constant(2, 1.0));
        const TensorFunction f = anova_reconstruct(t);
        RandomEngine rng(5);
        CHECK(max_diff_on_points(f, product_x1x2(), rng) < 1e-14);
    }
}

TEST_CASE("round trips on random tensor polynomials") {
    for (int d = 1; d <= 6; ++d) {
        for (int s = 0; s < 8; ++s) {
            RandomEngine rng = engine_for_sample(101, (static_cast<std::uint64_t>(d) << 32) + s);
            const TensorFunction f = random_tensor_function(rng, d, {3, d, 4});
            CHECK(max_diff_on_points(anchored_reconstruct(anchored_components(f)), f, rng) < 1e-9);
            CHECK(max_diff_on_points(anova_reconstruct(anova_components(f)), f, rng) < 1e-9);
        }
    }
}

TEST_CASE("inverse round trips on random component tuples") {
    for (int d = 1; d <= 5; ++d) {
        for (int s = 0; s < 6; ++s) {
            RandomEngine rng = engine_for_sample(102, (static_cast<std::uint64_t>(d) << 32) + s);
            const ComponentTuple t = random_component_tuple(rng, d);
            const ComponentTuple anch = anchored_components(anchored_reconstruct(t));
            const ComponentTuple anova = anova_components(anova_reconstruct(t));
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
                const CoordSubset u(bits, d);
                CHECK(max_diff_on_points(anch.get(u), t.get(u), rng, 50) < 1e-9);
                CHECK(max_diff_on_points(anova.get(u), t.get(u), rng, 50) < 1e-9);
            }
        }
    }
}

TEST_CASE("single-subset tuples map to single-subset functions") {
    // the reconstruction image of a tuple supported on u has components
    // exactly on u: every other derivative/integral annihilates (to floating
    // dust on the anova side, judged by the 1e-12 zero threshold)
    RandomEngine rng(103);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = uniform_int(rng, 1, 4);
        const CoordSubset u(rng() & ((1u << d) - 1), d);
        TensorFunction g(d);
        std::vector<std::pair<int, Poly1>> fs;
        for (int j : u.indices())
            fs.emplace_back(j, Poly1{uniform_signed(rng), uniform_signed(rng), 1.0});
        g.push_term(TensorTerm(1.0 + uniform01(rng), fs));
        ComponentTuple t(d);
        t.set(u, g);

        const ComponentTuple anch = anchored_components(anchored_reconstruct(t));
        const ComponentTuple anova = anova_components(anova_reconstruct(t));
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
            const CoordSubset v(bits, d);
            if (bits == u.bits()) {
                CHECK_FALSE(anch.get(v).is_negligible(1e-12));
                CHECK_FALSE(anova.get(v).is_negligible(1e-12));
            } else {
                CHECK(anch.get(v).is_negligible(1e-12));
                CHECK(anova.get(v).is_negligible(1e-12));
            }
        }
    }
}

TEST_CASE("anova reconstruction images are mean-zero per own coordinate") {
    RandomEngine rng(104);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = uniform_int(rng, 2, 4);
        const std::uint64_t full = (1u << d) - 1;
        std::uint64_t bits = rng() & full;
        if (bits == 0) bits = 1;
        const CoordSubset u(bits, d);
        TensorFunction g(d);
        std::vector<std::pair<int, Poly1>> fs;
        for (int j : u.indices())
            fs.emplace_back(j, Poly1{uniform_signed(rng), 1.0});
        g.push_term(TensorTerm(1.0, fs));
        ComponentTuple t(d);
        t.set(u, g);
        const TensorFunction f = anova_reconstruct(t);
        for (int j : u.indices()) {
            const TensorFunction integrated =
                restrict_to(f, CoordSubset::full_set(d).without(j), RestrictMode::IntegrateOut);
            CHECK(integrated.is_negligible(1e-12));
        }
    }
}

TEST_CASE("one-dimensional anova identity via polynomial calculus") {
    RandomEngine rng(105);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> coeffs(static_cast<std::size_t>(uniform_int(rng, 1, 7)));
        for (double& c : coeffs) c = uniform_signed(rng);
        const Poly1 f(coeffs);
        const Poly1 fp = f.derivative();
        const double mean = f.integral01();
        const double moment = (Poly1::identity() * fp).integral01();
        const Poly1 anti_fp = fp.antiderivative();
        for (int i = 0; i < 100; ++i) {
            const double x = uniform01(rng);
            // f(x) = int f + int_0^1 t f'(t) dt - int_x^1 f'(t) dt
            const double rhs = mean + moment - (anti_fp(1.0) - anti_fp(x));
            CHECK_THAT(f(x), WithinAbs(rhs, 1e-10));
        }
    }
}

TEST_CASE("weighted anchored and anova norms") {
    const auto ones1 = WeightSchedule::product({1.0});
    const auto ones2 = WeightSchedule::product({1.0, 1.0});
    SECTION("f(x) = x") {
        CHECK_THAT(anchored_norm(line_1d(), ones1, PExponent::finite(2)), WithinRel(1.0, 1e-12));
        CHECK_THAT(anova_norm(line_1d(), ones1, PExponent::finite(2)),
                   WithinRel(std::sqrt(1.25), 1e-12));
        CHECK_THAT(anchored_norm(line_1d(), ones1, PExponent::infinity()), WithinRel(1.0, 1e-12));
    }
    SECTION("f = x1 x2") {
        CHECK_THAT(anchored_norm(product_x1x2(), ones2, PExponent::finite(1)),
                   WithinRel(1.0, 1e-12));
        CHECK_THAT(anova_norm(product_x1x2(), ones2, PExponent::finite(1)),
                   WithinRel(2.25, 1e-12));
    }
    SECTION("constants have norm gamma_{}^-1 |c|") {
        const TensorFunction one = TensorFunction::constant(1, 1.0);
        for (PExponent p : {PExponent::finite(1), PExponent::finite(3), PExponent::infinity()})
            CHECK_THAT(anchored_norm(one, ones1, p), WithinRel(1.0, 1e-14));
    }
    SECTION("membership: nonzero component on a zero-weight subset") {
        const auto w = WeightSchedule::explicit_table(1, {1.0, 0.0});
        try {
            anchored_norm(line_1d(), w, PExponent::finite(2));
            FAIL("expected membership_error");
        } catch (const membership_error& e) {
            CHECK(e.subset_bits() == 1);
            CHECK(std::string(e.what()).find("{1}") != std::string::npos);
        }
    }
    SECTION("zero-weight subsets contribute nothing when the component vanishes") {
        const auto w = WeightSchedule::explicit_table(2, {1.0, 1.0, 1.0, 0.0});
        TensorFunction f(2);  // x1 + x2: no {1,2} component
        f.push_term(TensorTerm(1.0, {{0, Poly1::identity()}}));
        f.push_term(TensorTerm(1.0, {{1, Poly1::identity()}}));
        CHECK_NOTHROW(anchored_norm(f, w, PExponent::finite(2)));
    }
    SECTION("norm equals the weighted combination of component norms") {
        RandomEngine rng(106);
        const TensorFunction f = random_tensor_function(rng, 3, {3, 3, 3});
        const auto w = WeightSchedule::product({0.5, 1.0, 2.0});
        const PExponent p = PExponent::finite(2);
        const ComponentTuple comps = anchored_components(f);
        double sum = 0.0;
        for (const auto& [bits, g] : comps.components()) {
            const CoordSubset u(bits, 3);
            sum += std::pow(lp_norm_subset(g, u, p) / w.weight(u), 2.0);
        }
        CHECK_THAT(anchored_norm(f, w, p), WithinRel(std::sqrt(sum), 1e-12));
    }
}

TEST_CASE("component tuple storage rules") {
    ComponentTuple t(2);
    SECTION("negligible components clear their slot") {
        t.set(CoordSubset::of({0}, 2), TensorFunction::constant(2, 1.0));
        t.set(CoordSubset::of({0}, 2), TensorFunction(2));
        CHECK(t.nonzero_count() == 0);
    }
    SECTION("components must respect their subset") {
        TensorFunction g(2);
        g.push_term(TensorTerm(1.0, {{1, Poly1::identity()}}));
        CHECK_THROWS_AS(t.set(CoordSubset::of({0}, 2), g), std::invalid_argument);
    }
    SECTION("iteration is in ascending bitmask order") {
        t.set(CoordSubset::full_set(2), TensorFunction::constant(2, 1.0));
        t.set(CoordSubset::empty_set(2), TensorFunction::constant(2, 1.0));
        std::vector<std::uint64_t> keys;
        for (const auto& [bits, g] : t.components()) keys.push_back(bits);
        CHECK(keys == std::vector<std::uint64_t>{0, 3});
    }
    SECTION("dim cap") { CHECK_THROWS_AS(ComponentTuple(21), capacity_error); }
}
