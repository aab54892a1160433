#include <catch2/catch_amalgamated.hpp>

#include <anchova/io.hpp>
#include <anchova/random.hpp>

using namespace anchova;
using Catch::Matchers::WithinAbs;

TEST_CASE("weight table JSON") {
    SECTION("1-based subsets, omitted entries default to zero") {
        const auto doc = nlohmann::json::parse(R"({
            "dim": 2,
            "weights": [
                {"subset": [], "gamma": 1.0},
                {"subset": [2], "gamma": 0.5}
            ]})");
        const WeightSchedule w = weight_table_from_json(doc);
        CHECK(w.weight(CoordSubset::empty_set(2)) == 1.0);
        CHECK(w.weight(CoordSubset::of({1}, 2)) == 0.5);  // file index 2 -> bit 1
        CHECK(w.weight(CoordSubset::of({0}, 2)) == 0.0);
        CHECK(w.weight(CoordSubset::full_set(2)) == 0.0);
    }
    SECTION("round trip") {
        const auto w = WeightSchedule::explicit_table(2, {1.0, 0.25, 0.5, 0.125});
        const WeightSchedule back = weight_table_from_json(weight_table_to_json(w));
        for (std::uint64_t bits = 0; bits < 4; ++bits)
            CHECK(back.weight_bits(bits) == w.weight_bits(bits));
    }
    SECTION("malformed documents are rejected") {
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "weights": [{"subset": [3], "gamma": 1.0}]})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "weights": [{"subset": [1, 1], "gamma": 1.0}]})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "weights": [{"subset": [1], "gamma": -1.0}]})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "weights": [
                                {"subset": [1], "gamma": 1.0},
                                {"subset": [1], "gamma": 2.0}]})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(R"({"weights": []})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(weight_table_from_json(nlohmann::json::parse(
                            R"({"dim": 21, "weights": []})")),
                        capacity_error);
    }
}

TEST_CASE("tensor function JSON") {
    SECTION("1-based factor keys") {
        const auto doc = nlohmann::json::parse(
            R"({"dim": 2, "terms": [{"coeff": 2.0, "factors": {"2": [0.0, 1.0]}}]})");
        const TensorFunction f = tensor_function_from_json(doc);
        CHECK_THAT(f(std::vector<double>{0.9, 0.5}), WithinAbs(1.0, 1e-15));  // 2 * x2
    }
    SECTION("round trip preserves evaluation") {
        RandomEngine rng(401);
        for (int rep = 0; rep < 10; ++rep) {
            const int dim = uniform_int(rng, 1, 4);
            const TensorFunction f = random_tensor_function(rng, dim, {3, dim, 3});
            const TensorFunction back = tensor_function_from_json(tensor_function_to_json(f));
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (int i = 0; i < 25; ++i) {
                for (double& v : x) v = uniform01(rng);
                CHECK_THAT(back(x), WithinAbs(f(x), 1e-14));
            }
        }
    }
    SECTION("bad coordinate keys are rejected") {
        CHECK_THROWS_AS(tensor_function_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "terms": [{"coeff": 1.0, "factors": {"0": [1.0]}}]})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(tensor_function_from_json(nlohmann::json::parse(
                            R"({"dim": 2, "terms": [{"coeff": 1.0, "factors": {"x": [1.0]}}]})")),
                        std::invalid_argument);
    }
}

TEST_CASE("component tuple JSON round trip") {
    RandomEngine rng(402);
    const ComponentTuple t = random_component_tuple(rng, 3);
    const ComponentTuple back = component_tuple_from_json(component_tuple_to_json(t));
    REQUIRE(back.nonzero_count() == t.nonzero_count());
    std::vector<double> x(3);
    for (const auto& [bits, g] : t.components()) {
        const TensorFunction other = back.get(CoordSubset(bits, 3));
        for (int i = 0; i < 25; ++i) {
            for (double& v : x) v = uniform01(rng);
            CHECK_THAT(other(x), WithinAbs(g(x), 1e-14));
        }
    }
}

TEST_CASE("report CSV round trip") {
    EquivalenceReport r;
    r.dim = 4;
    r.p = PExponent::infinity();
    r.anchored_norm = 1.0;
    r.anova_norm = 2.25;
    r.ratio_a_over_anch = 2.25;
    r.ratio_anch_over_a = 1.0 / 2.25;
    r.bound_cdp = 2.25;
    r.bound_satisfied = true;

    const std::string row = report_csv_row(r);
    CHECK(row.find(",inf,") != std::string::npos);
    const EquivalenceReport back = report_from_csv_row(row);
    CHECK(back.dim == r.dim);
    CHECK(back.p.is_infinite());
    CHECK(back.anova_norm == r.anova_norm);
    CHECK(back.bound_satisfied == r.bound_satisfied);

    CHECK(std::string(report_csv_header()) ==
          "dim,p,anch_norm,anova_norm,ratio_a_over_anch,ratio_anch_over_a,c_dp,satisfied");
    CHECK_THROWS_AS(report_from_csv_row("1,2,3"), std::invalid_argument);
}

TEST_CASE("format_double emits shortest round-trip decimals") {
    CHECK(format_double(4.0) == "4");
    CHECK(format_double(2.25) == "2.25");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
