#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomp.hpp"
#include "equivalence.hpp"
#include "pexponent.hpp"
#include "poly.hpp"
#include "subset.hpp"
#include "tensor.hpp"
#include "weights.hpp"

namespace anchova {

/// Shortest round-trip decimal for a double ("4", "2.25", "0.1").
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

// Subset indices are 1-based in every file format, bit positions internally.
inline CoordSubset subset_from_json(const nlohmann::json& arr, int dim) {
    if (!arr.is_array()) throw std::invalid_argument("subset must be an array of indices");
    std::uint64_t bits = 0;
    for (const auto& e : arr) {
        const long long j = e.get<long long>();
        if (j < 1 || j > dim)
            throw std::invalid_argument("subset index " + std::to_string(j) +
                                        " outside 1.." + std::to_string(dim));
        const std::uint64_t bit = std::uint64_t{1} << (j - 1);
        if (bits & bit)
            throw std::invalid_argument("duplicate subset index " + std::to_string(j));
        bits |= bit;
    }
    return CoordSubset(bits, dim);
}

inline nlohmann::json subset_to_json(const CoordSubset& u) {
    nlohmann::json arr = nlohmann::json::array();
    for (int j : u.indices()) arr.push_back(j + 1);
    return arr;
}

}  // namespace detail

/// {"dim": d, "weights": [{"subset": [1-based indices], "gamma": v}, ...]}
/// Omitted subsets default to gamma = 0.
inline WeightSchedule weight_table_from_json(const nlohmann::json& doc) {
    if (!doc.contains("dim")) throw std::invalid_argument("weight table: missing \"dim\"");
    const int dim = doc.at("dim").get<int>();
    if (dim < 1) throw std::invalid_argument("weight table: dim must be >= 1");
    if (dim > 20)
        throw capacity_error("explicit weight tables are capped at dim <= 20, got dim = " +
                             std::to_string(dim));
    std::vector<double> table(std::size_t{1} << dim, 0.0);
    std::vector<bool> seen(table.size(), false);
    for (const auto& entry : doc.at("weights")) {
        const CoordSubset u = detail::subset_from_json(entry.at("subset"), dim);
        const double gamma = entry.at("gamma").get<double>();
        if (!(gamma >= 0.0)) throw std::invalid_argument("weight table: gamma must be >= 0");
        if (seen[u.bits()])
            throw std::invalid_argument("weight table: duplicate entry for subset " +
                                        u.to_string());
        seen[u.bits()] = true;
        table[u.bits()] = gamma;
    }
    return WeightSchedule::explicit_table(dim, std::move(table));
}

inline nlohmann::json weight_table_to_json(const WeightSchedule& w) {
    nlohmann::json entries = nlohmann::json::array();
    const std::vector<double> table = w.all_weights();
    for (std::uint64_t u = 0; u < table.size(); ++u) {
        if (table[u] == 0.0) continue;
        entries.push_back({{"subset", detail::subset_to_json(CoordSubset(u, w.dim()))},
                           {"gamma", table[u]}});
    }
    return {{"dim", w.dim()}, {"weights", entries}};
}

/// {"dim": d, "terms": [{"coeff": c, "factors": {"j": [c0, c1, ...]}}]}
/// with 1-based coordinate keys and ascending-degree coefficient arrays.
inline TensorFunction tensor_function_from_json(const nlohmann::json& doc) {
    if (!doc.contains("dim")) throw std::invalid_argument("function: missing \"dim\"");
    const int dim = doc.at("dim").get<int>();
    if (dim < 0 || dim > 63) throw std::invalid_argument("function: dim out of range");
    TensorFunction f(dim);
    for (const auto& term : doc.at("terms")) {
        const double coeff = term.at("coeff").get<double>();
        std::vector<std::pair<int, Poly1>> factors;
        if (term.contains("factors")) {
            for (const auto& [key, coeffs] : term.at("factors").items()) {
                int j = 0;
                const auto res = std::from_chars(key.data(), key.data() + key.size(), j);
                if (res.ec != std::errc{} || res.ptr != key.data() + key.size() || j < 1 ||
                    j > dim)
                    throw std::invalid_argument("function: bad coordinate key \"" + key + "\"");
                factors.emplace_back(j - 1, Poly1(coeffs.get<std::vector<double>>()));
            }
        }
        f.push_term(TensorTerm(coeff, std::move(factors)));
    }
    return f;
}

inline nlohmann::json tensor_function_to_json(const TensorFunction& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const TensorTerm& t : f.terms()) {
        nlohmann::json factors = nlohmann::json::object();
        for (const auto& [j, h] : t.factors())
            factors[std::to_string(j + 1)] = h.coeffs();
        terms.push_back({{"coeff", t.coefficient()}, {"factors", factors}});
    }
    return {{"dim", f.dim()}, {"terms", terms}};
}

/// {"dim": d, "components": [{"subset": [...], "function": <function>}]}
inline ComponentTuple component_tuple_from_json(const nlohmann::json& doc) {
    const int dim = doc.at("dim").get<int>();
    ComponentTuple tuple(dim);
    for (const auto& entry : doc.at("components")) {
        const CoordSubset u = detail::subset_from_json(entry.at("subset"), dim);
        TensorFunction g = tensor_function_from_json(entry.at("function"));
        if (g.dim() != dim)
            throw std::invalid_argument("component tuple: component dim differs from tuple dim");
        tuple.set(u, std::move(g));
    }
    return tuple;
}

inline nlohmann::json component_tuple_to_json(const ComponentTuple& tuple) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [bits, g] : tuple.components())
        comps.push_back({{"subset", detail::subset_to_json(CoordSubset(bits, tuple.dim()))},
                         {"function", tensor_function_to_json(g)}});
    return {{"dim", tuple.dim()}, {"components", comps}};
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

/// CSV layer for equivalence reports. p = inf is written as the token "inf".
inline const char* report_csv_header() {
    return "dim,p,anch_norm,anova_norm,ratio_a_over_anch,ratio_anch_over_a,c_dp,satisfied";
}

inline std::string report_csv_row(const EquivalenceReport& r) {
    std::ostringstream out;
    out << r.dim << ',' << r.p.to_string() << ',' << format_double(r.anchored_norm) << ','
        << format_double(r.anova_norm) << ',' << format_double(r.ratio_a_over_anch) << ','
        << format_double(r.ratio_anch_over_a) << ',' << format_double(r.bound_cdp) << ','
        << (r.bound_satisfied ? "true" : "false");
    return out.str();
}

inline EquivalenceReport report_from_csv_row(const std::string& line) {
    std::vector<std::string> cols;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) cols.push_back(field);
    if (cols.size() != 8) throw std::invalid_argument("report row: expected 8 columns");
    EquivalenceReport r;
    r.dim = std::stoi(cols[0]);
    r.p = PExponent::parse(cols[1]);
    r.anchored_norm = std::stod(cols[2]);
    r.anova_norm = std::stod(cols[3]);
    r.ratio_a_over_anch = std::stod(cols[4]);
    r.ratio_anch_over_a = std::stod(cols[5]);
    r.bound_cdp = std::stod(cols[6]);
    r.bound_satisfied = cols[7] == "true";
    return r;
}

}  // namespace anchova
