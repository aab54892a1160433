// Command-line surface for the anchored/ANOVA norm-equivalence library:
// constants tables, decompositions, norm and ratio reports, witness sweeps,
// weight-family classification, and the self-verification suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <anchova/anchova.hpp>

namespace {

using namespace anchova;

std::vector<double> parse_gamma_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad gamma value '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("--gamma list is empty");
    return out;
}

// gamma-seq grammar: "const:<v>"  gamma_j = v
//                    "power:<a>"  gamma_j = j^-a
//                    "geo:<r>"    gamma_j = r^j
std::vector<double> generate_gamma_seq(const std::string& token, std::size_t n) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("--gamma-seq expects const:<v>, power:<a> or geo:<r>");
    const std::string kind = token.substr(0, colon);
    const double arg = std::stod(token.substr(colon + 1));
    std::vector<double> out(n);
    for (std::size_t j = 1; j <= n; ++j) {
        if (kind == "const")
            out[j - 1] = arg;
        else if (kind == "power")
            out[j - 1] = std::pow(static_cast<double>(j), -arg);
        else if (kind == "geo")
            out[j - 1] = std::pow(arg, static_cast<double>(j));
        else
            throw std::invalid_argument("unknown gamma-seq kind '" + kind + "'");
    }
    for (double g : out)
        if (!(g > 0.0)) throw std::invalid_argument("gamma-seq produced a nonpositive weight");
    return out;
}

std::vector<int> parse_d_range(const std::string& spec) {
    const auto dots = spec.find("..");
    std::vector<int> out;
    if (dots == std::string::npos) {
        out.push_back(std::stoi(spec));
    } else {
        const int a = std::stoi(spec.substr(0, dots));
        const int b = std::stoi(spec.substr(dots + 2));
        if (a > b) throw std::invalid_argument("--d range must be a..b with a <= b");
        for (int d = a; d <= b; ++d) out.push_back(d);
    }
    for (int d : out)
        if (d < 1) throw std::invalid_argument("--d values must be >= 1");
    return out;
}

std::vector<PExponent> parse_p_list(const std::string& csv) {
    std::vector<PExponent> out;
    std::stringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(PExponent::parse(tok));
    if (out.empty()) throw std::invalid_argument("--p list is empty");
    // canonical ordering: ascending, inf last
    std::sort(out.begin(), out.end(), [](const PExponent& a, const PExponent& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return a.value() < b.value();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct WeightFlags {
    std::string family = "product";
    std::string gamma;
    std::string gamma_seq;
    double c = 1.0;
    double omega = 1.0;
    int order = 1;
    std::string weights_file;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family,
                        "weight family: product, finite-order, dim-dependent, explicit")
            ->default_val("product");
        cmd->add_option("--gamma", gamma, "comma list gamma_1,gamma_2,...");
        cmd->add_option("--gamma-seq", gamma_seq, "generator const:<v> | power:<a> | geo:<r>");
        cmd->add_option("--c", c, "finite-order prefactor c");
        cmd->add_option("--omega", omega, "finite-order base omega");
        cmd->add_option("--order", order, "finite-order order q");
        cmd->add_option("--weights", weights_file, "explicit weight table JSON file");
    }

    std::vector<double> gammas_for(std::size_t d) const {
        if (!gamma.empty()) {
            std::vector<double> g = parse_gamma_list(gamma);
            if (g.size() < d)
                throw std::invalid_argument("--gamma needs at least d = " + std::to_string(d) +
                                            " entries");
            g.resize(d);
            return g;
        }
        if (!gamma_seq.empty()) return generate_gamma_seq(gamma_seq, d);
        throw std::invalid_argument("product weights need --gamma or --gamma-seq");
    }

    WeightSchedule schedule_for(int d) const {
        if (family == "product") return WeightSchedule::product(gammas_for(static_cast<std::size_t>(d)));
        if (family == "finite-order") return WeightSchedule::finite_order(d, c, omega, order);
        if (family == "dim-dependent") return WeightSchedule::dimension_dependent(d);
        if (family == "explicit") {
            if (weights_file.empty())
                throw std::invalid_argument("explicit family needs --weights <file>");
            WeightSchedule w = weight_table_from_json(load_json_file(weights_file));
            if (w.dim() != d)
                throw std::invalid_argument("weight table dim " + std::to_string(w.dim()) +
                                            " does not match requested d " + std::to_string(d));
            return w;
        }
        throw std::invalid_argument("unknown weight family '" + family + "'");
    }
};

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);  // LF line endings everywhere
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int run_constants(const WeightFlags& wf, const std::string& d_spec, const std::string& p_spec,
                  const std::string& output) {
    const std::vector<int> dims = parse_d_range(d_spec);
    const std::vector<PExponent> ps = parse_p_list(p_spec);
    OutputSink sink(output);
    std::ostream& out = sink.stream();
    out << "d,c_d1,c_dinf";
    for (const PExponent& p : ps) out << ",c_dp_" << p.to_string();
    out << "\n";
    for (int d : dims) {
        const WeightSchedule w = wf.schedule_for(d);
        const double c1 = constant_c1(w);
        const double cinf = constant_cinf(w);
        out << d << ',' << format_double(c1) << ',' << format_double(cinf);
        for (const PExponent& p : ps) out << ',' << format_double(constant_cdp(c1, cinf, p));
        out << "\n";
    }
    return 0;
}

int run_decompose(const std::string& function_file, const std::string& output) {
    const TensorFunction f = tensor_function_from_json(load_json_file(function_file));
    nlohmann::json doc{{"anchored", component_tuple_to_json(anchored_components(f))},
                       {"anova", component_tuple_to_json(anova_components(f))}};
    OutputSink sink(output);
    sink.stream() << doc.dump(1) << "\n";
    return 0;
}

int run_ratio(const WeightFlags& wf, const std::string& function_file, const std::string& p_spec,
              const std::string& output) {
    const TensorFunction f = tensor_function_from_json(load_json_file(function_file));
    const WeightSchedule w = wf.schedule_for(f.dim());
    const std::vector<PExponent> ps = parse_p_list(p_spec);
    OutputSink sink(output);
    std::ostream& out = sink.stream();
    out << report_csv_header() << "\n";
    for (const PExponent& p : ps) out << report_csv_row(measure_ratio(f, w, p)) << "\n";
    return 0;
}

int run_witness(const WeightFlags& wf, const std::string& d_spec, const std::string& p_spec,
                const std::string& output) {
    const std::vector<int> dims = parse_d_range(d_spec);
    const std::vector<PExponent> ps = parse_p_list(p_spec);
    OutputSink sink(output);
    std::ostream& out = sink.stream();
    out << "d,p,anch_pipeline,anch_closed,anova_pipeline,anova_closed,delta_anch,delta_anova\n";
    for (int d : dims) {
        const std::vector<double> gammas = wf.gammas_for(static_cast<std::size_t>(d));
        const WeightSchedule w = WeightSchedule::product(gammas);
        const TensorFunction f = witness_function(gammas);
        for (const PExponent& p : ps) {
            const WitnessNorms closed = witness_norms_closed(gammas, p);
            const double anch = anchored_norm(f, w, p);
            const double anova = anova_norm(f, w, p);
            out << d << ',' << p.to_string() << ',' << format_double(anch) << ','
                << format_double(closed.anchored) << ',' << format_double(anova) << ','
                << format_double(closed.anova) << ',' << format_double(std::abs(anch - closed.anchored))
                << ',' << format_double(std::abs(anova - closed.anova)) << "\n";
        }
    }
    return 0;
}

int run_classify(const WeightFlags& wf, const std::string& p_spec, std::size_t d_max,
                 const std::string& output) {
    const std::vector<PExponent> ps = parse_p_list(p_spec);
    if (ps.size() != 1) throw std::invalid_argument("classify takes exactly one --p value");
    const std::vector<double> gammas = wf.gammas_for(d_max);
    const ClassificationReport rep = classify_equivalence(gammas, ps[0], d_max);
    OutputSink sink(output);
    std::ostream& out = sink.stream();
    out << "regime=" << to_string(rep.regime) << "\n";
    out << "exponent_bound="
        << (rep.exponent_bound ? format_double(*rep.exponent_bound) : std::string("n/a")) << "\n";
    out << "tau0=" << format_double(rep.tau0) << "\n";
    out << "tau0_maximizer=" << rep.tau0_maximizer << "\n";
    out << "partial_sum_total=" << format_double(rep.partial_sum_total) << "\n";
    out << "tail_sum=" << format_double(rep.tail_sum) << "\n";
    out << "confident=" << (rep.confident ? "true" : "false") << "\n";
    out << "p=" << rep.p.to_string() << "\n";
    out << "d_max=" << rep.d_max << "\n";
    return 0;
}

int run_verify(const WeightFlags& wf, int d, std::size_t samples, std::uint64_t seed,
               const std::string& p_spec, const std::string& output) {
    // bare `verify` defaults to all-ones product weights
    const bool default_weights =
        wf.family == "product" && wf.gamma.empty() && wf.gamma_seq.empty();
    const WeightSchedule w = default_weights
                                 ? WeightSchedule::product(std::vector<double>(
                                       static_cast<std::size_t>(d), 1.0))
                                 : wf.schedule_for(d);
    const std::vector<PExponent> ps = parse_p_list(p_spec);
    OutputSink sink(output);
    std::ostream& out = sink.stream();
    bool all_pass = true;
    const auto line = [&out, &all_pass](const std::string& name, bool pass,
                                        const std::string& detail) {
        out << (pass ? "PASS" : "FAIL") << " " << name << " (" << detail << ")\n";
        all_pass = all_pass && pass;
    };

    // Round trips: reconstruct(components(f)) == f at 100 random points.
    double worst_anch = 0.0, worst_anova = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        RandomEngine rng = engine_for_sample(seed, s);
        const TensorFunction f = random_tensor_function(rng, d, {3, std::min(d, 4), 4});
        const TensorFunction back_anch = anchored_reconstruct(anchored_components(f));
        const TensorFunction back_anova = anova_reconstruct(anova_components(f));
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int i = 0; i < 100; ++i) {
            for (double& v : x) v = uniform01(rng);
            worst_anch = std::max(worst_anch, std::abs(f(x) - back_anch(x)));
            worst_anova = std::max(worst_anova, std::abs(f(x) - back_anova(x)));
        }
    }
    line("round-trip anchored", worst_anch <= 1e-9, "worst " + format_double(worst_anch));
    line("round-trip anova", worst_anova <= 1e-9, "worst " + format_double(worst_anova));

    // Inverse direction on random tuples, component-wise at 100 points.
    double worst_inv_anch = 0.0, worst_inv_anova = 0.0;
    const std::size_t n_tuples = (samples + 1) / 2;
    for (std::size_t s = 0; s < n_tuples; ++s) {
        RandomEngine rng = engine_for_sample(seed ^ 0x5eedULL, s);
        const ComponentTuple tuple = random_component_tuple(rng, d);
        const ComponentTuple anch = anchored_components(anchored_reconstruct(tuple));
        const ComponentTuple anova = anova_components(anova_reconstruct(tuple));
        std::vector<double> x(static_cast<std::size_t>(d));
        for (const auto& [bits, g] : tuple.components()) {
            const CoordSubset u(bits, d);
            const TensorFunction da = g + (-1.0) * anch.get(u);
            const TensorFunction dv = g + (-1.0) * anova.get(u);
            for (int i = 0; i < 100; ++i) {
                for (double& v : x) v = uniform01(rng);
                worst_inv_anch = std::max(worst_inv_anch, std::abs(da(x)));
                worst_inv_anova = std::max(worst_inv_anova, std::abs(dv(x)));
            }
        }
    }
    line("inverse round-trip anchored", worst_inv_anch <= 1e-9,
         "worst " + format_double(worst_inv_anch));
    line("inverse round-trip anova", worst_inv_anova <= 1e-9,
         "worst " + format_double(worst_inv_anova));

    // Bound sweep: every measured ratio within C_{d,p}.
    const SweepResult sweep = verify_bound_sweep(w, ps, samples, seed);
    for (std::size_t k = 0; k < ps.size(); ++k) {
        std::size_t violations = 0;
        for (std::size_t i = 0; i < samples; ++i)
            if (!sweep.reports[k * samples + i].bound_satisfied) ++violations;
        const double bound = constant_cdp(w, ps[k]);
        line("bound sweep p=" + ps[k].to_string(), violations == 0,
             "max ratio " + format_double(sweep.max_ratio_per_p[k]) + " vs C_dp " +
                 format_double(bound) + ", violations " + std::to_string(violations));
    }

    out << (all_pass ? "verify: PASS" : "verify: FAIL") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted anchored/ANOVA decompositions, L_p norms, and "
                 "norm-equivalence constants"};
    app.require_subcommand(1);

    std::string d_spec = "1";
    std::string p_spec = "2";
    std::string function_file;
    std::string output;
    std::size_t d_max = 200;
    std::size_t samples = 50;
    std::uint64_t seed = 1;

    WeightFlags wf;

    CLI::App* constants = app.add_subcommand("constants", "C_d1 / C_dinf / C_dp table over d");
    wf.attach(constants);
    constants->add_option("--d", d_spec, "dimension or range a..b")->required();
    constants->add_option("--p", p_spec, "comma list of exponents (decimal or inf)");
    constants->add_option("--output", output, "output CSV path (default stdout)");

    CLI::App* decompose = app.add_subcommand("decompose", "anchored + ANOVA component tuples");
    decompose->add_option("--function", function_file, "input function JSON")->required();
    decompose->add_option("--output", output, "output JSON path (default stdout)");

    CLI::App* norms = app.add_subcommand("norms", "weighted norms and ratio report");
    wf.attach(norms);
    norms->add_option("--function", function_file, "input function JSON")->required();
    norms->add_option("--p", p_spec, "comma list of exponents");
    norms->add_option("--output", output, "output CSV path (default stdout)");

    CLI::App* ratio = app.add_subcommand("ratio", "norm ratio vs C_dp bound");
    wf.attach(ratio);
    ratio->add_option("--function", function_file, "input function JSON")->required();
    ratio->add_option("--p", p_spec, "comma list of exponents");
    ratio->add_option("--output", output, "output CSV path (default stdout)");

    CLI::App* witness = app.add_subcommand("witness",
                                           "product witness: pipeline vs closed-form norms");
    wf.attach(witness);
    witness->add_option("--d", d_spec, "dimension or range a..b")->required();
    witness->add_option("--p", p_spec, "comma list of exponents");
    witness->add_option("--output", output, "output CSV path (default stdout)");

    CLI::App* classify = app.add_subcommand("classify", "uniform/polynomial/divergent regime");
    wf.attach(classify);
    classify->add_option("--p", p_spec, "single exponent");
    classify->add_option("--dmax", d_max, "scan horizon");
    classify->add_option("--output", output, "output path (default stdout)");

    std::string verify_p_spec = "1,1.5,2,3,inf";
    CLI::App* verify = app.add_subcommand("verify", "round-trip and bound verification suite");
    wf.attach(verify);
    verify->add_option("--d", d_spec, "dimension");
    verify->add_option("--samples", samples, "random functions per suite");
    verify->add_option("--seed", seed, "RNG seed (all randomness flows from here)");
    verify->add_option("--p", verify_p_spec, "comma list of exponents");
    verify->add_option("--output", output, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (constants->parsed()) return run_constants(wf, d_spec, p_spec, output);
        if (decompose->parsed()) return run_decompose(function_file, output);
        if (norms->parsed()) return run_ratio(wf, function_file, p_spec, output);
        if (ratio->parsed()) return run_ratio(wf, function_file, p_spec, output);
        if (witness->parsed()) return run_witness(wf, d_spec, p_spec, output);
        if (classify->parsed()) return run_classify(wf, p_spec, d_max, output);
        if (verify->parsed()) {
            const std::vector<int> dims = parse_d_range(d_spec);
            if (dims.size() != 1) throw std::invalid_argument("verify takes a single --d");
            return run_verify(wf, dims[0], samples, seed, verify_p_spec, output);
        }
    } catch (const anchova::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
