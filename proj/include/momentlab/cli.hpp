#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: argument parsing into a CommandPlan and
 *        dispatch of a plan to the library.
 *
 * Exit codes: 0 success, 1 not-pm under --expect-pm, 2 usage error, 3 module error.
 */

#include "momentlab/closure.hpp"
#include "momentlab/diffeq.hpp"
#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/measures.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/polynomial.hpp"
#include "momentlab/scalar_json.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotPm = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitModule = 3;

/// Bad command line. `code` is 0 for --help, whose text is the message.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what, int code = kExitUsage) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

enum class Format { json, csv };

struct CommandPlan {
    std::string subcommand;

    int precision = kDefaultPrecision;
    std::optional<std::size_t> count;
    std::optional<std::size_t> max_order;
    std::optional<std::string> tolerance;
    Format format = Format::json;
    std::optional<std::string> output;
    std::optional<int> digits;
    bool expect_pm = false;
    unsigned threads = 1;

    // sequence or measure inputs
    std::optional<std::string> family;
    std::optional<std::string> measure;
    std::optional<std::string> spec;
    std::vector<std::string> params;
    std::optional<std::string> atoms;
    std::optional<std::string> input;
    std::optional<std::string> values;
    std::optional<std::string> input_b;
    std::optional<std::string> values_b;

    // divided / sweep
    std::optional<std::string> poly;
    std::optional<std::size_t> index;
    std::vector<std::string> deltas;

    // closure
    std::optional<std::string> op;
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    std::optional<std::string> chi;
    std::optional<std::string> mode;
    std::optional<std::size_t> k;
    std::optional<std::size_t> n;

    // solve
    std::optional<std::string> equation;
    std::optional<std::string> coeffs;
    std::optional<std::string> initial;
    std::optional<std::string> forcing;

    // inequalities / corollary
    bool nonneg_support = false;
    std::string range = "-50,50";
    std::size_t samples = 4001;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline int count_set(std::initializer_list<bool> flags) {
    int n = 0;
    for (bool f : flags) n += f ? 1 : 0;
    return n;
}

}  // namespace detail

/// Parses argv (without the program name) into a validated plan.
inline CommandPlan parse(const std::vector<std::string>& args) {
    CommandPlan plan;
    CLI::App app{"momentlab: moment sequences, Hankel determinants and difference equations", "momentlab"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string format = "json";
    app.add_option("--precision", plan.precision, "Working precision in decimal digits (>= 10)")
        ->envname("MOMENTLAB_PRECISION")
        ->check(CLI::Range(kMinPrecision, 100000));
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output,-o", plan.output, "Write output to a file instead of stdout");
    app.add_option("--digits", plan.digits, "Round displayed reals to this many significant digits")->check(CLI::Range(1, 100000));
    app.add_flag("--expect-pm", plan.expect_pm, "Exit 1 when the pm verdict is not-pm");
    app.add_option("--threads", plan.threads, "Worker threads for determinants and sweeps")->check(CLI::Range(1u, 1024u));

    auto add_count = [&](CLI::App* s) { s->add_option("--count", plan.count, "Number of entries")->check(CLI::Range(1ul, 1000000ul)); };
    auto add_order = [&](CLI::App* s) {
        s->add_option("--max-order", plan.max_order, "Largest Hankel order (default: all available)");
        s->add_option("--tolerance", plan.tolerance, "Absolute zero threshold for determinants");
    };
    auto add_generator = [&](CLI::App* s) {
        s->add_option("--family", plan.family, "Sequence family name");
        s->add_option("--measure", plan.measure, "Measure name");
        s->add_option("--spec", plan.spec, "Family or measure spec as JSON (inline, file, or -)");
        s->add_option("--param", plan.params, "Spec parameter key=value (repeatable)");
        s->add_option("--atoms", plan.atoms, "finite-atomic atoms as location:weight,...");
    };
    auto add_sequence = [&](CLI::App* s) {
        s->add_option("--input", plan.input, "Sequence JSON (inline, file path, or - for stdin)");
        s->add_option("--values", plan.values, "Comma-separated sequence values");
        add_generator(s);
        add_count(s);
    };

    auto* gen = app.add_subcommand("gen", "Generate a family or measure moment sequence");
    add_generator(gen);
    add_count(gen);

    auto* hk = app.add_subcommand("hankel", "Hankel transform of a sequence");
    add_sequence(hk);
    add_order(hk);

    auto* pm = app.add_subcommand("check-pm", "Hankel positivity report");
    add_sequence(pm);
    add_order(pm);

    auto* ineq = app.add_subcommand("inequalities", "Classical moment inequalities");
    add_sequence(ineq);
    ineq->add_flag("--nonneg-support", plan.nonneg_support, "Also check the [0, inf) support inequalities");

    auto* cl = app.add_subcommand("closure", "Apply a closure operation");
    cl->add_option("--op", plan.op, "combine-linear | hausdorff-convolve | average-convolution | product | subsample | "
                                    "even-embed | shift | degenerate | weights")
        ->required();
    add_sequence(cl);
    cl->add_option("--input-b", plan.input_b, "Second operand JSON");
    cl->add_option("--values-b", plan.values_b, "Second operand values");
    cl->add_option("--alpha", plan.alpha, "alpha >= 0");
    cl->add_option("--beta", plan.beta, "beta >= 0");
    cl->add_option("--chi", plan.chi, "uniform01 | point-mass:THETA | beta-one:BETA | JSON");
    cl->add_option("--mode", plan.mode, "even-embed mode: zero-odd | square-root");
    cl->add_option("--k", plan.k, "subsample step or shift amount");
    cl->add_option("--n", plan.n, "Hausdorff weights order");
    cl->add_option("--tolerance", plan.tolerance, "degenerate tolerance");

    auto* sv = app.add_subcommand("solve", "Solve a difference equation forward");
    sv->add_option("--equation", plan.equation, "Equation JSON (inline, file, or -)");
    sv->add_option("--coeffs", plan.coeffs, "d_0,...,d_m");
    sv->add_option("--initial", plan.initial, "r_0,...,r_{m-1}");
    sv->add_option("--forcing", plan.forcing, "zero | comma-separated values | source JSON");
    add_count(sv);
    add_order(sv);

    auto add_divided = [&](CLI::App* s) {
        s->add_option("--measure", plan.measure, "Measure name");
        s->add_option("--spec", plan.spec, "Measure spec JSON");
        s->add_option("--param", plan.params, "Measure parameter key=value (repeatable)");
        s->add_option("--atoms", plan.atoms, "finite-atomic atoms as location:weight,...");
        s->add_option("--poly", plan.poly, "Divisor coefficients, constant first")->required();
        add_count(s);
        add_order(s);
    };
    auto* dv = app.add_subcommand("divided", "Moments of dA/P by forward recurrence");
    add_divided(dv);

    auto* sw = app.add_subcommand("sweep", "Perturb one initial condition and report Hankel outcomes");
    add_divided(sw);
    sw->add_option("--index", plan.index, "Initial condition to perturb")->required();
    sw->add_option("--delta", plan.deltas, "Perturbation (repeatable, comma-separated)")->required()->delimiter(',');

    auto* co = app.add_subcommand("corollary", "Minimum of sum_{j<=2n} a_j x^j / j!");
    add_sequence(co);
    co->add_option("--n", plan.n, "Half degree n")->required();
    co->add_option("--range", plan.range, "lo,hi");
    co->add_option("--samples", plan.samples, "Grid points")->check(CLI::Range(2ul, 100000000ul));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), kExitOk);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), kExitOk);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    plan.subcommand = app.get_subcommands().front()->get_name();
    plan.format = format == "csv" ? Format::csv : Format::json;

    const auto& s = plan.subcommand;
    const int generators = detail::count_set({plan.family.has_value(), plan.measure.has_value(), plan.spec.has_value()});
    if (generators > 1) throw UsageError("--family, --measure and --spec are mutually exclusive");
    if (!plan.params.empty() && generators == 0) throw UsageError("--param needs --family or --measure");
    for (const auto& p : plan.params) {
        if (p.find('=') == std::string::npos) throw UsageError("--param expects key=value, got '" + p + "'");
    }
    if (s == "gen") {
        if (generators != 1) throw UsageError("gen needs one of --family, --measure or --spec");
        if (!plan.count) throw UsageError("gen needs --count");
    }
    if (s == "hankel" || s == "check-pm" || s == "inequalities" || s == "corollary" || s == "closure") {
        const int sources = detail::count_set({plan.input.has_value(), plan.values.has_value(), generators > 0});
        if (s == "closure" && (*plan.op == "weights")) {
            if (sources != 0) throw UsageError("closure --op weights takes no sequence input");
        } else if (sources != 1) {
            throw UsageError("exactly one of --input, --values or a generator (--family/--measure/--spec) is required");
        }
        if (generators > 0 && !plan.count) throw UsageError("a generated sequence needs --count");
    }
    if (s == "closure" && plan.input_b && plan.values_b) throw UsageError("--input-b and --values-b are mutually exclusive");
    if (s == "solve") {
        if (plan.equation && (plan.coeffs || plan.initial || plan.forcing)) {
            throw UsageError("--equation conflicts with --coeffs/--initial/--forcing");
        }
        if (!plan.equation && !(plan.coeffs && plan.initial)) throw UsageError("solve needs --equation or --coeffs with --initial");
        if (!plan.count) throw UsageError("solve needs --count");
    }
    if (s == "divided" || s == "sweep") {
        if (detail::count_set({plan.measure.has_value(), plan.spec.has_value()}) != 1) {
            throw UsageError(s + " needs one of --measure or --spec");
        }
    }
    if (plan.atoms && (!plan.measure || *plan.measure != "finite-atomic")) throw UsageError("--atoms needs --measure finite-atomic");
    return plan;
}

inline CommandPlan parse(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse(args);
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

inline std::string read_stream(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// "-" reads stdin, text starting with '[' or '{' is inline JSON, anything else is a file path.
inline nlohmann::json load_json(const std::string& arg, std::istream& in) {
    std::string text;
    std::size_t first = arg.find_first_not_of(" \t\r\n");
    if (arg == "-") {
        text = read_stream(in);
    } else if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{' || arg[first] == '"')) {
        text = arg;
    } else {
        std::ifstream f(arg);
        if (!f) throw std::runtime_error("cannot read '" + arg + "'");
        text = read_stream(f);
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("invalid JSON: ") + e.what());
    }
}

inline std::vector<Scalar> parse_list(const std::string& text, int digits) {
    std::vector<Scalar> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        out.push_back(numerics::scalar_from_string(part, digits));
    }
    return out;
}

inline nlohmann::json params_json(const CommandPlan& plan) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& p : plan.params) {
        auto eq = p.find('=');
        params[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (plan.atoms) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : split(*plan.atoms, ',')) {
            auto colon = a.find(':');
            if (colon == std::string::npos) atoms.push_back({{"location", a}});
            else atoms.push_back({{"location", a.substr(0, colon)}, {"weight", a.substr(colon + 1)}});
        }
        params["atoms"] = atoms;
    }
    return params;
}

inline bool is_measure_name(const std::string& v) {
    static const std::vector<std::string> names{"finite-atomic", "uniform",    "uniform01",  "exponential", "gaussian",
                                                "gamma",         "beta",       "catalan-arc", "log-weight", "poisson"};
    return std::find(names.begin(), names.end(), v) != names.end();
}

inline measures::MeasureSpec measure_of(const CommandPlan& plan, std::istream& in) {
    if (plan.spec) return measures::measure_from_json(load_json(*plan.spec, in), plan.precision);
    return measures::measure_from_json({{"variant", *plan.measure}, {"params", params_json(plan)}}, plan.precision);
}

inline MomentSequence generate(const CommandPlan& plan, std::istream& in) {
    const std::size_t count = *plan.count;
    if (plan.family) {
        auto spec = sequences::family_from_json({{"variant", *plan.family}, {"params", params_json(plan)}}, plan.precision);
        return sequences::family_sequence(spec, count, plan.precision);
    }
    if (plan.measure) return measures::moment_sequence(measure_of(plan, in), count, plan.precision);
    nlohmann::json j = load_json(*plan.spec, in);
    if (is_measure_name(j.at("variant").get<std::string>())) {
        return measures::moment_sequence(measures::measure_from_json(j, plan.precision), count, plan.precision);
    }
    return sequences::family_sequence(sequences::family_from_json(j, plan.precision), count, plan.precision);
}

inline MomentSequence sequence_of(const CommandPlan& plan, std::istream& in) {
    if (plan.input) return sequence_from_json(load_json(*plan.input, in), plan.precision);
    if (plan.values) return MomentSequence(parse_list(*plan.values, plan.precision), {{"source", "values"}});
    return generate(plan, in);
}

inline std::optional<Scalar> tolerance_of(const CommandPlan& plan) {
    if (!plan.tolerance) return std::nullopt;
    return numerics::scalar_from_string(*plan.tolerance, plan.precision);
}

inline Polynomial poly_of(const CommandPlan& plan) { return Polynomial(parse_list(*plan.poly, plan.precision)); }

inline diffeq::SequenceSource forcing_of(const CommandPlan& plan, std::istream& in) {
    if (!plan.forcing || *plan.forcing == "zero") return diffeq::ZeroSource{};
    const std::string& f = *plan.forcing;
    std::size_t first = f.find_first_not_of(" \t");
    if (first != std::string::npos && f[first] == '{') return diffeq::source_from_json(load_json(f, in), plan.precision);
    if (f == "-" || std::filesystem::exists(f)) return diffeq::source_from_json(load_json(f, in), plan.precision);
    return diffeq::ExplicitSource{MomentSequence(parse_list(f, plan.precision))};
}

inline closure::ChiSpec chi_of(const CommandPlan& plan, std::istream& in) {
    if (!plan.chi) return closure::Uniform01{};
    const std::string& c = *plan.chi;
    if (c.find('{') != std::string::npos) return closure::chi_from_json(load_json(c, in), plan.precision);
    auto colon = c.find(':');
    std::string name = c.substr(0, colon);
    nlohmann::json params = nlohmann::json::object();
    if (colon != std::string::npos) params[name == "point-mass" ? "theta" : "beta"] = c.substr(colon + 1);
    return closure::chi_from_json({{"variant", name}, {"params", params}}, plan.precision);
}

/// Re-renders every full-precision real string in a JSON tree at `digits` significant digits.
inline void round_reals(nlohmann::json& j, int digits, int precision) {
    static const std::regex real_re(R"(^-?\d(\.\d+)?e[+-]\d+$)");
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (std::regex_match(s, real_re)) j = Real::parse(s, std::max(precision, numerics::mantissa_digits(s))).to_string(digits);
    } else if (j.is_array() || j.is_object()) {
        for (auto& child : j) round_reals(child, digits, precision);
    }
}

class Emitter {
public:
    explicit Emitter(const CommandPlan& plan) : plan_(plan) {}

    std::string cell(const Scalar& s) const {
        if (plan_.digits && s.is_real()) return s.real().to_string(*plan_.digits);
        return diffeq::csv_cell(s);
    }

    std::string json(nlohmann::json j) const {
        if (plan_.digits) round_reals(j, *plan_.digits, plan_.precision);
        return j.dump(2) + "\n";
    }

    std::string sequence_csv(const MomentSequence& seq) const {
        std::ostringstream out;
        out << "n,value\n";
        for (std::size_t i = 0; i < seq.size(); ++i) out << seq.offset() + i << ',' << cell(seq[i]) << '\n';
        return out.str();
    }

    std::string dets_csv(const std::vector<Scalar>& dets, const std::vector<Scalar>* thresholds = nullptr) const {
        std::ostringstream out;
        out << (thresholds ? "order,det,threshold\n" : "order,det\n");
        for (std::size_t n = 0; n < dets.size(); ++n) {
            out << n << ',' << cell(dets[n]);
            if (thresholds) out << ',' << cell((*thresholds)[n]);
            out << '\n';
        }
        return out.str();
    }

    std::string sequence(const MomentSequence& seq) const {
        return plan_.format == Format::csv ? sequence_csv(seq) : json(sequence_to_json(seq));
    }

private:
    const CommandPlan& plan_;
};

struct Result {
    std::string text;
    int code = kExitOk;
};

inline int pm_exit(const CommandPlan& plan, const hankel::HankelReport& r) {
    return plan.expect_pm && r.verdict == hankel::Verdict::not_pm ? kExitNotPm : kExitOk;
}

inline Result run_closure(const CommandPlan& plan, const Emitter& em, std::istream& in) {
    const std::string& op = *plan.op;
    const int p = plan.precision;
    if (op == "weights") {
        closure::HausdorffWeights w = closure::hausdorff_weights(chi_of(plan, in), plan.n.value_or(0));
        if (plan.format == Format::csv) {
            std::ostringstream out;
            out << "i,h\n";
            for (std::size_t i = 0; i < w.h.size(); ++i) out << i << ',' << em.cell(w.h[i]) << '\n';
            return {out.str()};
        }
        return {em.json({{"n", w.n}, {"h", numerics::scalars_to_json(w.h)}})};
    }
    MomentSequence a = sequence_of(plan, in);
    auto operand_b = [&]() {
        if (plan.input_b) return sequence_from_json(load_json(*plan.input_b, in), p);
        if (plan.values_b) return MomentSequence(parse_list(*plan.values_b, p), {{"source", "values"}});
        throw std::invalid_argument("closure --op " + op + " needs a second operand (--input-b or --values-b)");
    };
    auto scalar = [&](const std::optional<std::string>& v, long fallback) {
        return v ? numerics::scalar_from_string(*v, p) : Scalar(fallback);
    };
    MomentSequence out;
    if (op == "combine-linear") {
        out = closure::combine_linear(a, operand_b(), scalar(plan.alpha, 1), scalar(plan.beta, 1));
    } else if (op == "hausdorff-convolve") {
        out = closure::hausdorff_convolve(a, operand_b(), scalar(plan.alpha, 1), scalar(plan.beta, 1), chi_of(plan, in));
    } else if (op == "average-convolution") {
        out = closure::average_convolution(a, operand_b());
    } else if (op == "product") {
        out = closure::pointwise_product(a, operand_b());
    } else if (op == "subsample") {
        out = closure::subsample(a, plan.k.value_or(2));
    } else if (op == "even-embed") {
        out = closure::even_embed(a, closure::embed_mode_from_string(plan.mode.value_or("zero-odd")));
    } else if (op == "shift") {
        out = closure::shift(a, plan.k.value_or(2));
    } else if (op == "degenerate") {
        Scalar tol = plan.tolerance ? numerics::scalar_from_string(*plan.tolerance, p)
                                    : hankel::default_base_threshold(a);
        auto r = closure::degenerate_diagnose(a, tol);
        return {em.json(closure::degenerate_to_json(r))};
    } else {
        throw std::invalid_argument("unknown closure op '" + op + "'");
    }
    return {em.sequence(out)};
}

inline Result dispatch(const CommandPlan& plan, std::istream& in) {
    const Emitter em(plan);
    const std::string& s = plan.subcommand;
    const int p = plan.precision;
    const bool csv = plan.format == Format::csv;

    if (s == "gen") return {em.sequence(generate(plan, in))};

    if (s == "hankel" || s == "check-pm") {
        MomentSequence seq = sequence_of(plan, in);
        auto report = hankel::check_pm(seq, plan.max_order, tolerance_of(plan), plan.threads);
        if (s == "hankel") {
            if (csv) return {em.dets_csv(report.dets)};
            return {em.json({{"dets", numerics::scalars_to_json(report.dets)}, {"max_order", report.max_order}})};
        }
        return {csv ? em.dets_csv(report.dets, &report.thresholds) : em.json(hankel::report_to_json(report)), pm_exit(plan, report)};
    }

    if (s == "inequalities") {
        MomentSequence seq = sequence_of(plan, in);
        auto v = hankel::moment_inequality_report(seq, plan.nonneg_support);
        if (csv) {
            std::ostringstream out;
            out << "inequality,indices,detail\n";
            for (const auto& x : v) {
                out << x.inequality << ',';
                for (std::size_t i = 0; i < x.indices.size(); ++i) out << (i ? ";" : "") << x.indices[i];
                out << ",\"" << x.detail << "\"\n";
            }
            return {out.str()};
        }
        return {em.json({{"violations", hankel::violations_to_json(v)}, {"holds", v.empty()}})};
    }

    if (s == "closure") return run_closure(plan, em, in);

    if (s == "solve") {
        diffeq::DifferenceEquation eq =
            plan.equation ? diffeq::equation_from_json(load_json(*plan.equation, in), p)
                          : diffeq::DifferenceEquation(parse_list(*plan.coeffs, p), forcing_of(plan, in), parse_list(*plan.initial, p));
        MomentSequence seq = diffeq::solve(eq, *plan.count, p);
        if (csv) return {em.sequence_csv(seq)};
        nlohmann::json j = {{"sequence", sequence_to_json(seq)}};
        int code = kExitOk;
        if (seq.size() >= 1) {
            auto report = hankel::check_pm(seq, plan.max_order, tolerance_of(plan), plan.threads);
            j["hankel"] = hankel::report_to_json(report);
            code = pm_exit(plan, report);
        }
        return {em.json(j), code};
    }

    if (s == "divided") {
        diffeq::DividedOptions opt{p, plan.max_order, tolerance_of(plan), plan.threads};
        auto r = diffeq::divided_measure_moments(measure_of(plan, in), poly_of(plan), plan.count.value_or(12), opt);
        return {csv ? em.dets_csv(r.report.dets, &r.report.thresholds) : em.json(diffeq::divided_to_json(r)), pm_exit(plan, r.report)};
    }

    if (s == "sweep") {
        const std::size_t count = plan.count.value_or(13);
        const std::size_t max_order = plan.max_order.value_or((count - 1) / 2);
        std::vector<Scalar> deltas;
        for (const auto& d : plan.deltas) deltas.push_back(numerics::scalar_from_string(d, p));
        diffeq::DividedOptions opt{p, std::nullopt, tolerance_of(plan), plan.threads};
        auto rows = diffeq::sensitivity_sweep(measure_of(plan, in), poly_of(plan), *plan.index, deltas, count, max_order, opt);
        if (!csv) return {em.json(diffeq::sweep_to_json(rows))};
        std::ostringstream out;
        out << "delta,first_negative_index";
        for (std::size_t n = 0; n <= max_order; ++n) out << ",det_" << n;
        out << '\n';
        for (const auto& r : rows) {
            out << em.cell(r.delta) << ',';
            if (r.first_negative_index) out << *r.first_negative_index;
            for (const auto& d : r.dets) out << ',' << em.cell(d);
            out << '\n';
        }
        return {out.str()};
    }

    if (s == "corollary") {
        MomentSequence seq = sequence_of(plan, in);
        auto bounds = split(plan.range, ',');
        if (bounds.size() != 2) throw std::invalid_argument("--range expects lo,hi");
        auto r = closure::exp_partial_sum_check(seq, *plan.n, numerics::scalar_from_string(bounds[0], p),
                                                numerics::scalar_from_string(bounds[1], p), plan.samples, p);
        if (csv) {
            std::ostringstream out;
            out << "minimum,argmin,nonnegative\n"
                << em.cell(Scalar(r.minimum)) << ',' << em.cell(Scalar(r.argmin)) << ',' << (r.nonnegative ? "true" : "false") << '\n';
            return {out.str()};
        }
        return {em.json(closure::partial_sum_to_json(r))};
    }
    throw std::invalid_argument("unknown subcommand '" + s + "'");
}

}  // namespace detail

/// Executes a plan; module failures become exit 3 with a one-line diagnostic on `err`.
inline int run(const CommandPlan& plan, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
    detail::Result r;
    try {
        r = detail::dispatch(plan, in);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& c : msg) {
            if (c == '\n') c = ' ';
        }
        err << "momentlab " << plan.subcommand << ": error: " << msg << '\n';
        return kExitModule;
    }
    if (plan.output) {
        std::ofstream f(*plan.output, std::ios::binary);
        if (!f || !(f << r.text)) {
            err << "momentlab " << plan.subcommand << ": error: cannot write '" << *plan.output << "'\n";
            return kExitModule;
        }
    } else {
        out << r.text;
    }
    return r.code;
}

/// parse + run with usage errors mapped to exit 2.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                std::istream& in = std::cin) {
    CommandPlan plan;
    try {
        plan = parse(argc, argv);
    } catch (const UsageError& e) {
        (e.code() == kExitOk ? out : err) << e.what() << (e.code() == kExitOk ? "" : "\nRun with --help for usage.\n");
        return e.code();
    }
    return run(plan, out, err, in);
}

}  // namespace momentlab::cli
