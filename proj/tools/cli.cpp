#include "cli.hpp"

#include "stieltjes/errors.hpp"
#include "stieltjes/json_io.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/polynomial.hpp"
#include "stieltjes/sequence.hpp"
#include "stieltjes/transforms.hpp"
#include "stieltjes/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace smp {

using namespace stieltjes;
using io::Json;

namespace {

double parse_real(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("cannot parse complex number \"" + std::string(whole) + "\"");
    return v;
}

std::string trimmed(std::string_view s) {
    std::string out;
    for (const char c : s)
        if (c != ' ' && c != '\t') out.push_back(c);
    return out;
}

struct Options {
    std::string input;
    std::string output;
    std::optional<double> alpha;
    std::string grid;
    std::string param = "zero";
    std::optional<double> rank_tol;
    std::optional<double> psd_tol;
    std::optional<double> eq_tol;
    double ymax = 1e6;
    bool fixed_grid = false;
    std::optional<std::size_t> order;
    std::size_t k = 1;
    std::string format = "json";
};

Json read_json(const std::string& path) {
    if (path.empty()) throw SchemaError("--input is required for this command");
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw SchemaError("malformed JSON in " + path + ": " + e.what());
    }
}

ToleranceConfig tolerances(const Options& o) {
    ToleranceConfig cfg;
    if (o.rank_tol) cfg.rank_rel_tol = *o.rank_tol;
    if (o.psd_tol) cfg.psd_tol = *o.psd_tol;
    if (o.eq_tol) cfg.eq_tol = *o.eq_tol;
    cfg.validate();
    return cfg;
}

MomentSequence load_sequence(const Options& o) {
    // Reports of measure-moments can be fed back in directly.
    Json doc = read_json(o.input);
    if (doc.is_object() && doc.contains("moments")) doc = Json(doc["moments"]);
    MomentSequence s = io::sequence_from_json(doc);
    return o.alpha ? s.with_alpha(*o.alpha) : s;
}

std::vector<Complex> evaluation_grid(const Options& o, double alpha) {
    std::vector<Complex> grid = o.grid.empty() ? default_membership_grid(alpha) : parse_grid(o.grid);
    for (const Complex z : grid)
        if (z.imag() == 0.0 && z.real() >= alpha)
            throw InvalidArgument("grid point " + std::to_string(z.real()) + " lies on [alpha, inf)");
    return grid;
}

Json grid_json(const std::vector<Complex>& grid) {
    Json out = Json::array();
    for (const Complex z : grid) out.push_back(io::to_json(z));
    return out;
}

Json samples(const MatrixFunction& F, const std::vector<Complex>& grid) {
    Json out = Json::array();
    for (const Complex z : grid) out.push_back(Json{{"z", io::to_json(z)}, {"value", io::to_json(F(z))}});
    return out;
}

ParameterFunction load_parameter(const Options& o, const MomentSequence& seq, const ToleranceConfig& cfg) {
    if (o.param == "zero") return ParameterFunction::zero(seq.q());
    const auto [Q, scale] = last_parameter_entry(seq, cfg);
    return io::parameter_from_json(read_json(o.param), Q, scale, cfg);
}

RecoveryConfig recovery(const Options& o) {
    RecoveryConfig rc;
    if (!o.fixed_grid) {
        rc.y_grid = log_spaced(1e2, o.ymax, 5);
        rc.adaptive_grid = true;
    } else if (o.ymax != 1e6) {
        rc.y_grid = log_spaced(1e2, o.ymax, 5);
    }
    rc.validate();
    return rc;
}

double max_relative_residual(const MatrixFunction& F, const MatrixFunction& G, const std::vector<Complex>& grid) {
    double worst = 0.0;
    for (const Complex z : grid) {
        const CMatrix a = F(z);
        const double num = norm(G(z) - a);
        const double den = norm(a);
        worst = std::max(worst, den > 0.0 ? num / den : num);
    }
    return worst;
}

struct Outcome {
    Json report;
    int status = kOk;
};

Outcome cmd_check(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    return {Json{{"class", io::to_json(classify(seq, cfg))}, {"alpha", seq.alpha()}, {"kappa", seq.kappa()}}};
}

Outcome cmd_parametrize(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    const StieltjesParametrization direct = stieltjes_parametrization(seq, cfg);
    const StieltjesParametrization chain = stieltjes_parametrization_via_schur(seq, cfg);
    double gap = 0.0;
    for (std::size_t j = 0; j < direct.size(); ++j) {
        const double den = std::max(norm(direct[j]), direct.scales[j]);
        const double num = norm(direct[j] - chain[j]);
        gap = std::max(gap, num == 0.0 ? 0.0 : num / den);
    }
    return {Json{{"direct", io::to_json(direct)}, {"via_schur", io::to_json(chain)}, {"agreement_gap", gap}}};
}

Outcome cmd_transform(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    return {Json{{"k", o.k}, {"transformed", io::to_json(kth_schur_transform(seq, o.k, cfg))}}};
}

Outcome cmd_inverse_transform(const Options& o, const ToleranceConfig& cfg) {
    const Json doc = read_json(o.input);
    const MomentSequence t = io::sequence_from_json(doc);
    if (!doc.contains("A")) throw SchemaError("inverse-transform input needs \"A\"");
    const CMatrix A = io::matrix_from_json(doc["A"]);
    const double alpha = o.alpha ? *o.alpha : t.alpha();
    return {Json{{"reconstructed", io::to_json(inverse_schur_transform(t.entries(), A, alpha, cfg))}}};
}

Outcome cmd_solve(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    const std::vector<Complex> grid = evaluation_grid(o, seq.alpha());
    const SolutionFunction F = solution_from_parameter(seq, load_parameter(o, seq, cfg), cfg);
    return {Json{{"resolvent", io::to_json(F.resolvent())},
                 {"parameter", io::to_json(F.parameter())},
                 {"grid", grid_json(grid)},
                 {"samples", samples(F.as_function(), grid)}}};
}

Outcome cmd_unique(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    const std::vector<Complex> grid = evaluation_grid(o, seq.alpha());
    const SolutionFunction F = unique_solution(seq, cfg);
    return {Json{{"resolvent", io::to_json(F.resolvent())}, {"grid", grid_json(grid)},
                 {"samples", samples(F.as_function(), grid)}}};
}

Outcome cmd_verify(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    const SolutionFunction F = solution_from_parameter(seq, load_parameter(o, seq, cfg), cfg);
    const MomentSequence target = o.order ? seq.truncated(std::min(*o.order, seq.kappa())) : seq;
    const RecoveryConfig rc = recovery(o);
    const VerificationReport rep = validate_solution(target, F.as_function(), rc, cfg);
    return {Json{{"verification", io::to_json(rep)},
                 {"recovery", io::to_json(rc)},
                 {"parameter", io::to_json(F.parameter())},
                 {"grid", grid_json(default_membership_grid(seq.alpha()))}},
            rep.passed ? kOk : kValidationFailure};
}

Outcome cmd_measure_moments(const Options& o, const ToleranceConfig& cfg) {
    Json doc = read_json(o.input);
    if (o.alpha) doc["alpha"] = *o.alpha;
    const DiscreteMeasure mu = io::measure_from_json(doc, cfg);
    const std::size_t m = o.order.value_or(2);
    Json out{{"moments", io::to_json(moments(mu, m))}};
    if (!o.grid.empty()) {
        const std::vector<Complex> grid = evaluation_grid(o, mu.alpha());
        out["grid"] = grid_json(grid);
        out["transform_samples"] = samples(stieltjes_transform(mu, cfg), grid);
    }
    return {out};
}

Outcome cmd_round_trip(const Options& o, const ToleranceConfig& cfg) {
    const MomentSequence seq = load_sequence(o);
    const double tol = 1e-8;
    Json out;
    bool passed = true;
    if (seq.kappa() >= 1) {
        const MomentSequence t = schur_transform(seq, cfg);
        const MomentSequence back = inverse_schur_transform(t.entries(), seq[0], seq.alpha(), cfg);
        const double gap = relative_gap(back.entries(), seq.entries(), seq);
        out["sequence_residual"] = gap;
        passed = passed && gap <= tol;
    } else {
        out["sequence_residual"] = nullptr;
    }
    const std::vector<Complex> grid = evaluation_grid(o, seq.alpha());
    const MatrixFunction F = solution_from_parameter(seq, load_parameter(o, seq, cfg), cfg).as_function();
    const MatrixFunction G = schur_stieltjes(F, seq[0], seq.alpha(), cfg);
    const double forward = max_relative_residual(F, inverse_schur_stieltjes(G, seq[0], seq.alpha(), cfg), grid);
    const double reverse = max_relative_residual(G, schur_stieltjes(inverse_schur_stieltjes(G, seq[0], seq.alpha(), cfg),
                                                                    seq[0], seq.alpha(), cfg),
                                                 grid);
    out["function_residual"] = Json{{"inverse_after_forward", forward}, {"forward_after_inverse", reverse}};
    out["grid"] = grid_json(grid);
    out["tolerance"] = tol;
    passed = passed && forward <= tol && reverse <= tol;
    out["passed"] = passed;
    return {out, passed ? kOk : kValidationFailure};
}

void flatten(const Json& j, const std::string& path, std::ostream& os) {
    const bool leaf_array = j.is_array() && std::none_of(j.begin(), j.end(), [](const Json& e) {
                                return e.is_object() || (e.is_array() && !e.empty() && e[0].is_array());
                            });
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array() && !leaf_array) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << path << ": " << j.dump() << '\n';
    }
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--input", o.input, "input JSON file");
    sub->add_option("--output", o.output, "report file (default: standard output)");
    sub->add_option("--alpha", o.alpha, "override the left end of the interval");
    sub->add_option("--grid", o.grid, "comma separated evaluation points such as \"1+2i,-1\"");
    sub->add_option("--param", o.param, "parameter: zero or a JSON file");
    sub->add_option("--rank-tol", o.rank_tol, "relative singular value cutoff");
    sub->add_option("--psd-tol", o.psd_tol, "PSD eigenvalue tolerance");
    sub->add_option("--eq-tol", o.eq_tol, "equality tolerance");
    sub->add_option("--ymax", o.ymax, "largest ordinate for moment recovery");
    sub->add_flag("--fixed-grid", o.fixed_grid, "recover moments on the fixed log-spaced grid");
    sub->add_option("--order", o.order, "moment order m");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

Complex parse_complex(std::string_view text) {
    const std::string s = trimmed(text);
    if (s.empty()) throw InvalidArgument("empty complex number");
    const char last = s.back();
    if (last != 'i' && last != 'j') return {parse_real(s, text), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not the sign of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

std::vector<Complex> parse_grid(std::string_view text) {
    std::vector<Complex> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        out.push_back(parse_complex(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Truncated matricial Stieltjes moment problem toolkit", "smp"};
    app.require_subcommand(1);
    Options o;

    using Handler = Outcome (*)(const Options&, const ToleranceConfig&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"check", "classify a moment sequence", cmd_check},
        {"parametrize", "Stieltjes parametrization by both routes", cmd_parametrize},
        {"transform", "k-th Schur transform", cmd_transform},
        {"inverse-transform", "reconstruct a sequence from its Schur transform and A", cmd_inverse_transform},
        {"solve", "solution for a parameter, sampled on the grid", cmd_solve},
        {"unique", "unique solution of a completely degenerate sequence", cmd_unique},
        {"verify", "moment recovery and membership check of a solution", cmd_verify},
        {"measure-moments", "moments of a discrete measure", cmd_measure_moments},
        {"round-trip", "sequence and function round-trip residuals", cmd_round_trip},
    };
    std::vector<std::pair<CLI::App*, Handler>> subs;
    for (const auto& [name, help, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        if (name == "transform") sub->add_option("k", o.k, "number of transform steps")->required();
        subs.emplace_back(sub, handler);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        const ToleranceConfig cfg = tolerances(o);
        Outcome result;
        std::string name;
        for (const auto& [sub, handler] : subs) {
            if (sub->parsed()) {
                result = handler(o, cfg);
                name = sub->get_name();
            }
        }
        result.report["command"] = name;
        result.report["tolerances"] = io::to_json(cfg);

        std::ostringstream text;
        if (o.format == "text") {
            flatten(result.report, "", text);
        } else {
            text << result.report.dump(2) << '\n';
        }
        if (o.output.empty()) {
            out << text.str();
        } else {
            std::ofstream file(o.output);
            if (!file || !(file << text.str())) throw SchemaError("cannot write output file " + o.output);
        }
        return result.status;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const Error& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace smp
