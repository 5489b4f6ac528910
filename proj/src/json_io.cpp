#include "stieltjes/json_io.hpp"

#include "stieltjes/errors.hpp"

#include <cmath>
#include <string>

namespace stieltjes::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw SchemaError(std::string("expected an object holding \"") + key + "\"");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(std::string(what) + " must be finite");
    return v;
}

Eigen::Index count(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(std::string(what) + " must be a nonnegative integer");
    return static_cast<Eigen::Index>(j.get<long long>());
}

Json list(const std::vector<CMatrix>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
}

Json real_list(const std::vector<double>& xs) {
    Json out = Json::array();
    for (const double x : xs) out.push_back(x);
    return out;
}

template <class F>
auto rethrow_as_schema(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw SchemaError(e.what());
    }
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {number(j, "complex entry"), 0.0};
    if (!j.is_array() || j.size() != 2) throw SchemaError("complex numbers must be [re, im]");
    return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

Json to_json(const CMatrix& A) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(to_json(A(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw SchemaError("matrices must be arrays of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return CMatrix(0, 0);
    if (!j[0].is_array()) throw SchemaError("matrix rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw SchemaError("matrix rows differ in length");
        for (Eigen::Index k = 0; k < cols; ++k) A(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return A;
}

Json to_json(const MomentSequence& s) {
    return Json{{"alpha", s.alpha()}, {"q", s.q()}, {"matrices", list(s.entries())}};
}

MomentSequence sequence_from_json(const Json& j) {
    const double alpha = number(field(j, "alpha"), "alpha");
    const Json& ms = field(j, "matrices");
    if (!ms.is_array() || ms.empty()) throw SchemaError("\"matrices\" must be a nonempty array");
    std::vector<CMatrix> entries;
    for (const auto& m : ms) entries.push_back(matrix_from_json(m));
    if (j.contains("q")) {
        const Eigen::Index q = count(j["q"], "q");
        for (const auto& e : entries)
            if (e.rows() != q || e.cols() != q) throw SchemaError("matrix size does not match \"q\"");
    }
    return rethrow_as_schema([&] { return MomentSequence(alpha, std::move(entries)); });
}

Json to_json(const DiscreteMeasure& mu) {
    Json atoms = Json::array();
    for (const auto& a : mu.atoms()) atoms.push_back(Json{{"t", a.t}, {"weight", to_json(a.weight)}});
    return Json{{"alpha", mu.alpha()}, {"q", mu.q()}, {"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const Json& j, const ToleranceConfig& cfg) {
    const double alpha = number(field(j, "alpha"), "alpha");
    const Json& as = field(j, "atoms");
    if (!as.is_array()) throw SchemaError("\"atoms\" must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : as) atoms.push_back({number(field(a, "t"), "atom position"), matrix_from_json(field(a, "weight"))});
    Eigen::Index q = 0;
    if (j.contains("q")) {
        q = count(j["q"], "q");
    } else if (!atoms.empty()) {
        q = atoms.front().weight.rows();
    } else {
        throw SchemaError("a measure without atoms needs \"q\"");
    }
    return rethrow_as_schema([&] { return DiscreteMeasure(alpha, q, std::move(atoms), cfg); });
}

Json to_json(const StieltjesFunctionRep& rep) {
    return Json{{"gamma", to_json(rep.gamma)}, {"measure", to_json(rep.measure)}};
}

Json to_json(const MatrixPolynomial& p) {
    return Json{{"q", p.q()}, {"alpha", p.alpha()}, {"coeffs", list(p.coeffs())}};
}

MatrixPolynomial polynomial_from_json(const Json& j) {
    const double alpha = number(field(j, "alpha"), "alpha");
    const Eigen::Index q = count(field(j, "q"), "q");
    const Json& cs = field(j, "coeffs");
    if (!cs.is_array()) throw SchemaError("\"coeffs\" must be an array");
    std::vector<CMatrix> coeffs;
    for (const auto& c : cs) {
        coeffs.push_back(matrix_from_json(c));
        if (coeffs.back().rows() != 2 * q || coeffs.back().cols() != 2 * q) throw SchemaError("coefficients must be 2q x 2q");
    }
    return rethrow_as_schema([&] { return MatrixPolynomial(alpha, std::move(coeffs)); });
}

Json to_json(const ParameterFunction& p) {
    Json out{{"kind", p.kind_name()}, {"q", p.q()}};
    if (const auto* d = std::get_if<ParameterFunction::Direct>(&p.kind())) {
        out["measure"] = to_json(d->rep.measure);
    } else if (const auto* l = std::get_if<ParameterFunction::LowDim>(&p.kind())) {
        out["U"] = to_json(l->U);
        out["measure"] = to_json(l->f.measure);
        out["gamma"] = to_json(l->f.gamma);
    }
    return out;
}

ParameterFunction parameter_from_json(const Json& j, const CMatrix& Q_last, double reference_scale,
                                      const ToleranceConfig& cfg) {
    if (!j.is_object()) throw SchemaError("parameter must be an object");
    // A bare measure document is read as a direct parameter when it has the
    // full size, and as a low-dimensional one otherwise.
    std::string kind;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) throw SchemaError("\"kind\" must be a string");
        kind = j["kind"].get<std::string>();
    } else {
        kind = "measure";
    }
    return rethrow_as_schema([&]() -> ParameterFunction {
        if (kind == "zero") return ParameterFunction::zero(Q_last.rows());
        const DiscreteMeasure mu = measure_from_json(kind == "measure" ? j : field(j, "measure"), cfg);
        CMatrix gamma = CMatrix::Zero(mu.q(), mu.q());
        if (j.contains("gamma")) gamma = matrix_from_json(j["gamma"]);
        StieltjesFunctionRep rep(gamma, mu, cfg);
        if (kind == "measure") kind = mu.q() == Q_last.rows() ? "direct" : "low_dim";
        if (kind == "direct") return ParameterFunction::direct(std::move(rep));
        if (kind == "low_dim") {
            if (j.contains("U")) return ParameterFunction::low_dim(matrix_from_json(j["U"]), std::move(rep), cfg);
            return ParameterFunction::low_dim_from_range(Q_last, std::move(rep), cfg, reference_scale);
        }
        throw SchemaError("unknown parameter kind \"" + kind + "\"");
    });
}

Json to_json(const ToleranceConfig& cfg) {
    return Json{{"rank_rel_tol", cfg.rank_rel_tol}, {"psd_tol", cfg.psd_tol}, {"eq_tol", cfg.eq_tol}};
}

Json to_json(const StieltjesParametrization& p) {
    return Json{{"matrices", list(p.entries)}, {"scales", real_list(p.scales)}};
}

Json to_json(const ClassReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.hankel_checks)
        checks.push_back(Json{{"name", c.name}, {"n", c.n}, {"psd", c.psd}, {"min_eigenvalue", c.min_eigenvalue}});
    return Json{{"hankel_checks", std::move(checks)},
                {"stieltjes_nonneg", r.stieltjes_nonneg},
                {"stieltjes_extendable", r.stieltjes_extendable},
                {"stieltjes_posdef", r.stieltjes_posdef},
                {"completely_degenerate", r.completely_degenerate},
                {"first_term_dominant", r.first_term_dominant}};
}

Json to_json(const Violation& v) {
    return Json{{"condition", v.condition}, {"z", to_json(v.z)}, {"magnitude", v.magnitude}};
}

Json to_json(const AdmissibilityReport& r) {
    Json vs = Json::array();
    for (const auto& v : r.violations) vs.push_back(to_json(v));
    return Json{{"admissible", r.admissible}, {"violations", std::move(vs)}};
}

Json to_json(const RecoveryConfig& cfg) {
    return Json{{"y_grid", real_list(cfg.y_grid)},
                {"use_extrapolation", cfg.use_extrapolation},
                {"rel_tol", cfg.rel_tol},
                {"extrapolation_degree", cfg.extrapolation_degree},
                {"adaptive_grid", cfg.adaptive_grid},
                {"adaptive_points", cfg.adaptive_points},
                {"evaluation_accuracy", cfg.evaluation_accuracy}};
}

Json to_json(const VerificationReport& r) {
    Json vs = Json::array();
    for (const auto& v : r.property_violations) vs.push_back(to_json(v));
    Json diag = Json::array();
    for (const auto& d : r.diagnostics)
        diag.push_back(Json{{"noise_estimate", d.noise_estimate},
                            {"truncation_estimate", d.truncation_estimate},
                            {"precision_limited", d.precision_limited}});
    Json out{{"max_rel_error", r.max_rel_error},
             {"moment_rel_errors", real_list(r.moment_rel_errors)},
             {"property_violations", std::move(vs)},
             {"sup_y_norm", r.sup_y_norm},
             {"conditioning", std::move(diag)},
             {"y_grid", real_list(r.y_grid)},
             {"passed", r.passed}};
    out["recovered_moments"] = r.recovered_moments ? to_json(*r.recovered_moments) : Json(nullptr);
    return out;
}

}  // namespace stieltjes::io
