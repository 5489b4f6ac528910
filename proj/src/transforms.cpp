#include "stieltjes/transforms.hpp"

#include "stieltjes/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stieltjes {

namespace {

Complex shifted(Complex z, double alpha) {
    const Complex w = z - alpha;
    if (w == Complex(0.0, 0.0)) throw DomainError("evaluation at z = alpha", z);
    return w;
}

// How far the Hermitian matrix M falls short of PSD, relative to max(1, scale).
double psd_defect(const CMatrix& M, double scale) {
    return std::max(0.0, -min_eigenvalue(M)) / std::max(1.0, scale);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

CMatrix schur_stieltjes_eval(const MatrixFunction& F, const CMatrix& A, double alpha, Complex z,
                             const ToleranceConfig& cfg) {
    const Complex w = shifted(z, alpha);
    const CMatrix Fz = F(z);
    if (Fz.rows() != A.rows() || Fz.cols() != A.cols()) throw DimensionError("schur_stieltjes: F(z) and A differ in size");
    return -A * (identity(A.rows()) + pinv(Fz, cfg) * A / w);
}

CMatrix inverse_schur_stieltjes_eval(const MatrixFunction& G, const CMatrix& A, double alpha, Complex z,
                                     const ToleranceConfig& cfg) {
    const Complex w = shifted(z, alpha);
    const CMatrix Gz = G(z);
    if (Gz.rows() != A.rows() || Gz.cols() != A.cols())
        throw DimensionError("inverse_schur_stieltjes: G(z) and A differ in size");
    return -(A * pinv(identity(A.rows()) + pinv(A, cfg) * Gz, cfg)) / w;
}

MatrixFunction schur_stieltjes(MatrixFunction F, CMatrix A, double alpha, const ToleranceConfig& cfg) {
    return [F = std::move(F), A = std::move(A), alpha, cfg](Complex z) {
        return schur_stieltjes_eval(F, A, alpha, z, cfg);
    };
}

MatrixFunction inverse_schur_stieltjes(MatrixFunction G, CMatrix A, double alpha, const ToleranceConfig& cfg) {
    return [G = std::move(G), A = std::move(A), alpha, cfg](Complex z) {
        return inverse_schur_stieltjes_eval(G, A, alpha, z, cfg);
    };
}

ParameterFunction ParameterFunction::zero(Eigen::Index q) {
    if (q < 1) throw InvalidArgument("parameter dimension must be at least 1");
    return ParameterFunction(Zero{q});
}

ParameterFunction ParameterFunction::low_dim(CMatrix U, StieltjesFunctionRep f, const ToleranceConfig& cfg) {
    require_finite(U, "U");
    if (U.cols() != f.q()) throw InvalidArgument("low_dim: U must have as many columns as f has rows");
    if (U.rows() < U.cols()) throw InvalidArgument("low_dim: U has more columns than rows");
    if (norm(U.adjoint() * U - identity(U.cols())) > cfg.eq_tol)
        throw InvalidArgument("low_dim: U does not have orthonormal columns");
    return ParameterFunction(LowDim{std::move(U), std::move(f)});
}

ParameterFunction ParameterFunction::low_dim_from_range(const CMatrix& Q_last, StieltjesFunctionRep f,
                                                        const ToleranceConfig& cfg, double reference_scale) {
    CMatrix U = range_basis(Q_last, cfg, reference_scale);
    if (U.cols() != f.q())
        throw InvalidArgument("low_dim: f has size " + std::to_string(f.q()) + " but ran(Q) has dimension " +
                              std::to_string(U.cols()));
    return low_dim(std::move(U), std::move(f), cfg);
}

ParameterFunction ParameterFunction::direct(StieltjesFunctionRep rep) {
    if (!rep.gamma.isZero(0.0)) throw InvalidArgument("direct parameter needs gamma = 0");
    return ParameterFunction(Direct{std::move(rep)});
}

Eigen::Index ParameterFunction::q() const {
    return std::visit(overloaded{[](const Zero& p) { return p.q; },
                                 [](const LowDim& p) { return p.U.rows(); },
                                 [](const Direct& p) { return p.rep.q(); }},
                      kind_);
}

std::string ParameterFunction::kind_name() const {
    return std::visit(overloaded{[](const Zero&) { return std::string("zero"); },
                                 [](const LowDim&) { return std::string("low_dim"); },
                                 [](const Direct&) { return std::string("direct"); }},
                      kind_);
}

CMatrix ParameterFunction::operator()(Complex z) const {
    return std::visit(overloaded{[](const Zero& p) -> CMatrix { return zeros(p.q, p.q); },
                                 [z](const LowDim& p) -> CMatrix {
                                     return p.U * stieltjes_function_eval(p.f, z) * p.U.adjoint();
                                 },
                                 [z](const Direct& p) -> CMatrix { return stieltjes_function_eval(p.rep, z); }},
                      kind_);
}

std::pair<CMatrix, double> last_parameter_entry(const MomentSequence& seq, const ToleranceConfig& cfg) {
    const StieltjesParametrization Q = stieltjes_parametrization_via_schur(seq, cfg);
    return {Q.entries.back(), Q.scales.back()};
}

std::size_t parameter_rank(const MomentSequence& seq, const ToleranceConfig& cfg) {
    const auto [Q, scale] = last_parameter_entry(seq, cfg);
    return rank_of(Q, cfg, scale);
}

AdmissibilityGrid default_admissibility_grid(double alpha) {
    AdmissibilityGrid g;
    const Complex a(alpha, 0.0);
    g.upper = {a + Complex(-3.0, 0.5), a + Complex(-1.0, 1.0), a + Complex(0.5, 0.25), a + Complex(1.0, 2.0),
               a + Complex(3.0, 0.5),  a + Complex(6.0, 4.0),  a + Complex(10.0, 1.0), a + Complex(0.0, 20.0)};
    g.left_axis = {alpha - 0.5, alpha - 2.0, alpha - 10.0, alpha - 100.0};
    g.decay_ordinates = {1e2, 1e4};
    return g;
}

AdmissibilityReport admissible_parameter_check(const ParameterFunction& param, const CMatrix& Q_last,
                                               double alpha, const AdmissibilityGrid& grid,
                                               const ToleranceConfig& cfg, double reference_scale) {
    if (Q_last.rows() != param.q() || Q_last.cols() != param.q())
        throw DimensionError("admissible_parameter_check: Q and parameter differ in size");
    AdmissibilityReport rep;
    auto flag = [&rep](std::string condition, Complex z, double magnitude) {
        rep.admissible = false;
        rep.violations.push_back({std::move(condition), z, magnitude});
    };
    const CMatrix P = pinv(Q_last, cfg, reference_scale) * Q_last;

    auto check_range = [&](Complex z, const CMatrix& G) {
        const double bound = cfg.eq_tol * (1.0 + norm(G));
        const double right = norm(G * P - G);
        const double left = norm(P * G - G);
        if (right > bound) flag("range: G Q^+Q != G", z, right);
        if (left > bound) flag("range: Q^+Q G != G", z, left);
    };

    for (const Complex w : grid.upper) {
        if (!(w.imag() > 0.0)) throw InvalidArgument("admissibility grid: upper point with Im z <= 0");
        const CMatrix G = param(w);
        check_range(w, G);
        const double d = psd_defect(imaginary_part(G), norm(G));
        if (d > cfg.psd_tol) flag("Im G(w) not PSD", w, d);
    }
    for (const double x : grid.left_axis) {
        if (!(x < alpha)) throw InvalidArgument("admissibility grid: axis point not left of alpha");
        const Complex z(x, 0.0);
        const CMatrix G = param(z);
        check_range(z, G);
        const double scale = std::max(1.0, norm(G));
        const double drift = norm(G - G.adjoint()) / scale;
        if (drift > cfg.eq_tol) flag("G(x) not Hermitian", z, drift);
        const double d = psd_defect(G, norm(G));
        if (d > cfg.psd_tol) flag("G(x) not PSD", z, d);
    }
    if (grid.decay_ordinates.size() >= 2) {
        const std::size_t n = grid.decay_ordinates.size();
        const double y0 = grid.decay_ordinates[n - 2];
        const double y1 = grid.decay_ordinates[n - 1];
        if (!(y1 > y0 && y0 > 0.0)) throw InvalidArgument("admissibility grid: decay ordinates must increase");
        const double g0 = norm(param(Complex(0.0, y0)));
        const double g1 = norm(param(Complex(0.0, y1)));
        // Demand at least square-root decay between the two largest ordinates.
        if (g1 > std::sqrt(y0 / y1) * g0 + cfg.eq_tol) flag("G(iy) does not decay", Complex(0.0, y1), g1);
    }
    return rep;
}

SolutionFunction::SolutionFunction(MatrixPolynomial resolvent, std::vector<MatrixPolynomial> factors,
                                   ParameterFunction parameter)
    : resolvent_(std::move(resolvent)), factors_(std::move(factors)), parameter_(std::move(parameter)) {
    if (resolvent_.q() != parameter_.q()) throw DimensionError("resolvent and parameter differ in size");
}

CMatrix SolutionFunction::operator()(Complex z) const {
    try {
        return lft_apply(resolvent_.value(z), parameter_(z));
    } catch (const DomainError& e) {
        throw DomainError(e.what(), z);
    }
}

CMatrix SolutionFunction::eval_factorwise(Complex z) const {
    return lft_apply(evaluate_factorwise(factors_, z), parameter_(z));
}

MatrixFunction SolutionFunction::as_function() const {
    return [self = *this](Complex z) { return self(z); };
}

namespace {

std::optional<double> parameter_alpha(const ParameterFunction& p) {
    return std::visit(overloaded{[](const ParameterFunction::Zero&) -> std::optional<double> { return std::nullopt; },
                                 [](const ParameterFunction::LowDim& d) -> std::optional<double> {
                                     return d.f.measure.alpha();
                                 },
                                 [](const ParameterFunction::Direct& d) -> std::optional<double> {
                                     return d.rep.measure.alpha();
                                 }},
                      p.kind());
}

SolutionFunction build_solution(const MomentSequence& seq, ParameterFunction param, const ToleranceConfig& cfg) {
    std::vector<MatrixPolynomial> factors = resolvent_factors_V(seq, cfg);
    MatrixPolynomial product = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) product = poly_mul(product, factors[i]);
    return SolutionFunction(std::move(product), std::move(factors), std::move(param));
}

}  // namespace

SolutionFunction solution_from_parameter(const MomentSequence& seq, const ParameterFunction& param,
                                         const ToleranceConfig& cfg) {
    if (param.q() != seq.q()) throw PreconditionError("parameter size does not match the sequence");
    if (const auto a = parameter_alpha(param); a && *a != seq.alpha())
        throw PreconditionError("parameter measure uses a different alpha than the sequence");
    if (!classify(seq, cfg).stieltjes_extendable)
        throw PreconditionError("sequence is not alpha-Stieltjes nonnegative definite extendable");
    const auto [Q, scale] = last_parameter_entry(seq, cfg);
    const AdmissibilityReport adm =
        admissible_parameter_check(param, Q, seq.alpha(), default_admissibility_grid(seq.alpha()), cfg, scale);
    if (!adm.admissible) {
        const Violation& v = adm.violations.front();
        throw PreconditionError("inadmissible parameter: " + v.condition);
    }
    return build_solution(seq, param, cfg);
}

SolutionFunction unique_solution(const MomentSequence& seq, const ToleranceConfig& cfg) {
    if (!classify(seq, cfg).completely_degenerate)
        throw PreconditionError("sequence is not completely degenerate; use solution_from_parameter");
    return build_solution(seq, ParameterFunction::zero(seq.q()), cfg);
}

}  // namespace stieltjes
