#pragma once

#include "stieltjes/linalg.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/polynomial.hpp"
#include "stieltjes/sequence.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stieltjes {

// -A (I + (z - alpha)^{-1} F(z)^+ A)
CMatrix schur_stieltjes_eval(const MatrixFunction& F, const CMatrix& A, double alpha, Complex z,
                             const ToleranceConfig& cfg = {});
// -(z - alpha)^{-1} A (I + A^+ G(z))^+
CMatrix inverse_schur_stieltjes_eval(const MatrixFunction& G, const CMatrix& A, double alpha, Complex z,
                                     const ToleranceConfig& cfg = {});

MatrixFunction schur_stieltjes(MatrixFunction F, CMatrix A, double alpha, const ToleranceConfig& cfg = {});
MatrixFunction inverse_schur_stieltjes(MatrixFunction G, CMatrix A, double alpha, const ToleranceConfig& cfg = {});

// Parameter G fed into the resolvent LFT.
class ParameterFunction {
public:
    struct Zero {
        Eigen::Index q = 1;
    };
    // G = U f U^*, U with orthonormal columns.
    struct LowDim {
        CMatrix U;
        StieltjesFunctionRep f;
    };
    // G = f with gamma = 0.
    struct Direct {
        StieltjesFunctionRep rep;
    };
    using Kind = std::variant<Zero, LowDim, Direct>;

    static ParameterFunction zero(Eigen::Index q);
    // Throws InvalidArgument unless U^*U = I_r to eq_tol and f has size r.
    static ParameterFunction low_dim(CMatrix U, StieltjesFunctionRep f, const ToleranceConfig& cfg = {});
    // U is an orthonormal basis of ran(Q_last) in order of descending singular
    // value, with the rank cutoff taken relative to reference_scale as well.
    static ParameterFunction low_dim_from_range(const CMatrix& Q_last, StieltjesFunctionRep f,
                                                const ToleranceConfig& cfg = {}, double reference_scale = 0.0);
    // Throws InvalidArgument unless gamma vanishes.
    static ParameterFunction direct(StieltjesFunctionRep rep);

    Eigen::Index q() const;
    const Kind& kind() const { return kind_; }
    std::string kind_name() const;
    CMatrix operator()(Complex z) const;

private:
    explicit ParameterFunction(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

// Rank of ran(Q_last) used for low-dimensional parameters of seq.
std::size_t parameter_rank(const MomentSequence& seq, const ToleranceConfig& cfg = {});
// Q_kappa with its reference scale, as used by the admissibility check.
std::pair<CMatrix, double> last_parameter_entry(const MomentSequence& seq, const ToleranceConfig& cfg = {});

struct Violation {
    std::string condition;
    Complex z;
    double magnitude = 0.0;
};

struct AdmissibilityGrid {
    std::vector<Complex> upper;     // points with Im z > 0
    std::vector<double> left_axis;  // real points x < alpha
    std::vector<double> decay_ordinates;  // y values for |G(iy)|, ascending
};

// 8 upper half-plane points, 4 points on (-inf, alpha), decay at y = 1e2, 1e4.
AdmissibilityGrid default_admissibility_grid(double alpha);

struct AdmissibilityReport {
    bool admissible = true;
    std::vector<Violation> violations;
};

AdmissibilityReport admissible_parameter_check(const ParameterFunction& param, const CMatrix& Q_last,
                                               double alpha, const AdmissibilityGrid& grid,
                                               const ToleranceConfig& cfg = {}, double reference_scale = 0.0);

class SolutionFunction {
public:
    SolutionFunction(MatrixPolynomial resolvent, std::vector<MatrixPolynomial> factors, ParameterFunction parameter);

    const MatrixPolynomial& resolvent() const { return resolvent_; }
    const std::vector<MatrixPolynomial>& factors() const { return factors_; }
    const ParameterFunction& parameter() const { return parameter_; }
    Eigen::Index q() const { return resolvent_.q(); }
    double alpha() const { return resolvent_.alpha(); }

    // lft_apply of the coefficient form at z.
    CMatrix operator()(Complex z) const;
    // Same value from the product of the factor values.
    CMatrix eval_factorwise(Complex z) const;
    MatrixFunction as_function() const;

private:
    MatrixPolynomial resolvent_;
    std::vector<MatrixPolynomial> factors_;
    ParameterFunction parameter_;
};

// Throws PreconditionError when seq is not extendable, when the parameter
// dimension or base point do not match, or when the parameter fails the
// sampled admissibility check (message names the violated condition).
SolutionFunction solution_from_parameter(const MomentSequence& seq, const ParameterFunction& param,
                                         const ToleranceConfig& cfg = {});

// v12 v22^{-1}; PreconditionError unless seq is completely degenerate.
SolutionFunction unique_solution(const MomentSequence& seq, const ToleranceConfig& cfg = {});

}  // namespace stieltjes
