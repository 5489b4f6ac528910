#pragma once

#include "stieltjes/linalg.hpp"
#include "stieltjes/sequence.hpp"

#include <vector>

namespace stieltjes {

// Polynomial in z with matrix coefficients, ascending powers. The 2q x 2q
// resolvent matrices carry the base point alpha they were built for. A second
// coefficient list in powers of (z - alpha) is kept for evaluation: the
// resolvent factors are exact in that basis, and near alpha the z basis
// cancels badly.
class MatrixPolynomial {
public:
    // Throws InvalidArgument for an empty coefficient list or coefficients of
    // differing shape.
    MatrixPolynomial(double alpha, std::vector<CMatrix> coeffs);

    // Same polynomial given by its coefficients in powers of (z - alpha).
    static MatrixPolynomial from_centered(double alpha, std::vector<CMatrix> centered);

    static MatrixPolynomial constant(double alpha, const CMatrix& c) { return {alpha, {c}}; }

    double alpha() const { return alpha_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    Eigen::Index rows() const { return coeffs_.front().rows(); }
    Eigen::Index cols() const { return coeffs_.front().cols(); }
    // Half the dimension of a 2q x 2q polynomial.
    Eigen::Index q() const;
    const std::vector<CMatrix>& coeffs() const { return coeffs_; }
    const std::vector<CMatrix>& centered_coeffs() const { return centered_; }

    CMatrix value(Complex z) const;

    // q x q block slices of a 2q x 2q polynomial, i, j in {1, 2}.
    MatrixPolynomial block(int i, int j) const;
    MatrixPolynomial v11() const { return block(1, 1); }
    MatrixPolynomial v12() const { return block(1, 2); }
    MatrixPolynomial v21() const { return block(2, 1); }
    MatrixPolynomial v22() const { return block(2, 2); }

private:
    MatrixPolynomial(double alpha, std::vector<CMatrix> coeffs, std::vector<CMatrix> centered);

    double alpha_;
    std::vector<CMatrix> coeffs_;
    std::vector<CMatrix> centered_;
};

// [[(z-a)I, A], [-(z-a)A^+, I - A^+A]]
MatrixPolynomial poly_W(const CMatrix& A, double alpha, const ToleranceConfig& cfg = {});
// [[0, -A], [(z-a)A^+, (z-a)I]]
MatrixPolynomial poly_V(const CMatrix& A, double alpha, const ToleranceConfig& cfg = {});
// Same factors with a caller-supplied pseudoinverse of A.
MatrixPolynomial poly_W_with(const CMatrix& A, const CMatrix& A_pinv, double alpha);
MatrixPolynomial poly_V_with(const CMatrix& A, const CMatrix& A_pinv, double alpha);

MatrixPolynomial poly_mul(const MatrixPolynomial& P, const MatrixPolynomial& Q);

// V_{Q_0} ... V_{Q_kappa} and W_{Q_kappa} ... W_{Q_0} over the leading
// entries of the Schur chain, in the order they are multiplied.
std::vector<MatrixPolynomial> resolvent_factors_V(const MomentSequence& seq, const ToleranceConfig& cfg = {});
std::vector<MatrixPolynomial> resolvent_factors_W(const MomentSequence& seq, const ToleranceConfig& cfg = {});
MatrixPolynomial resolvent_product_V(const MomentSequence& seq, const ToleranceConfig& cfg = {});
MatrixPolynomial resolvent_product_W(const MomentSequence& seq, const ToleranceConfig& cfg = {});

// Product of the factor values at z, the debug cross-check of coefficient convolution.
CMatrix evaluate_factorwise(const std::vector<MatrixPolynomial>& factors, Complex z);

// Relative singular-value threshold under which cX + d counts as singular.
inline constexpr double kLftConditionBound = 1e-12;

// (aX + b)(cX + d)^{-1} for E = [[a, b], [c, d]].
CMatrix lft_apply(const CMatrix& E, const CMatrix& X);

}  // namespace stieltjes
