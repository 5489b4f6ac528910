#include "stieltjes/polynomial.hpp"

#include "stieltjes/errors.hpp"

#include <cmath>
#include <sstream>

namespace stieltjes {

namespace {

void check_coefficients(const std::vector<CMatrix>& coeffs) {
    if (coeffs.empty()) throw InvalidArgument("a matrix polynomial needs at least one coefficient");
    for (const auto& c : coeffs) {
        if (c.rows() != coeffs.front().rows() || c.cols() != coeffs.front().cols())
            throw InvalidArgument("polynomial coefficients differ in shape");
        require_finite(c, "polynomial coefficient");
    }
}

// Coefficients of p(x + shift) from those of p(x).
std::vector<CMatrix> taylor_shift(const std::vector<CMatrix>& c, double shift) {
    const std::size_t n = c.size();
    std::vector<CMatrix> out(n, zeros(c.front().rows(), c.front().cols()));
    std::vector<double> binom(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // binom[k] = C(i, k) after this update.
        for (std::size_t k = i; k > 0; --k) binom[k] += binom[k - 1];
        binom[0] = 1.0;
        for (std::size_t k = 0; k <= i; ++k)
            out[k] += binom[k] * std::pow(shift, static_cast<double>(i - k)) * c[i];
    }
    return out;
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(double alpha, std::vector<CMatrix> coeffs)
    : alpha_(alpha), coeffs_(std::move(coeffs)) {
    check_coefficients(coeffs_);
    if (!std::isfinite(alpha_)) throw InvalidArgument("alpha must be finite");
    centered_ = taylor_shift(coeffs_, alpha_);
}

MatrixPolynomial::MatrixPolynomial(double alpha, std::vector<CMatrix> coeffs, std::vector<CMatrix> centered)
    : alpha_(alpha), coeffs_(std::move(coeffs)), centered_(std::move(centered)) {}

MatrixPolynomial MatrixPolynomial::from_centered(double alpha, std::vector<CMatrix> centered) {
    check_coefficients(centered);
    if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
    std::vector<CMatrix> coeffs = taylor_shift(centered, -alpha);
    return MatrixPolynomial(alpha, std::move(coeffs), std::move(centered));
}

Eigen::Index MatrixPolynomial::q() const {
    if (rows() != cols() || rows() % 2 != 0) throw DimensionError("polynomial is not 2q x 2q");
    return rows() / 2;
}

CMatrix MatrixPolynomial::value(Complex z) const {
    const Complex w = z - alpha_;
    CMatrix acc = centered_.back();
    for (auto it = centered_.rbegin() + 1; it != centered_.rend(); ++it) acc = acc * w + *it;
    return acc;
}

MatrixPolynomial MatrixPolynomial::block(int i, int j) const {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw InvalidArgument("block indices must be 1 or 2");
    const Eigen::Index n = q();
    auto slice = [&](const std::vector<CMatrix>& cs) {
        std::vector<CMatrix> out;
        out.reserve(cs.size());
        for (const auto& c : cs) out.push_back(c.block((i - 1) * n, (j - 1) * n, n, n));
        return out;
    };
    return MatrixPolynomial(alpha_, slice(coeffs_), slice(centered_));
}

MatrixPolynomial poly_W_with(const CMatrix& A, const CMatrix& Ap, double alpha) {
    if (A.rows() != A.cols()) throw DimensionError("poly_W: A must be square");
    const Eigen::Index q = A.rows();
    const CMatrix I = identity(q);
    CMatrix c0 = zeros(2 * q, 2 * q);
    CMatrix c1 = zeros(2 * q, 2 * q);
    c0.topRightCorner(q, q) = A;
    c0.bottomRightCorner(q, q) = I - Ap * A;
    c1.topLeftCorner(q, q) = I;
    c1.bottomLeftCorner(q, q) = -Ap;
    return MatrixPolynomial::from_centered(alpha, {c0, c1});
}

MatrixPolynomial poly_V_with(const CMatrix& A, const CMatrix& Ap, double alpha) {
    if (A.rows() != A.cols()) throw DimensionError("poly_V: A must be square");
    const Eigen::Index q = A.rows();
    const CMatrix I = identity(q);
    CMatrix c0 = zeros(2 * q, 2 * q);
    CMatrix c1 = zeros(2 * q, 2 * q);
    c0.topRightCorner(q, q) = -A;
    c1.bottomLeftCorner(q, q) = Ap;
    c1.bottomRightCorner(q, q) = I;
    return MatrixPolynomial::from_centered(alpha, {c0, c1});
}

MatrixPolynomial poly_W(const CMatrix& A, double alpha, const ToleranceConfig& cfg) {
    return poly_W_with(A, pinv(A, cfg), alpha);
}

MatrixPolynomial poly_V(const CMatrix& A, double alpha, const ToleranceConfig& cfg) {
    return poly_V_with(A, pinv(A, cfg), alpha);
}

MatrixPolynomial poly_mul(const MatrixPolynomial& P, const MatrixPolynomial& Q) {
    if (P.cols() != Q.rows()) throw DimensionError("poly_mul: inner dimensions differ");
    auto convolve = [&](const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
        std::vector<CMatrix> out(a.size() + b.size() - 1, zeros(P.rows(), Q.cols()));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    if (P.alpha() == Q.alpha())
        return MatrixPolynomial::from_centered(P.alpha(), convolve(P.centered_coeffs(), Q.centered_coeffs()));
    return {P.alpha(), convolve(P.coeffs(), Q.coeffs())};
}

namespace {

std::vector<std::pair<CMatrix, CMatrix>> chain_pivots(const MomentSequence& seq, const ToleranceConfig& cfg) {
    const StieltjesParametrization Q = stieltjes_parametrization_via_schur(seq, cfg);
    std::vector<std::pair<CMatrix, CMatrix>> out;
    for (std::size_t j = 0; j < Q.size(); ++j) out.emplace_back(Q[j], pinv(Q[j], cfg, Q.scales[j]));
    return out;
}

MatrixPolynomial multiply_all(const std::vector<MatrixPolynomial>& factors) {
    MatrixPolynomial acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = poly_mul(acc, factors[i]);
    return acc;
}

}  // namespace

std::vector<MatrixPolynomial> resolvent_factors_V(const MomentSequence& seq, const ToleranceConfig& cfg) {
    std::vector<MatrixPolynomial> out;
    for (const auto& [A, Ap] : chain_pivots(seq, cfg)) out.push_back(poly_V_with(A, Ap, seq.alpha()));
    return out;
}

std::vector<MatrixPolynomial> resolvent_factors_W(const MomentSequence& seq, const ToleranceConfig& cfg) {
    std::vector<MatrixPolynomial> out;
    const auto pivots = chain_pivots(seq, cfg);
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) out.push_back(poly_W_with(it->first, it->second, seq.alpha()));
    return out;
}

MatrixPolynomial resolvent_product_V(const MomentSequence& seq, const ToleranceConfig& cfg) {
    return multiply_all(resolvent_factors_V(seq, cfg));
}

MatrixPolynomial resolvent_product_W(const MomentSequence& seq, const ToleranceConfig& cfg) {
    return multiply_all(resolvent_factors_W(seq, cfg));
}

CMatrix evaluate_factorwise(const std::vector<MatrixPolynomial>& factors, Complex z) {
    if (factors.empty()) throw InvalidArgument("no factors to evaluate");
    CMatrix acc = factors.front().value(z);
    for (std::size_t i = 1; i < factors.size(); ++i) acc = acc * factors[i].value(z);
    return acc;
}

CMatrix lft_apply(const CMatrix& E, const CMatrix& X) {
    if (E.rows() != E.cols() || E.rows() % 2 != 0) throw DimensionError("lft_apply: E must be 2q x 2q");
    const Eigen::Index q = E.rows() / 2;
    if (X.rows() != q || X.cols() != q) throw DimensionError("lft_apply: X must be q x q");
    const CMatrix num = E.topLeftCorner(q, q) * X + E.topRightCorner(q, q);
    const CMatrix den = E.bottomLeftCorner(q, q) * X + E.bottomRightCorner(q, q);
    Eigen::JacobiSVD<CMatrix> svd(den, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(q - 1) < kLftConditionBound * sv(0)) {
        std::ostringstream msg;
        msg << "linear fractional transformation: singular denominator (sigma_min/sigma_max = "
            << (sv(0) > 0.0 ? sv(q - 1) / sv(0) : 0.0) << ")";
        throw DomainError(msg.str());
    }
    return num * svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace stieltjes
