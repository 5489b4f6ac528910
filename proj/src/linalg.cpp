#include "stieltjes/linalg.hpp"

#include "stieltjes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stieltjes {

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        throw InvalidArgument(std::string("tolerance ") + name + " must lie in (0, 1)");
    }
}

struct Svd {
    Eigen::JacobiSVD<CMatrix> svd;
    double cutoff;
    Eigen::Index rank;
};

Svd decompose(const CMatrix& A, const ToleranceConfig& cfg, double reference_scale) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = cfg.rank_rel_tol * std::max(smax, reference_scale);
    Eigen::Index r = 0;
    // A zero matrix has rank 0 even though 0 >= 0 * tol.
    while (r < sv.size() && sv(r) > 0.0 && sv(r) >= cutoff) ++r;
    return {std::move(svd), cutoff, r};
}

}  // namespace

void ToleranceConfig::validate() const {
    check_unit_interval(rank_rel_tol, "rank_rel_tol");
    check_unit_interval(psd_tol, "psd_tol");
    check_unit_interval(eq_tol, "eq_tol");
}

double norm(const CMatrix& A) { return A.norm(); }

bool all_finite(const CMatrix& A) { return A.allFinite(); }

void require_finite(const CMatrix& A, const char* what) {
    if (!A.allFinite()) throw InvalidArgument(std::string(what) + " has non-finite entries");
}

CMatrix hermitian_part(const CMatrix& A) { return (A + A.adjoint()) / 2.0; }

CMatrix imaginary_part(const CMatrix& A) { return (A - A.adjoint()) / Complex(0.0, 2.0); }

double min_eigenvalue(const CMatrix& A) {
    if (A.rows() != A.cols()) throw DimensionError("min_eigenvalue needs a square matrix");
    if (A.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(A), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

CMatrix pinv(const CMatrix& A, const ToleranceConfig& cfg, double reference_scale) {
    require_finite(A, "pinv argument");
    if (A.size() == 0) return zeros(A.cols(), A.rows());
    const Svd d = decompose(A, cfg, reference_scale);
    if (d.rank == 0) return zeros(A.cols(), A.rows());
    const auto r = d.rank;
    const Eigen::VectorXd inv = d.svd.singularValues().head(r).cwiseInverse();
    return d.svd.matrixV().leftCols(r) * inv.asDiagonal() * d.svd.matrixU().leftCols(r).adjoint();
}

std::size_t rank_of(const CMatrix& A, const ToleranceConfig& cfg, double reference_scale) {
    require_finite(A, "rank_of argument");
    if (A.size() == 0) return 0;
    return static_cast<std::size_t>(decompose(A, cfg, reference_scale).rank);
}

bool range_contains(const CMatrix& A, const CMatrix& C, const ToleranceConfig& cfg,
                    double reference_scale) {
    if (A.rows() != C.rows()) throw DimensionError("range_contains: row counts differ");
    const CMatrix residual = A * pinv(A, cfg, reference_scale) * C - C;
    return norm(residual) <= cfg.eq_tol * (1.0 + norm(C));
}

bool null_contains(const CMatrix& A, const CMatrix& B, const ToleranceConfig& cfg,
                   double reference_scale) {
    if (A.cols() != B.cols()) throw DimensionError("null_contains: column counts differ");
    const CMatrix residual = B * pinv(A, cfg, reference_scale) * A - B;
    return norm(residual) <= cfg.eq_tol * (1.0 + norm(B));
}

bool is_psd(const CMatrix& A, const ToleranceConfig& cfg) {
    if (A.rows() != A.cols()) throw DimensionError("is_psd needs a square matrix");
    require_finite(A, "is_psd argument");
    if (norm(A - A.adjoint()) > cfg.eq_tol) return false;
    return min_eigenvalue(A) >= -cfg.psd_tol;
}

CMatrix range_basis(const CMatrix& A, const ToleranceConfig& cfg, double reference_scale) {
    require_finite(A, "range_basis argument");
    if (A.size() == 0) return zeros(A.rows(), 0);
    const Svd d = decompose(A, cfg, reference_scale);
    return d.svd.matrixU().leftCols(d.rank);
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix zeros(Eigen::Index rows, Eigen::Index cols) { return CMatrix::Zero(rows, cols); }

}  // namespace stieltjes
