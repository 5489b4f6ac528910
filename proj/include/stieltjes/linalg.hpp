#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace stieltjes {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct ToleranceConfig {
    double rank_rel_tol = 1e-10;  // singular values below rank_rel_tol * sigma_max count as zero
    double psd_tol = 1e-9;        // most negative eigenvalue still accepted as PSD
    double eq_tol = 1e-9;         // bound for "equal up to roundoff" comparisons

    // Throws InvalidArgument unless every tolerance lies in (0, 1).
    void validate() const;
};

// Frobenius norm; all tolerance comparisons in the library use it.
double norm(const CMatrix& A);

bool all_finite(const CMatrix& A);
void require_finite(const CMatrix& A, const char* what);

CMatrix hermitian_part(const CMatrix& A);
// (A - A^*) / 2i, the imaginary part of a square matrix.
CMatrix imaginary_part(const CMatrix& A);
// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const CMatrix& A);

// Moore-Penrose inverse through the SVD. Singular values below
// rank_rel_tol * max(sigma_max, reference_scale) are treated as zero; the
// default reference of 0 gives the plain relative cutoff.
CMatrix pinv(const CMatrix& A, const ToleranceConfig& cfg = {}, double reference_scale = 0.0);

std::size_t rank_of(const CMatrix& A, const ToleranceConfig& cfg = {}, double reference_scale = 0.0);

// ran(C) within ran(A), tested as |AA^+C - C| <= eq_tol (1 + |C|).
bool range_contains(const CMatrix& A, const CMatrix& C, const ToleranceConfig& cfg = {},
                    double reference_scale = 0.0);

// nul(A) within nul(B), tested as |BA^+A - B| <= eq_tol (1 + |B|).
bool null_contains(const CMatrix& A, const CMatrix& B, const ToleranceConfig& cfg = {},
                   double reference_scale = 0.0);

// |A - A^*| <= eq_tol and the smallest eigenvalue of the Hermitian part >= -psd_tol.
bool is_psd(const CMatrix& A, const ToleranceConfig& cfg = {});

// Orthonormal basis of ran(A) ordered by descending singular value, using the
// same cutoff as pinv.
CMatrix range_basis(const CMatrix& A, const ToleranceConfig& cfg = {}, double reference_scale = 0.0);

CMatrix identity(Eigen::Index n);
CMatrix zeros(Eigen::Index rows, Eigen::Index cols);

}  // namespace stieltjes
