#pragma once

#include "stieltjes/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace stieltjes {

// Matrix moment data s_0, ..., s_kappa on the interval [alpha, inf).
class MomentSequence {
public:
    // Throws InvalidArgument for an empty list, non-square or mixed sizes,
    // non-finite entries or non-finite alpha.
    MomentSequence(double alpha, std::vector<CMatrix> entries);

    static MomentSequence zeros(double alpha, Eigen::Index q, std::size_t kappa);

    double alpha() const { return alpha_; }
    Eigen::Index q() const { return entries_.front().rows(); }
    std::size_t kappa() const { return entries_.size() - 1; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<CMatrix>& entries() const { return entries_; }
    const CMatrix& operator[](std::size_t j) const { return entries_.at(j); }

    // s_0, ..., s_k
    MomentSequence truncated(std::size_t k) const;
    MomentSequence with_alpha(double alpha) const { return MomentSequence(alpha, entries_); }

private:
    double alpha_;
    std::vector<CMatrix> entries_;
};

// Q_0, ..., Q_kappa. scales[j] is the magnitude Q_j would have for generic
// data of the originating sequence; passed as reference scale to pinv/rank_of
// it keeps roundoff left in a Q_j that vanishes in exact arithmetic from
// being mistaken for a nonzero pivot.
struct StieltjesParametrization {
    std::vector<CMatrix> entries;
    std::vector<double> scales;

    std::size_t size() const { return entries.size(); }
    const CMatrix& operator[](std::size_t j) const { return entries.at(j); }
};

struct HankelCheck {
    std::string name;  // "H_n" or "-aH_n+K_n"
    std::size_t n = 0;
    bool psd = false;
    double min_eigenvalue = 0.0;  // of the matrix scaled to unit norm
};

struct ClassReport {
    std::vector<HankelCheck> hankel_checks;
    bool stieltjes_nonneg = false;
    bool stieltjes_extendable = false;
    bool stieltjes_posdef = false;
    bool completely_degenerate = false;
    bool first_term_dominant = false;
};

// Moment growth rate max(1, |alpha|, max_j (|s_j| / |s_0|)^(1/j)). When s_0
// vanishes the ratios are taken against 1.
double moment_growth_radius(const MomentSequence& seq);

// Sequence-aware scale for entry j: max over i <= j of |s_i| rho_j^(j-i), with
// rho_j the growth radius of s_0..s_j. Relative errors of quantities
// homogeneous of degree j are measured against max(|x_j|, scale_j).
std::vector<double> moment_scales(const MomentSequence& seq);

// max_j |a_j - b_j| / max(|b_j|, scale_j), scales taken from reference.
double relative_gap(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                    const MomentSequence& reference);

CMatrix block_hankel_H(const MomentSequence& seq, std::size_t n);
CMatrix block_hankel_K(const MomentSequence& seq, std::size_t n);

MomentSequence alpha_shift(const MomentSequence& seq);

std::vector<CMatrix> reciprocal_sequence(const std::vector<CMatrix>& entries,
                                         const ToleranceConfig& cfg = {});

// t_j = -s_0 u^rec_{j+1} s_0 with u the alpha-shift; kappa entries t_0..t_{kappa-1}.
MomentSequence schur_transform(const MomentSequence& seq, const ToleranceConfig& cfg = {});
MomentSequence kth_schur_transform(const MomentSequence& seq, std::size_t k,
                                   const ToleranceConfig& cfg = {});

// Rebuilds s from t and A = s_0. An empty t gives (A).
MomentSequence inverse_schur_transform(const std::vector<CMatrix>& t, const CMatrix& A, double alpha,
                                       const ToleranceConfig& cfg = {});

// Schur complements of the block Hankel matrices.
StieltjesParametrization stieltjes_parametrization(const MomentSequence& seq,
                                                   const ToleranceConfig& cfg = {});
// Leading entries of the iterated Schur transforms.
StieltjesParametrization stieltjes_parametrization_via_schur(const MomentSequence& seq,
                                                             const ToleranceConfig& cfg = {});

ClassReport classify(const MomentSequence& seq, const ToleranceConfig& cfg = {});

}  // namespace stieltjes
