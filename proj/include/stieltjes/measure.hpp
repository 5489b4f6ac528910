#pragma once

#include "stieltjes/linalg.hpp"
#include "stieltjes/sequence.hpp"

#include <functional>
#include <vector>

namespace stieltjes {

// Matrix-valued function of one complex variable.
using MatrixFunction = std::function<CMatrix(Complex)>;

struct Atom {
    double t = 0.0;
    CMatrix weight;
};

// Finitely atomic nonnegative Hermitian measure on [alpha, inf).
class DiscreteMeasure {
public:
    // Sorts the atoms, merges equal positions and drops zero weights.
    // Throws InvalidArgument for atoms left of alpha, weights of the wrong
    // size and weights that are not PSD.
    DiscreteMeasure(double alpha, Eigen::Index q, std::vector<Atom> atoms, const ToleranceConfig& cfg = {});

    double alpha() const { return alpha_; }
    Eigen::Index q() const { return q_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    // sigma([alpha, inf))
    CMatrix total_mass() const;

private:
    double alpha_;
    Eigen::Index q_;
    std::vector<Atom> atoms_;
};

// gamma + sum_k (1 + t_k - alpha) / (t_k - z) M_k
struct StieltjesFunctionRep {
    CMatrix gamma;
    DiscreteMeasure measure;

    StieltjesFunctionRep(CMatrix gamma, DiscreteMeasure measure, const ToleranceConfig& cfg = {});
    Eigen::Index q() const { return measure.q(); }
};

MomentSequence moments(const DiscreteMeasure& mu, std::size_t m);

// sum_k M_k / (t_k - z); DomainError when z lies within eq_tol of an atom.
CMatrix stieltjes_transform_eval(const DiscreteMeasure& mu, Complex z, const ToleranceConfig& cfg = {});

CMatrix stieltjes_function_eval(const StieltjesFunctionRep& rep, Complex z, const ToleranceConfig& cfg = {});

MatrixFunction stieltjes_transform(const DiscreteMeasure& mu, const ToleranceConfig& cfg = {});
MatrixFunction stieltjes_function(const StieltjesFunctionRep& rep, const ToleranceConfig& cfg = {});

}  // namespace stieltjes
