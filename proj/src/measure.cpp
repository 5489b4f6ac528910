#include "stieltjes/measure.hpp"

#include "stieltjes/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stieltjes {

DiscreteMeasure::DiscreteMeasure(double alpha, Eigen::Index q, std::vector<Atom> atoms,
                                 const ToleranceConfig& cfg)
    : alpha_(alpha), q_(q) {
    if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
    if (q < 1) throw InvalidArgument("measure dimension must be at least 1");
    for (const auto& a : atoms) {
        if (!std::isfinite(a.t)) throw InvalidArgument("atom position must be finite");
        if (a.t < alpha) throw InvalidArgument("atom lies left of alpha");
        if (a.weight.rows() != q || a.weight.cols() != q) throw InvalidArgument("atom weight has the wrong size");
        require_finite(a.weight, "atom weight");
        const double n = norm(a.weight);
        if (n > 0.0 && !is_psd(a.weight / n, cfg)) throw InvalidArgument("atom weight is not PSD");
    }
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
    for (auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().t == a.t) {
            atoms_.back().weight += a.weight;
        } else {
            atoms_.push_back(std::move(a));
        }
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.weight.isZero(0.0); });
}

CMatrix DiscreteMeasure::total_mass() const {
    CMatrix m = CMatrix::Zero(q_, q_);
    for (const auto& a : atoms_) m += a.weight;
    return m;
}

StieltjesFunctionRep::StieltjesFunctionRep(CMatrix g, DiscreteMeasure mu, const ToleranceConfig& cfg)
    : gamma(std::move(g)), measure(std::move(mu)) {
    if (gamma.rows() != measure.q() || gamma.cols() != measure.q())
        throw InvalidArgument("gamma must match the measure dimension");
    require_finite(gamma, "gamma");
    const double n = norm(gamma);
    if (n > 0.0 && !is_psd(gamma / n, cfg)) throw InvalidArgument("gamma is not PSD");
}

MomentSequence moments(const DiscreteMeasure& mu, std::size_t m) {
    std::vector<CMatrix> s(m + 1, CMatrix::Zero(mu.q(), mu.q()));
    for (const auto& a : mu.atoms()) {
        double p = 1.0;
        for (std::size_t j = 0; j <= m; ++j) {
            s[j] += p * a.weight;
            p *= a.t;
        }
    }
    return MomentSequence(mu.alpha(), std::move(s));
}

namespace {

Complex pole_factor(double t, Complex z, const ToleranceConfig& cfg) {
    const Complex d = t - z;
    if (std::abs(d) <= cfg.eq_tol) throw DomainError("evaluation point coincides with an atom", z);
    return 1.0 / d;
}

}  // namespace

CMatrix stieltjes_transform_eval(const DiscreteMeasure& mu, Complex z, const ToleranceConfig& cfg) {
    CMatrix out = CMatrix::Zero(mu.q(), mu.q());
    for (const auto& a : mu.atoms()) out += pole_factor(a.t, z, cfg) * a.weight;
    return out;
}

CMatrix stieltjes_function_eval(const StieltjesFunctionRep& rep, Complex z, const ToleranceConfig& cfg) {
    const double alpha = rep.measure.alpha();
    CMatrix out = rep.gamma;
    for (const auto& a : rep.measure.atoms()) out += ((1.0 + a.t - alpha) * pole_factor(a.t, z, cfg)) * a.weight;
    return out;
}

MatrixFunction stieltjes_transform(const DiscreteMeasure& mu, const ToleranceConfig& cfg) {
    return [mu, cfg](Complex z) { return stieltjes_transform_eval(mu, z, cfg); };
}

MatrixFunction stieltjes_function(const StieltjesFunctionRep& rep, const ToleranceConfig& cfg) {
    return [rep, cfg](Complex z) { return stieltjes_function_eval(rep, z, cfg); };
}

}  // namespace stieltjes
