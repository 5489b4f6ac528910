#include "stieltjes/verify.hpp"

#include "stieltjes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace stieltjes {

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {hi};
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t k = 0; k < n; ++k) out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> chebyshev_ordinates(double y_min, double y_max, std::size_t n) {
    if (!(y_min > 0.0 && y_max > y_min)) throw InvalidArgument("chebyshev_ordinates: need 0 < y_min < y_max");
    std::vector<double> ys;
    for (std::size_t k = 0; k < n; ++k) {
        const double h = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / (2.0 * static_cast<double>(n))) / y_min;
        ys.push_back(std::min(1.0 / h, y_max));
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

void RecoveryConfig::validate() const {
    if (y_grid.empty()) throw InvalidArgument("recovery grid is empty");
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        if (!std::isfinite(y_grid[i]) || !(y_grid[i] > 1.0)) throw InvalidArgument("recovery grid points must be finite and > 1");
        if (i > 0 && !(y_grid[i] > y_grid[i - 1])) throw InvalidArgument("recovery grid must be strictly increasing");
    }
    if (extrapolation_degree < 0) throw InvalidArgument("extrapolation degree must be nonnegative");
    if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
    if (adaptive_grid && adaptive_points < 2) throw InvalidArgument("adaptive grid needs at least 2 points");
    if (!(evaluation_accuracy > 0.0)) throw InvalidArgument("evaluation accuracy must be positive");
}

namespace {

struct Sample {
    Complex z;
    Complex w;  // 1 / z
    CMatrix F;
};

std::vector<Sample> sample(const MatrixFunction& F, const std::vector<double>& ys, bool mirrored) {
    std::vector<Sample> out;
    for (const double y : ys) {
        for (const double sign : {1.0, -1.0}) {
            if (sign < 0.0 && !mirrored) continue;
            const Complex z(0.0, sign * y);
            out.push_back({z, 1.0 / z, F(z)});
        }
    }
    return out;
}

// -z^(l+1) [F(z) + sum_{j<l} z^-(j+1) s_j]
CMatrix residual(const Sample& p, const std::vector<CMatrix>& s, std::size_t l) {
    CMatrix acc = p.F;
    Complex wp = p.w;
    for (std::size_t j = 0; j < l; ++j) {
        acc += wp * s[j];
        wp *= p.w;
    }
    return -acc / std::pow(p.w, static_cast<double>(l + 1));
}

struct Fit {
    CMatrix value;
    double noise = 0.0;
};

// Weighted least-squares polynomial in x = w / H through (x_i, R_i); returns the constant term.
Fit fit_constant(const std::vector<Sample>& pts, const std::vector<CMatrix>& R, std::size_t l, int degree,
                 double H, double accuracy) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    const Eigen::Index q = R.front().rows();
    const Eigen::Index d = std::clamp<Eigen::Index>(degree, 0, n - 1);
    CMatrix A(n, d + 1);
    CMatrix b(n, q * q);
    Eigen::VectorXd delta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex x = pts[i].w / H;
        // The residual of order l carries noise amplified by |w|^-l; weighting
        // by |x|^l makes the fit equivalent to a joint fit of all orders.
        const double omega = std::pow(std::abs(x), static_cast<double>(l));
        Complex xp(1.0, 0.0);
        for (Eigen::Index k = 0; k <= d; ++k) {
            A(i, k) = omega * xp;
            xp *= x;
        }
        b.row(i) = omega * Eigen::Map<const Eigen::RowVectorXcd>(R[i].data(), q * q);
        delta(i) = omega * accuracy * norm(pts[i].F) / std::pow(std::abs(pts[i].w), static_cast<double>(l + 1));
    }
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CMatrix coeffs = svd.solve(b);
    // First row of A^+ maps data noise onto the constant term.
    const auto& sv = svd.singularValues();
    Eigen::VectorXd inv(sv.size());
    const double cut = sv(0) * static_cast<double>(std::max(A.rows(), A.cols())) * std::numeric_limits<double>::epsilon();
    for (Eigen::Index k = 0; k < sv.size(); ++k) inv(k) = sv(k) > cut ? 1.0 / sv(k) : 0.0;
    const Eigen::RowVectorXcd row0 = svd.matrixV().row(0) * inv.asDiagonal() * svd.matrixU().adjoint();
    Fit f;
    f.value = Eigen::Map<const CMatrix>(coeffs.row(0).eval().data(), q, q);
    f.noise = (row0.cwiseAbs().transpose().array() * delta.array()).sum();
    return f;
}

RecoveryResult run_recursion(const std::vector<Sample>& pts, const std::vector<double>& ys, std::size_t m,
                             double alpha, const RecoveryConfig& cfg) {
    const Eigen::Index q = pts.front().F.rows();
    std::vector<CMatrix> s;
    std::vector<OrderDiagnostics> diag;
    double H = 0.0;
    for (const auto& p : pts) H = std::max(H, std::abs(p.w));

    for (std::size_t l = 0; l <= m; ++l) {
        std::vector<CMatrix> R;
        R.reserve(pts.size());
        for (const auto& p : pts) R.push_back(residual(p, s, l));
        OrderDiagnostics od;
        CMatrix est;
        if (cfg.use_extrapolation) {
            const int degree = std::max(0, cfg.extrapolation_degree - static_cast<int>(l));
            const Fit f = fit_constant(pts, R, l, degree, H, cfg.evaluation_accuracy);
            est = f.value;
            od.noise_estimate = f.noise;
            if (degree >= 1) od.truncation_estimate = norm(f.value - fit_constant(pts, R, l, degree - 1, H, cfg.evaluation_accuracy).value);
        } else {
            est = R.back();
            const Sample& last = pts.back();
            od.noise_estimate = cfg.evaluation_accuracy * norm(last.F) * std::pow(ys.back(), static_cast<double>(l + 1));
            if (R.size() >= 2) od.truncation_estimate = norm(R.back() - R[R.size() - 2]);
        }
        s.push_back(hermitian_part(est));
        diag.push_back(od);
    }
    for (auto& sj : s)
        if (sj.rows() != q) throw DimensionError("recover_moments: F changes size along the grid");
    MomentSequence seq(alpha, std::move(s));
    const std::vector<double> scales = moment_scales(seq);
    for (std::size_t l = 0; l <= m; ++l) {
        const double err = std::max(diag[l].noise_estimate, diag[l].truncation_estimate);
        diag[l].precision_limited = err > cfg.rel_tol * scales[l];
    }
    return {std::move(seq), std::move(diag), ys};
}

constexpr std::size_t kRadiusProbeOrders = 8;
// Innermost grid ordinate in units of the estimated radius. The tail of the
// expansion then shrinks like kGridClearance^-(degree + 1) while the noise of
// order l grows like kGridClearance^l.
constexpr double kGridClearance = 3.0;
constexpr int kRadiusIterations = 8;

}  // namespace

RecoveryResult recover_moments_detailed(const MatrixFunction& F, std::size_t m, double alpha, const RecoveryConfig& cfg) {
    cfg.validate();
    const bool mirrored = cfg.use_extrapolation;
    if (!cfg.adaptive_grid) {
        return run_recursion(sample(F, cfg.y_grid, mirrored), cfg.y_grid, m, alpha, cfg);
    }
    // Estimate the singularity radius from the recovered moments themselves and
    // move the grid out until the estimate stops growing.
    const double y_max = cfg.y_grid.back();
    double radius = std::max(1.0, std::abs(alpha));
    std::vector<double> ys = chebyshev_ordinates(kGridClearance * radius, y_max, static_cast<std::size_t>(cfg.adaptive_points));
    std::vector<Sample> pts = sample(F, ys, mirrored);
    const std::vector<double> inner_ys = ys;
    const std::vector<Sample> inner_pts = pts;
    bool converged = false;
    for (int it = 0; it < kRadiusIterations; ++it) {
        const RecoveryResult probe = run_recursion(pts, ys, kRadiusProbeOrders, alpha, cfg);
        const double n0 = norm(probe.moments[0]);
        if (n0 == 0.0) {
            converged = true;
            break;
        }
        double est = radius;
        for (std::size_t j = 1; j <= kRadiusProbeOrders; ++j)
            est = std::max(est, std::pow(norm(probe.moments[j]) / n0, 1.0 / static_cast<double>(j)));
        if (est <= 1.05 * radius) {
            converged = true;
            break;
        }
        if (kGridClearance * est >= y_max / 4.0) break;
        radius = est;
        ys = chebyshev_ordinates(kGridClearance * radius, y_max, static_cast<std::size_t>(cfg.adaptive_points));
        pts = sample(F, ys, mirrored);
    }
    // An estimate that keeps tracking the grid comes from roundoff rather than
    // from a singularity; the innermost grid amplifies that noise least.
    if (!converged) return run_recursion(inner_pts, inner_ys, m, alpha, cfg);
    return run_recursion(pts, ys, m, alpha, cfg);
}

MomentSequence recover_moments(const MatrixFunction& F, std::size_t m, double alpha, const RecoveryConfig& cfg) {
    return recover_moments_detailed(F, m, alpha, cfg).moments;
}

std::vector<Complex> default_membership_grid(double alpha) {
    const AdmissibilityGrid g = default_admissibility_grid(alpha);
    std::vector<Complex> out = g.upper;
    for (const double x : g.left_axis) out.emplace_back(x, 0.0);
    for (const double y : {10.0, 100.0, 1000.0, 10000.0}) out.emplace_back(0.0, y);
    return out;
}

VerificationReport check_stieltjes_membership(const MatrixFunction& F, double alpha, const std::vector<Complex>& grid,
                                              const ToleranceConfig& tol) {
    VerificationReport rep;
    auto flag = [&rep](std::string condition, Complex z, double magnitude) {
        rep.passed = false;
        rep.property_violations.push_back({std::move(condition), z, magnitude});
    };
    auto defect = [](const CMatrix& M, double scale) {
        return std::max(0.0, -min_eigenvalue(M)) / std::max(1.0, scale);
    };
    for (const Complex z : grid) {
        if (z.imag() == 0.0 && !(z.real() < alpha))
            throw InvalidArgument("membership grid point lies on [alpha, inf)");
        const CMatrix Fz = F(z);
        const double scale = norm(Fz);
        if (z.imag() > 0.0) {
            const double d = defect(imaginary_part(Fz), scale);
            if (d > tol.psd_tol) flag("Im F(w) not PSD", z, d);
            if (z.real() == 0.0) rep.sup_y_norm = std::max(rep.sup_y_norm, z.imag() * scale);
        } else if (z.imag() < 0.0) {
            const double d = defect(CMatrix(-imaginary_part(Fz)), scale);
            if (d > tol.psd_tol) flag("-Im F(w) not PSD", z, d);
        } else {
            const double drift = norm(Fz - Fz.adjoint()) / std::max(1.0, scale);
            if (drift > tol.eq_tol) flag("F(x) not Hermitian", z, drift);
            const double d = defect(Fz, scale);
            if (d > tol.psd_tol) flag("F(x) not PSD", z, d);
        }
    }
    return rep;
}

VerificationReport validate_solution(const MomentSequence& seq, const MatrixFunction& F, const RecoveryConfig& cfg,
                                     const ToleranceConfig& tol) {
    VerificationReport rep = check_stieltjes_membership(F, seq.alpha(), default_membership_grid(seq.alpha()), tol);
    RecoveryResult rec = recover_moments_detailed(F, seq.kappa(), seq.alpha(), cfg);
    const std::vector<double> scales = moment_scales(seq);
    for (std::size_t j = 0; j <= seq.kappa(); ++j) {
        const double num = norm(rec.moments[j] - seq[j]);
        const double den = std::max(norm(seq[j]), scales[j]);
        const double e = num == 0.0 ? 0.0 : (den > 0.0 ? num / den : std::numeric_limits<double>::infinity());
        rep.moment_rel_errors.push_back(e);
        rep.max_rel_error = std::max(rep.max_rel_error, e);
    }
    rep.recovered_moments = std::move(rec.moments);
    rep.diagnostics = std::move(rec.diagnostics);
    rep.y_grid = std::move(rec.y_grid);
    if (rep.max_rel_error > cfg.rel_tol) rep.passed = false;
    return rep;
}

}  // namespace stieltjes
