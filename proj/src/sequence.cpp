#include "stieltjes/sequence.hpp"

#include "stieltjes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stieltjes {

namespace {

using Entries = std::vector<CMatrix>;

// The sequence in the variable x / c with c a power of two close to the
// moment growth rate: s'_j = s_j / c^j, alpha' = alpha / c. Every quantity
// computed below is homogeneous, so results map back exactly by c^degree,
// while the rescaled block Hankel matrices have comparable block norms and
// the relative rank cutoff no longer discards genuine directions.
struct Equilibrated {
    Entries s;
    double alpha = 0.0;
    int log2c = 0;
    double reference = 0.0;  // max_j |s'_j|
};

Equilibrated equilibrate(const MomentSequence& seq) {
    Equilibrated e;
    const double rho = moment_growth_radius(seq);
    e.log2c = static_cast<int>(std::ceil(std::log2(rho)));
    e.alpha = std::ldexp(seq.alpha(), -e.log2c);
    e.s.reserve(seq.size());
    for (std::size_t j = 0; j < seq.size(); ++j) {
        e.s.push_back(seq[j] * std::ldexp(1.0, -e.log2c * static_cast<int>(j)));
        e.reference = std::max(e.reference, norm(e.s.back()));
    }
    return e;
}

double unscale_factor(const Equilibrated& e, std::size_t degree) {
    return std::ldexp(1.0, e.log2c * static_cast<int>(degree));
}

Entries shift(const Entries& s, double alpha) {
    Entries u;
    u.reserve(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        u.push_back(j == 0 ? s[0] : CMatrix(s[j] - alpha * s[j - 1]));
    }
    return u;
}

Entries reciprocal_with(const Entries& s, const CMatrix& s0_pinv) {
    Entries r;
    r.reserve(s.size());
    if (s.empty()) return r;
    r.push_back(s0_pinv);
    for (std::size_t k = 1; k < s.size(); ++k) {
        CMatrix acc = CMatrix::Zero(s[0].rows(), s[0].cols());
        for (std::size_t j = 0; j < k; ++j) acc += s[k - j] * r[j];
        r.push_back(-s0_pinv * acc);
    }
    return r;
}

Entries schur_step(const Entries& s, double alpha, const ToleranceConfig& cfg, double reference) {
    const Entries u = shift(s, alpha);
    const Entries rec = reciprocal_with(u, pinv(u[0], cfg, reference));
    Entries t;
    t.reserve(s.size() - 1);
    for (std::size_t j = 0; j + 1 < s.size(); ++j) t.push_back(-s[0] * rec[j + 1] * s[0]);
    return t;
}

CMatrix hankel(const Entries& s, std::size_t n, std::size_t offset) {
    const Eigen::Index q = s.front().rows();
    const auto dim = static_cast<Eigen::Index>(n + 1) * q;
    CMatrix H(dim, dim);
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t k = 0; k <= n; ++k)
            H.block(static_cast<Eigen::Index>(j) * q, static_cast<Eigen::Index>(k) * q, q, q) =
                s[j + k + offset];
    return H;
}

// Column stack (vertical) of s_l..s_m.
CMatrix col_stack(const Entries& s, std::size_t l, std::size_t m) {
    const Eigen::Index q = s.front().rows();
    CMatrix y(static_cast<Eigen::Index>(m - l + 1) * q, q);
    for (std::size_t j = l; j <= m; ++j) y.block(static_cast<Eigen::Index>(j - l) * q, 0, q, q) = s[j];
    return y;
}

// Row stack (horizontal) of s_l..s_m.
CMatrix row_stack(const Entries& s, std::size_t l, std::size_t m) {
    const Eigen::Index q = s.front().rows();
    CMatrix z(q, static_cast<Eigen::Index>(m - l + 1) * q);
    for (std::size_t j = l; j <= m; ++j) z.block(0, static_cast<Eigen::Index>(j - l) * q, q, q) = s[j];
    return z;
}

Entries direct_parametrization(const Entries& s, double a, const ToleranceConfig& cfg, double reference) {
    Entries Q;
    Q.reserve(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == 0) {
            Q.push_back(s[0]);
        } else if (j == 1) {
            Q.push_back(s[1] - a * s[0]);
        } else if (j % 2 == 0) {
            const std::size_t k = j / 2;
            const CMatrix Hp = pinv(hankel(s, k - 1, 0), cfg, reference);
            Q.push_back(s[2 * k] - row_stack(s, k, 2 * k - 1) * Hp * col_stack(s, k, 2 * k - 1));
        } else {
            const std::size_t k = j / 2;
            const CMatrix z = row_stack(s, k + 1, 2 * k) - a * row_stack(s, k, 2 * k - 1);
            const CMatrix y = col_stack(s, k + 1, 2 * k) - a * col_stack(s, k, 2 * k - 1);
            const CMatrix M = hankel(s, k - 1, 1) - a * hankel(s, k - 1, 0);
            Q.push_back(s[2 * k + 1] - a * s[2 * k] - z * pinv(M, cfg, reference) * y);
        }
    }
    return Q;
}

StieltjesParametrization unscale(const Entries& Qs, const Equilibrated& e) {
    StieltjesParametrization out;
    for (std::size_t j = 0; j < Qs.size(); ++j) {
        const double f = unscale_factor(e, j);
        out.entries.push_back(Qs[j] * f);
        out.scales.push_back(e.reference * f);
    }
    return out;
}

Entries schur_chain_heads(const Equilibrated& e, const ToleranceConfig& cfg) {
    Entries heads;
    Entries cur = e.s;
    for (;;) {
        heads.push_back(cur[0]);
        if (cur.size() == 1) break;
        cur = schur_step(cur, e.alpha, cfg, e.reference);
    }
    return heads;
}

bool psd_scaled(const CMatrix& M, const ToleranceConfig& cfg, double scale, double* min_eig = nullptr) {
    if (scale <= 0.0) {
        if (min_eig) *min_eig = 0.0;
        return true;
    }
    const CMatrix N = M / scale;
    if (min_eig) *min_eig = min_eigenvalue(N);
    return is_psd(N, cfg);
}

}  // namespace

MomentSequence::MomentSequence(double alpha, std::vector<CMatrix> entries)
    : alpha_(alpha), entries_(std::move(entries)) {
    if (!std::isfinite(alpha_)) throw InvalidArgument("alpha must be finite");
    if (entries_.empty()) throw InvalidArgument("a moment sequence needs at least s_0");
    const Eigen::Index q = entries_.front().rows();
    if (q == 0) throw InvalidArgument("moment matrices must be at least 1x1");
    for (const auto& s : entries_) {
        if (s.rows() != q || s.cols() != q)
            throw InvalidArgument("moment matrices must all be square of the same size");
        require_finite(s, "moment matrix");
    }
}

MomentSequence MomentSequence::zeros(double alpha, Eigen::Index q, std::size_t kappa) {
    return MomentSequence(alpha, std::vector<CMatrix>(kappa + 1, CMatrix::Zero(q, q)));
}

MomentSequence MomentSequence::truncated(std::size_t k) const {
    if (k > kappa()) throw PreconditionError("cannot truncate beyond kappa");
    return MomentSequence(alpha_, Entries(entries_.begin(), entries_.begin() + static_cast<long>(k + 1)));
}

double moment_growth_radius(const MomentSequence& seq) {
    double rho = std::max(1.0, std::abs(seq.alpha()));
    const double n0 = norm(seq[0]);
    const double base = n0 > 0.0 ? n0 : 1.0;
    for (std::size_t j = 1; j < seq.size(); ++j) {
        const double nj = norm(seq[j]);
        if (nj > 0.0) rho = std::max(rho, std::pow(nj / base, 1.0 / static_cast<double>(j)));
    }
    return rho;
}

namespace {

struct ScaleModel {
    double rho;
    double d;
    double at(std::size_t j) const { return d * std::pow(rho, static_cast<double>(j)); }
};

ScaleModel scale_model(const MomentSequence& seq) {
    ScaleModel m{moment_growth_radius(seq), 0.0};
    for (std::size_t i = 0; i < seq.size(); ++i)
        m.d = std::max(m.d, norm(seq[i]) / std::pow(m.rho, static_cast<double>(i)));
    return m;
}

// Scale of degree j built from s_0..s_j only, so that truncating a sequence
// leaves the scales of its remaining entries unchanged.
double prefix_scale(const MomentSequence& seq, std::size_t j) {
    return scale_model(seq.truncated(std::min(j, seq.kappa()))).at(j);
}

}  // namespace

std::vector<double> moment_scales(const MomentSequence& seq) {
    std::vector<double> out;
    for (std::size_t j = 0; j < seq.size(); ++j) out.push_back(prefix_scale(seq, j));
    return out;
}

double relative_gap(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                    const MomentSequence& reference) {
    if (a.size() != b.size()) throw DimensionError("relative_gap: sequences differ in length");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].rows() != b[j].rows() || a[j].cols() != b[j].cols())
            throw DimensionError("relative_gap: entry shapes differ");
        const double num = norm(a[j] - b[j]);
        const double den = std::max(norm(b[j]), prefix_scale(reference, j));
        if (num == 0.0) continue;
        worst = std::max(worst, den > 0.0 ? num / den : std::numeric_limits<double>::infinity());
    }
    return worst;
}

CMatrix block_hankel_H(const MomentSequence& seq, std::size_t n) {
    if (2 * n > seq.kappa()) throw PreconditionError("block_hankel_H needs 2n <= kappa");
    return hankel(seq.entries(), n, 0);
}

CMatrix block_hankel_K(const MomentSequence& seq, std::size_t n) {
    if (2 * n + 1 > seq.kappa()) throw PreconditionError("block_hankel_K needs 2n+1 <= kappa");
    return hankel(seq.entries(), n, 1);
}

MomentSequence alpha_shift(const MomentSequence& seq) {
    return MomentSequence(seq.alpha(), shift(seq.entries(), seq.alpha()));
}

std::vector<CMatrix> reciprocal_sequence(const std::vector<CMatrix>& entries, const ToleranceConfig& cfg) {
    if (entries.empty()) return {};
    for (const auto& s : entries)
        if (s.rows() != entries[0].rows() || s.cols() != entries[0].cols())
            throw DimensionError("reciprocal_sequence: entries differ in shape");
    return reciprocal_with(entries, pinv(entries[0], cfg));
}

MomentSequence schur_transform(const MomentSequence& seq, const ToleranceConfig& cfg) {
    if (seq.kappa() == 0) throw PreconditionError("the Schur transform needs kappa >= 1");
    return kth_schur_transform(seq, 1, cfg);
}

MomentSequence kth_schur_transform(const MomentSequence& seq, std::size_t k, const ToleranceConfig& cfg) {
    if (k > seq.kappa()) throw PreconditionError("kth_schur_transform needs k <= kappa");
    if (k == 0) return seq;
    const Equilibrated e = equilibrate(seq);
    Entries cur = e.s;
    // Hermitian data have Hermitian transforms; symmetrize each step so the
    // roundoff drift does not accumulate over the iterates.
    const bool hermitian = std::all_of(e.s.begin(), e.s.end(), [&](const CMatrix& sj) {
        return norm(sj - sj.adjoint()) <= cfg.eq_tol * e.reference;
    });
    for (std::size_t i = 0; i < k; ++i) {
        cur = schur_step(cur, e.alpha, cfg, e.reference);
        if (hermitian)
            for (auto& tj : cur) tj = hermitian_part(tj);
    }
    // Entries that vanish in exact arithmetic come out as roundoff on the
    // scale of the input; clear them so the transform classifies like its
    // exact counterpart.
    for (std::size_t j = 0; j < cur.size(); ++j) {
        if (norm(cur[j]) <= cfg.eq_tol * e.reference) cur[j].setZero();
        cur[j] *= unscale_factor(e, j + k);
    }
    return MomentSequence(seq.alpha(), std::move(cur));
}

MomentSequence inverse_schur_transform(const std::vector<CMatrix>& t, const CMatrix& A, double alpha,
                                       const ToleranceConfig& cfg) {
    if (A.rows() != A.cols()) throw DimensionError("inverse_schur_transform: A must be square");
    for (const auto& tj : t)
        if (tj.rows() != A.rows() || tj.cols() != A.cols())
            throw DimensionError("inverse_schur_transform: t entries must match A");
    const CMatrix Ap = pinv(A, cfg);
    const CMatrix P = A * Ap;
    Entries r{A};
    Entries flat{A};  // alpha-shift of r
    for (std::size_t j = 1; j <= t.size(); ++j) {
        CMatrix B = CMatrix::Zero(A.rows(), A.cols());
        for (std::size_t k = 0; k < j; ++k) B += t[j - k - 1] * Ap * flat[k];
        // r_j - alpha r_{j-1} = AA^+ B_j unrolls to the double sum defining r_j.
        flat.push_back(P * B);
        r.push_back(alpha * r[j - 1] + flat.back());
    }
    return MomentSequence(alpha, std::move(r));
}

StieltjesParametrization stieltjes_parametrization(const MomentSequence& seq, const ToleranceConfig& cfg) {
    const Equilibrated e = equilibrate(seq);
    return unscale(direct_parametrization(e.s, e.alpha, cfg, e.reference), e);
}

StieltjesParametrization stieltjes_parametrization_via_schur(const MomentSequence& seq,
                                                             const ToleranceConfig& cfg) {
    const Equilibrated e = equilibrate(seq);
    return unscale(schur_chain_heads(e, cfg), e);
}

ClassReport classify(const MomentSequence& seq, const ToleranceConfig& cfg) {
    ClassReport rep;
    const Equilibrated e = equilibrate(seq);
    const std::size_t kappa = seq.kappa();
    const Eigen::Index q = seq.q();

    auto add_check = [&](std::string name, std::size_t n, const CMatrix& M) {
        HankelCheck c;
        c.name = std::move(name);
        c.n = n;
        c.psd = psd_scaled(M, cfg, std::max(norm(M), e.reference), &c.min_eigenvalue);
        rep.hankel_checks.push_back(c);
    };
    for (std::size_t n = 0; 2 * n <= kappa; ++n) add_check("H_n", n, hankel(e.s, n, 0));
    for (std::size_t n = 0; 2 * n + 1 <= kappa; ++n)
        add_check("-aH_n+K_n", n, CMatrix(hankel(e.s, n, 1) - e.alpha * hankel(e.s, n, 0)));
    rep.stieltjes_nonneg = std::all_of(rep.hankel_checks.begin(), rep.hankel_checks.end(),
                                       [](const HankelCheck& c) { return c.psd; });

    const double ref = e.reference > 0.0 ? e.reference : 1.0;
    const Entries Q = direct_parametrization(e.s, e.alpha, cfg, e.reference);
    Entries Qn;
    for (const auto& Qj : Q) Qn.push_back(Qj / ref);

    bool chain = true;
    bool definite = true;
    for (std::size_t j = 0; j < Qn.size(); ++j) {
        const bool psd = is_psd(Qn[j], cfg);
        chain = chain && psd;
        definite = definite && psd && rank_of(Qn[j], cfg, 1.0) == static_cast<std::size_t>(q);
        if (j + 1 < Qn.size()) chain = chain && range_contains(Qn[j], Qn[j + 1], cfg, 1.0);
    }
    rep.stieltjes_extendable = rep.stieltjes_nonneg && chain;
    rep.stieltjes_posdef = rep.stieltjes_extendable && definite;
    rep.completely_degenerate = norm(Qn.back()) <= cfg.eq_tol;

    bool dominant = true;
    const CMatrix s0 = e.s[0] / ref;
    for (std::size_t j = 1; j < e.s.size() && dominant; ++j) {
        const CMatrix sj = e.s[j] / ref;
        dominant = null_contains(s0, sj, cfg, 1.0) && range_contains(s0, sj, cfg, 1.0);
    }
    rep.first_term_dominant = dominant;
    return rep;
}

}  // namespace stieltjes
