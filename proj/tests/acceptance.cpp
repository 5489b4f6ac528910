// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include "stieltjes/errors.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/polynomial.hpp"
#include "stieltjes/sequence.hpp"
#include "stieltjes/transforms.hpp"
#include "stieltjes/verify.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace stieltjes;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

constexpr std::uint64_t kSweepSeed = 20240601;

const std::vector<oracle::SweepCase>& shared_sweep() {
    static const std::vector<oracle::SweepCase> cases = oracle::sweep(kSweepSeed, 200, 8);
    return cases;
}

RecoveryConfig recovery_config() {
    RecoveryConfig rc;
    rc.y_grid = log_spaced(1e2, 1e6, 5);
    rc.use_extrapolation = true;
    rc.adaptive_grid = true;
    return rc;
}

std::string fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

Outcome solvability_sweep() {
    const auto start = std::chrono::steady_clock::now();
    const auto cases = oracle::sweep(kSweepSeed, 200, 8);
    int accepted = 0;
    for (const auto& c : cases) {
        const ClassReport r = classify(c.seq);
        if (r.stieltjes_nonneg && r.stieltjes_extendable) ++accepted;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {accepted == 200 && secs < 30.0,
            fmt("oracle solvability sweep: %.0f/200 nonnegative and extendable in %.2f s (limit 30 s)", accepted, secs)};
}

Outcome parametrization_agreement() {
    double worst = 0.0;
    for (const auto& c : shared_sweep()) {
        const auto direct = stieltjes_parametrization(c.seq);
        const auto chain = stieltjes_parametrization_via_schur(c.seq);
        worst = std::max(worst, relative_gap(direct.entries, chain.entries, c.seq));
    }
    return {worst <= 1e-8, fmt("parametrization agreement: max relative gap %.2e over 200 sequences (limit 1e-8)", worst)};
}

Outcome sequence_round_trip() {
    double worst = 0.0;
    int n = 0;
    for (const auto& c : shared_sweep()) {
        if (c.seq.kappa() == 0) continue;
        const MomentSequence t = schur_transform(c.seq);
        const MomentSequence back = inverse_schur_transform(t.entries(), c.seq[0], c.seq.alpha());
        worst = std::max(worst, relative_gap(back.entries(), c.seq.entries(), c.seq));
        ++n;
    }
    return {worst <= 1e-8, fmt("sequence round trip: max relative error %.2e over %.0f sequences (limit 1e-8)", worst, n)};
}

Outcome polynomial_identity() {
    oracle::Rng rng(kSweepSeed + 4);
    double worst = 0.0;
    int deficient = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index q = oracle::uniform_int(rng, 1, 4);
        const Eigen::Index r = trial % (q + 1);
        const CMatrix A = r == 0 ? CMatrix::Zero(q, q)
                                 : CMatrix(oracle::random_complex(rng, q, r) * oracle::random_complex(rng, r, q));
        if (r < q) ++deficient;
        const double alpha = oracle::uniform(rng, -3, 3);
        const Complex z(oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5));
        CMatrix D = CMatrix::Zero(2 * q, 2 * q);
        D.topLeftCorner(q, q) = A * pinv(A);
        D.bottomRightCorner(q, q) = CMatrix::Identity(q, q);
        const CMatrix WV = poly_W(A, alpha).value(z) * poly_V(A, alpha).value(z);
        worst = std::max(worst, (WV - (z - alpha) * D).norm());
    }
    return {worst <= 1e-10,
            fmt("W_A V_A identity: max deviation %.2e over 100 triples, %.0f rank deficient (limit 1e-10)", worst, deficient)};
}

Outcome function_round_trip() {
    oracle::Rng rng(kSweepSeed + 5);
    double worst = 0.0;
    const auto& cases = shared_sweep();
    for (std::size_t i = 0; i < 50; ++i) {
        const auto& c = cases[i];
        const MatrixFunction F = stieltjes_transform(c.mu);
        const CMatrix A = c.seq[0];
        const double alpha = c.seq.alpha();
        const MatrixFunction back = inverse_schur_stieltjes(schur_stieltjes(F, A, alpha), A, alpha);
        const MatrixFunction forth = schur_stieltjes(inverse_schur_stieltjes(F, A, alpha), A, alpha);
        for (const Complex z : oracle::off_axis_points(rng, alpha, 20)) {
            const CMatrix f = F(z);
            worst = std::max({worst, oracle::rel_err(back(z), f), oracle::rel_err(forth(z), f)});
        }
    }
    return {worst <= 1e-8, fmt("function round trip: max relative error %.2e over 50 functions x 20 points (limit 1e-8)", worst)};
}

Outcome moment_recovery() {
    const RecoveryConfig rc = recovery_config();
    double worst = 0.0;
    double worst_low = 0.0;
    int n = 0;
    for (const auto& c : oracle::sweep(kSweepSeed + 6, 100, 6)) {
        const MomentSequence rec = recover_moments(stieltjes_transform(c.mu), c.seq.kappa(), c.seq.alpha(), rc);
        worst = std::max(worst, relative_gap(rec.entries(), c.seq.entries(), c.seq));
        const std::size_t low = std::min<std::size_t>(2, c.seq.kappa());
        const MomentSequence head = c.seq.truncated(low);
        worst_low = std::max(worst_low, relative_gap(rec.truncated(low).entries(), head.entries(), head));
        ++n;
    }
    return {worst <= 1e-3 && worst_low <= 1e-6,
            fmt("moment recovery: max relative error %.2e for m <= 6 (limit 1e-3), %.2e for m <= 2 (limit 1e-6), %.0f "
                "transforms",
                worst, worst_low, n)};
}

Outcome solution_correctness() {
    const RecoveryConfig rc = recovery_config();
    const auto& cases = shared_sweep();
    double worst_central = 0.0;
    int central_pass = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        const auto& c = cases[i];
        const SolutionFunction F = solution_from_parameter(c.seq, ParameterFunction::zero(c.seq.q()));
        const VerificationReport r = validate_solution(c.seq, F.as_function(), rc);
        worst_central = std::max(worst_central, r.max_rel_error);
        if (r.passed && r.max_rel_error <= 1e-3) ++central_pass;
    }
    oracle::Rng rng(kSweepSeed + 7);
    double worst_param = 0.0;
    int param_pass = 0;
    int param_total = 0;
    for (const auto& c : cases) {
        if (param_total == 20) break;
        const auto [Q, scale] = last_parameter_entry(c.seq);
        const auto r = static_cast<Eigen::Index>(rank_of(Q, {}, scale));
        if (r == 0) continue;
        const DiscreteMeasure nu = oracle::jittered_measure(rng, r, oracle::uniform_int(rng, 1, 4), c.seq.alpha());
        const StieltjesFunctionRep f(CMatrix::Zero(r, r), nu);
        const ParameterFunction G = ParameterFunction::low_dim_from_range(Q, f, {}, scale);
        ++param_total;
        try {
            const SolutionFunction F = solution_from_parameter(c.seq, G);
            const VerificationReport rep = validate_solution(c.seq, F.as_function(), rc);
            worst_param = std::max(worst_param, rep.max_rel_error);
            if (rep.passed && rep.max_rel_error <= 1e-3) ++param_pass;
        } catch (const Error&) {
            worst_param = std::numeric_limits<double>::infinity();
        }
    }
    return {central_pass == 50 && param_total == 20 && param_pass == 20,
            fmt("solution correctness: central %.0f/50 pass (max error %.2e), non-central %.0f/20 pass (max error %.2e), "
                "limit 1e-3",
                central_pass, worst_central, param_pass, worst_param)};
}

Outcome uniqueness() {
    oracle::Rng rng(kSweepSeed + 8);
    double worst = 0.0;
    int degenerate = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index q = oracle::uniform_int(rng, 1, 3);
        const auto kappa = static_cast<std::size_t>(oracle::uniform_int(rng, 1, 6));
        const double alpha = std::vector<double>{-1.0, 0.0, 2.0}[static_cast<std::size_t>(trial % 3)];
        const auto c = oracle::degenerate_case(rng, q, kappa, alpha);
        if (classify(c.seq).completely_degenerate) ++degenerate;
        // With Q_kappa = 0 the admissible class reduces to the zero function;
        // its two representations must give the same solution, and so must an
        // arbitrary function substituted into the same resolvent.
        const SolutionFunction Fa = solution_from_parameter(c.seq, ParameterFunction::zero(q));
        const StieltjesFunctionRep empty(CMatrix::Zero(q, q), DiscreteMeasure(alpha, q, {}));
        const SolutionFunction Fb = solution_from_parameter(c.seq, ParameterFunction::direct(empty));
        const SolutionFunction U = unique_solution(c.seq);
        const ParameterFunction any =
            ParameterFunction::direct(StieltjesFunctionRep(CMatrix::Zero(q, q), oracle::jittered_measure(rng, q, 3, alpha)));
        for (const Complex z : oracle::off_axis_points(rng, alpha, 10)) {
            const CMatrix a = Fa(z);
            const CMatrix free = lft_apply(Fa.resolvent().value(z), any(z));
            worst = std::max({worst, oracle::rel_err(Fb(z), a), oracle::rel_err(U(z), a), oracle::rel_err(free, a)});
        }
    }
    const SolutionFunction d1 = unique_solution(build::seq(0, {1, 1, 1}));
    double exact = 0.0;
    for (const Complex z : {Complex(0, 1), Complex(0, 2), Complex(-1, 0)})
        exact = std::max(exact, std::abs(d1(z)(0, 0) - 1.0 / (1.0 - z)));
    return {degenerate == 20 && worst <= 1e-8 && exact <= 1e-10,
            fmt("uniqueness: %.0f/20 degenerate, max disagreement %.2e (limit 1e-8), 1/(1-z) deviation %.2e (limit 1e-10)",
                degenerate, worst, exact)};
}

Outcome class_transport() {
    const RecoveryConfig rc = recovery_config();
    int transforms = 0;
    int extendable = 0;
    double worst = 0.0;
    int functions = 0;
    const auto& cases = shared_sweep();
    for (std::size_t i = 0; i < 100; ++i) {
        const auto& c = cases[i];
        for (std::size_t k = 1; k <= c.seq.kappa(); ++k) {
            ++transforms;
            if (classify(kth_schur_transform(c.seq, k)).stieltjes_extendable) ++extendable;
        }
        if (c.seq.kappa() == 0) continue;
        const MomentSequence t = schur_transform(c.seq);
        const MatrixFunction G = schur_stieltjes(stieltjes_transform(c.mu), c.seq[0], c.seq.alpha());
        const MomentSequence rec = recover_moments(G, t.kappa(), t.alpha(), rc);
        worst = std::max(worst, oracle::transport_error(rec, t, c.seq));
        ++functions;
    }
    return {extendable == transforms && worst <= 1e-3,
            fmt("class transport: %.0f/%.0f Schur transforms extendable, function-level recovery max error %.2e over %.0f "
                "functions (limit 1e-3)",
                extendable, transforms, worst, functions)};
}

Outcome negative_controls() {
    oracle::Rng rng(kSweepSeed + 10);
    int rejected = 0;
    int generated = 0;
    while (generated < 100) {
        const auto c = oracle::sweep_case(rng);
        std::vector<CMatrix> s = c.seq.entries();
        const auto j = static_cast<std::size_t>(oracle::uniform_int(rng, 0, static_cast<int>(c.seq.kappa())));
        const std::vector<double> scales = moment_scales(c.seq);
        const CMatrix E = oracle::random_hermitian(rng, c.seq.q());
        s[j] += oracle::uniform(rng, 0.5, 3.0) * scales[j] * E / E.norm();
        const MomentSequence bad(c.seq.alpha(), s);
        // Keep only perturbations that an unscaled eigenvalue test confirms.
        if (oracle::worst_hankel_eigenvalue(bad) > -1e-3) continue;
        ++generated;
        if (!classify(bad).stieltjes_nonneg) ++rejected;
    }

    const RecoveryConfig rc = recovery_config();
    int flagged = 0;
    int checks = 0;
    auto first_violation = [](const VerificationReport& r) {
        for (std::size_t j = 0; j < r.moment_rel_errors.size(); ++j)
            if (r.moment_rel_errors[j] >= 0.5) return static_cast<long>(j);
        return -1L;
    };
    {
        const MatrixFunction wrong = stieltjes_transform(DiscreteMeasure(0.0, 1, {{2.0, build::scalar(1)}}));
        const VerificationReport r = validate_solution(build::seq(0, {1, 1, 1}), wrong, rc);
        ++checks;
        if (first_violation(r) == 1 && !r.passed) ++flagged;
    }
    for (std::size_t i = 0; i < 20; ++i) {
        const auto& c = shared_sweep()[i];
        // Doubled weights break s_0; atoms moved right by twice the growth
        // radius keep s_0 and break s_1.
        std::vector<Atom> doubled, moved;
        const double shift = 2.0 * moment_growth_radius(c.seq);
        for (const auto& a : c.mu.atoms()) {
            doubled.push_back({a.t, 2.0 * a.weight});
            moved.push_back({a.t + shift, a.weight});
        }
        const DiscreteMeasure mu_doubled(c.mu.alpha(), c.mu.q(), doubled);
        const VerificationReport r0 = validate_solution(c.seq, stieltjes_transform(mu_doubled), rc);
        ++checks;
        if (first_violation(r0) == 0 && !r0.passed) ++flagged;
        if (c.seq.kappa() == 0) continue;
        const DiscreteMeasure mu_moved(c.mu.alpha(), c.mu.q(), moved);
        const VerificationReport r1 = validate_solution(c.seq, stieltjes_transform(mu_moved), rc);
        ++checks;
        if (first_violation(r1) == 1 && !r1.passed) ++flagged;
    }
    return {rejected == 100 && flagged == checks,
            fmt("negative controls: %.0f/100 perturbed sequences rejected, %.0f/%.0f mismatched functions flagged at the "
                "first violated moment",
                rejected, flagged, checks)};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, solvability_sweep}, {2, parametrization_agreement}, {3, sequence_round_trip}, {4, polynomial_identity},
        {5, function_round_trip}, {6, moment_recovery}, {7, solution_correctness}, {8, uniqueness},
        {9, class_transport}, {10, negative_controls},
    };
    int failures = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
