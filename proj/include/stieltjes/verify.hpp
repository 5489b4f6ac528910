#pragma once

#include "stieltjes/linalg.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/sequence.hpp"
#include "stieltjes/transforms.hpp"

#include <optional>
#include <vector>

namespace stieltjes {

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

struct RecoveryConfig {
    // Ordinates y of the sample points iy, strictly increasing, all > 1.
    std::vector<double> y_grid = log_spaced(1e2, 1e6, 5);
    // Extrapolate each limit y -> inf by a least-squares polynomial in 1/z
    // through samples at +iy and -iy; otherwise take the value at the largest y.
    bool use_extrapolation = true;
    double rel_tol = 1e-3;
    // Polynomial degree used for s_0; order l uses degree - l (at least 0).
    int extrapolation_degree = 22;
    // Replace y_grid by a grid matched to the singularities of F: its lower
    // end is placed at 3x a radius estimated from the function itself and
    // its upper end is y_grid.back().
    bool adaptive_grid = false;
    int adaptive_points = 16;
    // Assumed relative accuracy of one evaluation of F, for the noise estimate.
    double evaluation_accuracy = 1e-14;

    // Throws InvalidArgument on a malformed grid or degree.
    void validate() const;
};

// Chebyshev-like ordinates: 1/y is spread as cos over (0, 1/y_min], clipped at 1/y_max.
std::vector<double> chebyshev_ordinates(double y_min, double y_max, std::size_t n);

struct OrderDiagnostics {
    double noise_estimate = 0.0;       // propagated evaluation noise in s_l
    double truncation_estimate = 0.0;  // change against one degree less
    bool precision_limited = false;    // estimates exceed rel_tol of the moment scale
};

struct RecoveryResult {
    MomentSequence moments;
    std::vector<OrderDiagnostics> diagnostics;
    std::vector<double> y_grid;  // ordinates actually used
};

MomentSequence recover_moments(const MatrixFunction& F, std::size_t m, double alpha, const RecoveryConfig& cfg = {});
RecoveryResult recover_moments_detailed(const MatrixFunction& F, std::size_t m, double alpha,
                                        const RecoveryConfig& cfg = {});

struct VerificationReport {
    std::optional<MomentSequence> recovered_moments;
    std::vector<double> moment_rel_errors;
    double max_rel_error = 0.0;
    std::vector<Violation> property_violations;
    double sup_y_norm = 0.0;  // sup over imaginary-axis grid points of y |F(iy)|
    std::vector<OrderDiagnostics> diagnostics;
    std::vector<double> y_grid;
    bool passed = true;
};

// Default probe points: 8 in the upper half plane, 4 on (-inf, alpha) and
// iy for y = 10, 100, 1000, 10000.
std::vector<Complex> default_membership_grid(double alpha);

// Records Im F(w) PSD violations for Im w > 0, -Im F(w) for Im w < 0, F(x)
// PSD violations for real x < alpha, and sup y |F(iy)| over points on the
// imaginary axis. InvalidArgument for grid points on [alpha, inf).
VerificationReport check_stieltjes_membership(const MatrixFunction& F, double alpha, const std::vector<Complex>& grid,
                                              const ToleranceConfig& tol = {});

// Recovers moments to order kappa, compares with seq and runs the membership
// check on the default grid.
VerificationReport validate_solution(const MomentSequence& seq, const MatrixFunction& F, const RecoveryConfig& cfg = {},
                                     const ToleranceConfig& tol = {});

}  // namespace stieltjes
