#ifndef NETWAVE_ANALYSIS_HPP
#define NETWAVE_ANALYSIS_HPP

#include <Eigen/Dense>
#include <vector>

#include "netwave/solvers.hpp"

namespace netwave {

/// Discrete total energy 1/2 (u^T M_c u + p^T M_b p).
double energy(const SystemMatrices& sys, const State& state);

/// Kinetic energy of a uniformly sampled trajectory (finite-difference time
/// derivatives) plus the Lyapunov correction eps * (c du/dt, u). Centered
/// differences at interior samples, one-sided at the ends.
struct ModifiedEnergySample {
    double t;
    double kinetic;   // 1/2 (||c^1/2 u_t||^2 + ||b^1/2 p_t||^2)
    double modified;  // kinetic + eps (c u_t, u)
};

std::vector<ModifiedEnergySample> modified_energy(const SystemMatrices& sys,
                                                  const Trajectory& traj, double eps);

/// Least-squares fit of log E(t) = log C - gamma t over a time window.
struct DecayFit {
    double gamma = 0.0;
    double amplitude = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double r_squared = 0.0;
};

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples,
                        double t_min, double t_max);

/// Largest eigenvalue of M_c u = lambda (K + A0) u: the squared discrete
/// Poincare constant. Lanczos iteration on the Cholesky-transformed
/// standard problem, relative tolerance 1e-10.
double poincare_constant_sq(const SystemMatrices& sys);

/// Discrete inf-sup constant: square root of the smallest eigenvalue of the
/// pressure Schur complement D H^{-1} D^T q = lambda M_p q (unweighted
/// H(div) norm and pressure mass).
double infsup_constant(const SystemMatrices& sys);

/// Named time-dependent scenario: initial data plus boundary pressures.
struct Scenario {
    State initial;          // must match the target discretization
    LoadCallback loads;     // boundary/source loads, null for homogeneous
    double T = 20.0;
};

/// The decay test scenario: initial state (u, p) = (0, 1), boundary
/// pressure ramp 1 - t for t < 1, then 0, at every boundary vertex.
Scenario ramp_scenario(const SystemMatrices& sys, const DofMap& spaces, double T = 20.0);

/// Nested-mesh convergence harness: e_h = max_n ||u_h - u_2h||_c^2 +
/// ||p_h - p_2h||_b^2 (coefficient-weighted, twice the energy of the
/// difference) with prolongation of the coarse solution, for
/// h = h0 * 2^{-1..-levels}.
struct ConvergenceTable {
    std::vector<double> h;
    std::vector<double> error;  // e_h
    double rate = 0.0;          // least-squares slope over the last two steps
};

ConvergenceTable convergence_study(const Network& net, double alpha, double h0, int levels,
                                   double theta, double dt, double T);

}  // namespace netwave

#endif
