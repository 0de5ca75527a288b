#ifndef NETWAVE_SOLVERS_HPP
#define NETWAVE_SOLVERS_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>

#include "netwave/assembly.hpp"

namespace netwave {

/// Coefficient pair at one time instant.
struct State {
    double t = 0.0;
    Eigen::VectorXd u;  // reduced flux coordinates
    Eigen::VectorXd p;  // one value per element
};

/// Sampled solution sequence with discrete energies.
struct Trajectory {
    std::vector<State> samples;
    std::vector<double> energies;
    double theta = 0.5;
    double dt = 1e-3;
    double T = 0.0;
};

/// Shared factorization of the stationary saddle-point block
/// [A, -D^T; D, 0]. Reused by the stationary solve and the elliptic
/// projection.
class SaddlePointSolver {
public:
    explicit SaddlePointSolver(const SystemMatrices& sys);
    State solve(const LoadVector& loads) const;

private:
    const SystemMatrices* sys_;
    Eigen::SparseLU<SparseMat> lu_;
};

/// Solves the stationary mixed problem; residual checked to
/// 1e-10 * (1 + ||loads||).
State solve_stationary(const SystemMatrices& sys, const LoadVector& loads);

/// Elliptic projection of a discrete pair: reproduces the weak right-hand
/// sides (a u, v) - (p, v') and (u', q). Idempotent on discrete pairs.
State elliptic_projection(const SystemMatrices& sys, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& p);

/// Elliptic projection of per-edge functions (u, du/dx, p).
State elliptic_projection(const SystemMatrices& sys, const DofMap& spaces,
                          const EdgeFunctions& u, const EdgeFunctions& du,
                          const EdgeFunctions& p);

/// Time-dependent loads (sources plus boundary data), evaluated at the
/// stage time t^{n+theta}. Null means homogeneous.
using LoadCallback = std::function<LoadVector(double t)>;

/// One-step implicit theta-scheme for the semi-discrete system. The block
/// matrix is factorized once and reused across steps.
class ThetaScheme {
public:
    ThetaScheme(const SystemMatrices& sys, double theta, double dt);

    void set_state(const State& init);
    const State& state() const { return state_; }

    /// advance one step; loads evaluated at t^n + theta*dt
    void step(const LoadCallback& loads);

    double energy() const;
    double theta() const { return theta_; }
    double dt() const { return dt_; }

private:
    const SystemMatrices* sys_;
    double theta_;
    double dt_;
    State state_;
    int nu_, np_;
    Eigen::SparseLU<SparseMat> lu_;
    SparseMat rhs_uu_, rhs_up_, rhs_pu_;  // explicit-part blocks
};

/// Integrates from t=0 to T and samples the trajectory at the requested
/// times (rounded to the nearest step).
Trajectory simulate(const SystemMatrices& sys, const State& init, const LoadCallback& loads,
                    double theta, double dt, double T, const std::vector<double>& sample_times);

}  // namespace netwave

#endif
