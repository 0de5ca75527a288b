#include "netwave/solvers.hpp"

#include <cmath>

namespace netwave {

namespace {

void append_block(std::vector<Eigen::Triplet<double>>& trip, const SparseMat& block,
                  int row0, int col0, double scale) {
    for (int col = 0; col < block.outerSize(); ++col)
        for (SparseMat::InnerIterator it(block, col); it; ++it)
            trip.emplace_back(row0 + static_cast<int>(it.row()),
                              col0 + static_cast<int>(it.col()), scale * it.value());
}

}  // namespace

SaddlePointSolver::SaddlePointSolver(const SystemMatrices& sys) : sys_(&sys) {
    const int nu = sys.flux_dim();
    const int np = sys.pressure_dim();
    std::vector<Eigen::Triplet<double>> trip;
    append_block(trip, sys.mass_a, 0, 0, 1.0);
    append_block(trip, SparseMat(sys.divergence.transpose()), 0, nu, -1.0);
    append_block(trip, sys.divergence, nu, 0, 1.0);
    SparseMat block(nu + np, nu + np);
    block.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(block);
    if (lu_.info() != Eigen::Success)
        throw NumericalError("stationary saddle-point factorization failed "
                             "(discrete stability assumptions violated)");
}

State SaddlePointSolver::solve(const LoadVector& loads) const {
    const int nu = sys_->flux_dim();
    const int np = sys_->pressure_dim();
    if (loads.flux.size() != nu || loads.pressure.size() != np)
        throw ValidationError("solve_stationary: load dimensions do not match the system");

    Eigen::VectorXd rhs(nu + np);
    rhs.head(nu) = loads.flux;
    rhs.tail(np) = loads.pressure;
    Eigen::VectorXd x = lu_.solve(rhs);

    State st;
    st.u = x.head(nu);
    st.p = x.tail(np);

    Eigen::VectorXd res_u = sys_->mass_a * st.u - sys_->divergence.transpose() * st.p - loads.flux;
    Eigen::VectorXd res_p = sys_->divergence * st.u - loads.pressure;
    const double scale = 1.0 + rhs.norm();
    if (std::sqrt(res_u.squaredNorm() + res_p.squaredNorm()) > 1e-10 * scale)
        throw NumericalError("stationary solve residual exceeds tolerance");
    return st;
}

State solve_stationary(const SystemMatrices& sys, const LoadVector& loads) {
    return SaddlePointSolver(sys).solve(loads);
}

State elliptic_projection(const SystemMatrices& sys, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& p) {
    LoadVector loads;
    loads.flux = sys.mass_a * u - sys.divergence.transpose() * p;
    loads.pressure = sys.divergence * u;
    return solve_stationary(sys, loads);
}

State elliptic_projection(const SystemMatrices& sys, const DofMap& spaces,
                          const EdgeFunctions& u, const EdgeFunctions& du,
                          const EdgeFunctions& p) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    LoadVector loads = zero_loads(spaces);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(spaces.full_flux_dim());
    for (int e = 0; e < net.num_edges(); ++e) {
        const double h = mesh.cell_size(e);
        const double a = sys.alpha * net.edges()[e].a;
        for (int t = 0; t < mesh.cells(e); ++t) {
            const double x0 = t * h;
            GaussRule3 gauss(x0, x0 + h);
            double au_left = 0.0, au_right = 0.0, p_int = 0.0, du_int = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double s = (gauss.x[i] - x0) / h;
                const double auv = a * u[e](gauss.x[i]);
                au_left += gauss.w[i] * auv * (1.0 - s);
                au_right += gauss.w[i] * auv * s;
                p_int += gauss.w[i] * p[e](gauss.x[i]);
                du_int += gauss.w[i] * du[e](gauss.x[i]);
            }
            // -(p, v'): hat-function derivatives are -1/h and +1/h
            full[spaces.node_dof(e, t)] += au_left + p_int / h;
            full[spaces.node_dof(e, t + 1)] += au_right - p_int / h;
            loads.pressure[mesh.elem_offset(e) + t] = du_int;
        }
    }
    loads.flux = spaces.Z().transpose() * full;
    return solve_stationary(sys, loads);
}

ThetaScheme::ThetaScheme(const SystemMatrices& sys, double theta, double dt)
    : sys_(&sys), theta_(theta), dt_(dt), nu_(sys.flux_dim()), np_(sys.pressure_dim()) {
    if (theta < 0.5 || theta > 1.0)
        throw ValidationError("theta must lie in [1/2, 1]");
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");

    std::vector<Eigen::Triplet<double>> trip;
    append_block(trip, sys.mass_c, 0, 0, 1.0);
    append_block(trip, sys.mass_a, 0, 0, theta * dt);
    SparseMat Dt(sys.divergence.transpose());
    append_block(trip, Dt, 0, nu_, -theta * dt);
    append_block(trip, sys.divergence, nu_, 0, theta * dt);
    for (int i = 0; i < np_; ++i)
        trip.emplace_back(nu_ + i, nu_ + i, sys.mass_b_diag[i]);
    SparseMat block(nu_ + np_, nu_ + np_);
    block.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(block);
    if (lu_.info() != Eigen::Success)
        throw NumericalError("theta-scheme factorization failed");

    rhs_uu_ = sys.mass_c - (1.0 - theta) * dt * sys.mass_a;
    rhs_up_ = (1.0 - theta) * dt * Dt;
    rhs_pu_ = -(1.0 - theta) * dt * sys.divergence;

    state_.t = 0.0;
    state_.u = Eigen::VectorXd::Zero(nu_);
    state_.p = Eigen::VectorXd::Zero(np_);
}

void ThetaScheme::set_state(const State& init) {
    if (init.u.size() != nu_ || init.p.size() != np_)
        throw ValidationError("initial state dimensions do not match the system");
    state_ = init;
}

void ThetaScheme::step(const LoadCallback& loads) {
    Eigen::VectorXd rhs(nu_ + np_);
    rhs.head(nu_) = rhs_uu_ * state_.u + rhs_up_ * state_.p;
    rhs.tail(np_) = sys_->mass_b_diag.cwiseProduct(state_.p) + rhs_pu_ * state_.u;
    if (loads) {
        LoadVector lv = loads(state_.t + theta_ * dt_);
        rhs.head(nu_) += dt_ * lv.flux;
        rhs.tail(np_) += dt_ * lv.pressure;
    }
    Eigen::VectorXd x = lu_.solve(rhs);
    state_.u = x.head(nu_);
    state_.p = x.tail(np_);
    state_.t += dt_;
}

double ThetaScheme::energy() const {
    return 0.5 * (state_.u.dot(sys_->mass_c * state_.u) +
                  state_.p.dot(sys_->mass_b_diag.cwiseProduct(state_.p)));
}

Trajectory simulate(const SystemMatrices& sys, const State& init, const LoadCallback& loads,
                    double theta, double dt, double T, const std::vector<double>& sample_times) {
    if (!(T > 0.0))
        throw ValidationError("final time must be positive");
    ThetaScheme scheme(sys, theta, dt);
    scheme.set_state(init);

    const long n_steps = std::lround(T / dt);
    std::vector<long> sample_steps;
    for (double t : sample_times) {
        if (t < -1e-12 || t > T + 1e-12)
            throw ValidationError("sample time outside [0, T]");
        sample_steps.push_back(std::lround(t / dt));
    }

    Trajectory traj;
    traj.theta = theta;
    traj.dt = dt;
    traj.T = T;

    auto capture = [&](long step) {
        for (size_t k = 0; k < sample_steps.size(); ++k)
            if (sample_steps[k] == step) {
                State s = scheme.state();
                s.t = step * dt;
                traj.samples.push_back(std::move(s));
                traj.energies.push_back(scheme.energy());
                return;
            }
    };

    capture(0);
    for (long n = 0; n < n_steps; ++n) {
        scheme.step(loads);
        capture(n + 1);
    }
    return traj;
}

}  // namespace netwave
