#include "netwave/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace netwave {

double energy(const SystemMatrices& sys, const State& state) {
    return 0.5 * (state.u.dot(sys.mass_c * state.u) +
                  state.p.dot(sys.mass_b_diag.cwiseProduct(state.p)));
}

std::vector<ModifiedEnergySample> modified_energy(const SystemMatrices& sys,
                                                  const Trajectory& traj, double eps) {
    const auto& s = traj.samples;
    const int n = static_cast<int>(s.size());
    if (n < 3)
        throw ValidationError("modified_energy: at least 3 samples required");
    const double dt = s[1].t - s[0].t;
    for (int i = 1; i < n; ++i)
        if (std::abs(s[i].t - s[i - 1].t - dt) > 1e-9 * std::max(1.0, dt))
            throw ValidationError("modified_energy: samples must be uniformly spaced");

    std::vector<ModifiedEnergySample> out(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd du, dp;
        if (i == 0) {
            du = (s[1].u - s[0].u) / dt;
            dp = (s[1].p - s[0].p) / dt;
        } else if (i == n - 1) {
            du = (s[n - 1].u - s[n - 2].u) / dt;
            dp = (s[n - 1].p - s[n - 2].p) / dt;
        } else {
            du = (s[i + 1].u - s[i - 1].u) / (2.0 * dt);
            dp = (s[i + 1].p - s[i - 1].p) / (2.0 * dt);
        }
        const double kin = 0.5 * (du.dot(sys.mass_c * du) +
                                  dp.dot(sys.mass_b_diag.cwiseProduct(dp)));
        out[i].t = s[i].t;
        out[i].kinetic = kin;
        out[i].modified = kin + eps * du.dot(sys.mass_c * s[i].u);
    }
    return out;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples,
                        double t_min, double t_max) {
    std::vector<double> ts, ys;
    for (const auto& [t, E] : samples) {
        if (t < t_min - 1e-12 || t > t_max + 1e-12) continue;
        if (!(E > 0.0))
            throw ValidationError("fit_decay_rate: nonpositive energy in fit window");
        ts.push_back(t);
        ys.push_back(std::log(E));
    }
    const int n = static_cast<int>(ts.size());
    if (n < 2)
        throw ValidationError("fit_decay_rate: fewer than 2 samples in window");

    double tm = 0.0, ym = 0.0;
    for (int i = 0; i < n; ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        sty += (ts[i] - tm) * (ys[i] - ym);
        syy += (ys[i] - ym) * (ys[i] - ym);
    }
    const double slope = sty / stt;

    DecayFit fit;
    fit.gamma = -slope;
    fit.amplitude = std::exp(ym - slope * tm);
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    return fit;
}

namespace {

// Largest eigenpair of the symmetric operator y = L^{-1} M L^{-T} x via
// Lanczos with full reorthogonalization; deterministic all-ones start.
std::pair<double, Eigen::VectorXd> lanczos_largest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, int n) {
    const int max_iter = std::min(n, 10000);
    std::vector<Eigen::VectorXd> V;
    std::vector<double> alpha, beta;

    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    v.normalize();
    V.push_back(v);

    double lambda_prev = 0.0;
    Eigen::VectorXd ritz;
    for (int j = 0; j < max_iter; ++j) {
        Eigen::VectorXd w = op(V[j]);
        const double a = V[j].dot(w);
        alpha.push_back(a);
        w -= a * V[j];
        if (j > 0) w -= beta[j - 1] * V[j - 1];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : V) w -= q.dot(w) * q;

        // Ritz values of the tridiagonal section
        const int k = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < k; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const double lambda = es.eigenvalues().maxCoeff();

        Eigen::Index imax;
        es.eigenvalues().maxCoeff(&imax);
        ritz = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < k; ++i) ritz += es.eigenvectors()(i, imax) * V[i];

        // residual of the top Ritz pair: |beta_k * (last eigenvector entry)|
        const double b = w.norm();
        const double residual = b * std::abs(es.eigenvectors()(k - 1, imax));
        const bool stalled = b < 1e-14 * std::abs(a);
        if ((j >= 2 && residual <= 1e-10 * std::abs(lambda) &&
             std::abs(lambda - lambda_prev) <= 1e-10 * std::abs(lambda)) ||
            stalled || k == n)
            return {lambda, ritz};
        lambda_prev = lambda;
        beta.push_back(b);
        V.push_back(w / b);
    }
    throw NumericalError("Lanczos iteration did not converge within 10000 iterations");
}

}  // namespace

double poincare_constant_sq(const SystemMatrices& sys) {
    const int n = sys.flux_dim();
    Eigen::MatrixXd A = Eigen::MatrixXd(sys.stiffness) + sys.a0_dense();
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericalError("poincare_constant: K + A0 is not positive definite");

    const auto& L = llt.matrixL();
    auto op = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd y = L.transpose().solve(x);
        y = sys.mass_c * y;
        return L.solve(y);
    };
    return lanczos_largest(op, n).first;
}

double infsup_constant(const SystemMatrices& sys) {
    Eigen::SimplicialLLT<SparseMat> llt(sys.hdiv_norm);
    if (llt.info() != Eigen::Success)
        throw NumericalError("infsup_constant: H(div) norm matrix is not positive definite");

    Eigen::MatrixXd Dt = Eigen::MatrixXd(sys.divergence).transpose();
    Eigen::MatrixXd schur = Eigen::MatrixXd(sys.divergence) * llt.solve(Dt);

    // symmetrize against the diagonal pressure mass
    Eigen::VectorXd inv_sqrt = sys.press_mass_diag.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = inv_sqrt.asDiagonal() * schur * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min <= 0.0)
        throw NumericalError("infsup_constant: Schur complement not positive definite");
    return std::sqrt(lambda_min);
}

Scenario ramp_scenario(const SystemMatrices& sys, const DofMap& spaces, double T) {
    Scenario sc;
    sc.T = T;
    sc.initial.t = 0.0;
    sc.initial.u = Eigen::VectorXd::Zero(spaces.reduced_flux_dim());
    sc.initial.p = Eigen::VectorXd::Ones(spaces.pressure_dim());

    std::map<int, double> unit;
    for (int v : spaces.network().boundary_vertices()) unit[v] = 1.0;
    Eigen::VectorXd bl_unit = boundary_load(spaces, unit);
    const int np = spaces.pressure_dim();
    sc.loads = [bl_unit, np](double t) {
        LoadVector lv;
        lv.flux = bl_unit * (t < 1.0 ? 1.0 - t : 0.0);
        lv.pressure = Eigen::VectorXd::Zero(np);
        return lv;
    };
    return sc;
}

ConvergenceTable convergence_study(const Network& net, double alpha, double h0, int levels,
                                   double theta, double dt, double T) {
    if (levels < 1)
        throw ValidationError("convergence_study: at least one refinement level required");

    struct Level {
        DofMap spaces;
        SystemMatrices sys;
        Eigen::SparseMatrix<double> prol_u, prol_p;  // from the previous level
        std::unique_ptr<ThetaScheme> scheme;
        Eigen::VectorXd bl_unit;
    };

    std::vector<Level> lv;
    Mesh mesh0 = build_mesh(net, h0);
    DofMap spaces0 = build_spaces(net, mesh0);
    lv.push_back(Level{spaces0, assemble_system(net, spaces0, alpha), {}, {}, nullptr, {}});
    for (int k = 1; k <= levels; ++k) {
        Refinement ref = refine(lv.back().spaces.mesh(), lv.back().spaces);
        SystemMatrices sys = assemble_system(net, ref.spaces, alpha);
        lv.push_back(Level{std::move(ref.spaces), std::move(sys),
                           std::move(ref.prolongation.flux), std::move(ref.prolongation.pressure),
                           nullptr, {}});
    }

    std::map<int, double> unit;
    for (int v : net.boundary_vertices()) unit[v] = 1.0;
    for (auto& level : lv) {
        level.bl_unit = boundary_load(level.spaces, unit);
        level.scheme = std::make_unique<ThetaScheme>(level.sys, theta, dt);
        State init;
        init.u = Eigen::VectorXd::Zero(level.spaces.reduced_flux_dim());
        init.p = Eigen::VectorXd::Ones(level.spaces.pressure_dim());
        level.scheme->set_state(init);
    }

    const long n_steps = std::lround(T / dt);
    std::vector<double> e_max(lv.size(), 0.0);

    auto record = [&]() {
        for (size_t k = 1; k < lv.size(); ++k) {
            const State& fine = lv[k].scheme->state();
            const State& coarse = lv[k - 1].scheme->state();
            Eigen::VectorXd du = fine.u - lv[k].prol_u * coarse.u;
            Eigen::VectorXd dp = fine.p - lv[k].prol_p * coarse.p;
            const double err = du.dot(lv[k].sys.mass_c * du) +
                               dp.dot(lv[k].sys.mass_b_diag.cwiseProduct(dp));
            e_max[k] = std::max(e_max[k], err);
        }
    };

    record();
    for (long n = 0; n < n_steps; ++n) {
        for (auto& level : lv) {
            const Eigen::VectorXd& bl = level.bl_unit;
            const int np = level.spaces.pressure_dim();
            level.scheme->step([&bl, np](double t) {
                LoadVector out;
                out.flux = bl * (t < 1.0 ? 1.0 - t : 0.0);
                out.pressure = Eigen::VectorXd::Zero(np);
                return out;
            });
        }
        record();
    }

    ConvergenceTable table;
    for (size_t k = 1; k < lv.size(); ++k) {
        table.h.push_back(lv[k].spaces.mesh().h());
        table.error.push_back(e_max[k]);
    }

    // rate from the last two refinement steps (three points)
    const int n = static_cast<int>(table.h.size());
    const int first = std::max(0, n - 3);
    std::vector<std::pair<double, double>> pts;
    for (int i = first; i < n; ++i) pts.emplace_back(std::log(table.h[i]), table.error[i]);
    double xm = 0.0, ym = 0.0;
    for (auto& [x, e] : pts) {
        xm += x;
        ym += std::log(e);
    }
    xm /= pts.size();
    ym /= pts.size();
    double sxx = 0.0, sxy = 0.0;
    for (auto& [x, e] : pts) {
        sxx += (x - xm) * (x - xm);
        sxy += (x - xm) * (std::log(e) - ym);
    }
    table.rate = sxy / sxx;
    return table;
}

}  // namespace netwave
