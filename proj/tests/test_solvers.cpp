#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "helpers.hpp"
#include "netwave/analysis.hpp"
#include "netwave/assembly.hpp"
#include "netwave/solvers.hpp"

using namespace netwave;

namespace {

struct Discretization {
    Network net;
    Mesh mesh;
    DofMap spaces;
    SystemMatrices sys;
    Discretization(Network n, double target_h, double alpha)
        : net(std::move(n)),
          mesh(build_mesh(net, target_h)),
          spaces(build_spaces(net, mesh)),
          sys(assemble_system(net, spaces, alpha)) {}
};

Eigen::VectorXd random_vec(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("zero loads give the zero stationary state") {
    Discretization d(testnets::seven_pipe(), 0.1, 1.0);
    State st = solve_stationary(d.sys, zero_loads(d.spaces));
    CHECK(st.u.norm() < 1e-12);
    CHECK(st.p.norm() < 1e-12);
}

TEST_CASE("single pipe with unit inflow source is solved exactly") {
    // a = 1, f = 0, g = 1: u = x - 1/2 at the nodes, p has the exact
    // element means of (x - x^2)/2
    for (int m : {1, 2, 8}) {
        Discretization d(testnets::single_edge(), 1.0 / m, 1.0);
        LoadVector loads = load_from_sources(d.spaces, {[](double) { return 0.0; }},
                                             {[](double) { return 1.0; }});
        State st = solve_stationary(d.sys, loads);
        Eigen::VectorXd full = d.spaces.expand(st.u);
        const double h = 1.0 / m;
        for (int k = 0; k <= m; ++k) CHECK(full[k] == doctest::Approx(k * h - 0.5).epsilon(1e-12));
        auto antideriv = [](double x) { return x * x / 4.0 - x * x * x / 6.0; };
        for (int t = 0; t < m; ++t) {
            const double mean = (antideriv((t + 1) * h) - antideriv(t * h)) / h;
            CHECK(st.p[t] == doctest::Approx(mean).epsilon(1e-12));
        }
    }
}

TEST_CASE("uniform boundary pressure yields zero flux and constant pressure") {
    Discretization d(testnets::seven_pipe(), 0.1, 1.0);
    LoadVector loads = zero_loads(d.spaces);
    std::map<int, double> pd;
    for (int v : d.net.boundary_vertices()) pd[v] = 1.0;
    loads.flux = boundary_load(d.spaces, pd);
    State st = solve_stationary(d.sys, loads);
    CHECK(st.u.norm() < 1e-10);
    CHECK((st.p.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("stationary solutions satisfy both weak equations") {
    Discretization d(testnets::seven_pipe(), 0.1, 0.3);
    std::mt19937 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        LoadVector loads;
        loads.flux = random_vec(d.spaces.reduced_flux_dim(), rng);
        loads.pressure = random_vec(d.spaces.pressure_dim(), rng);
        State st = solve_stationary(d.sys, loads);
        CHECK((d.sys.mass_a * st.u - d.sys.divergence.transpose() * st.p - loads.flux).norm() <
              1e-9);
        CHECK((d.sys.divergence * st.u - loads.pressure).norm() < 1e-9);
    }
}

TEST_CASE("elliptic projection is idempotent and fixes stationary pairs") {
    Discretization d(testnets::seven_pipe(), 0.1, 1.0);
    std::mt19937 rng(43);
    Eigen::VectorXd u = random_vec(d.spaces.reduced_flux_dim(), rng);
    Eigen::VectorXd p = random_vec(d.spaces.pressure_dim(), rng);
    State st = elliptic_projection(d.sys, u, p);
    CHECK((st.u - u).norm() < 1e-9);
    CHECK((st.p - p).norm() < 1e-9);

    State rest = elliptic_projection(d.sys, Eigen::VectorXd::Zero(d.spaces.reduced_flux_dim()),
                                     Eigen::VectorXd::Ones(d.spaces.pressure_dim()));
    CHECK(rest.u.norm() < 1e-10);
    CHECK((rest.p.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("elliptic projection of functions reproduces discrete data exactly") {
    Discretization d(testnets::single_edge(), 0.25, 1.0);
    State st = elliptic_projection(d.sys, d.spaces, {[](double) { return 1.0; }},
                                   {[](double) { return 0.0; }}, {[](double) { return 0.0; }});
    Eigen::VectorXd full = d.spaces.expand(st.u);
    CHECK((full.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(st.p.norm() < 1e-10);
}

TEST_CASE("stationary flux converges at second order for a smooth solution") {
    // u = sin(pi x), p = sin(pi x), hence g = u' and f = u + p'; p vanishes
    // at both ends so no boundary term appears
    auto flux_error = [](int m) {
        Discretization d(testnets::single_edge(), 1.0 / m, 1.0);
        LoadVector loads = load_from_sources(
            d.spaces, {[](double x) { return std::sin(M_PI * x) + M_PI * std::cos(M_PI * x); }},
            {[](double x) { return M_PI * std::cos(M_PI * x); }});
        State st = solve_stationary(d.sys, loads);
        Eigen::VectorXd full = d.spaces.expand(st.u);
        double err2 = 0.0;
        const double h = 1.0 / m;
        for (int t = 0; t < m; ++t) {
            GaussRule3 q(t * h, (t + 1) * h);
            for (int j = 0; j < 3; ++j) {
                const double lam = (q.x[j] - t * h) / h;
                const double uh = (1 - lam) * full[t] + lam * full[t + 1];
                err2 += q.w[j] * std::pow(uh - std::sin(M_PI * q.x[j]), 2);
            }
        }
        return std::sqrt(err2);
    };
    for (int m : {8, 16, 32}) CHECK(std::log2(flux_error(m) / flux_error(2 * m)) > 1.9);
}

TEST_CASE("theta-scheme rejects invalid parameters") {
    Discretization d(testnets::single_edge(), 0.5, 1.0);
    CHECK_THROWS_AS(ThetaScheme(d.sys, 0.4, 1e-3), ValidationError);
    CHECK_THROWS_AS(ThetaScheme(d.sys, 1.1, 1e-3), ValidationError);
    CHECK_THROWS_AS(ThetaScheme(d.sys, 0.5, 0.0), ValidationError);
    CHECK_THROWS_AS(ThetaScheme(d.sys, 0.5, -1e-3), ValidationError);
}

TEST_CASE("homogeneous dynamics dissipate the discrete energy at every step") {
    Discretization d(testnets::seven_pipe(), 0.2, 1.0);
    std::mt19937 rng(47);
    for (double theta : {0.5, 0.7, 1.0}) {
        ThetaScheme scheme(d.sys, theta, 1e-2);
        State init;
        init.u = random_vec(d.spaces.reduced_flux_dim(), rng);
        init.p = random_vec(d.spaces.pressure_dim(), rng);
        scheme.set_state(init);
        double prev = scheme.energy();
        for (int n = 0; n < 2000; ++n) {
            scheme.step(nullptr);
            const double now = scheme.energy();
            CHECK(now <= prev * (1 + 1e-13));
            prev = now;
        }
    }
}

TEST_CASE("midpoint rule nearly conserves energy when damping vanishes") {
    Discretization d(testnets::seven_pipe(), 0.2, 1e-14);
    std::mt19937 rng(53);
    ThetaScheme scheme(d.sys, 0.5, 1e-2);
    State init;
    init.u = random_vec(d.spaces.reduced_flux_dim(), rng);
    init.p = random_vec(d.spaces.pressure_dim(), rng);
    scheme.set_state(init);
    const double e0 = scheme.energy();
    for (int n = 0; n < 2000; ++n) scheme.step(nullptr);
    CHECK(std::abs(scheme.energy() - e0) < 1e-10 * e0);
}

TEST_CASE("simulate samples the requested times") {
    Discretization d(testnets::seven_pipe(), 0.2, 1.0);
    Scenario sc = ramp_scenario(d.sys, d.spaces, 2.0);
    Trajectory traj = simulate(d.sys, sc.initial, sc.loads, 0.5, 1e-2, 2.0, {0.0, 1.0, 2.0});
    REQUIRE(traj.samples.size() == 3);
    CHECK(traj.samples[0].t == doctest::Approx(0.0));
    CHECK(traj.samples[1].t == doctest::Approx(1.0));
    CHECK(traj.samples[2].t == doctest::Approx(2.0));
    CHECK(traj.energies[0] == doctest::Approx(9.5));
    CHECK(traj.energies[2] < traj.energies[1]);

    CHECK_THROWS_AS(simulate(d.sys, sc.initial, sc.loads, 0.5, 1e-2, -1.0, {}), ValidationError);
    CHECK_THROWS_AS(simulate(d.sys, sc.initial, sc.loads, 0.5, 1e-2, 1.0, {2.0}), ValidationError);
}
