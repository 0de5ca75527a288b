#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netwave/analysis.hpp"
#include "netwave/assembly.hpp"
#include "netwave/femspace.hpp"
#include "netwave/netfile.hpp"
#include "netwave/network.hpp"
#include "netwave/solvers.hpp"

namespace {

using namespace netwave;

// Exit codes: 0 success, 1 validation error, 2 numerical failure.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;

void write_out(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << body;
}

Network load(const std::string& path) { return build_network(parse_network_file(path)); }

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ",";
        row += cells[i];
    }
    row += "\n";
    return row;
}

int cmd_stationary(const std::string& net_path, double target_h, double alpha,
                   const std::string& scenario, const std::string& out_path) {
    Network net = load(net_path);
    Mesh mesh = build_mesh(net, target_h);
    DofMap spaces = build_spaces(net, mesh);
    SystemMatrices sys = assemble_system(net, spaces, alpha);

    LoadVector loads = zero_loads(spaces);
    if (scenario == "unit-pressure") {
        std::map<int, double> pd;
        for (int v : net.boundary_vertices()) pd[v] = 1.0;
        loads.flux = boundary_load(spaces, pd);
    } else if (scenario == "unit-source") {
        EdgeFunctions f(net.num_edges(), [](double) { return 0.0; });
        EdgeFunctions g(net.num_edges(), [](double) { return 1.0; });
        loads = load_from_sources(spaces, f, g);
    } else if (scenario != "zero") {
        throw ValidationError("unknown stationary scenario: " + scenario +
                              " (expected zero, unit-pressure, or unit-source)");
    }

    State st = solve_stationary(sys, loads);
    Eigen::VectorXd full = spaces.expand(st.u);

    std::string body = csv_row({"kind", "edge", "x", "value"});
    for (int e = 0; e < net.num_edges(); ++e) {
        const double he = mesh.cell_size(e);
        for (int k = 0; k <= mesh.cells(e); ++k)
            body += csv_row({"u", net.edges()[e].id, format_number(k * he),
                             format_number(full[spaces.node_dof(e, k)])});
        for (int t = 0; t < mesh.cells(e); ++t)
            body += csv_row({"p", net.edges()[e].id, format_number((t + 0.5) * he),
                             format_number(st.p[mesh.elem_offset(e) + t])});
    }
    write_out(out_path, body);
    return kOk;
}

int cmd_decay(const std::string& net_path, double target_h, double alpha, double dt, double theta,
              double T, const std::string& scenario, const std::string& out_path) {
    if (scenario != "ramp")
        throw ValidationError("unknown decay scenario: " + scenario + " (expected ramp)");
    Network net = load(net_path);
    Mesh mesh = build_mesh(net, target_h);
    DofMap spaces = build_spaces(net, mesh);
    SystemMatrices sys = assemble_system(net, spaces, alpha);
    Scenario sc = ramp_scenario(sys, spaces, T);

    std::vector<double> sample_times;
    for (double t = 0.0; t <= T + 1e-12; t += 1.0) sample_times.push_back(t);
    Trajectory traj = simulate(sys, sc.initial, sc.loads, theta, dt, T, sample_times);

    std::string body = csv_row({"t", "energy"});
    std::vector<std::pair<double, double>> samples;
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        body += csv_row({format_number(traj.samples[i].t), format_number(traj.energies[i])});
        samples.emplace_back(traj.samples[i].t, traj.energies[i]);
    }
    write_out(out_path, body);

    DecayFit fit = fit_decay_rate(samples, std::min(4.0, T / 2.0), T);
    std::fprintf(stderr, "decay: gamma=%.6f amplitude=%.6f window=[%g,%g] r2=%.6f\n", fit.gamma,
                 fit.amplitude, fit.t_min, fit.t_max, fit.r_squared);
    return kOk;
}

int cmd_poincare(const std::string& net_path, std::vector<double> alphas, std::vector<double> hs,
                 const std::string& out_path) {
    Network net = load(net_path);
    if (alphas.empty()) alphas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
    if (hs.empty()) hs = {0.1, 0.05, 0.025, 0.0125};

    std::string body = csv_row({"h", "alpha", "poincare_sq", "infsup"});
    for (double h : hs) {
        Mesh mesh = build_mesh(net, h);
        DofMap spaces = build_spaces(net, mesh);
        for (double alpha : alphas) {
            SystemMatrices sys = assemble_system(net, spaces, alpha);
            const double cp2 = poincare_constant_sq(sys);
            const double beta = infsup_constant(sys);
            body += csv_row({format_number(mesh.h()), format_number(alpha), format_number(cp2),
                             format_number(beta)});
        }
    }
    write_out(out_path, body);
    return kOk;
}

int cmd_converge(const std::string& net_path, std::vector<double> alphas, double h0, int levels,
                 double dt, double theta, double T, const std::string& out_path) {
    Network net = load(net_path);
    if (alphas.empty()) alphas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};

    std::string body = csv_row({"alpha", "h", "error", "rate"});
    for (double alpha : alphas) {
        ConvergenceTable table = convergence_study(net, alpha, h0, levels, theta, dt, T);
        for (size_t i = 0; i < table.h.size(); ++i)
            body += csv_row({format_number(alpha), format_number(table.h[i]),
                             format_number(table.error[i]), format_number(table.rate)});
    }
    write_out(out_path, body);
    return kOk;
}

std::string sparse_csv(const char* name, const Eigen::SparseMatrix<double>& m) {
    std::string body;
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            body += csv_row({name, std::to_string(it.row()), std::to_string(it.col()),
                             format_number(it.value())});
    return body;
}

int cmd_dump_matrices(const std::string& net_path, double target_h, double alpha,
                      const std::string& out_path) {
    Network net = load(net_path);
    Mesh mesh = build_mesh(net, target_h);
    DofMap spaces = build_spaces(net, mesh);
    SystemMatrices sys = assemble_system(net, spaces, alpha);

    std::string body = csv_row({"matrix", "row", "col", "value"});
    body += sparse_csv("mass_c", sys.mass_c);
    body += sparse_csv("mass_a", sys.mass_a);
    body += sparse_csv("stiffness", sys.stiffness);
    body += sparse_csv("divergence", sys.divergence);
    for (int i = 0; i < sys.pressure_dim(); ++i)
        body += csv_row({"mass_b", std::to_string(i), std::to_string(i),
                         format_number(sys.mass_b_diag[i])});
    write_out(out_path, body);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed P1-P0 finite element simulation of damped pressure waves on pipe networks"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h/--h for the mesh size

    std::string network_path;
    std::string out_path;
    std::string scenario = "ramp";
    double target_h = 0.1;
    double alpha = 1.0;
    double dt = 1e-3;
    double theta = 0.5;
    double T = 20.0;
    std::vector<double> alphas;
    std::vector<double> hs;
    double h0 = 0.2;
    int levels = 6;

    auto add_common = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help");
        cmd->add_option("--network", network_path, "network file")->required();
        cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    };

    CLI::App* stat = app.add_subcommand("stationary", "solve the stationary mixed problem");
    add_common(stat);
    stat->add_option("--h", target_h, "target mesh size");
    stat->add_option("--alpha", alpha, "damping scale");
    std::string stat_scenario = "zero";
    stat->add_option("--scenario", stat_scenario, "zero | unit-pressure | unit-source");

    CLI::App* decay = app.add_subcommand("decay", "simulate and fit the energy decay rate");
    add_common(decay);
    decay->add_option("--h", target_h, "target mesh size");
    decay->add_option("--alpha", alpha, "damping scale");
    decay->add_option("--dt", dt, "time step");
    decay->add_option("--theta", theta, "theta-scheme parameter in [1/2, 1]");
    decay->add_option("--T", T, "final time");
    decay->add_option("--scenario", scenario, "ramp");

    CLI::App* poin = app.add_subcommand("poincare", "discrete Poincare and inf-sup constants");
    add_common(poin);
    poin->add_option("--alpha", alphas, "damping scales (default 1e-3..1e2)");
    poin->add_option("--h", hs, "mesh sizes (default 0.1 0.05 0.025 0.0125)");

    CLI::App* conv = app.add_subcommand("converge", "nested-mesh convergence study");
    add_common(conv);
    conv->add_option("--alpha", alphas, "damping scales (default 1e-3..1e2)");
    conv->add_option("--h", h0, "coarsest mesh size");
    conv->add_option("--levels", levels, "number of refinements");
    conv->add_option("--dt", dt, "time step");
    conv->add_option("--theta", theta, "theta-scheme parameter");
    conv->add_option("--T", T, "final time");

    CLI::App* dump = app.add_subcommand("dump-matrices", "write assembled matrices as COO CSV");
    add_common(dump);
    dump->add_option("--h", target_h, "target mesh size");
    dump->add_option("--alpha", alpha, "damping scale");

    CLI11_PARSE(app, argc, argv);

    try {
        if (stat->parsed())
            return cmd_stationary(network_path, target_h, alpha, stat_scenario, out_path);
        if (decay->parsed())
            return cmd_decay(network_path, target_h, alpha, dt, theta, T, scenario, out_path);
        if (poin->parsed()) return cmd_poincare(network_path, alphas, hs, out_path);
        if (conv->parsed())
            return cmd_converge(network_path, alphas, h0, levels, dt, theta, T, out_path);
        if (dump->parsed()) return cmd_dump_matrices(network_path, target_h, alpha, out_path);
    } catch (const netwave::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidation;
    } catch (const netwave::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kNumerical;
    }
    return kValidation;
}
