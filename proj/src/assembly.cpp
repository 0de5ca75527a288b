#include "netwave/assembly.hpp"

namespace netwave {

namespace {

// full-coordinate P1 mass matrix with per-edge weight
SparseMat full_flux_mass(const DofMap& spaces, const std::vector<double>& weight) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < net.num_edges(); ++e) {
        const double w = weight[e] * mesh.cell_size(e) / 6.0;
        for (int t = 0; t < mesh.cells(e); ++t) {
            const int i = spaces.node_dof(e, t);
            trip.emplace_back(i, i, 2.0 * w);
            trip.emplace_back(i, i + 1, w);
            trip.emplace_back(i + 1, i, w);
            trip.emplace_back(i + 1, i + 1, 2.0 * w);
        }
    }
    SparseMat M(spaces.full_flux_dim(), spaces.full_flux_dim());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SparseMat full_flux_stiffness(const DofMap& spaces, const std::vector<double>& weight) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < net.num_edges(); ++e) {
        const double w = weight[e] / mesh.cell_size(e);
        for (int t = 0; t < mesh.cells(e); ++t) {
            const int i = spaces.node_dof(e, t);
            trip.emplace_back(i, i, w);
            trip.emplace_back(i, i + 1, -w);
            trip.emplace_back(i + 1, i, -w);
            trip.emplace_back(i + 1, i + 1, w);
        }
    }
    SparseMat K(spaces.full_flux_dim(), spaces.full_flux_dim());
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

SparseMat reduce(const SparseMat& full, const SparseMat& Z) {
    return SparseMat(Z.transpose() * full * Z);
}

}  // namespace

Eigen::MatrixXd SystemMatrices::a0_dense() const {
    Eigen::LLT<Eigen::MatrixXd> llt(pi0_gram);
    return pi0_pairing.transpose() * llt.solve(pi0_pairing);
}

SystemMatrices assemble_system(const Network& net, const DofMap& spaces, double alpha) {
    if (!(alpha > 0.0))
        throw ValidationError("assemble_system: alpha must be positive");
    const Mesh& mesh = spaces.mesh();
    const int m = net.num_edges();

    std::vector<double> wa(m), wb_inv(m), wc(m), ones(m, 1.0);
    for (int e = 0; e < m; ++e) {
        wa[e] = alpha * net.edges()[e].a;
        wb_inv[e] = 1.0 / net.edges()[e].b;
        wc[e] = net.edges()[e].c;
    }

    SystemMatrices sys;
    sys.alpha = alpha;
    const SparseMat& Z = spaces.Z();

    SparseMat Ma_full = full_flux_mass(spaces, wa);
    sys.mass_a = reduce(Ma_full, Z);
    sys.mass_c = reduce(full_flux_mass(spaces, wc), Z);
    sys.flux_mass = reduce(full_flux_mass(spaces, ones), Z);
    sys.stiffness = reduce(full_flux_stiffness(spaces, wb_inv), Z);
    sys.deriv_mass = reduce(full_flux_stiffness(spaces, ones), Z);
    sys.hdiv_norm = sys.flux_mass + sys.deriv_mass;

    // divergence: (u', q) over an element is the nodal difference
    std::vector<Eigen::Triplet<double>> dt;
    for (int e = 0; e < m; ++e)
        for (int t = 0; t < mesh.cells(e); ++t) {
            dt.emplace_back(mesh.elem_offset(e) + t, spaces.node_dof(e, t), -1.0);
            dt.emplace_back(mesh.elem_offset(e) + t, spaces.node_dof(e, t + 1), 1.0);
        }
    SparseMat D_full(spaces.pressure_dim(), spaces.full_flux_dim());
    D_full.setFromTriplets(dt.begin(), dt.end());
    sys.divergence = D_full * Z;

    sys.mass_b_diag.resize(spaces.pressure_dim());
    sys.press_mass_diag.resize(spaces.pressure_dim());
    for (int e = 0; e < m; ++e)
        for (int t = 0; t < mesh.cells(e); ++t) {
            sys.mass_b_diag[mesh.elem_offset(e) + t] = net.edges()[e].b * mesh.cell_size(e);
            sys.press_mass_diag[mesh.elem_offset(e) + t] = mesh.cell_size(e);
        }

    // Pi0 factors on the H0(div) basis
    ConstantFluxBasis basis = h0div_basis(net);
    sys.flux_basis = basis.columns;
    const int d = basis.dim();
    Eigen::MatrixXd C_full = Eigen::MatrixXd::Zero(spaces.full_flux_dim(), d);
    for (int e = 0; e < m; ++e)
        for (int k = 0; k <= mesh.cells(e); ++k)
            C_full.row(spaces.node_dof(e, k)) = basis.columns.row(e);
    sys.pi0_pairing = (Ma_full * C_full).transpose() * Z;

    sys.pi0_gram.resize(d, d);
    Eigen::VectorXd al(m);
    for (int e = 0; e < m; ++e) al[e] = wa[e] * net.edges()[e].length;
    sys.pi0_gram = basis.columns.transpose() * al.asDiagonal() * basis.columns;

    return sys;
}

Eigen::VectorXd pi0_apply(const SystemMatrices& sys, const Eigen::VectorXd& u_reduced) {
    Eigen::LLT<Eigen::MatrixXd> llt(sys.pi0_gram);
    if (llt.info() != Eigen::Success)
        throw NumericalError("pi0_apply: singular Gram matrix");
    Eigen::VectorXd coeff = llt.solve(sys.pi0_pairing * u_reduced);
    return sys.flux_basis * coeff;
}

LoadVector zero_loads(const DofMap& spaces) {
    LoadVector loads;
    loads.flux = Eigen::VectorXd::Zero(spaces.reduced_flux_dim());
    loads.pressure = Eigen::VectorXd::Zero(spaces.pressure_dim());
    return loads;
}

Eigen::VectorXd boundary_load(const DofMap& spaces, const std::map<int, double>& p_dirichlet) {
    const Network& net = spaces.network();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(spaces.full_flux_dim());
    for (const auto& ep : spaces.boundary_endpoints()) {
        auto it = p_dirichlet.find(ep.vertex);
        if (it == p_dirichlet.end())
            throw ValidationError("boundary_load: missing pressure value at boundary vertex '" +
                                  net.vertex_ids()[ep.vertex] + "'");
        full[ep.full_dof] -= ep.sign * it->second;
    }
    return spaces.Z().transpose() * full;
}

LoadVector load_from_sources(const DofMap& spaces, const EdgeFunctions& f, const EdgeFunctions& g) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    LoadVector loads = zero_loads(spaces);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(spaces.full_flux_dim());
    for (int e = 0; e < net.num_edges(); ++e) {
        const double h = mesh.cell_size(e);
        for (int t = 0; t < mesh.cells(e); ++t) {
            const double x0 = t * h;
            GaussRule3 gauss(x0, x0 + h);
            double left = 0.0, right = 0.0, mean = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double s = (gauss.x[i] - x0) / h;  // local coordinate
                if (!f.empty()) {
                    const double fv = f[e](gauss.x[i]);
                    left += gauss.w[i] * fv * (1.0 - s);
                    right += gauss.w[i] * fv * s;
                }
                if (!g.empty()) mean += gauss.w[i] * g[e](gauss.x[i]);
            }
            full[spaces.node_dof(e, t)] += left;
            full[spaces.node_dof(e, t + 1)] += right;
            loads.pressure[mesh.elem_offset(e) + t] = mean;
        }
    }
    loads.flux = spaces.Z().transpose() * full;
    return loads;
}

}  // namespace netwave
