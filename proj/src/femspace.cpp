#include "netwave/femspace.hpp"

#include <cmath>

namespace netwave {

GaussRule3::GaussRule3(double x0, double x1) {
    const double mid = 0.5 * (x0 + x1);
    const double half = 0.5 * (x1 - x0);
    const double s = std::sqrt(3.0 / 5.0);
    x[0] = mid - half * s;
    x[1] = mid;
    x[2] = mid + half * s;
    w[0] = half * 5.0 / 9.0;
    w[1] = half * 8.0 / 9.0;
    w[2] = half * 5.0 / 9.0;
}

Mesh::Mesh(const Network& net, double target_h) {
    if (!(target_h > 0.0))
        throw ValidationError("mesh size must be positive");
    const int m = net.num_edges();
    cells_.resize(m);
    cell_size_.resize(m);
    elem_offset_.resize(m);
    for (int e = 0; e < m; ++e) {
        const double l = net.edges()[e].length;
        cells_[e] = std::max(1, static_cast<int>(std::ceil(l / target_h - 1e-12)));
        cell_size_[e] = l / cells_[e];
        elem_offset_[e] = num_elements_;
        num_elements_ += cells_[e];
        h_ = std::max(h_, cell_size_[e]);
    }
}

Mesh build_mesh(const Network& net, double target_h) { return Mesh(net, target_h); }

DofMap::DofMap(const Network& net, const Mesh& mesh) : net_(&net), mesh_(mesh) {
    const int m = net.num_edges();
    node_offset_.resize(m);
    for (int e = 0; e < m; ++e) {
        node_offset_[e] = full_dim_;
        full_dim_ += mesh.cells(e) + 1;
    }
    pressure_dim_ = mesh.num_elements();

    // endpoint DOFs incident on each vertex, ordered by edge index
    struct Endpoint {
        int edge;
        int full_dof;
        int sign;
    };
    std::vector<std::vector<Endpoint>> at_vertex(net.num_vertices());
    for (int e = 0; e < m; ++e) {
        at_vertex[net.edges()[e].tail].push_back({e, node_dof(e, 0), -1});
        at_vertex[net.edges()[e].head].push_back({e, node_dof(e, mesh.cells(e)), 1});
    }

    for (int v : net.boundary_vertices()) {
        const auto& ep = at_vertex[v].front();
        boundary_endpoints_.push_back({v, ep.edge, ep.full_dof, ep.sign});
    }

    // one conservation constraint per interior vertex; eliminate the
    // endpoint DOF of the incident edge with the smallest edge index
    std::vector<int> eliminated_at(full_dim_, -1);
    for (int v : net.interior_vertices())
        eliminated_at[at_vertex[v].front().full_dof] = v;

    reduced_index_.assign(full_dim_, -1);
    for (int d = 0; d < full_dim_; ++d)
        if (eliminated_at[d] < 0) reduced_index_[d] = reduced_dim_++;

    std::vector<Eigen::Triplet<double>> trip;
    for (int d = 0; d < full_dim_; ++d)
        if (reduced_index_[d] >= 0) trip.emplace_back(d, reduced_index_[d], 1.0);
    for (int v : net.interior_vertices()) {
        const auto& eps = at_vertex[v];
        const auto& lead = eps.front();
        // n_lead * u_lead = -sum_others n^e(v) u^e(v)
        for (size_t k = 1; k < eps.size(); ++k)
            trip.emplace_back(lead.full_dof, reduced_index_[eps[k].full_dof],
                              -static_cast<double>(lead.sign * eps[k].sign));
    }
    Z_.resize(full_dim_, reduced_dim_);
    Z_.setFromTriplets(trip.begin(), trip.end());
}

DofMap build_spaces(const Network& net, const Mesh& mesh) { return DofMap(net, mesh); }

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& reduced) const {
    return Z_ * reduced;
}

Eigen::VectorXd DofMap::restrict_full(const Eigen::VectorXd& full) const {
    Eigen::VectorXd reduced(reduced_dim_);
    for (int d = 0; d < full_dim_; ++d)
        if (reduced_index_[d] >= 0) reduced[reduced_index_[d]] = full[d];
    return reduced;
}

Eigen::VectorXd interpolate_flux(const DofMap& spaces, const EdgeFunctions& v) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    if (v.size() != static_cast<size_t>(net.num_edges()))
        throw ValidationError("interpolate_flux: one function per edge required");

    Eigen::VectorXd full(spaces.full_flux_dim());
    for (int e = 0; e < net.num_edges(); ++e) {
        const double h = mesh.cell_size(e);
        for (int k = 0; k <= mesh.cells(e); ++k)
            full[spaces.node_dof(e, k)] = v[e](k * h);
    }

    // junction conformity check
    std::vector<double> residual(net.num_vertices(), 0.0);
    for (int e = 0; e < net.num_edges(); ++e) {
        residual[net.edges()[e].tail] -= full[spaces.node_dof(e, 0)];
        residual[net.edges()[e].head] += full[spaces.node_dof(e, mesh.cells(e))];
    }
    for (int vx : net.interior_vertices())
        if (std::abs(residual[vx]) > 1e-10)
            throw ValidationError("interpolate_flux: input violates conservation at vertex '" +
                                  net.vertex_ids()[vx] + "'");
    return spaces.restrict_full(full);
}

Eigen::VectorXd project_pressure(const DofMap& spaces, const EdgeFunctions& q) {
    const Network& net = spaces.network();
    const Mesh& mesh = spaces.mesh();
    if (q.size() != static_cast<size_t>(net.num_edges()))
        throw ValidationError("project_pressure: one function per edge required");

    Eigen::VectorXd p(spaces.pressure_dim());
    for (int e = 0; e < net.num_edges(); ++e) {
        const double h = mesh.cell_size(e);
        for (int t = 0; t < mesh.cells(e); ++t) {
            GaussRule3 g(t * h, (t + 1) * h);
            double integral = 0.0;
            for (int i = 0; i < 3; ++i) integral += g.w[i] * q[e](g.x[i]);
            p[mesh.elem_offset(e) + t] = integral / h;
        }
    }
    return p;
}

Refinement refine(const Mesh& mesh, const DofMap& spaces) {
    const Network& net = spaces.network();
    Mesh fine = mesh;
    fine.num_elements_ = 0;
    fine.h_ = 0.0;
    for (int e = 0; e < fine.num_edges(); ++e) {
        fine.cells_[e] *= 2;
        fine.cell_size_[e] *= 0.5;
        fine.elem_offset_[e] = fine.num_elements_;
        fine.num_elements_ += fine.cells_[e];
        fine.h_ = std::max(fine.h_, fine.cell_size_[e]);
    }
    DofMap fine_spaces(net, fine);

    // full-coordinate node prolongation: kept nodes copy, midpoints average
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < net.num_edges(); ++e) {
        for (int k = 0; k <= mesh.cells(e); ++k)
            trip.emplace_back(fine_spaces.node_dof(e, 2 * k), spaces.node_dof(e, k), 1.0);
        for (int k = 0; k < mesh.cells(e); ++k) {
            trip.emplace_back(fine_spaces.node_dof(e, 2 * k + 1), spaces.node_dof(e, k), 0.5);
            trip.emplace_back(fine_spaces.node_dof(e, 2 * k + 1), spaces.node_dof(e, k + 1), 0.5);
        }
    }
    Eigen::SparseMatrix<double> P_full(fine_spaces.full_flux_dim(), spaces.full_flux_dim());
    P_full.setFromTriplets(trip.begin(), trip.end());

    // reduced-to-reduced: expand, prolong, drop eliminated fine rows
    Eigen::SparseMatrix<double> PZ = P_full * spaces.Z();
    std::vector<Eigen::Triplet<double>> rt;
    for (int col = 0; col < PZ.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(PZ, col); it; ++it) {
            int r = fine_spaces.reduced_index(static_cast<int>(it.row()));
            if (r >= 0) rt.emplace_back(r, static_cast<int>(it.col()), it.value());
        }
    Prolongation prol;
    prol.flux.resize(fine_spaces.reduced_flux_dim(), spaces.reduced_flux_dim());
    prol.flux.setFromTriplets(rt.begin(), rt.end());

    std::vector<Eigen::Triplet<double>> pt;
    for (int e = 0; e < net.num_edges(); ++e)
        for (int t = 0; t < mesh.cells(e); ++t) {
            pt.emplace_back(fine.elem_offset(e) + 2 * t, mesh.elem_offset(e) + t, 1.0);
            pt.emplace_back(fine.elem_offset(e) + 2 * t + 1, mesh.elem_offset(e) + t, 1.0);
        }
    prol.pressure.resize(fine.num_elements(), mesh.num_elements());
    prol.pressure.setFromTriplets(pt.begin(), pt.end());

    return Refinement{std::move(fine), std::move(fine_spaces), std::move(prol)};
}

}  // namespace netwave
