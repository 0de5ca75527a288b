#include "netwave/network.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace netwave {

int Network::vertex_index(const std::string& id) const {
    auto it = std::find(vertex_ids_.begin(), vertex_ids_.end(), id);
    if (it == vertex_ids_.end())
        throw ValidationError("unknown vertex id '" + id + "'");
    return static_cast<int>(it - vertex_ids_.begin());
}

double Network::total_length() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.length;
    return s;
}

Network build_network(const NetworkSpec& spec) {
    Network net;
    if (spec.vertices.empty())
        throw ValidationError("network has no vertices");

    std::unordered_map<std::string, int> vidx;
    for (const auto& v : spec.vertices) {
        if (!vidx.emplace(v, static_cast<int>(net.vertex_ids_.size())).second)
            throw ValidationError("duplicate vertex id '" + v + "'");
        net.vertex_ids_.push_back(v);
    }

    std::unordered_map<std::string, int> eids;
    for (const auto& es : spec.edges) {
        if (!eids.emplace(es.id, 0).second)
            throw ValidationError("duplicate edge id '" + es.id + "'");
        auto ti = vidx.find(es.tail);
        auto hi = vidx.find(es.head);
        if (ti == vidx.end())
            throw ValidationError("edge '" + es.id + "' references unknown tail vertex '" + es.tail + "'");
        if (hi == vidx.end())
            throw ValidationError("edge '" + es.id + "' references unknown head vertex '" + es.head + "'");
        if (ti->second == hi->second)
            throw ValidationError("edge '" + es.id + "' is a self-loop at vertex '" + es.tail + "'");
        if (!(es.length > 0.0))
            throw ValidationError("edge '" + es.id + "' has nonpositive length");
        if (!(es.a > 0.0) || !(es.b > 0.0) || !(es.c > 0.0))
            throw ValidationError("edge '" + es.id + "' has nonpositive coefficient");
        net.edges_.push_back(Edge{es.id, ti->second, hi->second, es.length, es.a, es.b, es.c});
    }

    const int n = net.num_vertices();
    net.degree_.assign(n, 0);
    for (const auto& e : net.edges_) {
        ++net.degree_[e.tail];
        ++net.degree_[e.head];
    }

    // connectivity (A1)
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : net.edges_) {
        adj[e.tail].push_back(e.head);
        adj[e.head].push_back(e.tail);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v])
            throw ValidationError("graph is not connected: vertex '" + net.vertex_ids_[v] +
                                  "' is unreachable from '" + net.vertex_ids_[0] + "'");

    for (int v = 0; v < n; ++v) {
        if (net.degree_[v] >= 2)
            net.interior_.push_back(v);
        else
            net.boundary_.push_back(v);
    }
    if (net.boundary_.empty())
        throw ValidationError("network has no boundary vertex (every vertex is a junction)");

    net.coeff_lower_ = std::numeric_limits<double>::infinity();
    net.coeff_upper_ = 0.0;
    for (const auto& e : net.edges_) {
        net.coeff_lower_ = std::min({net.coeff_lower_, e.a, e.b, e.c});
        net.coeff_upper_ = std::max({net.coeff_upper_, e.a, e.b, e.c});
    }
    return net;
}

Eigen::MatrixXi incidence_matrix(const Network& net) {
    Eigen::MatrixXi N = Eigen::MatrixXi::Zero(net.num_vertices(), net.num_edges());
    for (int j = 0; j < net.num_edges(); ++j) {
        N(net.edges()[j].tail, j) = -1;
        N(net.edges()[j].head, j) = 1;
    }
    return N;
}

TreeDecomposition spanning_tree(const Network& net) {
    const int n = net.num_vertices();
    TreeDecomposition tree;
    tree.root = net.boundary_vertices().front();

    // incidence lists sorted by edge index for deterministic BFS
    std::vector<std::vector<int>> incident(n);
    for (int j = 0; j < net.num_edges(); ++j) {
        incident[net.edges()[j].tail].push_back(j);
        incident[net.edges()[j].head].push_back(j);
    }

    std::vector<char> visited(n, 0);
    std::queue<int> q;
    visited[tree.root] = 1;
    q.push(tree.root);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int j : incident[v]) {
            int w = net.edges()[j].tail == v ? net.edges()[j].head : net.edges()[j].tail;
            if (!visited[w]) {
                visited[w] = 1;
                tree.tree_edges.push_back(j);
                q.push(w);
            }
        }
    }
    std::sort(tree.tree_edges.begin(), tree.tree_edges.end());

    for (int v = 0; v < n; ++v)
        if (v != tree.root) tree.block_rows.push_back(v);

    Eigen::MatrixXi N = incidence_matrix(net);
    tree.block.resize(n - 1, n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j)
            tree.block(i, j) = static_cast<double>(N(tree.block_rows[i], tree.tree_edges[j]));
    return tree;
}

Eigen::VectorXd solve_nodal_fluxes(const Network& net,
                                   const TreeDecomposition& tree,
                                   const Eigen::VectorXd& nodal_interior) {
    const auto& interior = net.interior_vertices();
    if (nodal_interior.size() != static_cast<Eigen::Index>(interior.size()))
        throw ValidationError("nodal flux vector size does not match interior vertex count");

    // right-hand side over all non-root vertices: prescribed values at
    // interior vertices, zero at non-root boundary vertices
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(tree.block_rows.size());
    for (size_t k = 0; k < interior.size(); ++k) {
        auto it = std::find(tree.block_rows.begin(), tree.block_rows.end(), interior[k]);
        rhs[it - tree.block_rows.begin()] = nodal_interior[k];
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(tree.block);
    Eigen::VectorXd tree_flux = lu.solve(rhs);
    if (!tree_flux.allFinite())
        throw NumericalError("spanning-tree incidence block solve failed");

    Eigen::VectorXd u = Eigen::VectorXd::Zero(net.num_edges());
    for (size_t j = 0; j < tree.tree_edges.size(); ++j)
        u[tree.tree_edges[j]] = tree_flux[j];
    return u;
}

ConstantFluxBasis h0div_basis(const Network& net) {
    const int m = net.num_edges();
    const auto& interior = net.interior_vertices();
    const int k = static_cast<int>(interior.size());

    ConstantFluxBasis basis;
    if (k == 0) {
        basis.columns = Eigen::MatrixXd::Identity(m, m);
        return basis;
    }

    // interior rows of the incidence matrix
    Eigen::MatrixXi N = incidence_matrix(net);
    Eigen::MatrixXd A(k, m);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = static_cast<double>(N(interior[i], j));

    // null space of A from a column-pivoted QR of A^T: the trailing columns
    // of Q beyond rank(A) are an orthonormal basis of ker(A)
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    const int rank = static_cast<int>(qr.rank());
    Eigen::MatrixXd Q = qr.householderQ();
    basis.columns = Q.rightCols(m - rank);
    return basis;
}

}  // namespace netwave
