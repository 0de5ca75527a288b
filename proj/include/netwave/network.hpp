#ifndef NETWAVE_NETWORK_HPP
#define NETWAVE_NETWORK_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace netwave {

/// Input validation failure (bad network data, bad arguments).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure (singular factorization, non-converged iteration).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw edge description as read from a network file or built in code.
struct EdgeSpec {
    std::string id;
    std::string tail;
    std::string head;
    double length = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Raw network description, prior to validation.
struct NetworkSpec {
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
    double alpha = 1.0;
};

/// A directed edge of a validated network. Indices refer to vertex order.
struct Edge {
    std::string id;
    int tail = -1;
    int head = -1;
    double length = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Connected directed geometric graph with per-edge length and
/// coefficients a, b, c. Immutable after construction.
class Network {
public:
    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    /// Interior vertices (degree >= 2), in vertex-index order.
    const std::vector<int>& interior_vertices() const { return interior_; }
    /// Boundary vertices (degree 1), in vertex-index order.
    const std::vector<int>& boundary_vertices() const { return boundary_; }
    bool is_interior(int v) const { return degree_[v] >= 2; }

    int degree(int v) const { return degree_[v]; }

    /// min over edges of min(a, b, c)
    double coeff_lower() const { return coeff_lower_; }
    /// max over edges of max(a, b, c)
    double coeff_upper() const { return coeff_upper_; }

    int vertex_index(const std::string& id) const;

    double total_length() const;

private:
    friend Network build_network(const NetworkSpec& spec);
    Network() = default;

    std::vector<std::string> vertex_ids_;
    std::vector<Edge> edges_;
    std::vector<int> degree_;
    std::vector<int> interior_;
    std::vector<int> boundary_;
    double coeff_lower_ = 0.0;
    double coeff_upper_ = 0.0;
};

/// Validates the description (connectivity, boundary vertex, positive
/// lengths and coefficients, no self-loops) and builds the network.
Network build_network(const NetworkSpec& spec);

/// Vertex-by-edge incidence matrix: -1 at an edge's tail, +1 at its head.
/// Rows follow vertex input order, columns follow edge input order.
Eigen::MatrixXi incidence_matrix(const Network& net);

/// Spanning tree rooted at the lowest-index boundary vertex, together with
/// the regular square incidence block (rows: all vertices except the root,
/// columns: tree edges).
struct TreeDecomposition {
    int root = -1;
    std::vector<int> tree_edges;      // edge indices, |V|-1 of them
    std::vector<int> block_rows;      // vertex indices, all but the root
    Eigen::MatrixXd block;            // (|V|-1) x (|V|-1), invertible
};

TreeDecomposition spanning_tree(const Network& net);

/// Given nodal flux values at every interior vertex, returns per-edge
/// constants u with  sum_{e at v} n^e(v) u^e = nodal[v]  at each interior
/// vertex. Non-tree edges carry zero.
Eigen::VectorXd solve_nodal_fluxes(const Network& net,
                                   const TreeDecomposition& tree,
                                   const Eigen::VectorXd& nodal_interior);

/// Orthonormal basis of the piecewise constant conservative fluxes: columns
/// of an |E| x d matrix spanning the null space of the interior rows of the
/// incidence matrix.
struct ConstantFluxBasis {
    Eigen::MatrixXd columns;  // |E| x d, orthonormal
    int dim() const { return static_cast<int>(columns.cols()); }
};

ConstantFluxBasis h0div_basis(const Network& net);

}  // namespace netwave

#endif
