#ifndef NETWAVE_FEMSPACE_HPP
#define NETWAVE_FEMSPACE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "netwave/network.hpp"

namespace netwave {

/// Scalar function on one edge, in local coordinates x in [0, l^e].
using EdgeFunction = std::function<double(double)>;
/// One function per edge, indexed like Network::edges().
using EdgeFunctions = std::vector<EdgeFunction>;

class DofMap;
struct Refinement;

/// Uniform per-edge meshes with a global element numbering.
class Mesh {
public:
    Mesh(const Network& net, double target_h);

    int cells(int edge) const { return cells_[edge]; }
    double cell_size(int edge) const { return cell_size_[edge]; }
    /// first global element index of an edge
    int elem_offset(int edge) const { return elem_offset_[edge]; }
    int num_elements() const { return num_elements_; }
    int num_edges() const { return static_cast<int>(cells_.size()); }
    /// global mesh size h = max_e h^e
    double h() const { return h_; }

private:
    friend Refinement refine(const Mesh&, const DofMap&);
    std::vector<int> cells_;
    std::vector<double> cell_size_;
    std::vector<int> elem_offset_;
    int num_elements_ = 0;
    double h_ = 0.0;
};

Mesh build_mesh(const Network& net, double target_h);

/// Degree-of-freedom maps for the mixed pair: continuous piecewise-linear
/// fluxes with junction conservation (reduced coordinates via the injection
/// Z) and piecewise-constant pressures (one DOF per element).
class DofMap {
public:
    DofMap(const Network& net, const Mesh& mesh);

    int full_flux_dim() const { return full_dim_; }
    int reduced_flux_dim() const { return reduced_dim_; }
    int pressure_dim() const { return pressure_dim_; }

    /// full nodal flux DOF of node k on an edge, k = 0..cells(edge)
    int node_dof(int edge, int k) const { return node_offset_[edge] + k; }

    /// injection Z: reduced flux coordinates -> full nodal values; every
    /// vector in its range is conservative at interior vertices
    const Eigen::SparseMatrix<double>& Z() const { return Z_; }

    /// reduced index of a full DOF, or -1 if the DOF was eliminated
    int reduced_index(int full_dof) const { return reduced_index_[full_dof]; }

    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
    /// keeps the values at non-eliminated DOFs (left inverse of expand on
    /// conforming data)
    Eigen::VectorXd restrict_full(const Eigen::VectorXd& full) const;

    struct BoundaryEndpoint {
        int vertex;
        int edge;
        int full_dof;
        int sign;  // n^e(v)
    };
    const std::vector<BoundaryEndpoint>& boundary_endpoints() const { return boundary_endpoints_; }

    /// The network must outlive the DofMap.
    const Network& network() const { return *net_; }
    const Mesh& mesh() const { return mesh_; }

private:
    const Network* net_;
    Mesh mesh_;
    std::vector<int> node_offset_;
    std::vector<int> reduced_index_;
    int full_dim_ = 0;
    int reduced_dim_ = 0;
    int pressure_dim_ = 0;
    Eigen::SparseMatrix<double> Z_;
    std::vector<BoundaryEndpoint> boundary_endpoints_;
};

DofMap build_spaces(const Network& net, const Mesh& mesh);

/// Nodal interpolation into the flux space. Input must be conservative at
/// interior vertices (checked to 1e-10).
Eigen::VectorXd interpolate_flux(const DofMap& spaces, const EdgeFunctions& v);

/// Elementwise mean value (L2 projection onto piecewise constants),
/// 3-point Gauss quadrature per element.
Eigen::VectorXd project_pressure(const DofMap& spaces, const EdgeFunctions& q);

/// Prolongation operators for one uniform refinement step.
struct Prolongation {
    Eigen::SparseMatrix<double> flux;      // fine reduced <- coarse reduced
    Eigen::SparseMatrix<double> pressure;  // fine elements <- coarse elements
};

struct Refinement {
    Mesh mesh;
    DofMap spaces;
    Prolongation prolongation;
};

/// Bisect every element; prolongations reproduce coarse functions exactly.
Refinement refine(const Mesh& mesh, const DofMap& spaces);

/// 3-point Gauss-Legendre rule on [x0, x1].
struct GaussRule3 {
    double x[3];
    double w[3];
    GaussRule3(double x0, double x1);
};

}  // namespace netwave

#endif
