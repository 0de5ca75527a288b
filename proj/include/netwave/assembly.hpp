#ifndef NETWAVE_ASSEMBLY_HPP
#define NETWAVE_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>

#include "netwave/femspace.hpp"
#include "netwave/network.hpp"

namespace netwave {

using SparseMat = Eigen::SparseMatrix<double>;

/// All bilinear forms of the mixed formulation, in reduced flux
/// coordinates. Coefficients are constant per edge; a is scaled by alpha.
/// The projection form A0 = W^T G^{-1} W is kept in factored form
/// (pi0_pairing = W, pi0_gram = G) since its rank is at most |E|.
struct SystemMatrices {
    SparseMat mass_c;          // (c u, v)
    SparseMat mass_a;          // (alpha a u, v)
    SparseMat flux_mass;       // (u, v), unweighted
    SparseMat stiffness;       // (b^{-1} u', v')
    SparseMat deriv_mass;      // (u', v'), unweighted
    SparseMat hdiv_norm;       // flux_mass + deriv_mass
    SparseMat divergence;      // (u', q), pressure x flux
    Eigen::VectorXd mass_b_diag;     // (b p, q), diagonal
    Eigen::VectorXd press_mass_diag; // (p, q), diagonal

    Eigen::MatrixXd pi0_pairing;  // W: d x reduced, W_{k,j} = (a h_k, phi_j)
    Eigen::MatrixXd pi0_gram;     // G: d x d, G_{kl} = (a h_k, h_l)
    Eigen::MatrixXd flux_basis;   // |E| x d, orthonormal H0(div) basis

    double alpha = 1.0;

    int flux_dim() const { return static_cast<int>(mass_c.rows()); }
    int pressure_dim() const { return static_cast<int>(mass_b_diag.size()); }

    /// dense A0 = W^T G^{-1} W (use only at moderate dimensions)
    Eigen::MatrixXd a0_dense() const;
};

SystemMatrices assemble_system(const Network& net, const DofMap& spaces, double alpha);

/// a-weighted projection onto piecewise constant conservative fluxes;
/// returns the per-edge constant values of Pi0 u.
Eigen::VectorXd pi0_apply(const SystemMatrices& sys, const Eigen::VectorXd& u_reduced);

/// Right-hand sides of the two weak equations.
struct LoadVector {
    Eigen::VectorXd flux;      // reduced coordinates
    Eigen::VectorXd pressure;  // one entry per element
};

LoadVector zero_loads(const DofMap& spaces);

/// Flux-equation contribution of prescribed boundary pressures:
/// -sum_{v in boundary} n^e(v) p_D(v) v_h^e(v), in reduced coordinates.
Eigen::VectorXd boundary_load(const DofMap& spaces, const std::map<int, double>& p_dirichlet);

/// Consistent loads from volume sources f (flux equation) and g (pressure
/// equation), 3-point Gauss quadrature.
LoadVector load_from_sources(const DofMap& spaces, const EdgeFunctions& f, const EdgeFunctions& g);

}  // namespace netwave

#endif
