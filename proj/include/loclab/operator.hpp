// operator.hpp - Hamiltonian assembly, exact diagonalization, Green functions,
// and the geometric resolvent identity check.
#pragma once

#include <Eigen/Dense>

#include "loclab/ensemble.hpp"
#include "loclab/graph.hpp"

namespace loclab {

enum class BoundaryKind { dirichlet, neumann };

// Dense symmetric H = -Delta^{D/N}_Lambda + V on an indexed vertex set.
// Dirichlet keeps the ambient degree on the diagonal, Neumann the intrinsic one.
struct Hamiltonian {
    SubgraphView domain;
    Eigen::MatrixXd matrix;
    BoundaryKind boundary_kind = BoundaryKind::dirichlet;
    Potential potential; // full ambient potential, kept for re-restriction

    int size() const { return static_cast<int>(matrix.rows()); }
    double sup_norm() const; // induced infinity norm (max absolute row sum)
    Hamiltonian shifted(double t) const; // H + t*Id, same domain
};

Hamiltonian assemble_hamiltonian(const SubgraphView& domain, const Potential& v,
                                 BoundaryKind kind);

// Ascending eigenvalues with orthonormal eigenvectors (columns), validated to
// residual 1e-9*(1+|H|_inf) and Gram defect 1e-10.
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    VertexSet members; // ambient ids, row order of the eigenvector matrix
    double h_sup_norm = 0.0;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    int local_index(Vertex v) const; // throws UnknownVertex
    double near_spectrum_tol() const { return 1e-12 * (1.0 + h_sup_norm); }
    double psi(int j, Vertex v) const {
        return eigenvectors(static_cast<Eigen::Index>(local_index(v)), j);
    }
};

SpectralData eigendecompose(const Hamiltonian& h);

// min_i |lambda_i - E|
double spectral_gap(const SpectralData& s, double E);

// sum_j psi_j(x) psi_j(y) / (lambda_j - E); throws NearSpectrum when E is
// within near_spectrum_tol of the spectrum.
double green(const SpectralData& s, Vertex x, Vertex y, double E);

// |LHS - RHS| of the geometric resolvent equation across the edge boundary of
// lambda, where ambient_h lives on the full graph, x in lambda, y outside.
double verify_gre(const Hamiltonian& ambient_h, const SubgraphView& lambda, Vertex x, Vertex y,
                  double E);

std::string dump_matrix(const Eigen::MatrixXd& m);

} // namespace loclab
