#include "loclab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "loclab/errors.hpp"

namespace loclab {

double Hamiltonian::sup_norm() const {
    return matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

Hamiltonian Hamiltonian::shifted(double t) const {
    Hamiltonian out = *this;
    out.matrix.diagonal().array() += t;
    return out;
}

Hamiltonian assemble_hamiltonian(const SubgraphView& domain, const Potential& v,
                                 BoundaryKind kind) {
    const auto& g = *domain.ambient();
    if (static_cast<int>(v.values.size()) != g.size())
        throw InvalidDomain("potential not sampled on the ambient graph");
    const int n = domain.size();
    Hamiltonian h{domain, Eigen::MatrixXd::Zero(n, n), kind, v};
    for (int i = 0; i < n; ++i) {
        const Vertex a = domain.ambient_vertex(i);
        const int deg = kind == BoundaryKind::dirichlet ? g.degree(a) : domain.intrinsic_degree(a);
        h.matrix(i, i) = static_cast<double>(deg) + v.at(a);
        for (Vertex b : g.neighbors(a))
            if (domain.contains(b)) h.matrix(i, domain.local_index(b)) = -1.0;
    }
    return h;
}

int SpectralData::local_index(Vertex v) const {
    auto it = std::lower_bound(members.begin(), members.end(), v);
    if (it == members.end() || *it != v) throw UnknownVertex("vertex " + std::to_string(v));
    return static_cast<int>(it - members.begin());
}

std::string dump_matrix(const Eigen::MatrixXd& m) {
    std::string out;
    char buf[40];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out += buf;
            out += (j + 1 == m.cols()) ? '\n' : ' ';
        }
    }
    return out;
}

SpectralData eigendecompose(const Hamiltonian& h) {
    if (h.size() < 1) throw InvalidSize("empty Hamiltonian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("eigensolver did not converge", dump_matrix(h.matrix));

    SpectralData s;
    s.eigenvalues = solver.eigenvalues();
    s.eigenvectors = solver.eigenvectors();
    s.members = h.domain.members();
    s.h_sup_norm = h.sup_norm();

    const double tol = 1e-9 * (1.0 + s.h_sup_norm);
    const double residual =
        (h.matrix * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    const double gram_defect =
        (s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(h.size(), h.size()))
            .cwiseAbs()
            .maxCoeff();
    if (residual > tol || gram_defect > 1e-10)
        throw NumericalFailure("eigendecomposition failed validation", dump_matrix(h.matrix));
    return s;
}

double spectral_gap(const SpectralData& s, double E) {
    return (s.eigenvalues.array() - E).abs().minCoeff();
}

double green(const SpectralData& s, Vertex x, Vertex y, double E) {
    if (spectral_gap(s, E) <= s.near_spectrum_tol())
        throw NearSpectrum("E within tolerance of the spectrum");
    const int ix = s.local_index(x);
    const int iy = s.local_index(y);
    double sum = 0.0;
    for (int j = 0; j < s.size(); ++j)
        sum += s.eigenvectors(ix, j) * s.eigenvectors(iy, j) / (s.eigenvalues(j) - E);
    return sum;
}

double verify_gre(const Hamiltonian& ambient_h, const SubgraphView& lambda, Vertex x, Vertex y,
                  double E) {
    if (ambient_h.domain.size() != ambient_h.domain.ambient()->size())
        throw InvalidDomain("ambient Hamiltonian must live on the full graph");
    if (!lambda.contains(x)) throw InvalidDomain("x must lie inside lambda");
    if (lambda.contains(y)) throw InvalidDomain("y must lie outside lambda");

    const SpectralData full = eigendecompose(ambient_h);
    const Hamiltonian restricted =
        assemble_hamiltonian(lambda, ambient_h.potential, BoundaryKind::dirichlet);
    const SpectralData inner = eigendecompose(restricted);

    const double lhs = green(full, x, y, E);
    double rhs = 0.0;
    for (auto [u, u_out] : boundary(lambda).edges)
        rhs += green(inner, x, u, E) * green(full, u_out, y, E);
    return std::abs(lhs - rhs);
}

} // namespace loclab
