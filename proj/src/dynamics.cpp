#include "loclab/dynamics.hpp"

#include <cmath>
#include <complex>
#include <set>

#include "loclab/errors.hpp"

namespace loclab {

Correlator ef_correlator(const SpectralData& s, Vertex x, Vertex y, Interval I) {
    Correlator c;
    c.x = x;
    c.y = y;
    c.interval = I;
    const int ix = s.local_index(x);
    const int iy = s.local_index(y);
    for (int j = 0; j < s.size(); ++j) {
        const double lam = s.eigenvalues(j);
        if (lam < I.lo || lam > I.hi) continue;
        c.value += std::abs(s.eigenvectors(ix, j) * s.eigenvectors(iy, j));
    }
    return c;
}

double evolution_amplitude(const SpectralData& s, Vertex x, Vertex y, double t) {
    const int ix = s.local_index(x);
    const int iy = s.local_index(y);
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < s.size(); ++j)
        sum += std::exp(std::complex<double>(0.0, -t * s.eigenvalues(j))) *
               (s.eigenvectors(ix, j) * s.eigenvectors(iy, j));
    return std::abs(sum);
}

CorrelatorAuditReport correlator_bound_audit(const Hamiltonian& big_h, Vertex x, Vertex y, int l, Interval I,
                             const ScaleParams& p, double c_d) {
    const GraphPtr g = big_h.domain.ambient();
    if (big_h.domain.size() != g->size())
        throw InvalidDomain("audit Hamiltonian must live on the full graph");
    if (g->distance(x, y) <= 2 * l + 1)
        throw InvalidGeometry("audit needs d(x,y) > 2L+1");
    for (Vertex z : {x, y})
        if (static_cast<int>(g->ball(z, l).size()) == g->size())
            throw InvalidGeometry("L-balls must be proper subsets of the graph");

    CorrelatorAuditReport report;
    report.bound = 4.0 * std::exp(-p.m * static_cast<double>(l));

    const SpectralData big = eigendecompose(big_h);
    const SubgraphView bx = ball_view(g, x, l);
    const SubgraphView by = ball_view(g, y, l);
    const SpectralData sx = eigendecompose(assemble_hamiltonian(bx, big_h.potential, BoundaryKind::dirichlet));
    const SpectralData sy = eigendecompose(assemble_hamiltonian(by, big_h.potential, BoundaryKind::dirichlet));

    for (int j = 0; j < big.size(); ++j) {
        const double lam = big.eigenvalues(j);
        if (lam < I.lo || lam > I.hi) continue;
        ++report.eigenvalues_in_interval;
        const bool x_ns = !classify_singular(sx, bx, lam, p, l, c_d).singular;
        const bool y_ns = x_ns || !classify_singular(sy, by, lam, p, l, c_d).singular;
        if (!x_ns && !y_ns) {
            report.result = CorrelatorAuditResult::not_applicable;
            report.premise_failure_energy = lam;
            return report;
        }
    }
    report.correlator = ef_correlator(big, x, y, I).value;
    report.result = report.correlator <= report.bound ? CorrelatorAuditResult::bound_holds
                                                      : CorrelatorAuditResult::violation;
    return report;
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& points) {
    DecayFit fit;
    std::vector<double> xs, ys;
    std::set<double> distinct;
    for (auto [d, v] : points) {
        if (!(v > 0.0)) {
            ++fit.dropped_nonpositive;
            continue;
        }
        xs.push_back(d);
        ys.push_back(std::log(v));
        distinct.insert(d);
    }
    if (distinct.size() < 3)
        throw InsufficientData("decay fit needs >= 3 distinct distances with positive values");
    const LineFit line = least_squares(xs, ys);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    return fit;
}

} // namespace loclab
