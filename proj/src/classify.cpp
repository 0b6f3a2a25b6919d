#include "loclab/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "loclab/errors.hpp"

namespace loclab {

namespace {

int ceil_pow(int l, double exponent) {
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(l), exponent) - 1e-12));
}

// Eigenfunction-product sum, |psi_i(x) psi_i(y)| summed over the whole spectrum.
double product_sum(const SpectralData& s, int ix, int iy) {
    double sum = 0.0;
    for (int j = 0; j < s.size(); ++j)
        sum += std::abs(s.eigenvectors(ix, j) * s.eigenvectors(iy, j));
    return sum;
}

} // namespace

ResonanceVerdict classify_resonant(const SpectralData& s, double E, const ScaleParams& p, int l) {
    ResonanceVerdict v;
    v.gap = spectral_gap(s, E);
    v.threshold = std::exp(-std::pow(static_cast<double>(l), p.beta));
    v.resonant = v.gap < v.threshold;
    return v;
}

SingularVerdict classify_singular(const SpectralData& s, const SubgraphView& ball, double E,
                                  const ScaleParams& p, int l, double c_d) {
    SingularVerdict v;
    v.min_distance = ceil_pow(l, p.singular_exponent());
    if (spectral_gap(s, E) <= s.near_spectrum_tol()) {
        v.singular = true;
        v.near_spectrum = true;
        return v;
    }
    const auto& g = *ball.ambient();
    const double prefactor = c_d * c_d * std::pow(static_cast<double>(l), g.dim_hint());
    const auto& members = ball.members();
    const int n = static_cast<int>(members.size());
    double rate = 0.0;
    bool have_rate = false;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int dist = g.distance(members[static_cast<size_t>(i)], members[static_cast<size_t>(j)]);
            if (dist < v.min_distance) continue;
            if (!have_rate) { // lazily: the vacuous case needs no decay rate
                rate = gamma_decay(p.m, l, p.tau);
                have_rate = true;
            }
            const double lhs = prefactor * std::abs(green(s, members[static_cast<size_t>(i)],
                                                          members[static_cast<size_t>(j)], E));
            const double rhs = std::exp(-rate * dist);
            if (lhs > rhs)
                v.witnesses.push_back({members[static_cast<size_t>(i)],
                                       members[static_cast<size_t>(j)], dist, lhs, rhs});
        }
    }
    v.singular = !v.witnesses.empty();
    return v;
}

namespace {

// Exact maximum independent set on <= 20 nodes, branch on include/exclude.
std::uint32_t mis_mask(std::uint32_t avail, const std::vector<std::uint32_t>& conflicts) {
    if (avail == 0) return 0;
    const int v = std::countr_zero(avail);
    const std::uint32_t bit = 1u << v;
    const std::uint32_t with_v = bit | mis_mask(avail & ~conflicts[static_cast<size_t>(v)] & ~bit, conflicts);
    const std::uint32_t without_v = mis_mask(avail & ~bit, conflicts);
    return std::popcount(with_v) >= std::popcount(without_v) ? with_v : without_v;
}

} // namespace

MaxDisjointResult max_disjoint_balls(const VertexSet& centers, int radius, const FiniteGraph& g) {
    MaxDisjointResult r;
    const int n = static_cast<int>(centers.size());
    if (n == 0) return r;
    // Balls intersect exactly when the centers are within 2*radius.
    if (n <= 20) {
        std::vector<std::uint32_t> conflicts(static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && g.distance(centers[static_cast<size_t>(i)], centers[static_cast<size_t>(j)]) <= 2 * radius)
                    conflicts[static_cast<size_t>(i)] |= 1u << j;
        const std::uint32_t best = mis_mask((n == 32 ? ~0u : (1u << n) - 1u), conflicts);
        r.count = std::popcount(best);
        for (int i = 0; i < n; ++i)
            if (best & (1u << i)) r.chosen.push_back(centers[static_cast<size_t>(i)]);
        return r;
    }
    r.exact = false;
    for (Vertex c : centers) {
        bool ok = true;
        for (Vertex taken : r.chosen)
            if (g.distance(c, taken) <= 2 * radius) { ok = false; break; }
        if (ok) r.chosen.push_back(c);
    }
    r.count = static_cast<int>(r.chosen.size());
    if (r.count < 2) {
        // The greedy set is maximal, not maximum; existence of a disjoint
        // pair is cheap to decide exactly and keeps two-ball verdicts sharp.
        for (int i = 0; i < n && r.count < 2; ++i)
            for (int j = i + 1; j < n; ++j)
                if (g.distance(centers[static_cast<size_t>(i)], centers[static_cast<size_t>(j)]) >
                    2 * radius) {
                    r.count = 2;
                    r.chosen = {centers[static_cast<size_t>(i)], centers[static_cast<size_t>(j)]};
                    break;
                }
    }
    return r;
}

namespace {

// Centers whose radius-r ball is fully contained in the given big ball.
VertexSet contained_ball_centers(const SubgraphView& big_ball, int r) {
    const auto& g = *big_ball.ambient();
    VertexSet out;
    for (Vertex x : big_ball.members()) {
        bool inside = true;
        for (Vertex y : g.ball(x, r))
            if (!big_ball.contains(y)) { inside = false; break; }
        if (inside) out.push_back(x);
    }
    return out;
}

} // namespace

TunnelingVerdict classify_tunneling(const SubgraphView& big_ball, Vertex /*center*/, int l_next,
                                    const Potential& v, double E, const ScaleParams& p, int l_k,
                                    TunnelingMode mode, double c_d) {
    if (l_next <= 2 * l_k) throw ConfigError("tunneling scan needs L_{k+1} > 2 L_k");
    TunnelingVerdict out;
    const auto& g = *big_ball.ambient();
    for (Vertex x : contained_ball_centers(big_ball, l_k)) {
        const SubgraphView sub = ball_view(big_ball.ambient(), x, l_k);
        const SpectralData s = eigendecompose(assemble_hamiltonian(sub, v, BoundaryKind::dirichlet));
        if (classify_singular(s, sub, E, p, l_k, c_d).singular) out.singular_centers.push_back(x);
    }
    const MaxDisjointResult mis = max_disjoint_balls(out.singular_centers, l_k, g);
    out.disjoint_count = mis.count;
    out.count_exact = mis.exact;
    out.disjoint_witness = mis.chosen;
    if (mode == TunnelingMode::pairwise) {
        out.threshold = 2.0;
        out.tunneling = mis.count >= 2;
    } else {
        out.threshold = std::pow(static_cast<double>(l_k), p.sigma * (p.alpha - 1.0));
        out.tunneling = static_cast<double>(mis.count) > out.threshold;
    }
    return out;
}

CnrVerdict classify_cnr(const SubgraphView& big_ball, Vertex center, int l_next,
                        const Potential& v, double E, const ScaleParams& p, int l_k) {
    CnrVerdict out;
    const auto check_nr = [&](Vertex c, int r) {
        const SubgraphView sub = ball_view(big_ball.ambient(), c, r);
        const SpectralData s = eigendecompose(assemble_hamiltonian(sub, v, BoundaryKind::dirichlet));
        ++out.probed_balls;
        out.probe_set.emplace_back(c, r);
        return !classify_resonant(s, E, p, r).resonant;
    };
    if (!check_nr(center, l_next)) {
        out.resonant_center = center;
        out.resonant_radius = l_next;
        return out;
    }
    for (int r = l_k; r < l_next; ++r)
        if (!check_nr(center, r)) {
            out.resonant_center = center;
            out.resonant_radius = r;
            return out;
        }
    for (Vertex x : contained_ball_centers(big_ball, l_k)) {
        if (x == center) continue; // concentric probe already covered it
        if (!check_nr(x, l_k)) {
            out.resonant_center = x;
            out.resonant_radius = l_k;
            return out;
        }
    }
    out.cnr = true;
    return out;
}

LocalizationVerdict classify_m_localized(const SpectralData& s, const SubgraphView& ball,
                                         const ScaleParams& p, int l) {
    LocalizationVerdict v;
    v.min_distance = ceil_pow(l, 7.0 / 8.0);
    const auto& g = *ball.ambient();
    const auto& members = ball.members();
    const int n = static_cast<int>(members.size());
    double rate = 0.0;
    bool have_rate = false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int dist = g.distance(members[static_cast<size_t>(i)], members[static_cast<size_t>(j)]);
            if (dist < v.min_distance) continue;
            if (!have_rate) {
                rate = gamma_decay(p.m, l, p.tau);
                have_rate = true;
            }
            const double lhs = product_sum(s, s.local_index(members[static_cast<size_t>(i)]),
                                           s.local_index(members[static_cast<size_t>(j)]));
            const double rhs = std::exp(-rate * dist);
            if (lhs > rhs)
                v.witnesses.push_back({members[static_cast<size_t>(i)], members[static_cast<size_t>(j)],
                                       dist, lhs, rhs});
        }
    v.localized = v.witnesses.empty();
    return v;
}

} // namespace loclab
