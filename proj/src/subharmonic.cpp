#include "loclab/subharmonic.hpp"

#include <algorithm>
#include <cmath>

#include "loclab/errors.hpp"
#include "loclab/rng.hpp"

namespace loclab {

namespace {

double ball_max(const VertexFunction& f, const FiniteGraph& g, Vertex x, int r) {
    double best = 0.0;
    for (Vertex y : g.ball(x, r)) best = std::max(best, f[static_cast<size_t>(y)]);
    return best;
}

void require_proper_ball(const FiniteGraph& g, Vertex center, int big_l) {
    if (static_cast<int>(g.ball(center, big_l).size()) == g.size())
        throw InvalidDomain("ball must be a proper subset of the host graph");
}

bool point_regular(const VertexFunction& f, const FiniteGraph& g, Vertex x, int l, double q) {
    return f[static_cast<size_t>(x)] <= q * ball_max(f, g, x, l + 1);
}

} // namespace

SubharmonicCheck is_lq_subharmonic(const VertexFunction& f, const FiniteGraph& g, Vertex center,
                                   int big_l, int l, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
    require_proper_ball(g, center, big_l);
    for (double v : f)
        if (v < 0.0) throw InvalidDomain("subharmonic checks need f >= 0");
    SubharmonicCheck out;
    for (Vertex x : g.ball(center, big_l)) {
        // Quantifier of the definition: only x with B_l(x) inside the big ball.
        if (g.distance(center, x) + l > big_l) {
            bool inside = true;
            for (Vertex y : g.ball(x, l))
                if (g.distance(center, y) > big_l) { inside = false; break; }
            if (!inside) continue;
        }
        const double bound = q * ball_max(f, g, x, l + 1);
        if (f[static_cast<size_t>(x)] > bound)
            out.witnesses.push_back({x, -1, 0, f[static_cast<size_t>(x)], bound});
    }
    out.holds = out.witnesses.empty();
    return out;
}

double radial_bound(int big_l, int l, double q) {
    if (!(big_l >= l && l >= 0)) throw ConfigError("radial bound needs L >= l >= 0");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
    const int steps = (big_l + 1) / (l + 1);
    return std::pow(q, steps);
}

RadialDescentCheck check_radial_descent(const VertexFunction& f, const FiniteGraph& g,
                                        Vertex center, int big_l, int l, double q) {
    RadialDescentCheck out;
    out.center_value = f[static_cast<size_t>(center)];
    out.bound = radial_bound(big_l, l, q);
    out.cap_ball = out.bound * ball_max(f, g, center, big_l + 1);
    double global = 0.0;
    for (double v : f) global = std::max(global, v);
    out.cap_global = out.bound * global;
    out.within_ball_cap = out.center_value <= out.cap_ball * (1.0 + 1e-12);
    out.within_global_cap = out.center_value <= out.cap_global * (1.0 + 1e-12);
    return out;
}

double two_ball_bound(int r1, int r2, int l, double q) {
    if (!(r1 >= l && r2 >= l && l >= 0)) throw ConfigError("two-ball bound needs r1,r2 >= l >= 0");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
    const int steps = (r1 + 1) / (l + 1) + (r2 + 1) / (l + 1);
    return std::pow(q, steps);
}

int AnnuliCover::total_width() const {
    int w = 0;
    for (const auto& a : annuli) w += a.b - a.a;
    return w;
}

int AnnuliCover::blocked_count(int l) const {
    int c = 0;
    for (const auto& a : annuli) {
        if (a.b < a.a) throw ConfigError("annulus with negative width");
        const int width = a.b - a.a;
        if (width == 0) continue;
        if (l == 0) throw HypothesisFailure("nonempty annulus requires l >= 1");
        c += std::max(1, (width + l - 1) / l);
    }
    return c;
}

double annuli_bound(int big_l, int l, double q, const AnnuliCover& cover) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
    const int c = cover.blocked_count(l);
    if (2 * c * (l + 1) >= big_l)
        throw HypothesisFailure("annuli bound needs 2C(l+1) < L, got C = " + std::to_string(c));
    const int steps = (big_l + 1) / (l + 1) - 2 * c;
    return std::pow(q, steps);
}

VertexSet regular_set(const VertexFunction& f, const FiniteGraph& g, Vertex center, int big_l,
                      int l, double q) {
    require_proper_ball(g, center, big_l);
    VertexSet out;
    for (Vertex x : g.ball(center, big_l))
        if (point_regular(f, g, x, l, q)) out.push_back(x);
    return out;
}

SubharmonicCertificate certify_with_annuli(const VertexFunction& f, const FiniteGraph& g,
                                           Vertex center, int big_l, int l, double q,
                                           const AnnuliCover& cover) {
    SubharmonicCertificate cert;
    cert.center = center;
    cert.big_l = big_l;
    cert.l = l;
    cert.q = q;
    cert.cover = cover;
    cert.regular = regular_set(f, g, center, big_l, l, q);
    for (Vertex x : g.ball(center, big_l)) {
        if (std::binary_search(cert.regular.begin(), cert.regular.end(), x)) continue;
        const int r = g.distance(center, x);
        bool covered = false;
        for (const auto& a : cover.annuli)
            if (r > a.a && r <= a.b) { covered = true; break; }
        if (!covered) cert.annuli_cover_irregulars = false;
    }
    return cert;
}

GreenSubharmonicityReport verify_green_subharmonicity(const Hamiltonian& ambient_h, Vertex center,
                                                      int big_l, Vertex y, double E,
                                                      const ScaleParams& p, int l, double c_d) {
    GreenSubharmonicityReport report;
    const GraphPtr g = ambient_h.domain.ambient();
    if (ambient_h.domain.size() != g->size())
        throw InvalidDomain("ambient Hamiltonian must live on the full graph");
    require_proper_ball(*g, center, big_l);
    if (g->distance(center, y) <= big_l) throw InvalidDomain("y must lie outside the ball");

    // Premise: every l-ball inside B_L(center) is (E,m)-nonsingular.
    for (Vertex x : g->ball(center, big_l)) {
        bool inside = true;
        for (Vertex z : g->ball(x, l))
            if (g->distance(center, z) > big_l) { inside = false; break; }
        if (!inside) continue;
        const SubgraphView sub = ball_view(g, x, l);
        const SpectralData s =
            eigendecompose(assemble_hamiltonian(sub, ambient_h.potential, BoundaryKind::dirichlet));
        if (classify_singular(s, sub, E, p, l, c_d).singular) ++report.premise_failures;
    }
    if (report.premise_failures > 0) {
        report.result = GreenSubharmonicity::not_applicable;
        return report;
    }

    const SpectralData full = eigendecompose(ambient_h);
    VertexFunction f(static_cast<size_t>(g->size()), 0.0);
    for (Vertex x = 0; x < g->size(); ++x) f[static_cast<size_t>(x)] = std::abs(green(full, x, y, E));
    report.q = std::exp(-gamma_decay(p.m, l, p.tau) * l);
    const SubharmonicCheck check = is_lq_subharmonic(f, *g, center, big_l, l, report.q);
    report.witnesses = check.witnesses;
    report.result = check.holds ? GreenSubharmonicity::confirmed : GreenSubharmonicity::refuted;
    return report;
}

VertexFunction random_subharmonic_function(const FiniteGraph& g, Vertex center, int big_l, int l,
                                           double q, std::uint64_t seed) {
    Rng rng(seed);
    const int radius_span = g.diameter() + 1;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Contraction slightly stronger than q buys room for the jitter.
        const double q_eff = q * (0.85 + 0.14 * rng.next_uniform());
        const double jitter_amp = attempt < 8 ? 0.5 * (1.0 - q_eff / q) : 0.0;
        // Monotone radial damping: random extra decay accumulated inward.
        std::vector<double> log_damp(static_cast<size_t>(radius_span) + 2, 0.0);
        for (int r = radius_span; r >= 0; --r)
            log_damp[static_cast<size_t>(r)] =
                log_damp[static_cast<size_t>(r) + 1] - 0.2 * rng.next_uniform();
        VertexFunction f(static_cast<size_t>(g.size()), 0.0);
        for (Vertex x = 0; x < g.size(); ++x) {
            const int r = g.distance(center, x);
            const double profile =
                std::pow(q_eff, static_cast<double>(big_l + 1 - r) / static_cast<double>(l + 1));
            const double jitter = 1.0 - jitter_amp * rng.next_uniform();
            f[static_cast<size_t>(x)] = profile * std::exp(log_damp[static_cast<size_t>(r)]) * jitter;
        }
        if (is_lq_subharmonic(f, g, center, big_l, l, q).holds) return f;
    }
    throw Error("subharmonic generator failed to produce an accepted function");
}

} // namespace loclab
