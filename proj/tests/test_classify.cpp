#include "doctest.h"

#include <cmath>

#include "loclab/classify.hpp"
#include "loclab/errors.hpp"
#include "loclab/montecarlo.hpp"
#include "loclab/rng.hpp"

using namespace loclab;

TEST_CASE("scale parameter presets") {
    const ScaleParams p2 = params_section2();
    CHECK(p2.alpha == 1.5);
    CHECK(p2.beta == 0.5);
    CHECK(p2.tau == 0.125);
    CHECK(p2.rho == doctest::Approx(1.0 / 6.0));

    const ScaleParams p8 = params_section8();
    CHECK(p8.alpha == doctest::Approx(4.0 / 3.0));
    CHECK(p8.beta == doctest::Approx(1.0 / 3.0));
    CHECK(p8.delta == 0.25);
    CHECK(p8.sigma == doctest::Approx(1.0 / 3.0));
    CHECK(p8.rho == doctest::Approx(1.0 / 3.0));
    // Consistency identity: tau = (rho - sigma(alpha-1))/2 = 1/9.
    CHECK(p8.tau == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(p8.delta < std::min(p8.beta, p8.sigma));
}

TEST_CASE("gamma decay") {
    CHECK(gamma_decay(2.0, 256, 0.125) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(gamma_decay(2.0, 100, 0.0) == doctest::Approx(4.0)); // tau -> 0 limit: 2m
    CHECK(gamma_decay(1.0, 1, 0.125) == doctest::Approx(2.0));
    CHECK_THROWS_AS(gamma_decay(0.0, 10, 0.125), ConfigError);
}

TEST_CASE("scale sequence") {
    const ScaleSequence seq = scale_sequence(params_section2(1.0, 8), 2);
    CHECK(seq.at(0) == 8);
    CHECK(seq.at(1) == 22);  // floor(8^1.5) = floor(22.63)
    CHECK(seq.at(2) == 103); // floor(22^1.5)

    CHECK(next_scale(16, 1.5) == 64); // exact power

    ScaleParams flat;
    flat.alpha = 1.0;
    flat.l0 = 8;
    CHECK_THROWS_AS(scale_sequence(flat, 1), DegenerateScale);
}

namespace {

BallInstance strong_disorder_ball(int l, double g, std::uint64_t seed) {
    return make_ball_instance(1, l, Ensemble{EnsembleKind::uniform01, g}, seed);
}

} // namespace

TEST_CASE("resonance classification") {
    const ScaleParams p = params_section2();
    const BallInstance inst = strong_disorder_ball(1, 0.0, 1); // free P3 ball

    // E on an eigenvalue: resonant regardless of the threshold.
    CHECK(classify_resonant(inst.spectral, inst.spectral.eigenvalues(0), p, 1).resonant);

    // Free three-site ball at E = 5: gap 3 - sqrt(2) beats e^{-1}.
    const ResonanceVerdict far = classify_resonant(inst.spectral, 5.0, p, 1);
    CHECK(far.gap == doctest::Approx(3.0 - std::sqrt(2.0)));
    CHECK(far.threshold == doctest::Approx(std::exp(-1.0)));
    CHECK_FALSE(far.resonant);

    // Strictness of the inequality: the verdict is exactly (gap < threshold).
    const ResonanceVerdict v = classify_resonant(inst.spectral, 2.0 - std::exp(-1.0), p, 1);
    CHECK(v.resonant == (v.gap < v.threshold));
    if (v.gap == v.threshold) CHECK_FALSE(v.resonant);
}

TEST_CASE("singular classification") {
    const ScaleParams p = params_section2();

    // Radius-zero ball: no admissible pair, vacuously nonsingular.
    const BallInstance tiny = make_ball_instance(1, 0, {EnsembleKind::uniform01, 1.0}, 3);
    CHECK_FALSE(classify_singular(tiny.spectral, tiny.ball, 0.5, p, 0, 3.0).singular);

    // Near-spectrum energies are singular by convention.
    const BallInstance inst = strong_disorder_ball(4, 1.0, 5);
    const SingularVerdict near =
        classify_singular(inst.spectral, inst.ball, inst.spectral.eigenvalues(2), p, 4, 3.0);
    CHECK(near.singular);
    CHECK(near.near_spectrum);

    // Free Green function inside the band decays too slowly: singular with a
    // witness pair, cross-checked by direct inversion at L = 32.
    const BallInstance free = strong_disorder_ball(32, 0.0, 7);
    const SingularVerdict sv = classify_singular(free.spectral, free.ball, 2.3, p, 32, 3.0);
    CHECK(sv.singular);
    CHECK_FALSE(sv.near_spectrum);
    REQUIRE(!sv.witnesses.empty());
    const PairWitness w = sv.witnesses.front();
    const Eigen::MatrixXd resolvent =
        (assemble_hamiltonian(free.ball, free.potential, BoundaryKind::dirichlet).matrix -
         2.3 * Eigen::MatrixXd::Identity(free.ball.size(), free.ball.size()))
            .fullPivLu()
            .inverse();
    const double direct =
        std::abs(resolvent(free.ball.local_index(w.x), free.ball.local_index(w.y)));
    CHECK(w.observed == doctest::Approx(9.0 * 32.0 * direct).epsilon(1e-9));
    CHECK(w.observed > w.required);

    // Monotonicity in m: nonsingular at m stays nonsingular for smaller m.
    Rng rng(77);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        const BallInstance b = strong_disorder_ball(16, 30.0, rng.next_u64());
        ScaleParams strong = params_section2(0.5);
        if (classify_singular(b.spectral, b.ball, 17.0, strong, 16, 3.0).singular) continue;
        ScaleParams weak = params_section2(0.2);
        CHECK_FALSE(classify_singular(b.spectral, b.ball, 17.0, weak, 16, 3.0).singular);
        ++checked;
    }
    CHECK(checked > 0);

    // Strong disorder keeps most balls nonsingular at mid-band energy.
    const ScaleParams half = params_section2(0.5);
    int ns = 0;
    const int seeds = 500;
    for (int i = 0; i < seeds; ++i) {
        const BallInstance b = strong_disorder_ball(16, 30.0, derive_seed(2025, i));
        if (!classify_singular(b.spectral, b.ball, 17.0, half, 16, 3.0).singular) ++ns;
    }
    CHECK(ns > seeds / 2);
}

TEST_CASE("tunneling classification") {
    const ScaleParams p = params_section2();
    const int l_k = 4, l_next = 16;

    // Energy far below the spectrum: every sub-ball is nonsingular.
    const BallInstance calm = strong_disorder_ball(l_next, 1.0, 11);
    const TunnelingVerdict nt =
        classify_tunneling(calm.ball, calm.center, l_next, calm.potential, -10.0, p, l_k,
                           TunnelingMode::pairwise, calm.c_d);
    CHECK_FALSE(nt.tunneling);
    CHECK(nt.disjoint_count == 0);

    // Two sub-balls forced singular by putting E on the spectrum of each: the
    // potential repeats in translated copies so both share that eigenvalue.
    const BallInstance host = strong_disorder_ball(l_next, 0.0, 13);
    Potential planted = host.potential;
    Vertex left = host.center - 10, right = host.center + 10;
    for (int off = -l_k; off <= l_k; ++off)
        planted.values[static_cast<size_t>(right + off)] =
            planted.values[static_cast<size_t>(left + off)] =
                0.3 * static_cast<double>(std::abs(off));
    const SubgraphView left_ball = ball_view(host.ambient, left, l_k);
    const double e_star = eigendecompose(assemble_hamiltonian(left_ball, planted,
                                                              BoundaryKind::dirichlet))
                              .eigenvalues(2);
    const TunnelingVerdict tv =
        classify_tunneling(host.ball, host.center, l_next, planted, e_star, p, l_k,
                           TunnelingMode::pairwise, host.c_d);
    CHECK(tv.tunneling);
    CHECK(tv.disjoint_count >= 2);
    CHECK(host.ambient->distance(left, right) > 2 * l_k);

    // Counted mode with the section-8 exponents: threshold L_k^{1/9}.
    const ScaleParams p8 = params_section8();
    const TunnelingVerdict counted =
        classify_tunneling(host.ball, host.center, l_next, planted, e_star, p8, l_k,
                           TunnelingMode::counted, host.c_d);
    CHECK(counted.threshold == doctest::Approx(std::pow(4.0, 1.0 / 9.0)));
    CHECK(counted.tunneling == (static_cast<double>(counted.disjoint_count) > counted.threshold));
    CHECK(std::pow(81.0, 1.0 / 9.0) == doctest::Approx(1.6294).epsilon(1e-3));

    CHECK_THROWS_AS(classify_tunneling(calm.ball, calm.center, l_next, calm.potential, 0.0, p, 8,
                                       TunnelingMode::pairwise, calm.c_d),
                    ConfigError);
}

TEST_CASE("complete non-resonance") {
    const ScaleParams p = params_section2();
    const int l_k = 4, l_next = 16;
    const BallInstance inst = strong_disorder_ball(l_next, 1.0, 17);

    // Far outside the numerical spectrum every probed gap is huge.
    const CnrVerdict far = classify_cnr(inst.ball, inst.center, l_next, inst.potential, -50.0, p, l_k);
    CHECK(far.cnr);
    CHECK(far.probe_set.size() == static_cast<size_t>(far.probed_balls));
    // CNR forces non-resonance of the big ball itself.
    CHECK_FALSE(classify_resonant(inst.spectral, -50.0, p, l_next).resonant);

    // An eigenvalue of the big ball defeats the top-level check.
    const CnrVerdict top = classify_cnr(inst.ball, inst.center, l_next, inst.potential,
                                        inst.spectral.eigenvalues(5), p, l_k);
    CHECK_FALSE(top.cnr);

    // Resonance planted in one interior sub-ball only.
    const Vertex off_center = inst.center + 9;
    const SubgraphView sub = ball_view(inst.ambient, off_center, l_k);
    const double e_star =
        eigendecompose(assemble_hamiltonian(sub, inst.potential, BoundaryKind::dirichlet))
            .eigenvalues(3);
    const CnrVerdict planted = classify_cnr(inst.ball, inst.center, l_next, inst.potential, e_star,
                                            p, l_k);
    CHECK_FALSE(planted.cnr);
    REQUIRE(planted.resonant_center.has_value());
    CHECK(planted.resonant_radius.value() <= l_next);
}

TEST_CASE("m-localized classification") {
    const ScaleParams p = params_section2();

    // Radius-zero ball: vacuous.
    const BallInstance tiny = make_ball_instance(1, 0, {EnsembleKind::uniform01, 1.0}, 19);
    CHECK(classify_m_localized(tiny.spectral, tiny.ball, p, 0).localized);

    // Synthetic hopping-free spectral data: coordinate eigenvectors make all
    // off-diagonal products vanish.
    const BallInstance host = make_ball_instance(1, 4, {EnsembleKind::uniform01, 1.0}, 23);
    SpectralData diag;
    diag.members = host.ball.members();
    diag.h_sup_norm = 1.0;
    diag.eigenvalues = Eigen::VectorXd::LinSpaced(host.ball.size(), 0.0, 1.0);
    diag.eigenvectors = Eigen::MatrixXd::Identity(host.ball.size(), host.ball.size());
    for (double m : {0.1, 1.0, 10.0})
        CHECK(classify_m_localized(diag, host.ball, params_section2(m), 4).localized);

    // Strong disorder localizes most radius-64 balls. The rate is kept small
    // enough that the required product sums stay above the eigensolver noise
    // floor at the far pairs.
    const ScaleParams slow = params_section2(0.1);
    int localized = 0;
    const int seeds = 300;
    for (int i = 0; i < seeds; ++i) {
        const BallInstance b = strong_disorder_ball(64, 10.0, derive_seed(31, i));
        if (classify_m_localized(b.spectral, b.ball, slow, 64).localized) ++localized;
    }
    CHECK(localized > seeds / 2);
}

namespace {

int brute_force_max_disjoint(const VertexSet& centers, int radius, const FiniteGraph& g) {
    const int n = static_cast<int>(centers.size());
    int best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) &&
                    g.distance(centers[static_cast<size_t>(i)], centers[static_cast<size_t>(j)]) <=
                        2 * radius)
                    ok = false;
        if (ok) best = std::max(best, __builtin_popcount(static_cast<unsigned>(mask)));
    }
    return best;
}

} // namespace

TEST_CASE("maximal disjoint families") {
    const auto g = build_interval_graph(40);
    CHECK(max_disjoint_balls({}, 3, *g).count == 0);
    CHECK(max_disjoint_balls({5, 5 + 7}, 3, *g).count == 2); // distance 2L+1
    CHECK(max_disjoint_balls({0, 5, 10}, 3, *g).count == 2); // interval scheduling

    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        VertexSet centers;
        const int count = 1 + static_cast<int>(rng.next_below(9));
        for (int j = 0; j < count; ++j) centers.push_back(static_cast<Vertex>(rng.next_below(40)));
        std::sort(centers.begin(), centers.end());
        centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
        const int radius = 1 + static_cast<int>(rng.next_below(4));
        const MaxDisjointResult r = max_disjoint_balls(centers, radius, *g);
        CHECK(r.exact);
        CHECK(r.count == brute_force_max_disjoint(centers, radius, *g));
    }

    // Beyond 20 centers the greedy path reports a non-exact lower bound.
    VertexSet many;
    for (Vertex v = 0; v < 25; ++v) many.push_back(v);
    const MaxDisjointResult greedy = max_disjoint_balls(many, 1, *g);
    CHECK_FALSE(greedy.exact);
    CHECK(greedy.count >= 1);
    CHECK(greedy.count <= 9); // 25 sites, conflicts within distance 2

    // Existence of a disjoint pair is decided exactly even on the greedy path.
    VertexSet crowded;
    for (Vertex v = 10; v < 33; ++v) crowded.push_back(v);
    crowded.push_back(39); // disjoint from vertex 10 at radius 14? no: only from none
    const MaxDisjointResult pair = max_disjoint_balls(crowded, 14, *g);
    CHECK_FALSE(pair.exact);
    CHECK((pair.count >= 2) == (39 - 10 > 2 * 14));
}
