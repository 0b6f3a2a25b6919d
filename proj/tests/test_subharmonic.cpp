#include "doctest.h"

#include <cmath>

#include "loclab/errors.hpp"
#include "loclab/montecarlo.hpp"
#include "loclab/rng.hpp"
#include "loclab/subharmonic.hpp"

using namespace loclab;

TEST_CASE("sharp interval example") {
    // f(x) = q^{R-x} on [0, R] with R = L+1 is (0,q)-subharmonic in B_L(0)
    // with equality at every step.
    const int big_l = 10;
    const double q = 0.41;
    const auto g = build_interval_graph(big_l + 2);
    VertexFunction f(static_cast<size_t>(g->size()), 1.0);
    for (Vertex x = g->size() - 2; x >= 0; --x)
        f[static_cast<size_t>(x)] = q * f[static_cast<size_t>(x) + 1];

    CHECK(is_lq_subharmonic(f, *g, 0, big_l, 0, q).holds);
    CHECK(f[0] == doctest::Approx(std::pow(q, big_l + 1)).epsilon(1e-12));
    CHECK(f[0] ==
          doctest::Approx(radial_bound(big_l, 0, q) * f[static_cast<size_t>(big_l) + 1]).epsilon(1e-12));
    CHECK(regular_set(f, *g, 0, big_l, 0, q).size() == static_cast<size_t>(big_l) + 1);
    // The contraction fails at the exterior point R.
    CHECK(f[static_cast<size_t>(big_l) + 1] > q * f[static_cast<size_t>(big_l)]);
}

TEST_CASE("subharmonicity checker") {
    const auto g = build_interval_graph(12);

    VertexFunction zero(12, 0.0);
    CHECK(is_lq_subharmonic(zero, *g, 4, 3, 1, 0.9).holds);
    CHECK(is_lq_subharmonic(zero, *g, 4, 3, 1, 0.1).holds);

    VertexFunction ones(12, 1.0);
    const SubharmonicCheck bad = is_lq_subharmonic(ones, *g, 4, 3, 1, 0.5);
    CHECK_FALSE(bad.holds);
    CHECK(!bad.witnesses.empty());

    CHECK_THROWS_AS(is_lq_subharmonic(zero, *g, 4, 12, 0, 0.5), InvalidDomain); // not proper
    CHECK_THROWS_AS(is_lq_subharmonic(zero, *g, 4, 3, 0, 1.5), ConfigError);

    VertexFunction negative(12, -1.0);
    CHECK_THROWS_AS(is_lq_subharmonic(negative, *g, 4, 3, 0, 0.5), InvalidDomain);
}

TEST_CASE("radial bound values") {
    CHECK(radial_bound(5, 1, 0.5) == doctest::Approx(0.125)); // floor(6/2) = 3
    CHECK(radial_bound(7, 7, 0.3) == doctest::Approx(0.3));   // l = L: single step
    CHECK_THROWS_AS(radial_bound(3, 5, 0.5), ConfigError);
}

TEST_CASE("two ball bound values") {
    CHECK(two_ball_bound(3, 3, 1, 0.5) == doctest::Approx(0.0625)); // 2 + 2 steps
    CHECK(two_ball_bound(2, 2, 2, 0.7) == doctest::Approx(0.49));   // r = l: q^2
    // Extra nonnegative exponent: never above the one-ball bound.
    for (int r2 = 1; r2 < 9; ++r2)
        CHECK(two_ball_bound(6, r2, 1, 0.6) <= radial_bound(6, 1, 0.6) + 1e-15);
}

TEST_CASE("annuli bound values") {
    CHECK(annuli_bound(20, 1, 0.5, AnnuliCover{}) == doctest::Approx(radial_bound(20, 1, 0.5)));

    // One annulus of width 1 at l = 1 blocks C = 1: q^{floor(21/2) - 2}.
    AnnuliCover narrow;
    narrow.annuli.push_back({3, 4});
    CHECK(narrow.blocked_count(1) == 1);
    CHECK(annuli_bound(20, 1, 0.5, narrow) == doctest::Approx(std::pow(0.5, 8)));

    // Width 2 at l = 1 needs c = 2: two more lost steps.
    AnnuliCover wide;
    wide.annuli.push_back({3, 5});
    CHECK(wide.blocked_count(1) == 2);
    CHECK(annuli_bound(20, 1, 0.5, wide) == doctest::Approx(std::pow(0.5, 6)));

    // Hypothesis 2C(l+1) < L violated.
    AnnuliCover fat;
    fat.annuli.push_back({1, 13});
    CHECK_THROWS_AS(annuli_bound(20, 1, 0.5, fat), HypothesisFailure);
}

TEST_CASE("regular sets") {
    const auto g = build_interval_graph(14);
    const int big_l = 9;
    const double q = 0.5;

    VertexFunction zero(14, 0.0);
    CHECK(regular_set(zero, *g, 0, big_l, 0, q).size() == static_cast<size_t>(big_l) + 1);

    // Planted spike: the spike vertex is the only irregular point.
    VertexFunction f(static_cast<size_t>(g->size()), 1.0);
    for (Vertex x = g->size() - 2; x >= 0; --x)
        f[static_cast<size_t>(x)] = q * f[static_cast<size_t>(x) + 1];
    const Vertex spike = 4;
    f[static_cast<size_t>(spike)] = 50.0;
    const VertexSet reg = regular_set(f, *g, 0, big_l, 0, q);
    CHECK_FALSE(std::binary_search(reg.begin(), reg.end(), spike));
    CHECK(reg.size() == static_cast<size_t>(big_l));

    const SubharmonicCertificate cert =
        certify_with_annuli(f, *g, 0, big_l, 0, q, AnnuliCover{{{3, 4}}});
    CHECK(cert.annuli_cover_irregulars); // spike at radius 4 sits in (3,4]
    const SubharmonicCertificate misses =
        certify_with_annuli(f, *g, 0, big_l, 0, q, AnnuliCover{{{6, 7}}});
    CHECK_FALSE(misses.annuli_cover_irregulars);
}

TEST_CASE("certified generator feeds the descent bounds") {
    Rng rng(0xfeedbee5);
    for (int i = 0; i < 60; ++i) {
        const int big_l = 4 + static_cast<int>(rng.next_below(10));
        const int l = static_cast<int>(rng.next_below(3));
        const double q = 0.25 + 0.6 * rng.next_uniform();
        const auto g = build_interval_graph(2 * (big_l + l + 2) + 1);
        const Vertex center = big_l + l + 2;
        const VertexFunction f = random_subharmonic_function(*g, center, big_l, l, q, rng.next_u64());
        CHECK(is_lq_subharmonic(f, *g, center, big_l, l, q).holds);
        double global = 0.0;
        for (double v : f) global = std::max(global, v);
        CHECK(f[static_cast<size_t>(center)] <= radial_bound(big_l, l, q) * global * (1.0 + 1e-12));
        const RadialDescentCheck rd = check_radial_descent(f, *g, center, big_l, l, q);
        CHECK(rd.within_ball_cap);
        CHECK(rd.within_global_cap);
        CHECK(rd.cap_ball <= rd.cap_global + 1e-300); // the ball variant is tighter
    }
}

TEST_CASE("green subharmonicity verification") {
    const ScaleParams weak = params_section2(0.05);

    // Deterministic: zero potential, energy above the band, small ball. Every
    // l-ball is nonsingular there and the implication must confirm.
    {
        const auto g = build_interval_graph(27);
        const Potential zero = sample_potential({EnsembleKind::uniform01, 0.0}, *g, 0);
        const Hamiltonian h = assemble_hamiltonian(full_view(g), zero, BoundaryKind::dirichlet);
        const GreenSubharmonicityReport r =
            verify_green_subharmonicity(h, 13, 8, 25, 6.0, weak, 4, 3.0);
        CHECK(r.premise_failures == 0);
        CHECK(r.result == GreenSubharmonicity::confirmed);
        CHECK(r.q == doctest::Approx(std::exp(-gamma_decay(0.05, 4, weak.tau) * 4)));
    }

    // Weak disorder mid-band: some l-ball is singular, so the implication is
    // vacuous and never charged as refuted.
    {
        const auto g = build_interval_graph(27);
        const Potential pot = sample_potential({EnsembleKind::uniform01, 1.0}, *g, 3);
        const Hamiltonian h = assemble_hamiltonian(full_view(g), pot, BoundaryKind::dirichlet);
        const GreenSubharmonicityReport r =
            verify_green_subharmonicity(h, 13, 8, 25, 2.0, params_section2(1.0), 4, 3.0);
        CHECK(r.result == GreenSubharmonicity::not_applicable);
        CHECK(r.premise_failures > 0);
    }

    // Randomized strong-disorder seeds: every premise-passing sample confirms.
    {
        const ScaleParams p = params_section2(0.15);
        int premise_passed = 0;
        for (int i = 0; i < 60; ++i) {
            const auto g = build_interval_graph(31);
            const Potential pot =
                sample_potential({EnsembleKind::uniform01, 13.0}, *g, derive_seed(909, i));
            const Hamiltonian h = assemble_hamiltonian(full_view(g), pot, BoundaryKind::dirichlet);
            const GreenSubharmonicityReport r =
                verify_green_subharmonicity(h, 15, 12, 29, 8.5, p, 8, 3.0);
            if (r.result == GreenSubharmonicity::not_applicable) continue;
            ++premise_passed;
            CHECK(r.result == GreenSubharmonicity::confirmed);
        }
        CHECK(premise_passed > 0);
    }
}
