// subharmonic.hpp - (l,q)-subharmonicity checkers and the radial-descent
// bound calculators, usable as property probes and as Green-function
// diagnostics.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "loclab/classify.hpp"
#include "loclab/graph.hpp"
#include "loclab/operator.hpp"
#include "loclab/scale_params.hpp"

namespace loclab {

using VertexFunction = std::vector<double>; // indexed by vertex id, >= 0

struct SubharmonicCheck {
    bool holds = true;
    std::vector<PairWitness> witnesses; // x stored, y = argmax neighbor
};

// f(x) <= q * max over B_{l+1}(x) of f, for every x whose l-ball stays inside
// B_L(center). The ball must be a proper subset of g.
SubharmonicCheck is_lq_subharmonic(const VertexFunction& f, const FiniteGraph& g, Vertex center,
                                   int big_l, int l, double q);

// q^{floor((L+1)/(l+1))}: multiplicative radial-descent bound.
double radial_bound(int big_l, int l, double q);

// Radial descent applied to a concrete function: both the global-maximum cap
// and the tighter B_{L+1} variant are reported.
struct RadialDescentCheck {
    double center_value = 0.0;
    double bound = 0.0;          // q^{floor((L+1)/(l+1))}
    double cap_ball = 0.0;       // bound * max over B_{L+1}(center)
    double cap_global = 0.0;     // bound * max over the host graph
    bool within_ball_cap = true;
    bool within_global_cap = true;
};

RadialDescentCheck check_radial_descent(const VertexFunction& f, const FiniteGraph& g,
                                        Vertex center, int big_l, int l, double q);

// q^{floor((r1+1)/(l+1)) + floor((r2+1)/(l+1))}: two-ball bound for functions
// separately subharmonic in disjoint balls.
double two_ball_bound(int r1, int r2, int l, double q);

struct Annulus {
    int a = 0; // inner radius
    int b = 0; // outer radius, width b - a
};

struct AnnuliCover {
    std::vector<Annulus> annuli;

    int total_width() const;
    // C = sum of the minimal c_i with width_i <= c_i * l (empty annuli skipped).
    int blocked_count(int l) const;
};

// q^{floor((L+1)/(l+1)) - 2C}; requires 2C(l+1) < L, else HypothesisFailure.
double annuli_bound(int big_l, int l, double q, const AnnuliCover& cover);

// {x in B_L(center) : f(x) <= q * max over B_{l+1}(x) of f}.
VertexSet regular_set(const VertexFunction& f, const FiniteGraph& g, Vertex center, int big_l,
                      int l, double q);

// Certificate for a function subharmonic outside an annular exclusion zone.
struct SubharmonicCertificate {
    Vertex center = 0;
    int big_l = 0;
    int l = 0;
    double q = 0.5;
    VertexSet regular;
    AnnuliCover cover;
    bool annuli_cover_irregulars = true; // every irregular point inside some annulus
};

SubharmonicCertificate certify_with_annuli(const VertexFunction& f, const FiniteGraph& g,
                                           Vertex center, int big_l, int l, double q,
                                           const AnnuliCover& cover);

enum class GreenSubharmonicity { confirmed, refuted, not_applicable };

struct GreenSubharmonicityReport {
    GreenSubharmonicity result = GreenSubharmonicity::not_applicable;
    double q = 0.0;
    int premise_failures = 0; // number of singular l-balls found
    std::vector<PairWitness> witnesses;
};

// If every l-ball inside B_L(center) is (E,m)-nonsingular, the map
// x -> |G_g(x,y;E)| must be (l, e^{-gamma(m,l) l})-subharmonic in the ball;
// checked numerically for a fixed y outside the ball.
GreenSubharmonicityReport verify_green_subharmonicity(const Hamiltonian& ambient_h, Vertex center,
                                                      int big_l, Vertex y, double E,
                                                      const ScaleParams& p, int l, double c_d);

// Randomized generator of certified (l,q)-subharmonic functions: exponential
// radial profile times a random monotone damping and pointwise jitter,
// re-verified before use. Returns an accepted function (retries internally).
VertexFunction random_subharmonic_function(const FiniteGraph& g, Vertex center, int big_l, int l,
                                           double q, std::uint64_t seed);

} // namespace loclab
