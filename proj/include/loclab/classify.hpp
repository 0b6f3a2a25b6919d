// classify.hpp - ball classification predicates: resonance, singularity,
// tunneling, complete non-resonance, and eigenfunction localization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loclab/operator.hpp"
#include "loclab/scale_params.hpp"

namespace loclab {

struct PairWitness {
    Vertex x = -1;
    Vertex y = -1;
    int distance = 0;
    double observed = 0.0; // left-hand side of the violated inequality
    double required = 0.0; // right-hand side it had to stay below
};

struct ResonanceVerdict {
    bool resonant = false;
    double gap = 0.0;
    double threshold = 0.0; // e^{-L^beta}
};

// E-resonant iff dist(spectrum, E) < e^{-L^beta}; ties resolve to NR.
ResonanceVerdict classify_resonant(const SpectralData& s, double E, const ScaleParams& p, int l);

struct SingularVerdict {
    bool singular = false;
    bool near_spectrum = false; // E inside the tolerance band; forced singular
    int min_distance = 0;       // ceil(L^{(1+rho)/alpha})
    std::vector<PairWitness> witnesses;
};

// Nonsingular iff C_d^2 L^d |G(x,y;E)| <= e^{-gamma(m,L) d(x,y)} for every
// pair at ambient distance >= ceil(L^{(1+rho)/alpha}); ties resolve to NS.
SingularVerdict classify_singular(const SpectralData& s, const SubgraphView& ball, double E,
                                  const ScaleParams& p, int l, double c_d);

struct TunnelingVerdict {
    bool tunneling = false;
    int disjoint_count = 0;
    bool count_exact = true;
    double threshold = 2.0; // pairwise mode: 2; counted mode: L_k^{sigma(alpha-1)}
    VertexSet singular_centers;          // all singular sub-ball centers probed
    VertexSet disjoint_witness;          // a maximal disjoint family
};

enum class TunnelingMode { pairwise, counted };

struct MaxDisjointResult {
    int count = 0;
    bool exact = true;
    VertexSet chosen;
};

// Maximum number of pairwise-disjoint balls B_r(c) over the given centers;
// exhaustive for <= 20 centers, greedy lower bound (exact=false) beyond.
MaxDisjointResult max_disjoint_balls(const VertexSet& centers, int radius, const FiniteGraph& g);

// Scans every center whose L_k-ball is contained in the big ball, classifies
// each sub-ball, and counts the disjoint singular ones.
TunnelingVerdict classify_tunneling(const SubgraphView& big_ball, Vertex center, int l_next,
                                    const Potential& v, double E, const ScaleParams& p, int l_k,
                                    TunnelingMode mode, double c_d);

struct CnrVerdict {
    bool cnr = false;
    int probed_balls = 0;
    std::vector<std::pair<Vertex, int>> probe_set; // (center, radius) actually tested
    std::optional<Vertex> resonant_center;         // witness when not CNR
    std::optional<int> resonant_radius;
};

// E-completely-non-resonant: the big ball is NR, every concentric ball of
// integer radius in [l_k, l_next) is NR, and every radius-l_k ball contained
// in the big ball is NR (declared probe lattice).
CnrVerdict classify_cnr(const SubgraphView& big_ball, Vertex center, int l_next,
                        const Potential& v, double E, const ScaleParams& p, int l_k);

struct LocalizationVerdict {
    bool localized = true;
    int min_distance = 0; // ceil(L^{7/8})
    std::vector<PairWitness> witnesses;
};

// m-localized iff sum_i |psi_i(x) psi_i(y)| <= e^{-gamma(m,L) d(x,y)} for all
// pairs at distance >= ceil(L^{7/8}).
LocalizationVerdict classify_m_localized(const SpectralData& s, const SubgraphView& ball,
                                         const ScaleParams& p, int l);

} // namespace loclab
