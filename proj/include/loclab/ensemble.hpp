// ensemble.hpp - IID random potential ensembles and sampled potentials.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loclab/graph.hpp"

namespace loclab {

enum class EnsembleKind { uniform01, gaussian01 };

std::string to_string(EnsembleKind k);
EnsembleKind ensemble_kind_from_string(const std::string& s);

struct Ensemble {
    EnsembleKind kind = EnsembleKind::uniform01;
    double coupling = 1.0;

    // Lipschitz constant of the marginal distribution of the raw (uncoupled)
    // draw: 1 for uniform01, the declared surrogate 1/sqrt(2*pi) for
    // gaussian01 (its density supremum).
    double lipschitz_raw() const;

    // Wegner constant for H = -Delta + g*V: the distribution of g*V is
    // Lipschitz with constant lipschitz_raw()/|g|. Undefined for g = 0.
    double wegner_constant() const;
};

struct Potential {
    std::vector<double> values; // indexed by ambient vertex id
    std::uint64_t seed = 0;
    Ensemble ensemble;

    double at(Vertex v) const { return values[static_cast<size_t>(v)]; }
};

// One IID draw per vertex in index order, scaled by the coupling.
// Deterministic in (ensemble, graph size, seed).
Potential sample_potential(const Ensemble& e, const FiniteGraph& g, std::uint64_t seed);

} // namespace loclab
