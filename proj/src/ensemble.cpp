#include "loclab/ensemble.hpp"

#include <cmath>

#include "loclab/errors.hpp"
#include "loclab/rng.hpp"

namespace loclab {

std::string to_string(EnsembleKind k) {
    return k == EnsembleKind::uniform01 ? "uniform01" : "gaussian01";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
    if (s == "uniform01") return EnsembleKind::uniform01;
    if (s == "gaussian01") return EnsembleKind::gaussian01;
    throw ConfigError("unknown ensemble kind '" + s + "'");
}

double Ensemble::lipschitz_raw() const {
    return kind == EnsembleKind::uniform01 ? 1.0 : 0.3989422804014326779399;
}

double Ensemble::wegner_constant() const {
    if (coupling == 0.0) throw InvalidDomain("Wegner constant undefined at zero coupling");
    return lipschitz_raw() / std::abs(coupling);
}

Potential sample_potential(const Ensemble& e, const FiniteGraph& g, std::uint64_t seed) {
    Potential p;
    p.seed = seed;
    p.ensemble = e;
    p.values.resize(static_cast<size_t>(g.size()));
    Rng rng(seed);
    for (auto& v : p.values) {
        const double raw =
            e.kind == EnsembleKind::uniform01 ? rng.next_uniform() : rng.next_gaussian();
        v = e.coupling * raw;
    }
    return p;
}

} // namespace loclab
