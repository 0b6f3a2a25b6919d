#include "loclab/scale_params.hpp"

#include <cmath>

#include "loclab/errors.hpp"

namespace loclab {

std::string to_string(ParamPreset p) {
    switch (p) {
        case ParamPreset::section2: return "section2";
        case ParamPreset::section8: return "section8";
        default: return "custom";
    }
}

ParamPreset preset_from_string(const std::string& s) {
    if (s == "section2") return ParamPreset::section2;
    if (s == "section8") return ParamPreset::section8;
    if (s == "custom") return ParamPreset::custom;
    throw ConfigError("unknown preset '" + s + "'");
}

void ScaleParams::validate() const {
    if (m <= 0.0) throw ConfigError("decay rate m must be positive");
    if (l0 < 2) throw ConfigError("initial scale L0 must be >= 2");
    if (preset == ParamPreset::custom) return; // presets carry the range guarantees
    if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError("alpha outside (1,2)");
    for (double v : {beta, tau, rho, sigma, delta})
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("exponent outside (0,1)");
    if (preset == ParamPreset::section8) {
        const double want_tau = 0.5 * (rho - sigma * (alpha - 1.0));
        if (std::abs(tau - want_tau) > 1e-12)
            throw ConfigError("section8 requires tau = (rho - sigma*(alpha-1))/2");
        if (!(delta < beta && delta < sigma)) throw ConfigError("section8 requires delta < min{beta, sigma}");
    }
}

ScaleParams params_section2(double m, int l0) {
    ScaleParams p;
    p.alpha = 1.5;
    p.beta = 0.5;
    p.tau = 0.125;
    p.rho = 1.0 / 6.0;
    p.sigma = 1.0 / 3.0;
    p.delta = 0.25;
    p.kappa = 6.0;
    p.theta = 0.1;
    p.m = m;
    p.l0 = l0;
    p.preset = ParamPreset::section2;
    p.validate();
    return p;
}

ScaleParams params_section8(double m, int l0) {
    ScaleParams p;
    p.alpha = 4.0 / 3.0;
    p.beta = 1.0 / 3.0;
    p.delta = 0.25;
    p.sigma = 1.0 / 3.0;
    p.rho = 1.0 / 3.0;
    p.tau = 0.5 * (p.rho - p.sigma * (p.alpha - 1.0)); // = 1/9
    p.kappa = 6.0;
    p.theta = 0.1;
    p.m = m;
    p.l0 = l0;
    p.preset = ParamPreset::section8;
    p.validate();
    return p;
}

double gamma_decay(double m, int l, double tau) {
    if (m <= 0.0) throw ConfigError("gamma needs m > 0");
    if (l < 1) throw ConfigError("gamma needs L >= 1");
    return m * (1.0 + std::pow(static_cast<double>(l), -tau));
}

long long next_scale(long long l, double alpha) {
    const long double grown = std::pow(static_cast<long double>(l), static_cast<long double>(alpha));
    // Guard against representations like 63.999999999999999 of an exact power.
    const long double nudged = grown * (1.0L + 8.0L * 1e-19L);
    return static_cast<long long>(std::floor(nudged));
}

ScaleSequence scale_sequence(const ScaleParams& p, int count) {
    if (p.l0 < 2) throw ConfigError("scale sequence needs L0 >= 2");
    if (count < 0) throw ConfigError("negative sequence length");
    ScaleSequence seq;
    seq.lengths.push_back(p.l0);
    for (int k = 0; k < count; ++k) {
        const long long next = next_scale(seq.lengths.back(), p.alpha);
        if (next <= seq.lengths.back())
            throw DegenerateScale("floor collision at L = " + std::to_string(seq.lengths.back()));
        if (next > 100'000'000) throw InvalidSize("scale exceeds desk budget");
        seq.lengths.push_back(next);
    }
    return seq;
}

} // namespace loclab
