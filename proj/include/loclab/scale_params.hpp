// scale_params.hpp - the exponent bundle driving ball classification and the
// scale induction, plus the scale sequence L_{k+1} = floor(L_k^alpha).
#pragma once

#include <string>
#include <vector>

namespace loclab {

enum class ParamPreset { section2, section8, custom };

std::string to_string(ParamPreset p);
ParamPreset preset_from_string(const std::string& s);

struct ScaleParams {
    double alpha = 1.5;
    double beta = 0.5;
    double tau = 0.125;
    double rho = 1.0 / 6.0;
    double sigma = 1.0 / 3.0;
    double delta = 0.25;
    double kappa = 6.0;
    double theta = 0.1;
    double m = 1.0;
    int l0 = 8;
    ParamPreset preset = ParamPreset::custom;

    // Distance cutoff exponent of the nonsingularity test.
    double singular_exponent() const { return (1.0 + rho) / alpha; }

    void validate() const; // throws ConfigError on out-of-range preset values
};

// alpha = 3/2, beta = 1/2, tau = 1/8, rho = (alpha-1)/2 = 1/6.
ScaleParams params_section2(double m = 1.0, int l0 = 8);

// alpha = 4/3, beta = 1/3, delta = 1/4, sigma = 1/3, rho = 1/3, and
// tau = (rho - sigma*(alpha-1))/2 = 1/9 so that the consistency identity
// holds exactly.
ScaleParams params_section8(double m = 1.0, int l0 = 8);

// gamma(m, L) = m * (1 + L^{-tau}); decreasing in L, increasing in m.
double gamma_decay(double m, int l, double tau);

struct ScaleSequence {
    std::vector<long long> lengths; // L_0 < L_1 < ... < L_K

    long long at(int k) const { return lengths[static_cast<size_t>(k)]; }
};

// L_{k+1} = floor(L_k^alpha); throws DegenerateScale on a floor collision.
ScaleSequence scale_sequence(const ScaleParams& p, int count);

long long next_scale(long long l, double alpha);

} // namespace loclab
