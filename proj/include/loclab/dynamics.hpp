// dynamics.hpp - eigenfunction correlators, time-evolution amplitudes, the
// correlator bound audit, and decay-rate fitting.
#pragma once

#include <optional>
#include <vector>

#include "loclab/classify.hpp"
#include "loclab/montecarlo.hpp"
#include "loclab/operator.hpp"
#include "loclab/stats.hpp"

namespace loclab {

struct Correlator {
    Vertex x = 0;
    Vertex y = 0;
    Interval interval;
    double value = 0.0; // sum over lambda_i in I of |psi_i(x) psi_i(y)|
};

// Exact supremum of |<1_x| phi(H) |1_y>| over Borel phi supported in I with
// |phi|_inf <= 1.
Correlator ef_correlator(const SpectralData& s, Vertex x, Vertex y, Interval I);

// |sum_i e^{-i t lambda_i} psi_i(x) psi_i(y)|
double evolution_amplitude(const SpectralData& s, Vertex x, Vertex y, double t);

enum class CorrelatorAuditResult { bound_holds, not_applicable, violation };

struct CorrelatorAuditReport {
    CorrelatorAuditResult result = CorrelatorAuditResult::bound_holds;
    double correlator = 0.0;
    double bound = 0.0; // 4 e^{-mL}
    int eigenvalues_in_interval = 0;
    std::optional<double> premise_failure_energy; // first lambda_i with both balls singular
};

// Per-eigenvalue premise: for every lambda_i in I at least one of B_L(x),
// B_L(y) is (lambda_i, m)-nonsingular; then the correlator must stay below
// 4 e^{-mL}. Requires d(x,y) > 2L+1.
CorrelatorAuditReport correlator_bound_audit(const Hamiltonian& big_h, Vertex x, Vertex y, int l, Interval I,
                             const ScaleParams& p, double c_d);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int dropped_nonpositive = 0;
};

// Least squares on (distance, ln value); nonpositive values are dropped and
// counted; fewer than 3 surviving distinct distances -> InsufficientData.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& points);

} // namespace loclab
