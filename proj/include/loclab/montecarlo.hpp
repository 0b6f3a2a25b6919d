// montecarlo.hpp - probabilistic estimators and per-sample deterministic
// audits: P_k/Q_k estimation, singular-width coverage, two-volume bounds,
// induction audits, disjoint-count tails, potential decompositions, and the
// Gaussian continuity-modulus probe.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loclab/classify.hpp"
#include "loclab/ensemble.hpp"
#include "loclab/operator.hpp"
#include "loclab/scale_params.hpp"
#include "loclab/schedule.hpp"
#include "loclab/stats.hpp"

namespace loclab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

// Runs trial bodies on a small pool; results must be written into
// index-addressed slots so aggregation order stays deterministic.
void parallel_trials(long long trials, int threads, const std::function<void(long long)>& body);

// Disorder realization on a centered homogeneous lattice: ambient interval or
// box sized so every ball vertex has the full lattice degree.
struct BallInstance {
    GraphPtr ambient;
    Vertex center = 0;
    SubgraphView ball;
    Potential potential;
    SpectralData spectral;
    double c_d = 1.0;
};

BallInstance make_ball_instance(int dim, int l, const Ensemble& e, std::uint64_t seed,
                                BoundaryKind kind = BoundaryKind::dirichlet);

// max over y in the inner boundary of |G(x,y;E)|; +infinity inside the
// near-spectrum tolerance band.
double boundary_green_max(const SpectralData& s, const SubgraphView& ball, Vertex x, double E);

struct EstimateReport {
    std::string quantity;
    double point_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    long long trials = 0;
    std::uint64_t seed_base = 0;
    int scale = 0;
    std::string energy_spec;
    double raw_frequency = 0.0; // pre-convention frequency (Q_k carries x2)
    std::string convention;
    std::vector<int> per_trial; // 0/1 outcomes in trial order
    double comparison_bound = 0.0;
    std::string comparison_label;
};

// Frequency of singular balls at a representative deep-interior center; the
// sweep option classifies every contained center and takes the worst.
EstimateReport estimate_pk(int dim, int l, double E, const ScaleParams& p, const Ensemble& e,
                           long long trials, std::uint64_t seed_base, int threads = 1,
                           bool sweep_centers = false);

// Resonance frequency, doubled per the Q_k = 2 sup P{E-R} convention; the raw
// frequency is kept alongside.
EstimateReport estimate_qk(int dim, int l, double E, const ScaleParams& p, const Ensemble& e,
                           long long trials, std::uint64_t seed_base, int threads = 1);

struct WegnerProbe {
    double epsilon = 0.0;
    long long hits = 0;
    double frequency = 0.0;
    double bound = 0.0; // C_W |Lambda| eps
    double ci99_low = 0.0;
    double ci99_high = 1.0;
    bool within_margin = true; // ci99_low <= bound
};

std::vector<WegnerProbe> wegner_estimate(int dim, int n_vertices, double E, const Ensemble& e,
                                         const std::vector<double>& eps_values, long long trials,
                                         std::uint64_t seed_base, int threads = 1);

// Half-open uniform grid over I: lo, lo+h, ..., strictly below hi.
std::vector<double> energy_grid(Interval I, double h);

struct SingularSet {
    Interval interval;
    double grid_step = 0.0;
    double threshold = 0.0;
    std::vector<double> grid;
    std::vector<int> hot; // indices into grid
    double measure_estimate = 0.0;   // h * |hot|
    double normalized_measure = 0.0; // measure / |I|
};

SingularSet singular_set_scan(const SpectralData& s, const SubgraphView& ball, Vertex x,
                              double threshold, Interval I, double grid_step);

enum class CoverageResult { covered, violation, precondition_failed };

struct CoverageOutcome {
    CoverageResult result = CoverageResult::covered;
    double measured_mes = 0.0;
    int hot_2a_count = 0;
    std::optional<double> violating_energy; // first grid E with M >= 2a and gap > c
    std::optional<double> gap_at_violation;
};

// Threshold-coverage audit: when the measured singular width at level a stays
// below b, every grid energy with M_x >= 2a must sit within c of the spectrum.
CoverageOutcome coverage_check(const SpectralData& s, const SubgraphView& ball, Vertex x,
                               const ScheduleParams& sched, Interval I, double grid_step);

struct TwoVolumeReport {
    EstimateReport estimate;
    double closed_form_bound = 0.0; // 4 C_W C_d^2 L^{2d} c + 2 P_L / b
    double p_l_upper = 0.0;   // CI upper bound fed into the comparison
    std::vector<double> probe_energies;
    int separation = 0;
};

// Frequency of { exists grid E in I : min(M_x, M_y) > a } over two disjoint
// balls carved from one realization.
TwoVolumeReport two_volume_estimate(int dim, int l, const ScheduleParams& sched, Interval I,
                                    const Ensemble& e, long long trials, std::uint64_t seed_base,
                                    double grid_step, int threads = 1);

enum class AuditMode { section5, section8 };

std::string to_string(AuditMode m);

struct AuditTrial {
    std::uint64_t seed = 0;
    bool big_resonant = false;
    bool big_tunneling = false;
    bool big_singular = false;
    bool big_cnr = false; // section8 only
    int disjoint_count = 0;
    bool count_exact = true;
    bool premise = false;   // section5: NR and NT; section8: CNR and NT
    bool violation = false; // premise held yet the big ball came out singular
    bool sub_singular = false; // center L_k ball, feeds P_k-hat
    std::vector<PairWitness> witnesses; // offending pairs when violating
    VertexSet singular_centers;
};

struct InductionAudit {
    AuditMode mode = AuditMode::section5;
    int l_k = 0;
    int l_next = 0;
    double energy = 0.0;
    double c_d = 1.0;
    std::vector<AuditTrial> trials;
    long long premise_count = 0;
    long long violation_count = 0;
    double p_k_hat = 0.0;
    double p_next_hat = 0.0;
    double q_next_raw = 0.0;
    double q_next_hat = 0.0;   // doubled, flagged convention
    double recursion_rhs = 0.0; // 0.5 C_d^2 L_{k+1}^{2d} Pk^2 + 0.5 Q_{k+1}
};

InductionAudit induction_audit(int dim, const ScaleParams& p, const Ensemble& e, double E,
                               long long trials, std::uint64_t seed_base, AuditMode mode,
                               int threads = 1);

struct DisjointTailReport {
    EstimateReport estimate;
    double threshold = 0.0;   // L_j^{sigma(alpha-1)}
    double lemma_bound = 0.0; // 0.5 e^{-L_{j+1}^delta}
    std::vector<int> counts;  // per-trial maximal disjoint singular families
};

DisjointTailReport disjoint_count_tail(int dim, const ScaleParams& p, const Ensemble& e, double E,
                                       long long trials, std::uint64_t seed_base, int threads = 1);

struct PotentialDecomposition {
    double xi = 0.0;                 // sample average over the ball
    std::vector<double> eta;         // fluctuations, aligned with ball_members
    VertexSet ball_members;
};

PotentialDecomposition xi_eta_decompose(const Potential& v, const VertexSet& ball);

// |G_{H + t Id}(x, y; E + t) - G_H(x, y; E)|; vanishes identically.
double shift_covariance_check(const Hamiltonian& h, double t, Vertex x, Vertex y, double E);

struct ModulusProbe {
    double s = 0.0;
    double bound = 0.0;      // |B|^{1/2} s / (sqrt(2 pi) |g|)
    double empirical = 0.0;  // max window frequency of the xi samples
    double margin = 0.0;     // 3 binomial sigma at the bound
    bool within_margin = true;
};

struct ModulusReport {
    std::vector<ModulusProbe> probes;
    long long trials = 0;
    std::uint64_t seed_base = 0;
    long long ball_size = 0;
    double max_exceedance = 0.0; // max over probes of empirical - bound
};

// Gaussian-only: sample-average continuity modulus against the closed-form
// unconditional bound. Throws Unsupported for other ensembles.
ModulusReport continuity_modulus_probe(const Ensemble& e, int dim, int l,
                                       const std::vector<double>& s_values, long long trials,
                                       std::uint64_t seed_base);

} // namespace loclab
