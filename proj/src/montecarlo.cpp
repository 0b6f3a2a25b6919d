#include "loclab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "loclab/errors.hpp"
#include "loclab/rng.hpp"

namespace loclab {

void parallel_trials(long long trials, int threads, const std::function<void(long long)>& body) {
    if (threads <= 1 || trials <= 1) {
        for (long long t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    const int n_threads = std::min<long long>(threads, trials);
    pool.reserve(static_cast<size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const long long t = next.fetch_add(1);
                if (t >= trials || failed.load()) return;
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

// Ambient lattice one step wider than the ball keeps the ball proper and all
// of its vertices at the full lattice degree.
GraphPtr centered_lattice(int dim, int l, Vertex& center) {
    const int half = l + 1;
    const int side = 2 * half + 1;
    if (dim == 1) {
        center = half;
        return build_interval_graph(side);
    }
    if (dim == 2) {
        auto g = build_box_graph(2, side);
        center = box_vertex(2, side, {half, half});
        return g;
    }
    throw ConfigError("lattice dimension must be 1 or 2");
}

double lattice_growth_constant(int dim) {
    // |B_L| = 2L+1 on the line, 2L^2+2L+1 on the plane; both maxima at L=1.
    return dim == 1 ? 3.0 : 5.0;
}

EstimateReport finish_binomial_report(std::string quantity, const std::vector<int>& outcomes,
                                      std::uint64_t seed_base, int scale, std::string energy_spec) {
    EstimateReport r;
    r.quantity = std::move(quantity);
    r.trials = static_cast<long long>(outcomes.size());
    r.seed_base = seed_base;
    r.scale = scale;
    r.energy_spec = std::move(energy_spec);
    r.per_trial = outcomes;
    long long hits = 0;
    for (int o : outcomes) hits += o;
    r.raw_frequency = static_cast<double>(hits) / static_cast<double>(r.trials);
    r.point_estimate = r.raw_frequency;
    const auto [lo, hi] = clopper_pearson(hits, r.trials);
    r.ci_low = lo;
    r.ci_high = hi;
    return r;
}

} // namespace

BallInstance make_ball_instance(int dim, int l, const Ensemble& e, std::uint64_t seed,
                                BoundaryKind kind) {
    Vertex center = 0;
    GraphPtr ambient = centered_lattice(dim, l, center);
    SubgraphView ball = ball_view(ambient, center, l);
    Potential pot = sample_potential(e, *ambient, seed);
    SpectralData spec = eigendecompose(assemble_hamiltonian(ball, pot, kind));
    return BallInstance{ambient, center, std::move(ball), std::move(pot), std::move(spec),
                        lattice_growth_constant(dim)};
}

double boundary_green_max(const SpectralData& s, const SubgraphView& ball, Vertex x, double E) {
    const EdgeBoundary b = boundary(ball);
    double best = 0.0;
    for (Vertex y : b.inner) {
        double value;
        try {
            value = std::abs(green(s, x, y, E));
        } catch (const NearSpectrum&) {
            return std::numeric_limits<double>::infinity();
        }
        best = std::max(best, value);
    }
    return best;
}

EstimateReport estimate_pk(int dim, int l, double E, const ScaleParams& p, const Ensemble& e,
                           long long trials, std::uint64_t seed_base, int threads,
                           bool sweep_centers) {
    if (trials < 1) throw ConfigError("estimator needs trials >= 1");
    std::vector<int> outcomes(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const BallInstance inst = make_ball_instance(dim, l, e, seed);
        bool singular = classify_singular(inst.spectral, inst.ball, E, p, l, inst.c_d).singular;
        if (sweep_centers && !singular) {
            for (Vertex c : inst.ball.members()) {
                bool contained = true;
                for (Vertex z : inst.ambient->ball(c, l))
                    if (!inst.ball.contains(z)) { contained = false; break; }
                if (!contained || c == inst.center) continue;
                const SubgraphView sub = ball_view(inst.ambient, c, l);
                const SpectralData s =
                    eigendecompose(assemble_hamiltonian(sub, inst.potential, BoundaryKind::dirichlet));
                if (classify_singular(s, sub, E, p, l, inst.c_d).singular) { singular = true; break; }
            }
        }
        outcomes[static_cast<size_t>(t)] = singular ? 1 : 0;
    });
    return finish_binomial_report("Pk", outcomes, seed_base, l, "E=" + std::to_string(E));
}

EstimateReport estimate_qk(int dim, int l, double E, const ScaleParams& p, const Ensemble& e,
                           long long trials, std::uint64_t seed_base, int threads) {
    if (trials < 1) throw ConfigError("estimator needs trials >= 1");
    std::vector<int> outcomes(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const BallInstance inst = make_ball_instance(dim, l, e, seed);
        outcomes[static_cast<size_t>(t)] =
            classify_resonant(inst.spectral, E, p, l).resonant ? 1 : 0;
    });
    EstimateReport r = finish_binomial_report("Qk", outcomes, seed_base, l, "E=" + std::to_string(E));
    r.convention = "Qk = 2 * resonance frequency";
    r.point_estimate = 2.0 * r.raw_frequency;
    r.ci_low = 2.0 * r.ci_low;
    r.ci_high = 2.0 * r.ci_high; // bound estimate, may exceed 1 by convention

    // Closed-form Wegner comparison: 2 C_W C_d L^d e^{-L^beta}.
    r.comparison_bound = 2.0 * e.wegner_constant() * lattice_growth_constant(dim) *
                         std::pow(static_cast<double>(l), dim) *
                         std::exp(-std::pow(static_cast<double>(l), p.beta));
    r.comparison_label = "2 C_W C_d L^d exp(-L^beta)";
    return r;
}

std::vector<WegnerProbe> wegner_estimate(int dim, int n_vertices, double E, const Ensemble& e,
                                         const std::vector<double>& eps_values, long long trials,
                                         std::uint64_t seed_base, int threads) {
    if (trials < 1) throw ConfigError("estimator needs trials >= 1");
    GraphPtr g = dim == 1 ? build_interval_graph(n_vertices)
                          : build_box_graph(dim, n_vertices);
    const SubgraphView domain = full_view(g);
    std::vector<double> gaps(static_cast<size_t>(trials), 0.0);
    parallel_trials(trials, threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const Potential pot = sample_potential(e, *g, seed);
        const SpectralData s = eigendecompose(assemble_hamiltonian(domain, pot, BoundaryKind::dirichlet));
        gaps[static_cast<size_t>(t)] = spectral_gap(s, E);
    });
    std::vector<WegnerProbe> probes;
    for (double eps : eps_values) {
        WegnerProbe probe;
        probe.epsilon = eps;
        for (double gap : gaps)
            if (gap <= eps) ++probe.hits;
        probe.frequency = static_cast<double>(probe.hits) / static_cast<double>(trials);
        probe.bound = e.wegner_constant() * domain.size() * eps;
        const auto [lo, hi] = clopper_pearson(probe.hits, trials, 0.99);
        probe.ci99_low = lo;
        probe.ci99_high = hi;
        probe.within_margin = probe.ci99_low <= probe.bound;
        probes.push_back(probe);
    }
    return probes;
}

std::vector<double> energy_grid(Interval I, double h) {
    if (!(h > 0.0)) throw ConfigError("grid step must be positive");
    if (!(I.hi > I.lo)) throw ConfigError("interval must have positive length");
    std::vector<double> grid;
    const long long count = static_cast<long long>(std::ceil((I.hi - I.lo) / h - 1e-12));
    grid.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) grid.push_back(I.lo + static_cast<double>(i) * h);
    return grid;
}

SingularSet singular_set_scan(const SpectralData& s, const SubgraphView& ball, Vertex x,
                              double threshold, Interval I, double grid_step) {
    SingularSet set;
    set.interval = I;
    set.grid_step = grid_step;
    set.threshold = threshold;
    set.grid = energy_grid(I, grid_step);
    for (int i = 0; i < static_cast<int>(set.grid.size()); ++i) {
        const double m = boundary_green_max(s, ball, x, set.grid[static_cast<size_t>(i)]);
        if (m >= threshold) set.hot.push_back(i);
    }
    set.measure_estimate = grid_step * static_cast<double>(set.hot.size());
    set.normalized_measure = set.measure_estimate / I.length();
    return set;
}

CoverageOutcome coverage_check(const SpectralData& s, const SubgraphView& ball, Vertex x,
                               const ScheduleParams& sched, Interval I, double grid_step) {
    if (grid_step > sched.c / 50.0 + 1e-15)
        throw ConfigError("coverage grid step must be <= c/50");
    const SingularSet at_a = singular_set_scan(s, ball, x, sched.a, I, grid_step);
    CoverageOutcome out;
    out.measured_mes = at_a.measure_estimate;
    if (at_a.measure_estimate > sched.b) {
        out.result = CoverageResult::precondition_failed;
        return out;
    }
    for (double E : at_a.grid) {
        const double m = boundary_green_max(s, ball, x, E);
        if (m < 2.0 * sched.a) continue;
        ++out.hot_2a_count;
        const double gap = spectral_gap(s, E);
        if (gap > sched.c) {
            out.result = CoverageResult::violation;
            out.violating_energy = E;
            out.gap_at_violation = gap;
            return out;
        }
    }
    out.result = CoverageResult::covered;
    return out;
}

namespace {

// Two disjoint balls on one lattice, separated along the first axis by 2L+2.
struct TwinBalls {
    GraphPtr ambient;
    Vertex x = 0;
    Vertex y = 0;
};

TwinBalls twin_ball_lattice(int dim, int l) {
    TwinBalls t;
    const int sep = 2 * l + 2;
    if (dim == 1) {
        const int n = sep + 2 * (l + 1) + 1;
        t.ambient = build_interval_graph(n);
        t.x = l + 1;
        t.y = t.x + sep;
    } else if (dim == 2) {
        const int side_x = sep + 2 * (l + 1) + 1;
        const int side_y = 2 * (l + 1) + 1;
        const int side = std::max(side_x, side_y);
        t.ambient = build_box_graph(2, side);
        t.x = box_vertex(2, side, {l + 1, l + 1});
        t.y = box_vertex(2, side, {l + 1 + sep, l + 1});
    } else {
        throw ConfigError("lattice dimension must be 1 or 2");
    }
    return t;
}

} // namespace

TwoVolumeReport two_volume_estimate(int dim, int l, const ScheduleParams& sched, Interval I,
                                    const Ensemble& e, long long trials, std::uint64_t seed_base,
                                    double grid_step, int threads) {
    if (trials < 1) throw ConfigError("estimator needs trials >= 1");
    const TwinBalls twin = twin_ball_lattice(dim, l);
    if (twin.ambient->distance(twin.x, twin.y) <= 2 * l)
        throw InvalidGeometry("balls must be disjoint: d(x,y) > 2L");
    TwoVolumeReport report;
    report.separation = twin.ambient->distance(twin.x, twin.y);
    const std::vector<double> grid = energy_grid(I, grid_step);
    // Fixed-energy exceedance probed at five interval fractions feeds P_L.
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9})
        report.probe_energies.push_back(I.lo + frac * I.length());

    std::vector<int> outcomes(static_cast<size_t>(trials), 0);
    std::vector<int> probe_hits(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const Potential pot = sample_potential(e, *twin.ambient, seed);
        const SubgraphView bx = ball_view(twin.ambient, twin.x, l);
        const SubgraphView by = ball_view(twin.ambient, twin.y, l);
        const SpectralData sx = eigendecompose(assemble_hamiltonian(bx, pot, BoundaryKind::dirichlet));
        const SpectralData sy = eigendecompose(assemble_hamiltonian(by, pot, BoundaryKind::dirichlet));
        for (double E : grid) {
            const double mx = boundary_green_max(sx, bx, twin.x, E);
            if (mx <= sched.a) continue;
            const double my = boundary_green_max(sy, by, twin.y, E);
            if (my > sched.a) { outcomes[static_cast<size_t>(t)] = 1; break; }
        }
        for (double E : report.probe_energies)
            if (boundary_green_max(sx, bx, twin.x, E) >= sched.a) {
                probe_hits[static_cast<size_t>(t)] = 1;
                break;
            }
    });
    report.estimate = finish_binomial_report(
        "zeta", outcomes, seed_base, l,
        "I=[" + std::to_string(I.lo) + "," + std::to_string(I.hi) + "]");
    long long p_hits = 0;
    for (int h : probe_hits) p_hits += h;
    report.p_l_upper = clopper_pearson(p_hits, trials).second;
    const double c_d = lattice_growth_constant(dim);
    report.closed_form_bound = 4.0 * e.wegner_constant() * c_d * c_d *
                             std::pow(static_cast<double>(l), 2.0 * dim) * sched.c +
                         2.0 * report.p_l_upper / sched.b;
    report.estimate.comparison_bound = report.closed_form_bound;
    report.estimate.comparison_label = "4 C_W C_d^2 L^{2d} c + 2 P_L / b";
    return report;
}

std::string to_string(AuditMode m) { return m == AuditMode::section5 ? "section5" : "section8"; }

InductionAudit induction_audit(int dim, const ScaleParams& p, const Ensemble& e, double E,
                               long long trials, std::uint64_t seed_base, AuditMode mode,
                               int threads) {
    if (trials < 1) throw ConfigError("audit needs trials >= 1");
    InductionAudit audit;
    audit.mode = mode;
    audit.energy = E;
    audit.l_k = static_cast<int>(p.l0);
    audit.l_next = static_cast<int>(next_scale(p.l0, p.alpha));
    if (audit.l_next <= 2 * audit.l_k)
        throw ConfigError("audit needs L_{k+1} > 2 L_k; widen alpha or L0");
    audit.c_d = lattice_growth_constant(dim);
    audit.trials.resize(static_cast<size_t>(trials));

    parallel_trials(trials, threads, [&](long long t) {
        AuditTrial& row = audit.trials[static_cast<size_t>(t)];
        row.seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const BallInstance big = make_ball_instance(dim, audit.l_next, e, row.seed);
        row.big_resonant = classify_resonant(big.spectral, E, p, audit.l_next).resonant;
        const SingularVerdict sv =
            classify_singular(big.spectral, big.ball, E, p, audit.l_next, big.c_d);
        row.big_singular = sv.singular;
        row.witnesses = sv.witnesses;
        const TunnelingVerdict tv = classify_tunneling(
            big.ball, big.center, audit.l_next, big.potential, E, p, audit.l_k,
            mode == AuditMode::section5 ? TunnelingMode::pairwise : TunnelingMode::counted,
            big.c_d);
        row.big_tunneling = tv.tunneling;
        row.disjoint_count = tv.disjoint_count;
        row.count_exact = tv.count_exact;
        row.singular_centers = tv.singular_centers;
        if (mode == AuditMode::section8) {
            row.big_cnr =
                classify_cnr(big.ball, big.center, audit.l_next, big.potential, E, p, audit.l_k).cnr;
            row.premise = row.big_cnr && !row.big_tunneling;
        } else {
            row.premise = !row.big_resonant && !row.big_tunneling;
        }
        row.violation = row.premise && row.big_singular;
        // Representative center at the smaller scale feeds P_k-hat.
        const SubgraphView sub = ball_view(big.ambient, big.center, audit.l_k);
        const SpectralData ss =
            eigendecompose(assemble_hamiltonian(sub, big.potential, BoundaryKind::dirichlet));
        row.sub_singular = classify_singular(ss, sub, E, p, audit.l_k, big.c_d).singular;
    });

    long long singular_next = 0, resonant_next = 0, singular_k = 0;
    for (const AuditTrial& row : audit.trials) {
        audit.premise_count += row.premise ? 1 : 0;
        audit.violation_count += row.violation ? 1 : 0;
        singular_next += row.big_singular ? 1 : 0;
        resonant_next += row.big_resonant ? 1 : 0;
        singular_k += row.sub_singular ? 1 : 0;
    }
    const double n = static_cast<double>(trials);
    audit.p_k_hat = static_cast<double>(singular_k) / n;
    audit.p_next_hat = static_cast<double>(singular_next) / n;
    audit.q_next_raw = static_cast<double>(resonant_next) / n;
    audit.q_next_hat = 2.0 * audit.q_next_raw;
    audit.recursion_rhs = 0.5 * audit.c_d * audit.c_d *
                              std::pow(static_cast<double>(audit.l_next), 2.0 * dim) *
                              audit.p_k_hat * audit.p_k_hat +
                          0.5 * audit.q_next_hat;
    return audit;
}

DisjointTailReport disjoint_count_tail(int dim, const ScaleParams& p, const Ensemble& e, double E,
                                       long long trials, std::uint64_t seed_base, int threads) {
    if (trials < 1) throw ConfigError("estimator needs trials >= 1");
    DisjointTailReport report;
    const int l_j = static_cast<int>(p.l0);
    const int l_next = static_cast<int>(next_scale(p.l0, p.alpha));
    if (l_next <= 2 * l_j) throw ConfigError("tail estimate needs L_{j+1} > 2 L_j");
    report.threshold = std::pow(static_cast<double>(l_j), p.sigma * (p.alpha - 1.0));
    report.lemma_bound = 0.5 * std::exp(-std::pow(static_cast<double>(l_next), p.delta));
    report.counts.resize(static_cast<size_t>(trials), 0);
    std::vector<int> outcomes(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const BallInstance big = make_ball_instance(dim, l_next, e, seed);
        const TunnelingVerdict tv =
            classify_tunneling(big.ball, big.center, l_next, big.potential, E, p, l_j,
                               TunnelingMode::counted, big.c_d);
        report.counts[static_cast<size_t>(t)] = tv.disjoint_count;
        outcomes[static_cast<size_t>(t)] =
            static_cast<double>(tv.disjoint_count) >= report.threshold ? 1 : 0;
    });
    report.estimate = finish_binomial_report("disjoint_tail", outcomes, seed_base, l_j,
                                             "E=" + std::to_string(E));
    report.estimate.comparison_bound = report.lemma_bound;
    report.estimate.comparison_label = "0.5 exp(-L_{j+1}^delta)";
    return report;
}

PotentialDecomposition xi_eta_decompose(const Potential& v, const VertexSet& ball) {
    if (ball.empty()) throw InvalidDomain("decomposition needs a nonempty ball");
    PotentialDecomposition d;
    d.ball_members = ball;
    double sum = 0.0;
    for (Vertex z : ball) sum += v.at(z);
    d.xi = sum / static_cast<double>(ball.size());
    d.eta.reserve(ball.size());
    for (Vertex z : ball) d.eta.push_back(v.at(z) - d.xi);
    return d;
}

double shift_covariance_check(const Hamiltonian& h, double t, Vertex x, Vertex y, double E) {
    const SpectralData base = eigendecompose(h);
    const SpectralData shifted = eigendecompose(h.shifted(t));
    return std::abs(green(shifted, x, y, E + t) - green(base, x, y, E));
}

ModulusReport continuity_modulus_probe(const Ensemble& e, int dim, int l,
                                       const std::vector<double>& s_values, long long trials,
                                       std::uint64_t seed_base) {
    if (e.kind != EnsembleKind::gaussian01)
        throw Unsupported("continuity modulus probe is Gaussian-only");
    if (e.coupling == 0.0) throw InvalidDomain("zero coupling has no modulus");
    if (trials < 2) throw ConfigError("modulus probe needs trials >= 2");
    Vertex center = 0;
    GraphPtr ambient = centered_lattice(dim, l, center);
    const VertexSet ball = ambient->ball(center, l);
    ModulusReport report;
    report.trials = trials;
    report.seed_base = seed_base;
    report.ball_size = static_cast<long long>(ball.size());

    std::vector<double> xs(static_cast<size_t>(trials));
    for (long long t = 0; t < trials; ++t) {
        const std::uint64_t seed = derive_seed(seed_base, static_cast<std::uint64_t>(t));
        const Potential pot = sample_potential(e, *ambient, seed);
        xs[static_cast<size_t>(t)] = xi_eta_decompose(pot, ball).xi;
    }
    std::sort(xs.begin(), xs.end());
    const double sqrt_2pi = 2.5066282746310005024;
    for (double s : s_values) {
        ModulusProbe probe;
        probe.s = s;
        probe.bound = std::sqrt(static_cast<double>(ball.size())) * s /
                      (sqrt_2pi * std::abs(e.coupling));
        // Largest window of width s in the empirical distribution.
        size_t best = 0, lo = 0;
        for (size_t hi = 0; hi < xs.size(); ++hi) {
            while (xs[hi] - xs[lo] > s) ++lo;
            best = std::max(best, hi - lo + 1);
        }
        probe.empirical = s == 0.0 ? 0.0
                                   : static_cast<double>(best) / static_cast<double>(trials);
        // The sliding-window maximum is biased above any fixed-window
        // frequency; the margin carries a union-bound allowance for the scan
        // on top of the three-sigma binomial term.
        const double p_cap = std::min(1.0, probe.bound);
        const double var = std::max(p_cap * (1.0 - p_cap), 1e-12);
        const double n = static_cast<double>(trials);
        probe.margin = 3.0 * std::sqrt(var / n) + std::sqrt(2.0 * var * std::log(n) / n);
        probe.within_margin = probe.empirical <= probe.bound + probe.margin;
        report.probes.push_back(probe);
        report.max_exceedance = std::max(report.max_exceedance, probe.empirical - probe.bound);
    }
    return report;
}

} // namespace loclab
