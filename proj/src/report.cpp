#include "loclab/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "loclab/errors.hpp"
#include "loclab/rng.hpp"

namespace loclab {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown field '" + it.key() + "' in " + where);
}

Interval parse_interval(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("interval must be [lo, hi]");
    Interval I{j[0].get<double>(), j[1].get<double>()};
    if (!(I.hi > I.lo)) throw ConfigError("interval must have positive length");
    return I;
}

ScaleParams parse_params(const nlohmann::json& j) {
    reject_unknown_keys(j, {"preset", "m", "L0", "alpha", "beta", "tau", "rho", "sigma", "delta",
                            "kappa", "theta"},
                        "params");
    const std::string preset = j.value("preset", "custom");
    ScaleParams p;
    if (preset == "section2") p = params_section2();
    else if (preset == "section8") p = params_section8();
    else if (preset == "custom") p.preset = ParamPreset::custom;
    else throw ConfigError("unknown preset '" + preset + "'");
    if (j.contains("m")) p.m = j["m"].get<double>();
    if (j.contains("L0")) p.l0 = j["L0"].get<int>();
    for (auto [key, field] : std::initializer_list<std::pair<const char*, double*>>{
             {"alpha", &p.alpha}, {"beta", &p.beta}, {"tau", &p.tau}, {"rho", &p.rho},
             {"sigma", &p.sigma}, {"delta", &p.delta}, {"kappa", &p.kappa}, {"theta", &p.theta}}) {
        if (j.contains(key)) {
            if (preset != "custom")
                throw ConfigError(std::string("exponent override '") + key +
                                  "' requires preset custom");
            *field = j[key].get<double>();
        }
    }
    p.validate();
    return p;
}

ScheduleSpec parse_schedule(const nlohmann::json& j) {
    reject_unknown_keys(j, {"framework", "m", "delta", "kappa", "theta", "k", "dim",
                            "allow_infeasible"},
                        "schedule");
    ScheduleSpec s;
    s.framework = framework_from_string(j.at("framework").get<std::string>());
    if (j.contains("m")) s.inputs.m = j["m"].get<double>();
    if (j.contains("delta")) s.inputs.delta = j["delta"].get<double>();
    if (j.contains("kappa")) s.inputs.kappa = j["kappa"].get<double>();
    if (j.contains("theta")) s.inputs.theta = j["theta"].get<double>();
    if (j.contains("k")) s.inputs.k = j["k"].get<int>();
    if (j.contains("dim")) s.inputs.dim = j["dim"].get<int>();
    s.allow_infeasible = j.value("allow_infeasible", false);
    return s;
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(doc,
                        {"schema_version", "kind", "graph", "ensemble", "params", "trials",
                         "seed_base", "energy", "interval", "grid_step", "scale", "quantity",
                         "mode", "suite", "schedule", "distances", "pair", "epsilons", "s_values",
                         "sweep_centers", "threads", "output_csv", "output_json"},
                        "config");
    ExperimentConfig cfg;
    cfg.raw = doc;
    if (doc.contains("schema_version") && doc["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version");
    cfg.kind = doc.at("kind").get<std::string>();
    static const std::set<std::string> kinds{"classify",  "estimate", "induction", "coverage",
                                             "two_volume", "dynamics", "verify"};
    if (!kinds.count(cfg.kind)) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");

    if (doc.contains("graph")) {
        const auto& g = doc["graph"];
        reject_unknown_keys(g, {"kind", "n", "dim", "side"}, "graph");
        const std::string gk = g.at("kind").get<std::string>();
        if (gk == "interval") {
            cfg.graph_dim = 1;
            cfg.graph_n = g.at("n").get<int>();
        } else if (gk == "box") {
            cfg.graph_dim = g.at("dim").get<int>();
            cfg.graph_n = g.at("side").get<int>();
        } else if (gk == "lattice") {
            cfg.graph_dim = g.at("dim").get<int>();
            cfg.graph_n = 0; // auto-sized centered lattice
        } else {
            throw ConfigError("unknown graph kind '" + gk + "'");
        }
        if (cfg.graph_dim < 1 || cfg.graph_dim > 2)
            throw ConfigError("graph dimension must be 1 or 2");
    }
    if (doc.contains("ensemble")) {
        const auto& e = doc["ensemble"];
        reject_unknown_keys(e, {"kind", "coupling"}, "ensemble");
        cfg.ensemble.kind = ensemble_kind_from_string(e.at("kind").get<std::string>());
        cfg.ensemble.coupling = e.value("coupling", 1.0);
    }
    if (doc.contains("params")) cfg.params = parse_params(doc["params"]);
    if (doc.contains("trials")) cfg.trials = doc["trials"].get<long long>();
    if (doc.contains("seed_base")) cfg.seed_base = doc["seed_base"].get<std::uint64_t>();
    if (doc.contains("energy")) cfg.energy = doc["energy"].get<double>();
    if (doc.contains("interval")) cfg.interval = parse_interval(doc["interval"]);
    if (doc.contains("grid_step")) cfg.grid_step = doc["grid_step"].get<double>();
    if (doc.contains("scale")) cfg.scale = doc["scale"].get<int>();
    if (doc.contains("quantity")) cfg.quantity = doc["quantity"].get<std::string>();
    if (doc.contains("mode")) cfg.mode = doc["mode"].get<std::string>();
    if (doc.contains("suite")) cfg.suite = doc["suite"].get<std::string>();
    if (doc.contains("schedule")) cfg.schedule = parse_schedule(doc["schedule"]);
    if (doc.contains("distances")) cfg.distances = doc["distances"].get<std::vector<int>>();
    if (doc.contains("pair")) cfg.pair = doc["pair"].get<std::vector<int>>();
    if (doc.contains("epsilons")) cfg.epsilons = doc["epsilons"].get<std::vector<double>>();
    if (doc.contains("s_values")) cfg.s_values = doc["s_values"].get<std::vector<double>>();
    if (doc.contains("sweep_centers")) cfg.sweep_centers = doc["sweep_centers"].get<bool>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (const char* env = std::getenv("THREADS")) cfg.threads = std::max(1, std::atoi(env));
    if (doc.contains("output_csv")) cfg.output_csv = doc["output_csv"].get<std::string>();
    if (doc.contains("output_json")) cfg.output_json = doc["output_json"].get<std::string>();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

nlohmann::json resolved_config_json(const ExperimentConfig& cfg) {
    nlohmann::json r;
    r["schema_version"] = kSchemaVersion;
    r["kind"] = cfg.kind;
    r["graph"] = {{"dim", cfg.graph_dim}, {"n", cfg.graph_n}};
    r["ensemble"] = {{"kind", to_string(cfg.ensemble.kind)},
                     {"coupling", cfg.ensemble.coupling},
                     {"lipschitz_raw", cfg.ensemble.lipschitz_raw()}};
    r["params"] = {{"preset", to_string(cfg.params.preset)}, {"alpha", cfg.params.alpha},
                   {"beta", cfg.params.beta},   {"tau", cfg.params.tau},
                   {"rho", cfg.params.rho},     {"sigma", cfg.params.sigma},
                   {"delta", cfg.params.delta}, {"kappa", cfg.params.kappa},
                   {"theta", cfg.params.theta}, {"m", cfg.params.m},
                   {"L0", cfg.params.l0}};
    r["trials"] = cfg.trials;
    r["seed_base"] = cfg.seed_base;
    if (cfg.energy) r["energy"] = *cfg.energy;
    if (cfg.interval) r["interval"] = {cfg.interval->lo, cfg.interval->hi};
    if (cfg.grid_step) r["grid_step"] = *cfg.grid_step;
    if (cfg.scale) r["scale"] = cfg.scale;
    if (cfg.sweep_centers) r["sweep_centers"] = true;
    if (!cfg.quantity.empty()) r["quantity"] = cfg.quantity;
    if (!cfg.mode.empty()) r["mode"] = cfg.mode;
    if (cfg.schedule) {
        r["schedule"] = {{"framework", to_string(cfg.schedule->framework)},
                         {"allow_infeasible", cfg.schedule->allow_infeasible}};
    }
    return r;
}

namespace {

using Row = std::vector<std::string>;

struct CsvBuilder {
    std::vector<std::string> lines;

    void comments(const ExperimentConfig& cfg) {
        lines.push_back("# loclab schema_version " + std::to_string(kSchemaVersion));
        lines.push_back("# config " + cfg.raw.dump());
        lines.push_back("# resolved " + resolved_config_json(cfg).dump());
    }
    void header(const Row& cols) { lines.push_back(join(cols)); }
    void row(const Row& cols) { lines.push_back(join(cols)); }

    static std::string join(const Row& cols) {
        std::string out;
        for (size_t i = 0; i < cols.size(); ++i) {
            out += cols[i];
            if (i + 1 < cols.size()) out += ',';
        }
        return out;
    }
};

std::string fmt_seed(std::uint64_t s) { return std::to_string(s); }

nlohmann::json estimate_to_json(const EstimateReport& r) {
    nlohmann::json j;
    j["quantity"] = r.quantity;
    j["point_estimate"] = r.point_estimate;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["trials"] = r.trials;
    j["seed_base"] = r.seed_base;
    j["scale"] = r.scale;
    j["energy_spec"] = r.energy_spec;
    j["raw_frequency"] = r.raw_frequency;
    if (!r.convention.empty()) j["convention"] = r.convention;
    if (!r.comparison_label.empty()) {
        j["comparison_bound"] = r.comparison_bound;
        j["comparison_label"] = r.comparison_label;
    }
    return j;
}

void assert_estimate_invariants(const EstimateReport& r) {
    if (r.trials <= 0 || !(r.ci_low <= r.point_estimate && r.point_estimate <= r.ci_high))
        throw Error("estimate report violated its invariants");
}

std::string witness_string(const std::vector<PairWitness>& ws) {
    if (ws.empty()) return "";
    const PairWitness& w = ws.front();
    return "(" + std::to_string(w.x) + "|" + std::to_string(w.y) + "|d=" +
           std::to_string(w.distance) + "|lhs=" + format_double(w.observed) + "|rhs=" +
           format_double(w.required) + ")";
}

ScheduleParams schedule_from_config(const ExperimentConfig& cfg, long long ball_size) {
    if (!cfg.schedule) throw ConfigError("this experiment needs a schedule");
    if (cfg.schedule->allow_infeasible)
        return make_schedule_unchecked(cfg.schedule->framework, cfg.scale, ball_size,
                                       cfg.schedule->inputs);
    return make_schedule(cfg.schedule->framework, cfg.scale, ball_size, cfg.schedule->inputs);
}

long long lattice_ball_size(int dim, int l) {
    return dim == 1 ? 2LL * l + 1
                    : 2LL * l * l + 2LL * l + 1;
}

// --- experiment bodies -----------------------------------------------------

void run_estimate(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (cfg.trials < 1) throw ConfigError("estimate needs trials >= 1");
    if (cfg.quantity == "Pk" || cfg.quantity == "Qk") {
        if (!cfg.energy) throw ConfigError("Pk/Qk estimation needs an energy");
        if (cfg.scale < 1) throw ConfigError("Pk/Qk estimation needs a scale");
        const EstimateReport r =
            cfg.quantity == "Pk"
                ? estimate_pk(cfg.graph_dim, cfg.scale, *cfg.energy, cfg.params, cfg.ensemble,
                              cfg.trials, cfg.seed_base, cfg.threads, cfg.sweep_centers)
                : estimate_qk(cfg.graph_dim, cfg.scale, *cfg.energy, cfg.params, cfg.ensemble,
                              cfg.trials, cfg.seed_base, cfg.threads);
        assert_estimate_invariants(r);
        csv.header({"trial", "seed", "scale", "energy", "outcome"});
        for (long long t = 0; t < r.trials; ++t)
            csv.row({std::to_string(t), fmt_seed(derive_seed(cfg.seed_base, t)),
                     std::to_string(cfg.scale), format_double(*cfg.energy),
                     std::to_string(r.per_trial[static_cast<size_t>(t)])});
        out["estimate"] = estimate_to_json(r);
        return;
    }
    if (cfg.quantity == "wegner") {
        if (!cfg.energy) throw ConfigError("wegner estimation needs an energy");
        if (cfg.graph_n < 2) throw ConfigError("wegner estimation needs graph n");
        std::vector<double> eps = cfg.epsilons;
        if (eps.empty()) eps = {1e-3, 1e-2};
        const auto probes = wegner_estimate(cfg.graph_dim, cfg.graph_n, *cfg.energy, cfg.ensemble,
                                            eps, cfg.trials, cfg.seed_base, cfg.threads);
        // Per-trial gaps are rederivable; rows store the verdict per epsilon.
        csv.header({"trial", "seed", "scale", "energy", "gap"});
        GraphPtr g = cfg.graph_dim == 1 ? build_interval_graph(cfg.graph_n)
                                        : build_box_graph(cfg.graph_dim, cfg.graph_n);
        const SubgraphView domain = full_view(g);
        for (long long t = 0; t < cfg.trials; ++t) {
            const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
            const Potential pot = sample_potential(cfg.ensemble, *g, seed);
            const SpectralData s =
                eigendecompose(assemble_hamiltonian(domain, pot, BoundaryKind::dirichlet));
            csv.row({std::to_string(t), fmt_seed(seed), std::to_string(domain.size()),
                     format_double(*cfg.energy), format_double(spectral_gap(s, *cfg.energy))});
        }
        out["wegner"] = nlohmann::json::array();
        for (const auto& p : probes)
            out["wegner"].push_back({{"epsilon", p.epsilon},
                                     {"hits", p.hits},
                                     {"frequency", p.frequency},
                                     {"bound", p.bound},
                                     {"ci99_low", p.ci99_low},
                                     {"ci99_high", p.ci99_high},
                                     {"within_margin", p.within_margin}});
        return;
    }
    if (cfg.quantity == "nu_modulus") {
        if (cfg.scale < 1) throw ConfigError("modulus probe needs a scale");
        std::vector<double> svals = cfg.s_values;
        if (svals.empty()) svals = {0.001, 0.01, 0.1};
        const ModulusReport r = continuity_modulus_probe(cfg.ensemble, cfg.graph_dim, cfg.scale,
                                                         svals, cfg.trials, cfg.seed_base);
        csv.header({"trial", "seed", "scale", "energy", "xi"});
        Vertex center = 0;
        // Re-derive per-trial xi for the rows (cheap and keeps the API pure).
        GraphPtr ambient = cfg.graph_dim == 1
                               ? build_interval_graph(2 * (cfg.scale + 1) + 1)
                               : build_box_graph(2, 2 * (cfg.scale + 1) + 1);
        center = cfg.graph_dim == 1
                     ? cfg.scale + 1
                     : box_vertex(2, 2 * (cfg.scale + 1) + 1, {cfg.scale + 1, cfg.scale + 1});
        const VertexSet ball = ambient->ball(center, cfg.scale);
        for (long long t = 0; t < cfg.trials; ++t) {
            const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
            const Potential pot = sample_potential(cfg.ensemble, *ambient, seed);
            csv.row({std::to_string(t), fmt_seed(seed), std::to_string(cfg.scale), "",
                     format_double(xi_eta_decompose(pot, ball).xi)});
        }
        out["modulus"] = nlohmann::json::array();
        for (const auto& p : r.probes)
            out["modulus"].push_back({{"s", p.s},
                                      {"bound", p.bound},
                                      {"empirical", p.empirical},
                                      {"margin", p.margin},
                                      {"within_margin", p.within_margin}});
        out["ball_size"] = r.ball_size;
        out["max_exceedance"] = r.max_exceedance;
        return;
    }
    throw ConfigError("estimate quantity must be Pk, Qk, wegner, or nu_modulus");
}

void run_classify(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (cfg.trials < 1) throw ConfigError("classify needs trials >= 1");
    if (!cfg.energy) throw ConfigError("classify needs an energy");
    if (cfg.scale < 2) throw ConfigError("classify needs scale >= 2");
    const int l = cfg.scale;
    const int l_k = cfg.params.l0;
    const bool multi_scale = l > 2 * l_k;
    csv.header({"trial", "seed", "scale", "energy", "resonant", "singular", "tunneling",
                "disjoint_count", "cnr", "localized", "witness"});
    long long n_resonant = 0, n_singular = 0, n_tunneling = 0, n_cnr = 0, n_localized = 0;
    std::vector<Row> rows(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
        const BallInstance inst = make_ball_instance(cfg.graph_dim, l, cfg.ensemble, seed);
        const ResonanceVerdict rv = classify_resonant(inst.spectral, *cfg.energy, cfg.params, l);
        const SingularVerdict sv =
            classify_singular(inst.spectral, inst.ball, *cfg.energy, cfg.params, l, inst.c_d);
        const LocalizationVerdict lv = classify_m_localized(inst.spectral, inst.ball, cfg.params, l);
        TunnelingVerdict tv;
        CnrVerdict cv;
        if (multi_scale) {
            tv = classify_tunneling(inst.ball, inst.center, l, inst.potential, *cfg.energy,
                                    cfg.params, l_k, TunnelingMode::pairwise, inst.c_d);
            cv = classify_cnr(inst.ball, inst.center, l, inst.potential, *cfg.energy, cfg.params,
                              l_k);
        }
        rows[static_cast<size_t>(t)] = {
            std::to_string(t), fmt_seed(seed), std::to_string(l), format_double(*cfg.energy),
            std::to_string(rv.resonant ? 1 : 0), std::to_string(sv.singular ? 1 : 0),
            multi_scale ? std::to_string(tv.tunneling ? 1 : 0) : "",
            multi_scale ? std::to_string(tv.disjoint_count) : "",
            multi_scale ? std::to_string(cv.cnr ? 1 : 0) : "",
            std::to_string(lv.localized ? 1 : 0),
            sv.singular ? witness_string(sv.witnesses) : witness_string(lv.witnesses)};
    });
    for (const auto& r : rows) {
        csv.row(r);
        n_resonant += r[4] == "1";
        n_singular += r[5] == "1";
        n_tunneling += r[6] == "1";
        n_cnr += r[8] == "1";
        n_localized += r[9] == "1";
    }
    out["counts"] = {{"resonant", n_resonant}, {"singular", n_singular},
                     {"tunneling", n_tunneling}, {"cnr", n_cnr}, {"localized", n_localized},
                     {"trials", cfg.trials}};
}

void run_induction(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (!cfg.energy) throw ConfigError("induction audit needs an energy");
    const AuditMode mode = cfg.mode == "section8" ? AuditMode::section8 : AuditMode::section5;
    const InductionAudit audit = induction_audit(cfg.graph_dim, cfg.params, cfg.ensemble,
                                                 *cfg.energy, cfg.trials, cfg.seed_base, mode,
                                                 cfg.threads);
    csv.header({"trial", "seed", "scale", "energy", "resonant", "cnr", "tunneling",
                "disjoint_count", "count_exact", "singular", "premise", "violation", "witness"});
    for (long long t = 0; t < cfg.trials; ++t) {
        const AuditTrial& row = audit.trials[static_cast<size_t>(t)];
        csv.row({std::to_string(t), fmt_seed(row.seed), std::to_string(audit.l_next),
                 format_double(*cfg.energy), std::to_string(row.big_resonant ? 1 : 0),
                 mode == AuditMode::section8 ? std::to_string(row.big_cnr ? 1 : 0) : "",
                 std::to_string(row.big_tunneling ? 1 : 0), std::to_string(row.disjoint_count),
                 std::to_string(row.count_exact ? 1 : 0),
                 std::to_string(row.big_singular ? 1 : 0), std::to_string(row.premise ? 1 : 0),
                 std::to_string(row.violation ? 1 : 0),
                 row.violation ? witness_string(row.witnesses) : ""});
    }
    out["audit"] = {{"mode", to_string(mode)},
                    {"l_k", audit.l_k},
                    {"l_next", audit.l_next},
                    {"premise_count", audit.premise_count},
                    {"violation_count", audit.violation_count},
                    {"p_k_hat", audit.p_k_hat},
                    {"p_next_hat", audit.p_next_hat},
                    {"q_next_raw", audit.q_next_raw},
                    {"q_next_hat", audit.q_next_hat},
                    {"q_convention", "Qk = 2 * resonance frequency"},
                    {"recursion_rhs", audit.recursion_rhs},
                    {"recursion_label", "0.5 C_d^2 L_{k+1}^{2d} Pk^2 + 0.5 Q_{k+1}"}};
    if (mode == AuditMode::section8) {
        // Disjoint-count tail against the Poisson-type lemma bound.
        const double threshold =
            std::pow(static_cast<double>(audit.l_k), cfg.params.sigma * (cfg.params.alpha - 1.0));
        long long tail_hits = 0;
        for (const AuditTrial& row : audit.trials)
            if (static_cast<double>(row.disjoint_count) >= threshold) ++tail_hits;
        const auto [lo, hi] = clopper_pearson(tail_hits, cfg.trials);
        out["disjoint_tail"] = {
            {"threshold", threshold},
            {"frequency", static_cast<double>(tail_hits) / static_cast<double>(cfg.trials)},
            {"ci_low", lo},
            {"ci_high", hi},
            {"lemma_bound",
             0.5 * std::exp(-std::pow(static_cast<double>(audit.l_next), cfg.params.delta))}};
    }
}

void run_coverage(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (cfg.trials < 1) throw ConfigError("coverage needs trials >= 1");
    if (cfg.scale < 1) throw ConfigError("coverage needs a scale");
    const Interval I = cfg.interval.value_or(Interval{0.0, 1.0});
    const ScheduleParams sched = schedule_from_config(cfg, lattice_ball_size(cfg.graph_dim, cfg.scale));
    const double step = cfg.grid_step.value_or(sched.c / 50.0);
    csv.header({"trial", "seed", "scale", "interval", "measured_mes", "hot_2a", "result",
                "violating_energy"});
    std::vector<CoverageOutcome> outcomes(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
        const BallInstance inst = make_ball_instance(cfg.graph_dim, cfg.scale, cfg.ensemble, seed);
        outcomes[static_cast<size_t>(t)] =
            coverage_check(inst.spectral, inst.ball, inst.center, sched, I, step);
    });
    long long covered = 0, violations = 0, precondition_failed = 0;
    const std::string interval_str = "[" + format_double(I.lo) + ";" + format_double(I.hi) + "]";
    for (long long t = 0; t < cfg.trials; ++t) {
        const CoverageOutcome& oc = outcomes[static_cast<size_t>(t)];
        const char* label = oc.result == CoverageResult::covered            ? "covered"
                            : oc.result == CoverageResult::violation        ? "violation"
                                                                            : "precondition_failed";
        covered += oc.result == CoverageResult::covered;
        violations += oc.result == CoverageResult::violation;
        precondition_failed += oc.result == CoverageResult::precondition_failed;
        csv.row({std::to_string(t), fmt_seed(derive_seed(cfg.seed_base, t)),
                 std::to_string(cfg.scale), interval_str, format_double(oc.measured_mes),
                 std::to_string(oc.hot_2a_count), label,
                 oc.violating_energy ? format_double(*oc.violating_energy) : ""});
    }
    out["coverage"] = {{"covered", covered},
                       {"violations", violations},
                       {"precondition_failed", precondition_failed},
                       {"grid_step", step},
                       {"schedule",
                        {{"a", sched.a},
                         {"b", sched.b},
                         {"c", sched.c},
                         {"feasible", sched.feasible},
                         {"failing_side", sched.failing_side},
                         {"ball_size", sched.ball_size}}},
                       {"grid_note", "half-open uniform grid, step tied to c/50; the Lipschitz "
                                     "bound N/c^2 between resonances makes this density "
                                     "sufficient to detect threshold-a crossings"}};
}

void run_two_volume(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (cfg.scale < 1) throw ConfigError("two_volume needs a scale");
    const Interval I = cfg.interval.value_or(Interval{0.0, 1.0});
    const ScheduleParams sched = schedule_from_config(cfg, lattice_ball_size(cfg.graph_dim, cfg.scale));
    const double step = cfg.grid_step.value_or(sched.c / 50.0);
    const TwoVolumeReport r = two_volume_estimate(cfg.graph_dim, cfg.scale, sched, I, cfg.ensemble,
                                                  cfg.trials, cfg.seed_base, step, cfg.threads);
    assert_estimate_invariants(r.estimate);
    csv.header({"trial", "seed", "scale", "interval", "outcome"});
    const std::string interval_str = "[" + format_double(I.lo) + ";" + format_double(I.hi) + "]";
    for (long long t = 0; t < cfg.trials; ++t)
        csv.row({std::to_string(t), fmt_seed(derive_seed(cfg.seed_base, t)),
                 std::to_string(cfg.scale), interval_str,
                 std::to_string(r.estimate.per_trial[static_cast<size_t>(t)])});
    out["two_volume"] = estimate_to_json(r.estimate);
    out["two_volume"]["closed_form_bound"] = r.closed_form_bound;
    out["two_volume"]["p_l_upper"] = r.p_l_upper;
    out["two_volume"]["separation"] = r.separation;
    out["two_volume"]["schedule_feasible"] = sched.feasible;
    out["two_volume"]["grid_step"] = step;
    out["two_volume"]["grid_note"] = "half-open uniform grid, step tied to c/50; the Lipschitz "
                                     "bound N/c^2 between resonances makes this density "
                                     "sufficient to detect threshold-a crossings";
}

void run_dynamics(const ExperimentConfig& cfg, CsvBuilder& csv, nlohmann::json& out) {
    if (cfg.trials < 1) throw ConfigError("dynamics needs trials >= 1");
    if (cfg.graph_n < 4) throw ConfigError("dynamics needs an explicit graph size");
    GraphPtr g = cfg.graph_dim == 1 ? build_interval_graph(cfg.graph_n)
                                    : build_box_graph(cfg.graph_dim, cfg.graph_n);
    const SubgraphView domain = full_view(g);
    if (cfg.mode == "correlator_audit") {
        if (cfg.pair.size() != 2) throw ConfigError("correlator_audit needs pair [x, y]");
        if (!cfg.interval) throw ConfigError("correlator_audit needs an interval");
        if (cfg.scale < 1) throw ConfigError("correlator_audit needs a scale L");
        const double c_d = ball_growth_constant(*g, std::min(4, g->diameter())).c_d;
        csv.header({"trial", "seed", "scale", "interval", "result", "correlator", "bound",
                    "eigs_in_I", "premise_fail_energy"});
        std::vector<CorrelatorAuditReport> reports(static_cast<size_t>(cfg.trials));
        parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
            const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
            const Potential pot = sample_potential(cfg.ensemble, *g, seed);
            const Hamiltonian h = assemble_hamiltonian(domain, pot, BoundaryKind::dirichlet);
            reports[static_cast<size_t>(t)] = correlator_bound_audit(h, cfg.pair[0], cfg.pair[1],
                                                             cfg.scale, *cfg.interval, cfg.params,
                                                             c_d);
        });
        long long holds = 0, na = 0, violations = 0;
        const std::string interval_str =
            "[" + format_double(cfg.interval->lo) + ";" + format_double(cfg.interval->hi) + "]";
        for (long long t = 0; t < cfg.trials; ++t) {
            const CorrelatorAuditReport& r = reports[static_cast<size_t>(t)];
            const char* label = r.result == CorrelatorAuditResult::bound_holds      ? "bound_holds"
                                : r.result == CorrelatorAuditResult::not_applicable ? "not_applicable"
                                                                            : "violation";
            holds += r.result == CorrelatorAuditResult::bound_holds;
            na += r.result == CorrelatorAuditResult::not_applicable;
            violations += r.result == CorrelatorAuditResult::violation;
            csv.row({std::to_string(t), fmt_seed(derive_seed(cfg.seed_base, t)),
                     std::to_string(cfg.scale), interval_str, label, format_double(r.correlator),
                     format_double(r.bound), std::to_string(r.eigenvalues_in_interval),
                     r.premise_failure_energy ? format_double(*r.premise_failure_energy) : ""});
        }
        out["correlator_audit"] = {{"bound_holds", holds},
                           {"not_applicable", na},
                           {"violations", violations},
                           {"bound", 4.0 * std::exp(-cfg.params.m * cfg.scale)}};
        return;
    }
    // Decay mode: full-band correlators at the configured distances.
    std::vector<int> distances = cfg.distances;
    if (distances.empty()) distances = {8, 16, 24, 32};
    for (int d : distances)
        if (d < 1 || d >= cfg.graph_n) throw ConfigError("distance outside the graph");
    std::vector<std::vector<double>> values(distances.size());
    for (auto& v : values) v.resize(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](long long t) {
        const std::uint64_t seed = derive_seed(cfg.seed_base, static_cast<std::uint64_t>(t));
        const Potential pot = sample_potential(cfg.ensemble, *g, seed);
        const SpectralData s =
            eigendecompose(assemble_hamiltonian(domain, pot, BoundaryKind::dirichlet));
        const Interval band{s.eigenvalues(0) - 1.0, s.eigenvalues(s.size() - 1) + 1.0};
        for (size_t i = 0; i < distances.size(); ++i) {
            const int d = distances[i];
            const Vertex x = cfg.graph_n / 2 - d / 2;
            const Vertex y = x + d;
            values[i][static_cast<size_t>(t)] = ef_correlator(s, x, y, band).value;
        }
    });
    csv.header({"distance", "mean", "median", "ci_low", "ci_high"});
    std::vector<std::pair<double, double>> fit_points;
    nlohmann::json curve = nlohmann::json::array();
    for (size_t i = 0; i < distances.size(); ++i) {
        const double mean = mean_of(values[i]);
        const double median = median_of(values[i]);
        double sd = 0.0;
        for (double v : values[i]) sd += (v - mean) * (v - mean);
        sd = std::sqrt(sd / std::max<double>(1.0, static_cast<double>(cfg.trials - 1)));
        const double half = 1.96 * sd / std::sqrt(static_cast<double>(cfg.trials));
        csv.row({std::to_string(distances[i]), format_double(mean), format_double(median),
                 format_double(mean - half), format_double(mean + half)});
        curve.push_back({{"distance", distances[i]}, {"mean", mean}, {"median", median}});
        fit_points.emplace_back(static_cast<double>(distances[i]), mean);
    }
    const DecayFit fit = decay_fit(fit_points);
    out["decay"] = {{"curve", curve},
                    {"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"dropped_nonpositive", fit.dropped_nonpositive},
                    {"empirical_decay_rate", -fit.slope}};
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    RunResult result;
    nlohmann::json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["config"] = cfg.raw;
    summary["resolved"] = resolved_config_json(cfg);
    const auto started = std::chrono::system_clock::now();

    CsvBuilder csv;
    csv.comments(cfg);
    try {
        if (cfg.kind == "estimate") run_estimate(cfg, csv, summary);
        else if (cfg.kind == "classify") run_classify(cfg, csv, summary);
        else if (cfg.kind == "induction") run_induction(cfg, csv, summary);
        else if (cfg.kind == "coverage") run_coverage(cfg, csv, summary);
        else if (cfg.kind == "two_volume") run_two_volume(cfg, csv, summary);
        else if (cfg.kind == "dynamics") run_dynamics(cfg, csv, summary);
        else if (cfg.kind == "verify") {
            result.exit_code = run_verify(cfg.suite, cfg.threads, log);
            summary["verify_exit"] = result.exit_code;
        } else {
            throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
        }
    } catch (const ConfigError& e) {
        log << e.what() << "\n";
        result.exit_code = 3;
        return result;
    } catch (const Error& e) {
        log << e.what() << "\n";
        result.exit_code = 2;
        return result;
    }

    const auto finished = std::chrono::system_clock::now();
    summary["threads"] = cfg.threads;
    summary["timing"] = {
        {"started_unix_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(started.time_since_epoch()).count()},
        {"elapsed_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(finished - started).count()}};
    result.summary = summary;
    result.csv_lines = csv.lines;

    try {
        const auto open_for_write = [](const std::string& path) {
            const std::filesystem::path parent = std::filesystem::path(path).parent_path();
            std::error_code ec;
            if (!parent.empty()) std::filesystem::create_directories(parent, ec);
            std::ofstream f(path, std::ios::trunc);
            if (!f) throw IoError("cannot open " + path);
            return f;
        };
        if (!cfg.output_csv.empty() && cfg.kind != "verify") {
            std::ofstream f = open_for_write(cfg.output_csv);
            for (const auto& line : result.csv_lines) f << line << "\n";
        }
        if (!cfg.output_json.empty()) {
            std::ofstream f = open_for_write(cfg.output_json);
            f << summary.dump(2) << "\n";
        }
    } catch (const IoError& e) {
        log << e.what() << "\n";
        result.exit_code = 4;
    }
    return result;
}

int run_config_file(const std::string& path, std::ostream& log) {
    std::ifstream f(path);
    if (!f) {
        log << "cannot read config " << path << "\n";
        return 4;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    ExperimentConfig cfg;
    try {
        cfg = parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        log << e.what() << "\n";
        return 3;
    }
    return run_experiment(cfg, log).exit_code;
}

} // namespace loclab
