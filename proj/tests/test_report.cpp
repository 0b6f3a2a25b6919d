#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "loclab/errors.hpp"
#include "loclab/report.hpp"
#include "loclab/rng.hpp"

using namespace loclab;

namespace {

nlohmann::json small_estimate_config() {
    return nlohmann::json{{"kind", "estimate"},
                          {"quantity", "Pk"},
                          {"graph", {{"kind", "lattice"}, {"dim", 1}}},
                          {"ensemble", {{"kind", "uniform01"}, {"coupling", 8.0}}},
                          {"params", {{"preset", "section2"}, {"m", 0.5}, {"L0", 6}}},
                          {"scale", 6},
                          {"energy", 6.0},
                          {"trials", 20},
                          {"seed_base", 4242}};
}

} // namespace

TEST_CASE("config parsing is strict") {
    CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{\"kind\":\"estimate\",\"bogus\":1}"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{\"kind\":\"sorcery\"}"), ConfigError);

    nlohmann::json nested = small_estimate_config();
    nested["ensemble"]["flavor"] = "salt";
    CHECK_THROWS_AS(parse_config(nested), ConfigError);

    nlohmann::json bad_version = small_estimate_config();
    bad_version["schema_version"] = 99;
    CHECK_THROWS_AS(parse_config(bad_version), ConfigError);

    nlohmann::json override_needs_custom = small_estimate_config();
    override_needs_custom["params"]["alpha"] = 1.4;
    CHECK_THROWS_AS(parse_config(override_needs_custom), ConfigError);

    const ExperimentConfig cfg = parse_config(small_estimate_config());
    CHECK(cfg.kind == "estimate");
    CHECK(cfg.params.preset == ParamPreset::section2);
    CHECK(cfg.params.m == 0.5);
    CHECK(cfg.ensemble.coupling == 8.0);

    const nlohmann::json resolved = resolved_config_json(cfg);
    CHECK(resolved["params"]["alpha"] == 1.5);
    CHECK(resolved["params"]["tau"] == 0.125);
}

TEST_CASE("seed derivation contract") {
    CHECK(derive_seed(0, 0) == 0xE220A8397B1DCDAFull);
    CHECK(derive_seed(0, 1) != derive_seed(0, 0));
    CHECK(derive_seed(1, 0) != derive_seed(0, 0));
}

TEST_CASE("runs are reproducible byte for byte") {
    ExperimentConfig cfg = parse_config(small_estimate_config());
    std::ostringstream log;
    const RunResult first = run_experiment(cfg, log);
    const RunResult second = run_experiment(cfg, log);
    CHECK(first.exit_code == 0);
    CHECK(first.csv_lines == second.csv_lines);
    CHECK(first.csv_lines.size() == 3 + 1 + 20); // comments, header, rows

    // Thread count must not leak into the rows.
    cfg.threads = 2;
    const RunResult threaded = run_experiment(cfg, log);
    CHECK(threaded.csv_lines == first.csv_lines);

    // The CSV embeds the config echo.
    CHECK(first.csv_lines[1].rfind("# config ", 0) == 0);
    CHECK(first.csv_lines[2].rfind("# resolved ", 0) == 0);
}

TEST_CASE("run writes the configured outputs") {
    nlohmann::json doc = small_estimate_config();
    doc["output_csv"] = "/tmp/loclab_test_out.csv";
    doc["output_json"] = "/tmp/loclab_test_out.json";
    const ExperimentConfig cfg = parse_config(doc);
    std::ostringstream log;
    const RunResult r = run_experiment(cfg, log);
    CHECK(r.exit_code == 0);

    std::ifstream csv("/tmp/loclab_test_out.csv");
    REQUIRE(csv.good());
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 24);

    std::ifstream js("/tmp/loclab_test_out.json");
    REQUIRE(js.good());
    nlohmann::json summary = nlohmann::json::parse(js);
    CHECK(summary["schema_version"] == kSchemaVersion);
    CHECK(summary["config"] == cfg.raw);
    CHECK(summary["estimate"]["trials"] == 20);
    CHECK(summary.contains("timing"));
    std::remove("/tmp/loclab_test_out.csv");
    std::remove("/tmp/loclab_test_out.json");
}

TEST_CASE("exit codes") {
    std::ostringstream log;

    // Config errors surface as exit 3.
    nlohmann::json doc = small_estimate_config();
    doc["quantity"] = "Zk";
    const RunResult bad = run_experiment(parse_config(doc), log);
    CHECK(bad.exit_code == 3);

    // I/O failures surface as exit 4.
    nlohmann::json io = small_estimate_config();
    io["output_csv"] = "/proc/loclab-denied/out.csv";
    const RunResult broken = run_experiment(parse_config(io), log);
    CHECK(broken.exit_code == 4);

    // Unknown verify suite is a config error.
    CHECK(run_verify("sorcery", 1, log) == 3);
}

TEST_CASE("verify suites pass on a healthy build") {
    std::ostringstream log;
    const SuiteResult schedules = verify_schedules(2, log);
    CHECK(schedules.failures == 0);
    CHECK(schedules.checks > 10);
}

TEST_CASE("experiment kinds produce their report shapes") {
    std::ostringstream log;

    // Coverage experiment with an explicitly tolerated infeasible schedule.
    nlohmann::json cov{{"kind", "coverage"},
                       {"graph", {{"kind", "lattice"}, {"dim", 1}}},
                       {"ensemble", {{"kind", "uniform01"}, {"coupling", 5.0}}},
                       {"params", {{"preset", "section2"}}},
                       {"scale", 8},
                       {"interval", {0.0, 1.0}},
                       {"trials", 10},
                       {"seed_base", 7},
                       {"schedule", {{"framework", "fmm"}, {"m", 1.0}, {"allow_infeasible", true}}}};
    const RunResult cov_run = run_experiment(parse_config(cov), log);
    CHECK(cov_run.exit_code == 0);
    CHECK(cov_run.summary["coverage"]["violations"] == 0);
    CHECK(cov_run.summary["coverage"]["schedule"]["feasible"] == false);

    // The same schedule without the flag is a config-level failure.
    nlohmann::json strict = cov;
    strict["schedule"].erase("allow_infeasible");
    const RunResult refused = run_experiment(parse_config(strict), log);
    CHECK(refused.exit_code == 2);

    // Wegner estimate through the run interface.
    nlohmann::json weg{{"kind", "estimate"},
                       {"quantity", "wegner"},
                       {"graph", {{"kind", "interval"}, {"n", 24}}},
                       {"ensemble", {{"kind", "uniform01"}, {"coupling", 1.0}}},
                       {"params", {{"preset", "section2"}}},
                       {"energy", 2.5},
                       {"epsilons", {0.01}},
                       {"trials", 200},
                       {"seed_base", 99}};
    const RunResult weg_run = run_experiment(parse_config(weg), log);
    CHECK(weg_run.exit_code == 0);
    CHECK(weg_run.summary["wegner"][0]["within_margin"] == true);

    // Dynamics decay rows follow the (distance, mean, median, ci) schema.
    nlohmann::json dyn{{"kind", "dynamics"},
                       {"mode", "decay"},
                       {"graph", {{"kind", "interval"}, {"n", 60}}},
                       {"ensemble", {{"kind", "uniform01"}, {"coupling", 10.0}}},
                       {"params", {{"preset", "section2"}}},
                       {"distances", {4, 8, 12}},
                       {"trials", 40},
                       {"seed_base", 11}};
    const RunResult dyn_run = run_experiment(parse_config(dyn), log);
    CHECK(dyn_run.exit_code == 0);
    CHECK(dyn_run.csv_lines[3] == "distance,mean,median,ci_low,ci_high");
    CHECK(dyn_run.summary["decay"].contains("slope"));
}

TEST_CASE("double formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.25, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
