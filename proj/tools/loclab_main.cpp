// loclab - experiment runner and verification CLI.
//
//   loclab run --config cfg.json [--threads n]
//   loclab verify --suite lemmas|operators|schedules|all [--threads n]
//
// THREADS in the environment overrides --threads.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "loclab/errors.hpp"
#include "loclab/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"finite-volume localization laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string suite = "all";
    int threads = 1;

    CLI::App* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    CLI::Option* run_threads = run->add_option("--threads", threads, "worker threads");

    CLI::App* verify = app.add_subcommand("verify", "run the property suites");
    verify->add_option("--suite", suite, "lemmas|operators|schedules|all");
    CLI::Option* verify_threads = verify->add_option("--threads", threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    const bool threads_given = run_threads->count() > 0 || verify_threads->count() > 0;
    const char* env_threads = std::getenv("THREADS");
    if (env_threads) threads = std::max(1, std::atoi(env_threads));

    try {
        if (run->parsed()) {
            std::ifstream probe(config_path);
            if (!probe) {
                std::cerr << "cannot read config " << config_path << "\n";
                return 4;
            }
            std::stringstream buf;
            buf << probe.rdbuf();
            loclab::ExperimentConfig cfg = loclab::parse_config_text(buf.str());
            // Precedence: THREADS env, then the flag, then the config field.
            if (env_threads || threads_given) cfg.threads = std::max(1, threads);
            return loclab::run_experiment(cfg, std::cerr).exit_code;
        }
        return loclab::run_verify(suite, threads, std::cout);
    } catch (const loclab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
