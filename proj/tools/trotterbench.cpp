// trotterbench: run one experiment from a JSON config.
//
//   trotterbench <check|converge|semigroup|bounds> --config <path> [--out <dir>] [--stdout] [--threads <k>]

#include "trotter/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    namespace h = trotter::harness;

    CLI::App app{"Trotter product convergence bench"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool to_stdout = false;
    unsigned threads = 1;

    for (const char* name : {"check", "converge", "semigroup", "bounds"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory for report.json and table.csv");
        sub->add_flag("--stdout", to_stdout, "also print report.json to stdout");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : h::kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const h::ExperimentConfig config = h::load_config(config_path);
        const h::RunResult result = h::run_command(command, config, threads);
        h::write_outputs(result, out_dir);
        if (to_stdout) {
            std::cout << result.report.dump(2) << '\n';
        }
        std::cerr << result.summary << '\n';
        return result.exit_code;
    } catch (const trotter::Error& e) {
        std::cerr << "trotterbench " << command << ": " << e.what() << '\n';
        return h::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "trotterbench " << command << ": " << e.what() << '\n';
        return h::kExitNumeric;
    }
}
