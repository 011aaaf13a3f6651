// qst command-line tool.
//
//   qst run      --config <path>   parse the config, run the scenario, write output
//   qst validate --config <path>   parse the config only
//
// Exit codes: 0 success, 1 config/usage error, 2 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "qst/config.hpp"
#include "qst/scenarios.hpp"

namespace {

qst::ScenarioConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = qst::io::read_file(path);
    } catch (const std::exception& e) {
        throw qst::ParseError(e.what());
    }
    return qst::parse_config(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qutrit state-transfer scenario runner"};
    app.require_subcommand(1);

    std::string run_config_path;
    std::string validate_config_path;

    CLI::App* run = app.add_subcommand("run", "run a scenario and write its output file");
    run->add_option("--config", run_config_path, "path to a JSON scenario config")->required();

    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", validate_config_path, "path to a JSON scenario config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (validate->parsed()) {
            load_config(validate_config_path);
            std::printf("ok\n");
            return 0;
        }
        const qst::ScenarioConfig cfg = load_config(run_config_path);
        const std::string written = qst::run_scenario(cfg);
        std::printf("wrote %s\n", written.c_str());
        return 0;
    } catch (const qst::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
