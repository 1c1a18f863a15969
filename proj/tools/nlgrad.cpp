#include "nlgrad/cli.hpp"
#include "nlgrad/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

int do_run(const std::string& config_path) {
    std::string output_dir = "out";
    try {
        const nlgrad::ConfigFile cfg = nlgrad::ConfigFile::parse_file(config_path);
        const nlgrad::RunConfig rc = nlgrad::parse_run_config(cfg);
        output_dir = rc.output_dir;
        nlgrad::run_experiment(rc, cfg);
        return 0;
    } catch (const nlgrad::Error& e) {
        if (e.kind() == nlgrad::ErrorKind::ConfigParse) {
            std::cerr << "validation error: " << e.what() << "\n";
            return 2;
        }
        std::cerr << "experiment failed: " << e.what() << "\n";
        // diagnostic report, written where the experiment would have reported
        std::error_code ec;
        std::filesystem::create_directories(output_dir, ec);
        if (!ec) {
            nlohmann::json diag;
            diag["version"] = nlgrad::version_string;
            diag["error"] = e.what();
            std::ofstream out(std::filesystem::path(output_dir) / "diagnostic.json");
            out << diag.dump(2) << "\n";
        }
        return 3;
    }
}

int do_validate(const std::string& config_path) {
    try {
        const nlgrad::ConfigFile cfg = nlgrad::ConfigFile::parse_file(config_path);
        std::cout << nlgrad::validate_config(cfg) << "\n";
        return 0;
    } catch (const nlgrad::Error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal gradient experiments"};
    app.require_subcommand(1);

    std::string run_config, validate_config;
    CLI::App* run = app.add_subcommand("run", "execute the experiment described by a config file");
    run->add_option("config", run_config, "TOML config file")->required();
    CLI::App* val = app.add_subcommand("validate", "check a config file without computing");
    val->add_option("config", validate_config, "TOML config file")->required();
    CLI::App* list = app.add_subcommand("list-kernels", "print the shipped kernel families");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return do_run(run_config);
    if (val->parsed()) return do_validate(validate_config);
    if (list->parsed()) {
        std::cout << nlgrad::list_kernels();
        return 0;
    }
    return 2;
}
