#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mhdlab/app/config.hpp"
#include "mhdlab/app/output.hpp"
#include "mhdlab/app/runners.hpp"
#include "mhdlab/errors.hpp"

namespace {

int report_error(std::string_view kind, const std::string& message, int code)
{
    mhdlab::app::json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace mhdlab;
    CLI::App cli{"Linearized MHD shear-flow damping laboratory"};
    cli.require_subcommand(1);

    std::string config_path;
    app::RunOptions opts;
    std::string out = opts.out.string();
    cli.add_option("--config", config_path, "TOML run configuration (defaults apply when omitted)");
    cli.add_option("--out", out, "output directory")->capture_default_str();
    cli.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
    cli.add_flag("--verbose", opts.verbose, "progress on stderr");

    const std::map<std::string, std::string> help{
        {"evolve", "time-step the linearized system and write snapshots and norm series"},
        {"toy", "closed-form toy model: mixing series and point traces"},
        {"resolvent-scan", "uniform resolvent bound over a grid of complex c"},
        {"depletion-scan", "|Phi| and |dPhi| at each critical point as c approaches the critical value"},
        {"dunford", "contour and jump reconstructions compared with time stepping"},
        {"diagnose", "decay fits, accumulator and depletion traces for one trajectory"},
        {"suite", "run the acceptance battery"},
    };
    for (const std::string& name : app::subcommands()) cli.add_subcommand(name, help.at(name))->fallthrough();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e);
    }
    opts.out = out;
    const std::string name = cli.get_subcommands().front()->get_name();

    try {
        app::RunConfig cfg = config_path.empty() ? app::parse_config("", "<defaults>") : app::load_config(config_path);
        app::apply_environment(cfg);
        app::validate(cfg);
        return app::run_subcommand(name, cfg, opts);
    } catch (const Error& e) {
        return report_error(error_name(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const std::exception& e) {
        return report_error("InternalError", e.what(), 3);
    }
}
