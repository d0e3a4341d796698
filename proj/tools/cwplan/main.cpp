#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "cwplan/run.hpp"
#include "cwplan/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Impulsive relative-motion planning under path constraints on the "
        "Clohessy-Wiltshire model"};
    app.set_version_flag("--version",
                         std::string("cwplan ") + cwplan::kVersion);
    app.require_subcommand(1);

    std::string scenario;
    cwplan::io::RunOptions options;

    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"propagate", "Coast an initial state and check path constraints"},
        {"bound", "Spherical and conic bounds on the interior position"},
        {"reach", "Sample the two-impulse reachable surface"},
        {"invert", "Recover (t, dt) from a reached position"},
        {"plan-cfk", "Ring-formation feasibility and coverage maps"},
        {"plan-cfm", "Flight-time-independent keep-out tour certificates"},
        {"verify-facts", "Numeric verification of the spectral identities"},
    };
    for (const auto& [name, description] : subcommands) {
        CLI::App* cmd = app.add_subcommand(name, description);
        cmd->add_option("--scenario", scenario, "Scenario file (JSON)")
            ->required();
        cmd->add_option("--out", options.out_dir,
                        "Output directory (overrides the scenario)");
        cmd->add_option("--set", options.overrides,
                        "Override a scenario value: dotted.path=value");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    return cwplan::io::run(subcommand, scenario, options);
}
