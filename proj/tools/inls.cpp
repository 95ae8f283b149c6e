#include "inls/errors.hpp"
#include "inls/run.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>

namespace {

void emit_error(const char* kind, const std::string& detail) {
    nlohmann::json j{{"error", kind}, {"detail", detail}};
    std::cerr << j.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inls: numerical laboratory for the 3d radial cubic focusing "
                 "inhomogeneous NLS with a potential"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root = "out";
    int jobs = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "execute a JSON run config");
    run_cmd->add_option("config", config_path, "path to the run config (JSON)")->required();
    run_cmd->add_option("--out", out_root, "output root directory (default: out)");
    run_cmd->add_option("--jobs", jobs, "concurrent sweep cells")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        const inls::RunConfig cfg = inls::parse_config_file(config_path);
        const inls::RunResult result = inls::run(cfg, out_root, jobs);
        std::cout << result.out_dir.string() << '\n';
        return 0;
    } catch (const inls::ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const inls::SolverError& e) {
        emit_error("solver", e.what());
        return 3;
    } catch (const inls::InternalConsistencyError& e) {
        emit_error("internal_consistency", e.what());
        return 4;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 4;
    }
}
