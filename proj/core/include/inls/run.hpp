#pragma once

#include "inls/diagnostics.hpp"
#include "inls/evolution.hpp"
#include "inls/potential.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace inls {

enum class Command { groundstate, thresholds, kato, check, evolve, classify, sweep };

struct InitialSpec {
    enum class Kind { gaussian, scaled_ground, file };
    Kind kind = Kind::gaussian;
    double amp = 1e-3;
    double width = 1.0;
    double lambda = 1.0;
    std::string path;
};

struct DiagSpec {
    std::optional<double> cutoff_R;
    std::optional<double> exterior_R;
};

/// Cartesian parameter grid; dimensions left empty fall back to the single
/// configured value. Cells run independently, rows stay in grid order.
struct SweepSpec {
    std::vector<double> b;
    std::vector<double> c;
    std::vector<double> lambda;
    std::vector<double> amp;
};

struct RunConfig {
    Command command = Command::thresholds;
    double b = 0.5;
    Potential potential = Potential::zero();
    double r_max = 32.0;
    std::size_t n = 8192;
    InitialSpec initial;
    EvolveConfig evolve;
    DiagSpec diag;
    std::optional<SweepSpec> sweep;
    bool observe = false;
    std::optional<std::uint64_t> checkpoint_every;
    std::optional<std::string> resume_from;
    std::string canonical_json; // normalized echo, hashed for the output dir
};

RunConfig parse_config_json(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

std::string config_hash(const RunConfig& cfg);

struct RunResult {
    std::filesystem::path out_dir;
};

/// Executes one config. Artifacts land in out_root/<config-hash>/.
/// Throws ValidationError / SolverError / InternalConsistencyError; the CLI
/// maps these to exit codes 2 / 3 / 4.
RunResult run(const RunConfig& cfg, const std::filesystem::path& out_root, int jobs = 1);

std::string command_name(Command c);

} // namespace inls
