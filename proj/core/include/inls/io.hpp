#pragma once

#include "inls/evolution.hpp"
#include "inls/grid.hpp"
#include "inls/ground_state.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace inls::io {

/// Fields serialize as CSV r,re,im with 17 significant digits, which
/// round-trips IEEE doubles exactly.
void write_field_csv(const std::filesystem::path& path, const RadialField& u);
RadialField read_field_csv(const std::filesystem::path& path, GridPtr grid);

/// Ground-state profile CSV (r, Q).
void write_ground_state_csv(const std::filesystem::path& path, const GroundState& g);

/// Trajectory time series. Appends diagnostics columns
/// I,Iprime,Isecond,exterior_mass_R when the trajectory carries extras.
void write_series_csv(const std::filesystem::path& path, const Trajectory& traj);

std::string fnv1a_hex(std::string_view data);

struct Checkpoint {
    double t = 0.0;
    std::uint64_t step = 0;
    double dt = 0.0;
    double b = 0.0;
    std::string potential_json; // {"kind":...,"c":...}
    std::string sponge_json;
    std::string config_hash;
    // conservation baselines of the original run
    double mass0 = 0.0;
    double energy0 = 0.0;
    double grad_sq0 = 0.0;
};

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& meta,
                     const RadialField& u);
std::pair<Checkpoint, RadialField> load_checkpoint(const std::filesystem::path& dir,
                                                   GridPtr grid);

std::string format_double(double v); // 17 significant digits; inf/nan as text

} // namespace inls::io
