#include "inls/io.hpp"

#include "inls/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace inls::io {

namespace {

using nlohmann::json;

void require_open(const std::ofstream& f, const std::filesystem::path& p) {
    if (!f)
        throw ValidationError("cannot open for writing: " + p.string());
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f)
        throw ValidationError("cannot open for reading: " + p.string());
    return f;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const RadialField& u) {
    std::ofstream f(path);
    require_open(f, path);
    f << "r,re,im\n";
    const auto& nodes = u.grid->nodes;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        f << format_double(nodes[i]) << ',' << format_double(u.values[i].real()) << ','
          << format_double(u.values[i].imag()) << '\n';
}

RadialField read_field_csv(const std::filesystem::path& path, GridPtr grid) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("r,re,im", 0) != 0)
        throw ValidationError("field CSV missing r,re,im header: " + path.string());
    std::vector<Complex> values;
    values.reserve(grid->num_nodes());
    std::size_t i = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        double r = 0, re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &re, &im) != 3)
            throw ValidationError("malformed field CSV row: " + line);
        if (i >= grid->num_nodes())
            throw ValidationError("field CSV has more rows than grid nodes");
        if (std::abs(r - grid->nodes[i]) > 1e-12 * std::max(1.0, grid->nodes[i]))
            throw ValidationError("field CSV node " + std::to_string(i) +
                                  " does not match the configured grid");
        values.emplace_back(re, im);
        ++i;
    }
    if (i != grid->num_nodes())
        throw ValidationError("field CSV has fewer rows than grid nodes");
    return make_field(std::move(grid), std::move(values));
}

void write_ground_state_csv(const std::filesystem::path& path, const GroundState& g) {
    std::ofstream f(path);
    require_open(f, path);
    f << "r,Q\n";
    const auto& nodes = g.profile.grid->nodes;
    for (std::size_t i = 0; i < g.profile.values.size(); ++i)
        f << format_double(nodes[i]) << ',' << format_double(g.profile.values[i].real()) << '\n';
}

void write_series_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream f(path);
    require_open(f, path);
    const bool with_extras = !traj.extras.empty();
    f << "t,mass,energy,kinetic_h,grad_sq,quartic,kfun,me_product,kin_product";
    if (with_extras)
        f << ",I,Iprime,Isecond,exterior_mass_R";
    f << '\n';
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& s = traj.snapshots[i];
        f << format_double(s.t) << ',' << format_double(s.mass) << ',' << format_double(s.energy)
          << ',' << format_double(s.kinetic_h) << ',' << format_double(s.grad_sq) << ','
          << format_double(s.quartic) << ',' << format_double(s.kfun) << ','
          << format_double(s.me_product) << ',' << format_double(s.kin_product);
        if (with_extras) {
            const auto& e = traj.extras[i];
            f << ',' << format_double(e.variance) << ',' << format_double(e.virial_first) << ','
              << format_double(e.virial_second) << ',' << format_double(e.exterior_mass);
        }
        f << '\n';
    }
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& meta,
                     const RadialField& u) {
    std::filesystem::create_directories(dir);
    write_field_csv(dir / "checkpoint_field.csv", u);
    json j;
    j["t"] = meta.t;
    j["step"] = meta.step;
    j["dt"] = meta.dt;
    j["b"] = meta.b;
    j["potential"] = json::parse(meta.potential_json);
    j["sponge"] = json::parse(meta.sponge_json);
    j["config_hash"] = meta.config_hash;
    j["baseline"] = {{"mass", meta.mass0}, {"energy", meta.energy0}, {"grad_sq", meta.grad_sq0}};
    std::ofstream f(dir / "checkpoint.json");
    require_open(f, dir / "checkpoint.json");
    f << j.dump(2) << '\n';
}

std::pair<Checkpoint, RadialField> load_checkpoint(const std::filesystem::path& dir,
                                                   GridPtr grid) {
    auto f = open_in(dir / "checkpoint.json");
    json j = json::parse(f, nullptr, true);
    Checkpoint meta;
    meta.t = j.at("t").get<double>();
    meta.step = j.at("step").get<std::uint64_t>();
    meta.dt = j.at("dt").get<double>();
    meta.b = j.at("b").get<double>();
    meta.potential_json = j.at("potential").dump();
    meta.sponge_json = j.at("sponge").dump();
    meta.config_hash = j.value("config_hash", "");
    meta.mass0 = j.at("baseline").at("mass").get<double>();
    meta.energy0 = j.at("baseline").at("energy").get<double>();
    meta.grad_sq0 = j.at("baseline").at("grad_sq").get<double>();
    RadialField u = read_field_csv(dir / "checkpoint_field.csv", std::move(grid));
    return {std::move(meta), std::move(u)};
}

} // namespace inls::io
