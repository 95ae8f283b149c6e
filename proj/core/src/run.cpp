#include "inls/run.hpp"

#include "inls/errors.hpp"
#include "inls/io.hpp"

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace inls {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// JSON has no infinities; the -inf mass-energy sentinel serializes as text.
json jnum(double v) {
    if (std::isfinite(v)) return v;
    return io::format_double(v);
}

json potential_to_json(const Potential& V) {
    return {{"kind", V.name()}, {"c", V.amplitude()}};
}

json sponge_to_json(const SpongeConfig& s) {
    return {{"on", s.on}, {"width", s.width}, {"strength", s.strength}};
}

Potential potential_from_json(const json& j) {
    const std::string kind = j.value("kind", "zero");
    const double c = j.value("c", 0.0);
    if (kind == "zero") {
        if (c != 0.0)
            throw ValidationError("potential kind 'zero' takes no amplitude: got c=" +
                                  io::format_double(c));
        return Potential::zero();
    }
    if (kind == "gaussian_repulsive") return Potential::gaussian_repulsive(c);
    if (kind == "gaussian_well") return Potential::gaussian_well(c);
    if (kind == "softcore") return Potential::softcore(c);
    throw ValidationError("unknown potential kind: " + kind);
}

Command command_from_string(const std::string& s) {
    if (s == "groundstate") return Command::groundstate;
    if (s == "thresholds") return Command::thresholds;
    if (s == "kato") return Command::kato;
    if (s == "check") return Command::check;
    if (s == "evolve") return Command::evolve;
    if (s == "classify") return Command::classify;
    if (s == "sweep") return Command::sweep;
    throw ValidationError("unknown command: " + s);
}

json thresholds_to_json(const Thresholds& t) {
    return {{"b", t.b},
            {"s_c", t.s_c},
            {"script_e", t.script_e},
            {"script_k", t.script_k},
            {"c_gn", t.c_gn},
            {"branch", t.branch == ThresholdBranch::free_or_nonneg ? "free" : "well"}};
}

json hypothesis_to_json(const HypothesisReport& h) {
    json checks = json::array();
    for (const auto& c : h.checks)
        checks.push_back(
            {{"name", c.name}, {"status", check_status_name(c.status)}, {"evidence", jnum(c.evidence)}});
    return {{"theorem", theorem_name(h.theorem)}, {"overall", h.overall ? "pass" : "fail"},
            {"checks", checks}};
}

json ground_sidecar(const GroundState& g) {
    return {{"omega", g.omega},
            {"b", g.b},
            {"branch", g.branch == GroundStateBranch::free_q ? "free" : "with_potential"},
            {"residuals", {g.residuals[0], g.residuals[1], g.residuals[2]}},
            {"mass", g.mass},
            {"grad_sq", g.grad_sq},
            {"quartic", g.quartic}};
}

json outcome_to_json(const Outcome& o) {
    return {{"kind", outcome_name(o.kind)}, {"t_star", o.t_star}};
}

json classification_to_json(const ClassificationReport& r) {
    json j;
    j["thresholds"] = thresholds_to_json(r.thresholds);
    j["me_product"] = jnum(r.me);
    j["kin_product"] = jnum(r.kin);
    j["margin_e"] = jnum(r.margin_e);
    j["margin_k"] = jnum(r.margin_k);
    j["hypotheses"] = {hypothesis_to_json(r.t11), hypothesis_to_json(r.t12),
                       hypothesis_to_json(r.t14)};
    j["prediction"] = prediction_name(r.prediction);
    if (!r.note.empty()) j["note"] = r.note;
    if (r.observed) j["observed"] = outcome_to_json(*r.observed);
    if (r.consistent) j["consistent"] = *r.consistent;
    return j;
}

double require_range(const json& j, const char* key, double lo, double hi, double dflt,
                     bool open = true) {
    if (!j.contains(key)) return dflt;
    const double v = j.at(key).get<double>();
    const bool ok = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!std::isfinite(v) || !ok) {
        std::ostringstream os;
        os << key << " must lie in " << (open ? "(" : "[") << lo << ", " << hi
           << (open ? ")" : "]") << ": got " << v;
        throw ValidationError(os.str());
    }
    return v;
}

} // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    if (!j.contains("command"))
        throw ValidationError("config missing required key: command");
    cfg.command = command_from_string(j.at("command").get<std::string>());

    cfg.b = require_range(j, "b", 0.0, 1.0, 0.5);

    if (j.contains("potential"))
        cfg.potential = potential_from_json(j.at("potential"));

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        cfg.r_max = g.value("r_max", 32.0);
        if (!std::isfinite(cfg.r_max) || cfg.r_max <= 0.0)
            throw ValidationError("grid.r_max must be finite and > 0: got " +
                                  io::format_double(cfg.r_max));
        const auto n = g.value("n", static_cast<std::int64_t>(8192));
        if (n < 64)
            throw ValidationError("grid.n must be >= 64: got " + std::to_string(n));
        cfg.n = static_cast<std::size_t>(n);
    }

    if (j.contains("initial")) {
        const json& in = j.at("initial");
        const std::string kind = in.value("kind", "gaussian");
        if (kind == "gaussian") {
            cfg.initial.kind = InitialSpec::Kind::gaussian;
            cfg.initial.amp = in.value("amp", 1e-3);
            cfg.initial.width = in.value("width", 1.0);
            if (!std::isfinite(cfg.initial.amp))
                throw ValidationError("initial.amp must be finite");
            if (!(cfg.initial.width > 0.0))
                throw ValidationError("initial.width must be > 0: got " +
                                      io::format_double(cfg.initial.width));
        } else if (kind == "scaled_ground") {
            cfg.initial.kind = InitialSpec::Kind::scaled_ground;
            cfg.initial.lambda = in.value("lambda", 1.0);
            if (!std::isfinite(cfg.initial.lambda))
                throw ValidationError("initial.lambda must be finite");
        } else if (kind == "file") {
            cfg.initial.kind = InitialSpec::Kind::file;
            if (!in.contains("path"))
                throw ValidationError("initial.kind 'file' requires initial.path");
            cfg.initial.path = in.at("path").get<std::string>();
        } else {
            throw ValidationError("unknown initial.kind: " + kind);
        }
    }

    if (j.contains("evolve")) {
        const json& e = j.at("evolve");
        cfg.evolve.t_end = e.value("t_end", 1.0);
        if (!(cfg.evolve.t_end > 0.0))
            throw ValidationError("evolve.t_end must be > 0: got " +
                                  io::format_double(cfg.evolve.t_end));
        cfg.evolve.dt = e.value("dt", 1e-3);
        if (!(cfg.evolve.dt > 0.0))
            throw ValidationError("evolve.dt must be > 0: got " + io::format_double(cfg.evolve.dt));
        const auto re = e.value("record_every", static_cast<std::int64_t>(10));
        if (re < 1)
            throw ValidationError("evolve.record_every must be >= 1: got " + std::to_string(re));
        cfg.evolve.record_every = static_cast<std::size_t>(re);
        cfg.evolve.blowup_factor = e.value("blowup_factor", 10.0);
        if (!(cfg.evolve.blowup_factor > 1.0))
            throw ValidationError("evolve.blowup_factor must be > 1: got " +
                                  io::format_double(cfg.evolve.blowup_factor));
        cfg.evolve.drift_tol = e.value("drift_tol", 1e-5);
        if (!(cfg.evolve.drift_tol > 0.0))
            throw ValidationError("evolve.drift_tol must be > 0");
        if (e.contains("sponge")) {
            const json& s = e.at("sponge");
            cfg.evolve.sponge.on = s.value("on", false);
            cfg.evolve.sponge.width = s.value("width", 4.0);
            cfg.evolve.sponge.strength = s.value("strength", 2.0);
            if (cfg.evolve.sponge.on) {
                if (!(cfg.evolve.sponge.width > 0.0 && cfg.evolve.sponge.width < cfg.r_max / 4.0))
                    throw ValidationError("sponge.width must satisfy 0 < width < r_max/4");
                if (!(cfg.evolve.sponge.strength > 0.0))
                    throw ValidationError("sponge.strength must be > 0");
            }
        }
        if (e.contains("checkpoint_every")) {
            const auto ce = e.at("checkpoint_every").get<std::int64_t>();
            if (ce < 1)
                throw ValidationError("evolve.checkpoint_every must be >= 1");
            if (static_cast<std::size_t>(ce) % cfg.evolve.record_every != 0)
                throw ValidationError(
                    "evolve.checkpoint_every must be a multiple of record_every");
            cfg.checkpoint_every = static_cast<std::uint64_t>(ce);
        }
        if (e.contains("resume_from"))
            cfg.resume_from = e.at("resume_from").get<std::string>();
    }

    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        if (d.contains("cutoff_R")) {
            const double R = d.at("cutoff_R").get<double>();
            if (!(R > 0.0))
                throw ValidationError("diagnostics.cutoff_R must be > 0");
            cfg.diag.cutoff_R = R;
        }
        if (d.contains("exterior_R")) {
            const double R = d.at("exterior_R").get<double>();
            if (!(R > 0.0 && R < cfg.r_max))
                throw ValidationError("diagnostics.exterior_R must satisfy 0 < R < r_max");
            cfg.diag.exterior_R = R;
        }
    }

    cfg.observe = j.value("observe", false);

    if (j.contains("sweep")) {
        SweepSpec sw;
        const json& s = j.at("sweep");
        auto read_dim = [&](const char* key, std::vector<double>& out) {
            if (!s.contains(key)) return;
            out = s.at(key).get<std::vector<double>>();
            if (out.empty())
                throw ValidationError(std::string("sweep.") + key + " grid must be non-empty");
        };
        read_dim("b", sw.b);
        read_dim("c", sw.c);
        read_dim("lambda", sw.lambda);
        read_dim("amp", sw.amp);
        for (double bv : sw.b)
            if (!(bv > 0.0 && bv < 1.0))
                throw ValidationError("sweep.b values must lie in (0,1): got " +
                                      io::format_double(bv));
        if (sw.b.empty() && sw.c.empty() && sw.lambda.empty() && sw.amp.empty())
            throw ValidationError("sweep grid is empty: provide at least one of b/c/lambda/amp");
        if (!sw.lambda.empty() && !sw.amp.empty())
            throw ValidationError("sweep cannot vary both lambda and amp");
        cfg.sweep = std::move(sw);
    }
    if (cfg.command == Command::sweep && !cfg.sweep)
        throw ValidationError("command 'sweep' requires a sweep grid");

    // canonical echo of the effective settings, used for hashing
    json canon;
    canon["command"] = command_name(cfg.command);
    canon["b"] = cfg.b;
    canon["potential"] = potential_to_json(cfg.potential);
    canon["grid"] = {{"r_max", cfg.r_max}, {"n", cfg.n}};
    switch (cfg.initial.kind) {
    case InitialSpec::Kind::gaussian:
        canon["initial"] = {{"kind", "gaussian"}, {"amp", cfg.initial.amp},
                            {"width", cfg.initial.width}};
        break;
    case InitialSpec::Kind::scaled_ground:
        canon["initial"] = {{"kind", "scaled_ground"}, {"lambda", cfg.initial.lambda}};
        break;
    case InitialSpec::Kind::file:
        canon["initial"] = {{"kind", "file"}, {"path", cfg.initial.path}};
        break;
    }
    canon["evolve"] = {{"t_end", cfg.evolve.t_end},
                       {"dt", cfg.evolve.dt},
                       {"record_every", cfg.evolve.record_every},
                       {"blowup_factor", cfg.evolve.blowup_factor},
                       {"drift_tol", cfg.evolve.drift_tol},
                       {"sponge", sponge_to_json(cfg.evolve.sponge)}};
    if (cfg.diag.cutoff_R) canon["diagnostics"]["cutoff_R"] = *cfg.diag.cutoff_R;
    if (cfg.diag.exterior_R) canon["diagnostics"]["exterior_R"] = *cfg.diag.exterior_R;
    if (cfg.observe) canon["observe"] = true;
    if (cfg.sweep) {
        json s;
        if (!cfg.sweep->b.empty()) s["b"] = cfg.sweep->b;
        if (!cfg.sweep->c.empty()) s["c"] = cfg.sweep->c;
        if (!cfg.sweep->lambda.empty()) s["lambda"] = cfg.sweep->lambda;
        if (!cfg.sweep->amp.empty()) s["amp"] = cfg.sweep->amp;
        canon["sweep"] = s;
    }
    cfg.canonical_json = canon.dump();
    return cfg;
}

RunConfig parse_config_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f)
        throw ValidationError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_json(buf.str());
}

std::string config_hash(const RunConfig& cfg) {
    return io::fnv1a_hex(cfg.canonical_json);
}

namespace {

bool sampled_nonneg(const Potential& V, const RadialGrid& grid) {
    for (double r : grid.nodes)
        if (V.eval(r) < 0.0) return false;
    return true;
}
bool sampled_nonpos(const Potential& V, const RadialGrid& grid) {
    for (double r : grid.nodes)
        if (V.eval(r) > 0.0) return false;
    return true;
}

bool needs_well_state(const Potential& V, const RadialGrid& grid) {
    return sampled_nonpos(V, grid) && !V.negative_part_is_zero();
}

RadialField build_initial(const RunConfig& cfg, GridPtr grid, const GroundState* free_q) {
    switch (cfg.initial.kind) {
    case InitialSpec::Kind::gaussian:
        return gaussian_field(grid, cfg.initial.amp, cfg.initial.width);
    case InitialSpec::Kind::scaled_ground: {
        if (!free_q)
            throw MissingGroundStateError("initial scaled_ground requires the free ground state");
        std::vector<Complex> v = free_q->profile.values;
        for (auto& x : v) x *= cfg.initial.lambda;
        return make_field(std::move(grid), std::move(v));
    }
    case InitialSpec::Kind::file:
        return io::read_field_csv(cfg.initial.path, std::move(grid));
    }
    throw ValidationError("unreachable initial kind");
}

struct EvolveArtifacts {
    Trajectory traj;
    double max_mass_drift = 0.0;
    double max_energy_drift = 0.0;
};

EvolveArtifacts run_evolution(const RunConfig& cfg, GridPtr grid, const RadialField& u0,
                              const std::optional<fs::path>& checkpoint_dir,
                              const std::string& hash) {
    const Potential& V = cfg.potential;
    const double b = cfg.b;

    std::optional<CutoffProfile> cutoff;
    if (cfg.diag.cutoff_R) cutoff = CutoffProfile::quadratic_capped(*cfg.diag.cutoff_R);
    ExtrasFn extras;
    const ExtrasFn* extras_ptr = nullptr;
    if (cutoff || cfg.diag.exterior_R) {
        extras = make_extras_fn(grid, V, b, cutoff, cfg.diag.exterior_R);
        extras_ptr = &extras;
    }

    RadialField u = u0;
    std::uint64_t step = 0;
    FunctionalSnapshot baseline = make_snapshot(*grid, u0, V, b, 0.0);

    if (cfg.resume_from) {
        auto [meta, field] = io::load_checkpoint(*cfg.resume_from, grid);
        if (meta.dt != cfg.evolve.dt || meta.b != cfg.b)
            throw ValidationError("checkpoint dt/b do not match the config");
        if (!meta.config_hash.empty() && meta.config_hash != hash)
            throw ValidationError("checkpoint was produced by a different config (hash mismatch)");
        u = std::move(field);
        step = meta.step;
        baseline.mass = meta.mass0;
        baseline.energy = meta.energy0;
        baseline.grad_sq = meta.grad_sq0;
    }

    const auto n_total = static_cast<std::uint64_t>(std::ceil(cfg.evolve.t_end / cfg.evolve.dt - 1e-12));
    if (step >= n_total)
        throw ValidationError("resume point is at or past t_end");

    EvolveArtifacts art;
    art.traj.sponge_used = cfg.evolve.sponge.on;
    bool first_segment = true;

    while (step < n_total) {
        const std::uint64_t seg =
            cfg.checkpoint_every ? std::min<std::uint64_t>(*cfg.checkpoint_every, n_total - step)
                                 : (n_total - step);
        EvolveConfig ec = cfg.evolve;
        ec.t_end = static_cast<double>(step + seg) * cfg.evolve.dt;
        Trajectory tr = evolve(u, V, b, ec, extras_ptr, step, &baseline);

        const std::size_t skip = first_segment ? 0 : 1;
        art.traj.snapshots.insert(art.traj.snapshots.end(), tr.snapshots.begin() + skip,
                                  tr.snapshots.end());
        if (!tr.extras.empty())
            art.traj.extras.insert(art.traj.extras.end(), tr.extras.begin() + skip,
                                   tr.extras.end());
        art.traj.final_field = tr.final_field;
        art.traj.outcome = tr.outcome;
        first_segment = false;

        if (tr.outcome.kind != OutcomeKind::completed) break;

        step += seg;
        u = art.traj.final_field;
        if (checkpoint_dir && step < n_total) {
            io::Checkpoint meta;
            meta.t = static_cast<double>(step) * cfg.evolve.dt;
            meta.step = step;
            meta.dt = cfg.evolve.dt;
            meta.b = cfg.b;
            meta.potential_json = potential_to_json(V).dump();
            meta.sponge_json = sponge_to_json(cfg.evolve.sponge).dump();
            meta.config_hash = hash;
            meta.mass0 = baseline.mass;
            meta.energy0 = baseline.energy;
            meta.grad_sq0 = baseline.grad_sq;
            io::save_checkpoint(*checkpoint_dir, meta, u);
        }
        if (step >= n_total) {
            art.traj.outcome = {OutcomeKind::completed, static_cast<double>(n_total) * cfg.evolve.dt};
        }
    }

    const double m0 = baseline.mass, e0 = baseline.energy;
    for (const auto& s : art.traj.snapshots) {
        if (m0 > 0.0)
            art.max_mass_drift = std::max(art.max_mass_drift, std::abs(s.mass - m0) / m0);
        const double es = std::max(std::abs(e0), 1e-300);
        art.max_energy_drift = std::max(art.max_energy_drift, std::abs(s.energy - e0) / es);
    }
    return art;
}

// --------------------------------------------------------------- sweep

struct SweepCell {
    double b;
    std::optional<double> c;
    std::optional<double> lambda;
    std::optional<double> amp;
};

struct SweepRow {
    SweepCell cell;
    double me = 0.0, kin = 0.0;
    std::string prediction, outcome, consistent;
    std::string error;
};

std::vector<SweepCell> expand_sweep(const RunConfig& cfg) {
    const SweepSpec& sw = *cfg.sweep;
    std::vector<double> bs = sw.b.empty() ? std::vector<double>{cfg.b} : sw.b;
    std::vector<std::optional<double>> cs;
    if (sw.c.empty())
        cs.push_back(std::nullopt);
    else
        for (double c : sw.c) cs.emplace_back(c);

    std::vector<std::pair<std::optional<double>, std::optional<double>>> inits;
    if (!sw.lambda.empty())
        for (double l : sw.lambda) inits.push_back({l, std::nullopt});
    else if (!sw.amp.empty())
        for (double a : sw.amp) inits.push_back({std::nullopt, a});
    else
        inits.push_back({std::nullopt, std::nullopt});

    std::vector<SweepCell> cells;
    for (double b : bs)
        for (const auto& c : cs)
            for (const auto& init : inits)
                cells.push_back({b, c, init.first, init.second});
    return cells;
}

SweepRow run_sweep_cell(const RunConfig& base, const SweepCell& cell) {
    SweepRow row;
    row.cell = cell;
    try {
        RunConfig cfg = base;
        cfg.b = cell.b;
        if (cell.c) {
            if (cfg.potential.kind() == PotentialKind::zero)
                throw ValidationError("sweep.c requires a non-zero potential kind");
            switch (cfg.potential.kind()) {
            case PotentialKind::gaussian_repulsive:
                cfg.potential = Potential::gaussian_repulsive(*cell.c);
                break;
            case PotentialKind::gaussian_well:
                cfg.potential = Potential::gaussian_well(*cell.c);
                break;
            case PotentialKind::softcore:
                cfg.potential = Potential::softcore(*cell.c);
                break;
            default: break;
            }
        }
        if (cell.lambda) {
            cfg.initial.kind = InitialSpec::Kind::scaled_ground;
            cfg.initial.lambda = *cell.lambda;
        } else if (cell.amp) {
            cfg.initial.kind = InitialSpec::Kind::gaussian;
            cfg.initial.amp = *cell.amp;
        }

        GridPtr grid = make_grid(cfg.r_max, cfg.n);
        GroundStates grounds{solve_free_q(cfg.b, grid), std::nullopt};
        if (needs_well_state(cfg.potential, *grid))
            grounds.well_state = solve_q_with_potential(cfg.potential, cfg.b, grid);

        const RadialField u0 = build_initial(cfg, grid, &grounds.free_state);
        ClassificationReport rep = classify(*grid, u0, cfg.potential, cfg.b, grounds);
        EvolveArtifacts art = run_evolution(cfg, grid, u0, std::nullopt, "");
        attach_observation(rep, art.traj.outcome);

        row.me = rep.me;
        row.kin = rep.kin;
        row.prediction = prediction_name(rep.prediction);
        row.outcome = outcome_name(art.traj.outcome.kind);
        if (rep.consistent)
            row.consistent = *rep.consistent ? "true" : "false";
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        row.error = msg;
    }
    return row;
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream f(path);
    if (!f)
        throw ValidationError("cannot open for writing: " + path.string());
    f << "b,c,lambda,amp,me,kin,prediction,outcome,consistent,error\n";
    for (const auto& r : rows) {
        f << io::format_double(r.cell.b) << ',';
        if (r.cell.c) f << io::format_double(*r.cell.c);
        f << ',';
        if (r.cell.lambda) f << io::format_double(*r.cell.lambda);
        f << ',';
        if (r.cell.amp) f << io::format_double(*r.cell.amp);
        f << ',';
        if (r.error.empty())
            f << io::format_double(r.me) << ',' << io::format_double(r.kin) << ','
              << r.prediction << ',' << r.outcome << ',' << r.consistent << ',';
        else
            f << ",,,,," << r.error;
        f << '\n';
    }
}

} // namespace

RunResult run(const RunConfig& cfg, const fs::path& out_root, int jobs) {
    const std::string hash = config_hash(cfg);
    const fs::path out_dir = out_root / hash;
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "fields");

    json summary;
    summary["command"] = command_name(cfg.command);
    summary["config"] = json::parse(cfg.canonical_json);
    summary["config_hash"] = hash;
    json& res = summary["results"];

    GridPtr grid = make_grid(cfg.r_max, cfg.n);

    switch (cfg.command) {
    case Command::kato: {
        const KatoResult full = kato_norm(cfg.potential);
        const KatoResult neg = kato_norm_negative_part(cfg.potential);
        res["kato_norm"] = full.divergent ? json("divergent") : jnum(full.value);
        res["kato_norm_negative_part"] = neg.divergent ? json("divergent") : jnum(neg.value);
        break;
    }
    case Command::check: {
        res["hypotheses"] = {hypothesis_to_json(hypothesis_check(cfg.potential, TheoremId::t1_1, *grid)),
                             hypothesis_to_json(hypothesis_check(cfg.potential, TheoremId::t1_2, *grid)),
                             hypothesis_to_json(hypothesis_check(cfg.potential, TheoremId::t1_4, *grid))};
        break;
    }
    case Command::groundstate: {
        const GroundState q = solve_free_q(cfg.b, grid);
        io::write_ground_state_csv(out_dir / "fields" / "q_free.csv", q);
        res["free"] = ground_sidecar(q);
        res["free"]["jv"] = q.jv_value;
        if (needs_well_state(cfg.potential, *grid)) {
            const GroundState qv = solve_q_with_potential(cfg.potential, cfg.b, grid);
            io::write_ground_state_csv(out_dir / "fields" / "q_well.csv", qv);
            res["well"] = ground_sidecar(qv);
            res["well"]["jv"] = qv.jv_value;
        }
        break;
    }
    case Command::thresholds: {
        if (needs_well_state(cfg.potential, *grid)) {
            const GroundState qv = solve_q_with_potential(cfg.potential, cfg.b, grid);
            res["thresholds"] = thresholds_to_json(make_thresholds(cfg.b, ThresholdBranch::well, qv));
            res["ground"] = ground_sidecar(qv);
        } else if (sampled_nonneg(cfg.potential, *grid)) {
            const GroundState q = solve_free_q(cfg.b, grid);
            res["thresholds"] =
                thresholds_to_json(make_thresholds(cfg.b, ThresholdBranch::free_or_nonneg, q));
            res["ground"] = ground_sidecar(q);
        } else {
            throw ValidationError("thresholds: mixed-sign potential has no threshold branch");
        }
        res["s_c"] = s_critical(cfg.b);
        break;
    }
    case Command::evolve: {
        std::optional<GroundState> free_q;
        if (cfg.initial.kind == InitialSpec::Kind::scaled_ground)
            free_q = solve_free_q(cfg.b, grid);
        const RadialField u0 = build_initial(cfg, grid, free_q ? &*free_q : nullptr);
        io::write_field_csv(out_dir / "fields" / "initial.csv", u0);
        const std::optional<fs::path> ckpt =
            cfg.checkpoint_every ? std::optional<fs::path>(out_dir) : std::nullopt;
        EvolveArtifacts art = run_evolution(cfg, grid, u0, ckpt, hash);
        io::write_series_csv(out_dir / "series.csv", art.traj);
        io::write_field_csv(out_dir / "fields" / "final.csv", art.traj.final_field);
        res["outcome"] = outcome_to_json(art.traj.outcome);
        res["records"] = art.traj.snapshots.size();
        res["max_mass_drift"] = jnum(art.max_mass_drift);
        res["max_energy_drift"] = jnum(art.max_energy_drift);
        if (art.traj.outcome.kind == OutcomeKind::completed) {
            const ProxyScore p = scattering_proxy(art.traj);
            res["scattering_proxy"] = {{"score", p.score},
                                       {"monotone_fraction", p.monotone_fraction}};
        }
        break;
    }
    case Command::classify: {
        GroundStates grounds{solve_free_q(cfg.b, grid), std::nullopt};
        if (needs_well_state(cfg.potential, *grid))
            grounds.well_state = solve_q_with_potential(cfg.potential, cfg.b, grid);
        const RadialField u0 = build_initial(cfg, grid, &grounds.free_state);
        io::write_field_csv(out_dir / "fields" / "initial.csv", u0);
        ClassificationReport rep = classify(*grid, u0, cfg.potential, cfg.b, grounds);
        if (cfg.observe) {
            EvolveArtifacts art = run_evolution(cfg, grid, u0, std::nullopt, hash);
            attach_observation(rep, art.traj.outcome);
            io::write_series_csv(out_dir / "series.csv", art.traj);
            io::write_field_csv(out_dir / "fields" / "final.csv", art.traj.final_field);
        }
        res["classification"] = classification_to_json(rep);
        break;
    }
    case Command::sweep: {
        const auto cells = expand_sweep(cfg);
        std::vector<SweepRow> rows(cells.size());
        const int workers = std::max(1, jobs);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                rows[i] = run_sweep_cell(cfg, cells[i]);
            }
        };
        if (workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int i = 0; i < workers; ++i)
                pool.emplace_back(worker);
            for (auto& th : pool)
                th.join();
        }
        write_sweep_csv(out_dir / "results.csv", rows);
        std::size_t failures = 0, contradictions = 0;
        for (const auto& r : rows) {
            if (!r.error.empty()) ++failures;
            if (r.consistent == "false") ++contradictions;
        }
        res["cells"] = rows.size();
        res["failures"] = failures;
        res["contradictions"] = contradictions;
        break;
    }
    }

    std::ofstream f(out_dir / "summary.json");
    if (!f)
        throw ValidationError("cannot open for writing: " + (out_dir / "summary.json").string());
    f << summary.dump(2) << '\n';
    return {out_dir};
}

std::string command_name(Command c) {
    switch (c) {
    case Command::groundstate: return "groundstate";
    case Command::thresholds: return "thresholds";
    case Command::kato: return "kato";
    case Command::check: return "check";
    case Command::evolve: return "evolve";
    case Command::classify: return "classify";
    case Command::sweep: return "sweep";
    }
    return "?";
}

} // namespace inls
