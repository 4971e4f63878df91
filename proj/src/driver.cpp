#include "epns/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "epns/fluid.hpp"
#include "epns/initdata.hpp"
#include "epns/kinetic.hpp"
#include "epns/snapshot.hpp"

namespace epns {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SpectralScalar mean_zero(const SpectralScalar& f) {
    SpectralScalar r = f;
    double m = mean(f);
    for (auto& v : r.values) v -= m;
    return r;
}

int thread_budget(std::size_t jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    if (const char* env = std::getenv("EPNS_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return std::min<int>(cap, static_cast<int>(jobs));
}

} // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ContractViolation("fit_rate: need at least 3 points");
    RateFit fit;
    fit.points = points;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first <= 0.0 || points[i].second <= 0.0)
            throw ContractViolation("fit_rate: points must be positive for a log-log fit");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ymean = sy / n;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double pred = fit.intercept + fit.slope * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - ymean) * (ly[i] - ymean);
    }
    fit.r2 = (ss_tot > 0.0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

std::string vpns_csv_header() {
    return "t,mass,free_energy,d1,d2,entropy_residual,mod_energy,coulomb_mod,l2_u_diff,"
           "l2_v_diff,rel_entropy_maxwellian,hminus1_rho,stress_defect";
}

std::string epns_csv_header() {
    return "t,mass,kinetic,coulomb,fluid,entropy,dissipation_v,dissipation_drag,"
           "energy_residual,tracker_s";
}

std::string format_csv_row(const DiagnosticsRecord& r) {
    std::string s;
    for (double v : {r.t, r.mass, r.free_energy, r.d1, r.d2, r.entropy_residual, r.mod_energy,
                     r.coulomb_mod, r.l2_u_diff, r.l2_v_diff, r.rel_entropy_maxwellian,
                     r.hminus1_rho, r.stress_defect}) {
        if (!s.empty()) s += ',';
        s += num(v);
    }
    return s;
}

std::string format_csv_row(const EpnsRow& r) {
    std::string s;
    for (double v : {r.t, r.mass, r.kinetic, r.coulomb, r.fluid, r.entropy, r.dissipation_v,
                     r.dissipation_drag, r.energy_residual, r.tracker}) {
        if (!s.empty()) s += ',';
        s += num(v);
    }
    return s;
}

namespace {

MacroState limit_to_state(const LimitData& limit, double sigma) {
    const TorusGrid& g = limit.rho0.grid;
    MacroState st(sigma > 0.0 ? MacroVariant::isothermal : MacroVariant::pressureless, g, sigma);
    for (std::size_t i = 0; i < st.density_var.size(); ++i)
        st.density_var[i] =
            sigma > 0.0 ? std::log(limit.rho0[i]) : limit.rho0[i] - 1.0;
    st.u = limit.u0;
    st.v = limit.v0;
    return st;
}

struct RecordContext {
    double int_d1 = 0.0;
    double int_d2 = 0.0;
    double prev_t = 0.0;
    double prev_d1 = 0.0;
    double prev_d2 = 0.0;
    double f0 = 0.0;
    double mass_unnorm0 = 0.0;
    bool first = true;
};

DiagnosticsRecord make_record(double t, const DistributionFunction& f, const SpectralVector& vf,
                              const MacroState& ref, double delta_floor, RecordContext& ctx) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = f.mass_normalized();

    auto m = compute_moments(f);
    auto u_loc = regularized_velocity(m, delta_floor);
    rec.free_energy = free_energy(f, vf);
    rec.d1 = dissipation_d1(f, u_loc);
    rec.d2 = dissipation_d2(f, vf);

    auto mod = modulated_energy(m, vf, ref, delta_floor);
    rec.mod_energy = mod.mod_energy;
    rec.coulomb_mod = mod.coulomb_mod;
    rec.l2_u_diff = mod.l2_u_diff;
    rec.l2_v_diff = mod.l2_v_diff;
    rec.hminus1_rho = std::sqrt(mod.coulomb_mod);
    rec.stress_defect = stress_defect(m, ref, f.sigma);
    if (f.sigma > 0.0) {
        auto M = maxwellian(ref.rho(), ref.u, f.sigma, f.vbox, f.epsilon);
        rec.rel_entropy_maxwellian = rel_entropy_to_maxwellian(f, M);
    }

    if (ctx.first) {
        ctx.first = false;
        ctx.f0 = rec.free_energy;
        ctx.mass_unnorm0 = f.mass();
        rec.entropy_residual = 0.0;
    } else {
        double dt = t - ctx.prev_t;
        ctx.int_d1 += 0.5 * dt * (rec.d1 + ctx.prev_d1);
        ctx.int_d2 += 0.5 * dt * (rec.d2 + ctx.prev_d2);
        double lhs = rec.free_energy + ctx.int_d1 / f.epsilon + ctx.int_d2;
        double rhs = ctx.f0 + f.sigma * f.grid.dim * t * ctx.mass_unnorm0;
        rec.entropy_residual = lhs - rhs;
    }
    ctx.prev_t = t;
    ctx.prev_d1 = rec.d1;
    ctx.prev_d2 = rec.d2;
    return rec;
}

void advance_fluid(FluidState& fsv, const SpectralVector& source, double dt, int* substeps_out) {
    double vmax = field_max_abs(fsv.v);
    double dt_max = (vmax > 0.0) ? 0.45 * kTwoPi / (fsv.v.grid.n * vmax) : dt;
    int sub = std::max(1, static_cast<int>(std::ceil(dt / dt_max)));
    for (int s = 0; s < sub; ++s) ns_step(fsv, source, dt / sub);
    if (substeps_out) *substeps_out = std::max(*substeps_out, sub);
}

json config_echo(const ExperimentConfig& cfg) {
    json j;
    j["mode"] = mode_name(cfg.mode);
    j["d"] = cfg.d;
    j["n"] = cfg.n;
    j["n_v"] = cfg.n_v;
    j["V"] = cfg.vbox_halfwidth();
    j["sigma"] = cfg.sigma;
    j["epsilon"] = cfg.epsilon;
    j["epsilon_list"] = cfg.epsilon_list;
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["cadence"] = cfg.output_cadence;
    j["seed"] = cfg.seed;
    j["amplitude"] = cfg.amplitude;
    j["mode_cutoff"] = cfg.mode_cutoff;
    j["delta_floor"] = cfg.delta_floor;
    j["misprepare"] = cfg.misprepare;
    j["tracker_s"] = cfg.tracker_s;
    return j;
}

} // namespace

VpnsRunResult run_vpns(const ExperimentConfig& cfg, const std::string& outdir) {
    cfg.validate();
    fs::create_directories(outdir);
    TorusGrid grid(cfg.d, cfg.n);
    VelocityBox vbox(cfg.d, cfg.n_v, cfg.vbox_halfwidth());

    LimitData limit = smooth_profiles(grid, cfg.seed, cfg.amplitude, cfg.mode_cutoff);
    PreparedFamily fam = well_prepared_family(limit, cfg.sigma, cfg.epsilon, vbox,
                                              cfg.misprepare, cfg.seed + 999);
    DistributionFunction f = std::move(fam.f0);
    f.epsilon = cfg.epsilon;

    MacroState ref = limit_to_state(limit, cfg.sigma);
    FluidState fsv(grid, 1.0);
    fsv.v = fam.v0_eps;
    const bool frozen = (cfg.mode == RunMode::kinetic_only) || cfg.d == 1;

    VpnsRunResult res;
    res.h1_gap = fam.h1_gap;
    res.h2_gap = fam.h2_gap;
    {
        json j;
        j["h1_gap"] = fam.h1_gap;
        j["h2_gap"] = fam.h2_gap;
        j["sigma"] = cfg.sigma;
        j["epsilon"] = cfg.epsilon;
        j["misprepare"] = cfg.misprepare;
        std::ofstream(fs::path(outdir) / "prepared_gaps.json") << j.dump(2) << "\n";
    }

    std::ofstream csv(fs::path(outdir) / "vpns.csv");
    csv << vpns_csv_header() << "\n";

    RecordContext ctx;
    KineticMoments m_cache = compute_moments(f);
    const int steps = cfg.steps();
    res.entropy_residual_max = -1e300;
    for (int s = 0; s <= steps; ++s) {
        double t = s * cfg.dt;
        if (s % cfg.output_cadence == 0) {
            DiagnosticsRecord rec = make_record(t, f, fsv.v, ref, cfg.delta_floor, ctx);
            csv << format_csv_row(rec) << "\n";
            res.records.push_back(rec);
            res.sup_mod_plus_coulomb =
                std::max(res.sup_mod_plus_coulomb, rec.mod_energy + rec.coulomb_mod);
            res.sup_rel_entropy = std::max(res.sup_rel_entropy, rec.rel_entropy_maxwellian);
            res.sup_mono =
                std::max(res.sup_mono, rec.l2_u_diff + rec.l2_v_diff + rec.coulomb_mod);
            res.sup_stress_defect = std::max(res.sup_stress_defect, rec.stress_defect);
            res.entropy_residual_max = std::max(res.entropy_residual_max, rec.entropy_residual);
            res.final_stress_defect = rec.stress_defect;
        }
        if (s == steps) break;

        try {
            if (!frozen) advance_fluid(fsv, drag_source(m_cache, fsv.v), 0.5 * cfg.dt,
                                       &res.max_fluid_substeps);
            vpns_step(f, fsv.v, cfg.dt, cfg.delta_floor, &m_cache);
            if (!frozen) {
                advance_fluid(fsv, drag_source(m_cache, fsv.v), 0.5 * cfg.dt,
                              &res.max_fluid_substeps);
                epns_step(ref, cfg.dt, t);
            }
        } catch (StepSizeError& e) {
            throw SolverAbort(std::string(e.what()) + " (step " + std::to_string(s) + ")", t);
        }
    }
    res.free_energy0 = ctx.f0;

    // final snapshots: phase + the fields needed to recompute diagnostics
    json meta = config_echo(cfg);
    meta["t"] = cfg.t_end;
    meta["d1_label"] = cfg.sigma > 0.0 ? "d1" : "d1_degenerate";
    write_phase_snapshot((fs::path(outdir) / "final_phase.epns").string(), f, meta.dump(2));
    auto m = compute_moments(f);
    SpectralScalar rho_ref = ref.rho();
    std::vector<std::pair<std::string, const SpectralScalar*>> fields = {
        {"rho_eps", &m.rho}, {"mom0", &m.momentum[0]}};
    if (cfg.d == 2) fields.push_back({"mom1", &m.momentum[1]});
    fields.push_back({"fluid_v0", &fsv.v[0]});
    if (cfg.d == 2) fields.push_back({"fluid_v1", &fsv.v[1]});
    fields.push_back({"limit_rho", &rho_ref});
    fields.push_back({"limit_u0", &ref.u[0]});
    if (cfg.d == 2) fields.push_back({"limit_u1", &ref.u[1]});
    fields.push_back({"limit_v0", &ref.v[0]});
    if (cfg.d == 2) fields.push_back({"limit_v1", &ref.v[1]});
    write_field_snapshot((fs::path(outdir) / "final_fields.epns").string(), fields, meta.dump(2));
    return res;
}

EpnsRunResult run_epns(const ExperimentConfig& cfg, const std::string& outdir) {
    cfg.validate();
    fs::create_directories(outdir);
    TorusGrid grid(2, cfg.n);
    LimitData limit = smooth_profiles(grid, cfg.seed, cfg.amplitude, cfg.mode_cutoff);
    MacroState st = limit_to_state(limit, cfg.sigma);

    std::ofstream csv(fs::path(outdir) / "epns.csv");
    csv << epns_csv_header() << "\n";

    EpnsRunResult res;
    const int steps = cfg.steps();
    double e0 = 0.0, int_diss = 0.0, prev_t = 0.0, prev_diss = 0.0;
    bool first = true;
    for (int s = 0; s <= steps; ++s) {
        double t = s * cfg.dt;
        if (s % cfg.output_cadence == 0) {
            EnergyReport er = energy_report(st);
            EpnsRow row{};
            row.t = t;
            row.mass = mean(st.rho());
            row.kinetic = er.kinetic;
            row.coulomb = er.coulomb;
            row.fluid = er.fluid;
            row.entropy = er.entropy;
            row.dissipation_v = er.dissipation_v;
            row.dissipation_drag = er.dissipation_drag;
            row.tracker = norm_tracker(st, cfg.tracker_s);
            double diss = er.dissipation_v + er.dissipation_drag;
            if (first) {
                first = false;
                e0 = er.total();
                res.tracker0 = row.tracker;
                row.energy_residual = 0.0;
            } else {
                int_diss += 0.5 * (t - prev_t) * (diss + prev_diss);
                row.energy_residual = er.total() - e0 + int_diss;
            }
            prev_t = t;
            prev_diss = diss;
            res.tracker_max = std::max(res.tracker_max, row.tracker);
            res.energy_residual_max =
                std::max(res.energy_residual_max, std::abs(row.energy_residual));
            csv << format_csv_row(row) << "\n";
            res.rows.push_back(row);
        }
        if (s == steps) break;
        epns_step(st, cfg.dt, s * cfg.dt);
    }

    json meta = config_echo(cfg);
    meta["t"] = cfg.t_end;
    SpectralScalar rho = st.rho();
    std::vector<std::pair<std::string, const SpectralScalar*>> fields = {
        {"density_var", &st.density_var}, {"rho", &rho},         {"u0", &st.u[0]},
        {"u1", &st.u[1]},                 {"v0", &st.v[0]},      {"v1", &st.v[1]}};
    write_field_snapshot((fs::path(outdir) / "final_fields.epns").string(), fields, meta.dump(2));
    return res;
}

namespace {

json fit_to_json(const RateFit& f) {
    json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r2;
    json pts = json::array();
    for (auto& [e, v] : f.points) pts.push_back({e, v});
    j["points"] = pts;
    return j;
}

} // namespace

SweepResult sweep(const ExperimentConfig& cfg, const std::string& outdir) {
    cfg.validate();
    if (cfg.mode != RunMode::sweep) throw ConfigError("sweep: config mode must be 'sweep'");
    fs::create_directories(outdir);

    SweepResult res;
    res.epsilons = cfg.epsilon_list;
    res.members.resize(cfg.epsilon_list.size());
    std::vector<std::string> errors(cfg.epsilon_list.size());

    auto worker = [&](std::size_t i) {
        ExperimentConfig mc = cfg;
        mc.mode = RunMode::vpns;
        mc.epsilon = cfg.epsilon_list[i];
        mc.epsilon_list.clear();
        try {
            res.members[i] = run_vpns(mc, (fs::path(outdir) / ("member_" + std::to_string(i))).string());
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    int nthreads = thread_budget(cfg.epsilon_list.size());
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < cfg.epsilon_list.size(); ++i) worker(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (int tix = 0; tix < nthreads; ++tix)
            pool.emplace_back([&, tix]() {
                for (std::size_t i = tix; i < cfg.epsilon_list.size(); i += nthreads) worker(i);
            });
        (void)next;
        for (auto& th : pool) th.join();
    }

    // reference limit run (matched initial data)
    {
        ExperimentConfig ec = cfg;
        ec.mode = RunMode::epns;
        ec.epsilon_list.clear();
        run_epns(ec, (fs::path(outdir) / "epns_ref").string());
    }

    json summary;
    summary["config"] = config_echo(cfg);
    json members = json::array();
    bool failed = false;
    for (std::size_t i = 0; i < res.members.size(); ++i) {
        json m;
        m["epsilon"] = cfg.epsilon_list[i];
        m["dir"] = "member_" + std::to_string(i);
        if (!errors[i].empty()) {
            m["error"] = errors[i];
            failed = true;
        } else {
            const auto& r = res.members[i];
            m["sup_mod_plus_coulomb"] = r.sup_mod_plus_coulomb;
            m["sup_rel_entropy"] = r.sup_rel_entropy;
            m["sup_mono"] = r.sup_mono;
            m["sup_stress_defect"] = r.sup_stress_defect;
            m["final_stress_defect"] = r.final_stress_defect;
            m["entropy_residual_max"] = r.entropy_residual_max;
            m["free_energy0"] = r.free_energy0;
            m["h1_gap"] = r.h1_gap;
            m["h2_gap"] = r.h2_gap;
        }
        members.push_back(m);
    }
    summary["members"] = members;

    if (!failed) {
        std::vector<std::pair<double, double>> pts_mc, pts_re, pts_mono;
        for (std::size_t i = 0; i < res.members.size(); ++i) {
            pts_mc.push_back({cfg.epsilon_list[i], res.members[i].sup_mod_plus_coulomb});
            pts_mono.push_back({cfg.epsilon_list[i], res.members[i].sup_mono});
            if (cfg.sigma > 0.0)
                pts_re.push_back({cfg.epsilon_list[i], res.members[i].sup_rel_entropy});
        }
        res.fit_mod_coulomb = fit_rate(pts_mc);
        res.fit_mono = fit_rate(pts_mono);
        summary["fits"]["mod_plus_coulomb"] = fit_to_json(res.fit_mod_coulomb);
        summary["fits"]["mono_sum"] = fit_to_json(res.fit_mono);
        if (cfg.sigma > 0.0) {
            res.fit_rel_entropy = fit_rate(pts_re);
            summary["fits"]["rel_entropy_maxwellian"] = fit_to_json(res.fit_rel_entropy);
        }
    }
    std::ofstream(fs::path(outdir) / "summary.json") << summary.dump(2) << "\n";
    if (failed) throw SolverAbort("sweep: a member run failed (partial results kept)", 0.0);
    return res;
}

void refit_summary(const std::string& summary_path) {
    std::ifstream in(summary_path);
    if (!in) throw ConfigError("cannot open summary: " + summary_path);
    json summary = json::parse(in);
    std::vector<std::pair<double, double>> pts_mc, pts_re, pts_mono;
    for (const auto& m : summary.at("members")) {
        if (m.contains("error")) throw ConfigError("refit: summary contains a failed member");
        pts_mc.push_back({m.at("epsilon").get<double>(), m.at("sup_mod_plus_coulomb").get<double>()});
        pts_mono.push_back({m.at("epsilon").get<double>(), m.at("sup_mono").get<double>()});
        if (m.contains("sup_rel_entropy") && m.at("sup_rel_entropy").get<double>() > 0.0)
            pts_re.push_back({m.at("epsilon").get<double>(), m.at("sup_rel_entropy").get<double>()});
    }
    summary["fits"]["mod_plus_coulomb"] = fit_to_json(fit_rate(pts_mc));
    summary["fits"]["mono_sum"] = fit_to_json(fit_rate(pts_mono));
    if (pts_re.size() >= 3) summary["fits"]["rel_entropy_maxwellian"] = fit_to_json(fit_rate(pts_re));
    std::ofstream(summary_path) << summary.dump(2) << "\n";
}

DiagnosticsRecord diag_from_snapshots(const std::string& phase_path,
                                      const std::string& fields_path, double delta_floor) {
    DistributionFunction f = read_phase_snapshot(phase_path);
    FieldSnapshot snap = read_field_snapshot(fields_path);
    auto find = [&](const std::string& name) -> const SpectralScalar& {
        for (std::size_t i = 0; i < snap.names.size(); ++i)
            if (snap.names[i] == name) return snap.fields[i];
        throw ConfigError("diag: field '" + name + "' missing from " + fields_path);
    };

    const TorusGrid& g = snap.grid;
    MacroState ref(f.sigma > 0.0 ? MacroVariant::isothermal : MacroVariant::pressureless, g,
                   f.sigma);
    const SpectralScalar& rho = find("limit_rho");
    for (std::size_t i = 0; i < ref.density_var.size(); ++i)
        ref.density_var[i] = f.sigma > 0.0 ? std::log(rho[i]) : rho[i] - 1.0;
    ref.u[0] = find("limit_u0");
    ref.v[0] = find("limit_v0");
    SpectralVector vf(g);
    vf[0] = find("fluid_v0");
    if (g.dim == 2) {
        ref.u[1] = find("limit_u1");
        ref.v[1] = find("limit_v1");
        vf[1] = find("fluid_v1");
    }
    RecordContext ctx;
    return make_record(0.0, f, vf, ref, delta_floor, ctx);
}

} // namespace epns
