#include "core/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "core/fio.hpp"
#include "core/patches.hpp"
#include "core/plots.hpp"
#include "core/trace.hpp"
#include "core/wave.hpp"

namespace tat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Vec2 vec2_of(const json& a, const std::string& key) {
    if (!a.is_array() || a.size() != 2)
        throw ValidationError("config: '" + key + "' must be a 2-element array");
    return {a[0].get<double>(), a[1].get<double>()};
}

SpeedBump bump_of(const json& b) {
    SpeedBump s;
    s.center = vec2_of(b.at("center"), "center");
    s.radius = b.at("radius").get<double>();
    s.amplitude = b.at("amplitude").get<double>();
    return s;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: JSON parse failure: ") + e.what());
    }
    ScenarioConfig cfg;
    cfg.name = j.value("name", std::string("scenario"));

    const json& jg = j.at("grid");
    Vec2 origin = vec2_of(jg.at("origin"), "grid.origin");
    double h = jg.at("spacing").get<double>();
    const json& sh = jg.at("shape");
    cfg.grid = Grid({origin.x, origin.y}, {h, h},
                    {sh.at(0).get<size_t>(), sh.at(1).get<size_t>()});

    const json& js = j.at("sound_speed");
    cfg.speed.name = js.at("model").get<std::string>();
    cfg.speed.bound_M = js.value("bound_M", 2.0);
    if (cfg.speed.name == "radial-bump") {
        cfg.speed.bumps = {bump_of(js)};
    } else if (cfg.speed.name == "multi-bump") {
        for (const auto& b : js.at("bumps")) cfg.speed.bumps.push_back(bump_of(b));
    } else if (cfg.speed.name != "constant") {
        throw ValidationError("config: unknown sound_speed.model '" + cfg.speed.name + "'");
    }

    for (const auto& p : j.value("phantom", json::array())) {
        PhantomPrimitive prim;
        prim.type = p.at("type").get<std::string>();
        if (prim.type != "disk" && prim.type != "polygon")
            throw ValidationError("config: unknown phantom primitive type '" + prim.type + "'");
        prim.amplitude = p.value("amplitude", 1.0);
        if (prim.type == "disk") {
            prim.center = vec2_of(p.at("center"), "phantom.center");
            prim.radius = p.at("radius").get<double>();
            prim.smooth_width = p.value("smooth_width", 0.0);
        } else {
            for (const auto& v : p.at("vertices")) prim.vertices.push_back(vec2_of(v, "vertex"));
        }
        cfg.phantom.push_back(std::move(prim));
    }
    cfg.mollify_sigma_cells = j.value("mollify_sigma_cells", 2.0);

    const json& ge = j.at("geometry");
    std::string kind = ge.at("kind").get<std::string>();
    double t_max = ge.at("t_max").get<double>();
    if (kind == "half-space") {
        const json& s = ge.at("surface");
        cfg.geom = DomainGeometry::half_space(s.at(0).get<double>(), s.at(1).get<double>(), t_max);
    } else if (kind == "convex-body") {
        Vec2 c = vec2_of(ge.at("center"), "geometry.center");
        double R = ge.at("radius").get<double>();
        double glo = 0.0, ghi = kTwoPi, tlo = 0.0, thi = kTwoPi;
        if (ge.contains("gamma")) {
            glo = ge["gamma"].at(0).get<double>();
            ghi = ge["gamma"].at(1).get<double>();
        }
        if (ge.contains("gamma_tilde")) {
            tlo = ge["gamma_tilde"].at(0).get<double>();
            thi = ge["gamma_tilde"].at(1).get<double>();
        } else {
            tlo = glo;
            thi = ghi;
        }
        cfg.geom = DomainGeometry::convex_body(c, R, glo, ghi, tlo, thi, t_max);
    } else {
        throw ValidationError("config: unknown geometry.kind '" + kind + "'");
    }

    if (j.contains("discretization")) {
        const json& d = j["discretization"];
        cfg.n_dirs = d.value("n_dirs", cfg.n_dirs);
        cfg.time_half_samples = d.value("time_half_samples", cfg.time_half_samples);
        cfg.surface_samples = d.value("surface_samples", cfg.surface_samples);
        cfg.fan_spacing_cells = d.value("fan_spacing_cells", cfg.fan_spacing_cells);
        cfg.quad_dirs = d.value("quad_dirs", cfg.quad_dirs);
        cfg.r_max_frac = d.value("r_max_frac", cfg.r_max_frac);
        cfg.dr_period = d.value("dr_period", cfg.dr_period);
    }
    if (j.contains("pipeline")) {
        const json& p = j["pipeline"];
        cfg.pipeline = p.value("mode", cfg.pipeline);
        cfg.window_plateau_frac = p.value("window_plateau_frac", cfg.window_plateau_frac);
        cfg.window_support_frac = p.value("window_support_frac", cfg.window_support_frac);
        cfg.t_plateau_frac = p.value("t_plateau_frac", cfg.t_plateau_frac);
        cfg.n_patches = p.value("n_patches", cfg.n_patches);
        cfg.patch_taper_frac = p.value("patch_taper_frac", cfg.patch_taper_frac);
        cfg.b0_floor_frac = p.value("b0_floor_frac", cfg.b0_floor_frac);
        if (p.contains("window_support")) {
            cfg.window_support_lo = p["window_support"].at(0).get<double>();
            cfg.window_support_hi = p["window_support"].at(1).get<double>();
            cfg.window_explicit = true;
        }
        if (p.contains("window_plateau")) {
            cfg.window_plateau_lo = p["window_plateau"].at(0).get<double>();
            cfg.window_plateau_hi = p["window_plateau"].at(1).get<double>();
        }
    }
    if (j.contains("visibility")) {
        const json& v = j["visibility"];
        cfg.vis.glancing_threshold = v.value("glancing_threshold", cfg.vis.glancing_threshold);
        cfg.vis.angular_margin = v.value("angular_margin", cfg.vis.angular_margin);
    }
    if (j.contains("metrics")) {
        const json& m = j["metrics"];
        cfg.edge.smooth_sigma_cells = m.value("smooth_sigma_cells", cfg.edge.smooth_sigma_cells);
        cfg.score_visible_threshold =
            m.value("score_visible_threshold", cfg.score_visible_threshold);
        cfg.score_invisible_ceiling =
            m.value("score_invisible_ceiling", cfg.score_invisible_ceiling);
    }
    if (j.contains("cross_term")) {
        const json& c = j["cross_term"];
        cfg.cross_term = c.value("enabled", false);
        if (c.contains("carriers"))
            cfg.cross_term_carriers = c["carriers"].get<std::vector<double>>();
    }
    cfg.cfl_factor = j.value("cfl_factor", cfg.cfl_factor);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const ScenarioConfig& cfg) {
    cfg.geom.validate();
    // constructing the speed model enforces its invariant suite
    SoundSpeed cs = make_sound_speed(cfg.speed, cfg.grid, cfg.geom);
    make_phantom(cfg.phantom, cfg.grid, cfg.geom);

    if (cfg.pipeline != "hyperplane" && cfg.pipeline != "patches")
        throw ValidationError("config: pipeline.mode must be 'hyperplane' or 'patches'");
    if (cfg.pipeline == "hyperplane" && cfg.geom.kind != DomainGeometry::Kind::HalfSpace)
        throw ValidationError("config: hyperplane pipeline needs half-space geometry");
    if (cfg.pipeline == "patches" && cfg.geom.kind != DomainGeometry::Kind::ConvexBody)
        throw ValidationError("config: patches pipeline needs convex-body geometry");
    if (cfg.n_dirs < 8 || cfg.n_dirs % 2 != 0)
        throw ValidationError("config: n_dirs must be even and at least 8");

    // CFL / stability precheck (same bound the solver enforces)
    if (cfg.cfl_factor > 0.9)
        throw ValidationError("config: cfl_factor above 0.9 violates the CFL bound");
    double h = cfg.grid.min_spacing();
    double dt_cfl = cfg.cfl_factor * h / (cs.c_max() * std::sqrt(2.0));
    double dt_stab = std::sqrt(3.0 / 8.0) * h / cs.c_max();
    if (dt_cfl > dt_stab)
        throw ValidationError("config: time step violates the scheme stability bound");

    // the trace time axis must resolve the frequency band it will carry
    double r_max = cfg.r_max_frac * kPi / h;
    double dt_out = cfg.geom.t_max / static_cast<double>(cfg.time_half_samples);
    if (kPi / dt_out < 1.1 * r_max * cs.c_max())
        throw ValidationError("config: time sampling cannot resolve the frequency band; "
                              "raise time_half_samples or lower r_max_frac");
    if (cfg.pipeline == "patches")
        build_patch_system(cfg.geom, cfg.n_patches, cfg.patch_taper_frac,
                           cfg.t_plateau_frac * cfg.geom.t_max, cfg.geom.t_max);
    if (!(cfg.window_plateau_frac > 0.0 && cfg.window_plateau_frac < cfg.window_support_frac &&
          cfg.window_support_frac < 1.0))
        throw ValidationError("config: need 0 < window_plateau_frac < window_support_frac < 1");
    if (!(cfg.t_plateau_frac > 0.0 && cfg.t_plateau_frac < 1.0))
        throw ValidationError("config: need 0 < t_plateau_frac < 1");
}

namespace {

struct StageLog {
    std::ofstream log;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    explicit StageLog(const std::string& path) : log(path) {}
    void note(const std::string& msg) {
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << "[" << dt << "s] " << msg << "\n";
        log.flush();
    }
};

CutoffWindow hyperplane_window(const ScenarioConfig& cfg) {
    CutoffWindow chi;
    double lo = cfg.geom.surface_lo, hi = cfg.geom.surface_hi;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    if (cfg.window_explicit) {
        chi.support_lo = cfg.window_support_lo;
        chi.support_hi = cfg.window_support_hi;
        chi.plateau_lo = cfg.window_plateau_lo;
        chi.plateau_hi = cfg.window_plateau_hi;
    } else {
        chi.support_lo = mid - cfg.window_support_frac * half;
        chi.support_hi = mid + cfg.window_support_frac * half;
        chi.plateau_lo = mid - cfg.window_plateau_frac * half;
        chi.plateau_hi = mid + cfg.window_plateau_frac * half;
    }
    chi.t_plateau = cfg.t_plateau_frac * cfg.geom.t_max;
    chi.t_support = cfg.geom.t_max;
    chi.validate();
    return chi;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    StageLog log((fs::path(out_dir) / "run.log").string());
    if (cfg.threads > 0) set_default_threads(cfg.threads);
    ScenarioResult res;
    auto artifact = [&](const std::string& name) {
        res.artifacts.push_back(name);
        return (fs::path(out_dir) / name).string();
    };

    try {
        validate_config(cfg);
        log.note("config validated: " + cfg.name);

        SoundSpeed cs = make_sound_speed(cfg.speed, cfg.grid, cfg.geom);
        Phantom ph = make_phantom(cfg.phantom, cfg.grid, cfg.geom);
        ScalarField ph_moll = mollify(ph.field, cfg.mollify_sigma_cells);
        write_field_raw(cs.field(), artifact("sound_speed.f64"));
        write_field_raw(ph.field, artifact("phantom.f64"));
        write_field_raw(ph_moll, artifact("phantom_mollified.f64"));
        log.note("fields built");

        double T = cfg.geom.t_max;
        double t_plateau = cfg.t_plateau_frac * T;
        size_t n_surf = cfg.surface_samples;
        if (n_surf == 0) {
            if (cfg.geom.kind == DomainGeometry::Kind::HalfSpace)
                n_surf = cfg.grid.nx();
            else
                n_surf = static_cast<size_t>(std::ceil(
                    (cfg.geom.gamma_hi - cfg.geom.gamma_lo) * cfg.geom.radius /
                    cfg.grid.min_spacing()));
        }
        SurfaceDesc surface = make_surface(cfg.geom, n_surf);
        std::vector<double> times = two_sided_times(T, cfg.time_half_samples);
        std::vector<double> times_pos(times.begin() + static_cast<long>(cfg.time_half_samples),
                                      times.end());

        // visibility oracle restricted to the measured set and partition horizon
        VisibilityOptions vopts = cfg.vis;
        vopts.t_horizon = t_plateau;
        DomainGeometry geom_measured = cfg.geom;
        CutoffWindow chi;
        if (cfg.pipeline == "hyperplane") {
            chi = hyperplane_window(cfg);
            geom_measured.surface_lo = chi.support_lo;
            geom_measured.surface_hi = chi.support_hi;
        }
        ConeMask vis_mask =
            classify_visibility(cfg.grid, cfg.n_dirs, cs, geom_measured, {+1, -1}, vopts);
        {
            std::ofstream vm(artifact("visibility_mean.csv"));
            vm << "bin,mean_weight\n";
            for (size_t b = 0; b < cfg.n_dirs; ++b) {
                double mean = 0.0;
                for (size_t node = 0; node < cfg.grid.size(); ++node)
                    mean += vis_mask.weight(node, b);
                vm << b << "," << mean / static_cast<double>(cfg.grid.size()) << "\n";
            }
        }
        log.note("visibility classified");

        // a few sample strips for plotting
        {
            std::ofstream sc(artifact("strips.csv"));
            sc << "strip,t,x,y,xi_x,xi_y,tau,det_jx\n";
            Vec2 seed = cfg.geom.kind == DomainGeometry::Kind::HalfSpace
                            ? Vec2{0.5 * (cfg.geom.surface_lo + cfg.geom.surface_hi), -0.5}
                            : cfg.geom.center;
            for (size_t k = 0; k < 8; ++k) {
                double ang = kTwoPi * static_cast<double>(k) / 8.0;
                auto strip = trace_bichar(seed, {std::cos(ang), std::sin(ang)}, +1, cs, -T, T,
                                          T / 64.0, &cfg.geom);
                for (const auto& s : strip.samples)
                    sc << k << "," << s.t << "," << s.x.x << "," << s.x.y << "," << s.xi.x << ","
                       << s.xi.y << "," << strip.tau << "," << s.det_jx << "\n";
            }
        }

        FanOptions fopts;
        fopts.fan_spacing = cfg.fan_spacing_cells * cfg.grid.min_spacing();
        PhaseAmpTable table_p = build_phase_table(+1, cs, cfg.geom, surface, times, cfg.n_dirs, fopts);
        PhaseAmpTable table_m = build_phase_table(-1, cs, cfg.geom, surface, times, cfg.n_dirs, fopts);
        res.metrics.eikonal_residual_max =
            std::max(table_p.eikonal_residual_max(cs), table_m.eikonal_residual_max(cs));
        res.metrics.table_grad_lower_bound =
            std::min(table_p.grad_lower_bound(cs), table_m.grad_lower_bound(cs));
        res.metrics.initial_phase_error =
            std::max(table_p.initial_phase_error(), table_m.initial_phase_error());
        res.metrics.initial_amp_error =
            std::max(table_p.initial_amp_error(), table_m.initial_amp_error());
        res.metrics.table_coverage = std::min(table_p.coverage(), table_m.coverage());
        if (res.metrics.table_grad_lower_bound < 0.1)
            throw Error("phase gradient lower bound fell below 0.1; ellipticity lost");
        log.note("phase/amplitude tables built");

        WaveOptions wopts;
        wopts.cfl_factor = cfg.cfl_factor;
        WaveResult wave = solve_forward(ph_moll, cs, T, cfg.geom, surface, times_pos, wopts);
        res.metrics.energy_drift = wave.energy_drift;
        wave.trace.export_raw((fs::path(out_dir) / "trace").string());
        res.artifacts.push_back("trace.f64");
        BoundaryTrace data = even_extend(wave.trace);
        log.note("forward data generated (oracle)");

        size_t n_quad = cfg.quad_dirs ? cfg.quad_dirs : 4 * cfg.n_dirs;
        double r_max = cfg.r_max_frac * kPi / cfg.grid.min_spacing();
        PolarQuadrature quad =
            PolarQuadrature::make(cfg.grid, n_quad, r_max, kTwoPi / cfg.dr_period);
        FioOperator s_plus(&table_p, &quad), s_minus(&table_m, &quad);

        // forward-model fidelity on the physical window
        {
            auto go_p = s_plus.apply(ph_moll);
            auto go_m = s_minus.apply(ph_moll);
            double num = 0.0, den = 0.0;
            for (size_t j = 0; j < surface.size(); ++j)
                for (size_t m = 0; m < times_pos.size(); ++m) {
                    size_t mg = cfg.time_half_samples + m;
                    double go =
                        (go_p.values[go_p.idx(j, mg)] + go_m.values[go_m.idx(j, mg)]).real();
                    double fd = wave.trace.at(j, m);
                    num += (go - fd) * (go - fd);
                    den += fd * fd;
                }
            res.metrics.forward_rel_l2 = den > 0 ? std::sqrt(num / den) : 0.0;
        }
        log.note("forward model compared against the oracle");

        ScalarField recon(cfg.grid);
        if (cfg.pipeline == "hyperplane") {
            auto sd_p = compute_b0(+1, table_p, chi, cs, cfg.geom, cfg.grid, cfg.n_dirs, T, vopts);
            auto sd_m = compute_b0(-1, table_m, chi, cs, cfg.geom, cfg.grid, cfg.n_dirs, T, vopts);
            double eps_b = cfg.b0_floor_frac * std::max(sd_p.b0.max_b0(), sd_m.b0.max_b0());
            sd_p.b0.eps_b = sd_m.b0.eps_b = eps_b;
            auto thetas = build_theta_pair(sd_p, sd_m);
            CorrectionOp r_p{sd_p.b0, thetas.first};
            CorrectionOp r_m{sd_m.b0, thetas.second};
            recon = reconstruct_hyperplane(data, s_plus, s_minus, chi, r_p, r_m);
        } else {
            PatchSystem sys =
                build_patch_system(cfg.geom, cfg.n_patches, cfg.patch_taper_frac, t_plateau, T);
            {
                std::ofstream pl(artifact("patch_layout.csv"));
                pl << "patch,support_lo,plateau_lo,plateau_hi,support_hi\n";
                for (size_t j = 0; j < sys.n_patches; ++j)
                    pl << j << "," << sys.chi[j].support_lo << "," << sys.chi[j].plateau_lo << ","
                       << sys.chi[j].plateau_hi << "," << sys.chi[j].support_hi << "\n";
            }
            auto [sd_p, sd_m] = compute_patch_b0(table_p, table_m, sys, cs, cfg.grid, cfg.n_dirs,
                                                 T, vopts);
            double b0max = 0.0;
            for (size_t j = 0; j < sys.n_patches; ++j)
                b0max = std::max({b0max, sd_p[j].b0.max_b0(), sd_m[j].b0.max_b0()});
            double eps_b = cfg.b0_floor_frac * b0max;
            std::vector<ScalarField> patch_fields;
            for (size_t j = 0; j < sys.n_patches; ++j) {
                sd_p[j].b0.eps_b = sd_m[j].b0.eps_b = eps_b;
                auto thetas = build_theta_pair(sd_p[j], sd_m[j]);
                CorrectionOp r_p{sd_p[j].b0, thetas.first};
                CorrectionOp r_m{sd_m[j].b0, thetas.second};
                patch_fields.push_back(
                    patch_reconstruct(j, data, sys, s_plus, s_minus, r_p, r_m));
                log.note("patch " + std::to_string(j) + " reconstructed");
            }
            auto theta_patch = build_patch_theta(sd_p, sd_m);
            recon = combine_patches(patch_fields, theta_patch);

            // partition identities
            double chi_err = 0.0;
            for (size_t j = 0; j < surface.size(); ++j) {
                double w = surface.param[j];
                double ang = cfg.geom.gamma_lo + w / cfg.geom.radius;
                bool in_tilde = cfg.geom.full_circle() ||
                                (ang >= cfg.geom.gamma_tilde_lo && ang <= cfg.geom.gamma_tilde_hi);
                if (!in_tilde) continue;
                for (double t : {0.0, 0.5 * t_plateau, t_plateau})
                    chi_err = std::max(chi_err, std::abs(sys.chi_sum(w, t) - 1.0));
            }
            res.metrics.chi_partition_error = chi_err;
            double theta_err = 0.0;
            size_t nbins = cfg.grid.size() * cfg.n_dirs;
            for (size_t i = 0; i < nbins; ++i) {
                double s = 0.0;
                bool any = false;
                for (size_t j = 0; j < sys.n_patches; ++j) {
                    s += theta_patch[j].weights[i];
                    any = any || theta_patch[j].weights[i] > 0.0f;
                }
                if (any) theta_err = std::max(theta_err, std::abs(s - 1.0));
            }
            res.metrics.theta_partition_error = theta_err;
        }
        write_field_raw(recon, artifact("reconstruction.f64"));
        log.note("reconstruction done");

        EdgeReport edges = edge_recovery_score(recon, ph_moll, ph.edges, vis_mask, cfg.edge);
        edges.export_csv(artifact("edge_report.csv"));
        res.metrics.min_visible_score = edges.min_visible_score;
        res.metrics.max_invisible_score = edges.max_invisible_score;
        res.metrics.max_visible_localization = edges.max_visible_localization;
        res.metrics.n_visible = edges.n_visible;
        res.metrics.n_invisible = edges.n_invisible;
        log.note("edge metrics computed");

        if (cfg.cross_term) {
            std::vector<ScalarField> probes;
            Vec2 pc = cfg.geom.kind == DomainGeometry::Kind::HalfSpace
                          ? Vec2{0.5 * (cfg.geom.surface_lo + cfg.geom.surface_hi), -0.62}
                          : cfg.geom.center;
            for (double k : cfg.cross_term_carriers)
                probes.push_back(gaussian_packet(cfg.grid, pc, {0.0, 1.0}, k, 0.18));
            auto rep = cross_term_residual(s_plus, s_minus, chi, probes, cfg.cross_term_carriers);
            res.metrics.cross_term_ratio_last = rep.ratios.back();
            res.metrics.cross_term_exponent = rep.fit_exponent;
            std::ofstream ct(artifact("cross_term.csv"));
            ct << "k,ratio\n";
            for (size_t i = 0; i < rep.carriers.size(); ++i)
                ct << rep.carriers[i] << "," << rep.ratios[i] << "\n";
            ct << "slope," << rep.fit_exponent << "\n";
            log.note("cross-term sweep done");
        }

        json summary;
        summary["schema_version"] = 1;
        summary["name"] = cfg.name;
        summary["seed"] = cfg.seed;
        summary["pipeline"] = cfg.pipeline;
        json jm;
        jm["eikonal_residual_max"] = res.metrics.eikonal_residual_max;
        jm["table_grad_lower_bound"] = res.metrics.table_grad_lower_bound;
        jm["initial_phase_error"] = res.metrics.initial_phase_error;
        jm["initial_amp_error"] = res.metrics.initial_amp_error;
        jm["table_coverage"] = res.metrics.table_coverage;
        jm["energy_drift"] = res.metrics.energy_drift;
        jm["forward_rel_l2"] = res.metrics.forward_rel_l2;
        jm["min_visible_score"] = res.metrics.min_visible_score;
        jm["max_invisible_score"] = res.metrics.max_invisible_score;
        jm["max_visible_localization"] = res.metrics.max_visible_localization;
        jm["n_visible"] = res.metrics.n_visible;
        jm["n_invisible"] = res.metrics.n_invisible;
        jm["score_visible_threshold"] = cfg.score_visible_threshold;
        jm["score_invisible_ceiling"] = cfg.score_invisible_ceiling;
        if (cfg.cross_term) {
            jm["cross_term_ratio_last"] = res.metrics.cross_term_ratio_last;
            jm["cross_term_exponent"] = res.metrics.cross_term_exponent;
        }
        if (cfg.pipeline == "patches") {
            jm["chi_partition_error"] = res.metrics.chi_partition_error;
            jm["theta_partition_error"] = res.metrics.theta_partition_error;
        }
        summary["metrics"] = jm;
        summary["artifacts"] = res.artifacts;
        res.summary_json = summary.dump(2);
        std::ofstream sj(artifact("summary.json"));
        sj << res.summary_json << "\n";
        log.note("summary written");
        return res;
    } catch (const std::exception& e) {
        log.note(std::string("FAILED: ") + e.what());
        throw;
    }
}

std::string load_summary(const std::string& artifact_dir) {
    std::ifstream in((fs::path(artifact_dir) / "summary.json").string());
    if (!in) throw Error("no summary.json in " + artifact_dir);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace tat
