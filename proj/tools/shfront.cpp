// Command-line front end: spectra, equilibria, heteroclinic shooting,
// front-speed tables and the full PDE front experiment, with a JSON run
// manifest next to every output for reproducibility.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "shfront/connect.hpp"
#include "shfront/equilibria.hpp"
#include "shfront/frontspeed.hpp"
#include "shfront/lattice.hpp"
#include "shfront/pattern.hpp"
#include "shfront/pde.hpp"
#include "shfront/spectrum.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using namespace shfront;

struct Manifest {
    std::string subcommand;
    json params = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write() const {
        if (outputs.empty()) return;
        json m;
        m["subcommand"] = subcommand;
        m["parameters"] = params;
        m["outputs"] = outputs;
        m["tool_version"] = kVersion;
        m["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ofstream os(outputs.front() + ".manifest.json");
        os << m.dump(2) << "\n";
    }
};

std::ofstream open_output(const std::string& path, Manifest& man) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file " + path);
    man.outputs.push_back(path);
    return os;
}

Branch branch_from_string(const std::string& s) {
    for (Branch b : {Branch::Trivial, Branch::Rolls, Branch::HexUp, Branch::HexDown,
                     Branch::MixedOrFalseHex, Branch::Squares})
        if (to_string(b) == s) return b;
    throw std::invalid_argument("unknown branch '" + s + "'");
}

const EquilibriumRecord& pick_branch(const std::vector<EquilibriumRecord>& recs, Branch b) {
    for (const auto& r : recs)
        if (r.branch == b && r.exists) return r;
    throw std::runtime_error("branch " + to_string(b) + " does not exist at these parameters");
}

struct CommonModel {
    std::string lattice = "hex";
    std::string angle = "axis";
    double mu0 = 1.0, c0 = 2.0, beta2 = 1.0, K0 = -3.0, Kcross = -6.0;

    LatticeKind kind() const { return lattice_kind_from_string(lattice); }
    Direction direction() const { return make_direction(kind(), AngleSpec::parse(angle)); }
    ModelParams params() const {
        ModelParams p;
        p.kind = kind();
        p.mu0 = mu0;
        p.c0 = c0;
        p.beta2 = beta2;
        p.K0 = K0;
        p.Kcross = Kcross;
        return p;
    }
    void to_json(json& j) const {
        j["lattice"] = lattice;
        j["angle"] = angle;
        j["mu0"] = mu0;
        j["c0"] = c0;
        j["beta2"] = beta2;
        j["K0"] = K0;
        j["Kcross"] = Kcross;
    }
};

void add_model_flags(CLI::App* cmd, CommonModel& m, bool with_dynamics = true) {
    cmd->add_option("--lattice", m.lattice, "Lattice kind: hex | square");
    cmd->add_option("--angle", m.angle,
                    "Exact angle spec: 'axis' (theta=0) or p/q with cot(theta)=sqrt(3)p/q (hex) "
                    "or p/q (square)");
    cmd->add_option("--mu0", m.mu0, "Scaled bifurcation parameter");
    if (with_dynamics) {
        cmd->add_option("--c0", m.c0, "Scaled front speed (c = eps c0)");
        cmd->add_option("--beta2", m.beta2, "Quadratic coefficient");
        cmd->add_option("--K0", m.K0, "Self-interaction coefficient");
        cmd->add_option("--K2,--K1", m.Kcross, "Cross-interaction coefficient (K2 hex / K1 square)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial-dynamics toolkit for two-dimensional pattern interfaces: "
                 "spectra, reduced amplitude equations, heteroclinic fronts, "
                 "marginal-stability speeds and the direct PDE experiment"};
    app.require_subcommand(1);

    // ---------------------------------------------------------------- spectrum
    auto* sp = app.add_subcommand("spectrum", "Per-mode dispersion roots as CSV");
    CommonModel sp_m;
    double sp_eps = 0.01, sp_radius = 6.0, sp_kmc = 10.0, sp_klc = 10.0;
    std::string sp_out = "spectrum.csv";
    add_model_flags(sp, sp_m);
    sp->add_option("--eps", sp_eps, "Scale parameter eps");
    sp->add_option("--radius", sp_radius, "Lattice truncation radius");
    sp->add_option("--kmc", sp_kmc, "More-central band constant");
    sp->add_option("--klc", sp_klc, "Less-central band constant");
    sp->add_option("--out", sp_out, "Output CSV path");

    // --------------------------------------------------------------------- gap
    auto* gp = app.add_subcommand("gap", "Spectral-gap counts over the truncated lattice");
    CommonModel gp_m;
    double gp_eps = 0.01, gp_radius = 6.0, gp_kmc = 10.0, gp_klc = 10.0;
    std::string gp_out, gp_lattice_out;
    add_model_flags(gp, gp_m);
    gp->add_option("--eps", gp_eps, "Scale parameter eps");
    gp->add_option("--radius", gp_radius, "Lattice truncation radius");
    gp->add_option("--kmc", gp_kmc, "More-central band constant");
    gp->add_option("--klc", gp_klc, "Less-central band constant");
    gp->add_option("--out", gp_out, "Optional CSV of all mode spectra");
    gp->add_option("--lattice-out", gp_lattice_out, "Optional CSV of the lattice strip geometry");

    // -------------------------------------------------------------- equilibria
    auto* eq = app.add_subcommand(
        "equilibria", "Equilibrium catalogue with stability (preset criticality: front-tail "
                      "sweep (d.k1)^2 = 0.9, mu0 = 1, c0 in {0.8, 3.795, 4})");
    CommonModel eq_m;
    std::string eq_out, eq_preset;
    add_model_flags(eq, eq_m);
    eq->add_option("--preset", eq_preset, "Preset: criticality");
    eq->add_option("--out", eq_out, "Optional CSV output");

    // ------------------------------------------------------------- bifurcation
    auto* bf = app.add_subcommand(
        "bifurcation", "Branch table over a mu0 sweep (presets hex-lowest: (K0,K2)=(-0.3,-0.6), "
                       "roll-crossing: (K0,K2)=(-1.2,-0.6))");
    CommonModel bf_m;
    double bf_lo = 0.05, bf_hi = 2.0;
    int bf_n = 40;
    std::string bf_out = "bifurcation.csv", bf_preset;
    add_model_flags(bf, bf_m);
    bf->add_option("--mu0-min", bf_lo, "Sweep start");
    bf->add_option("--mu0-max", bf_hi, "Sweep end");
    bf->add_option("--steps", bf_n, "Sweep points");
    bf->add_option("--preset", bf_preset, "Preset: hex-lowest | roll-crossing");
    bf->add_option("--out", bf_out, "Output CSV path");

    // ------------------------------------------------------------------- shoot
    auto* sh = app.add_subcommand(
        "shoot", "Heteroclinic shooting (preset hexagon-invasion: hex, theta=0, mu0=1, "
                 "beta2=1, K0=-3, K2=-6, c0=2)");
    CommonModel sh_m;
    std::string sh_src = "hex_down", sh_tgt = "trivial", sh_out = "orbit.csv", sh_preset;
    int sh_density = 64;
    add_model_flags(sh, sh_m);
    sh->add_option("--source", sh_src, "Source branch");
    sh->add_option("--target", sh_tgt, "Target branch");
    sh->add_option("--seeds", sh_density, "Seed density on the unstable sphere");
    sh->add_option("--preset", sh_preset, "Preset: hexagon-invasion");
    sh->add_option("--out", sh_out, "Output orbit CSV path");

    // -------------------------------------------------------------- frontspeed
    auto* fs = app.add_subcommand("frontspeed", "Marginal-stability speeds over a k_perp grid");
    double fs_mu0 = 1.0, fs_eps = 0.3, fs_kmin = 0.0, fs_kmax = 0.9;
    int fs_n = 50;
    std::string fs_out = "frontspeed.csv";
    fs->add_option("--mu0", fs_mu0, "Scaled bifurcation parameter");
    fs->add_option("--eps", fs_eps, "Scale parameter eps");
    fs->add_option("--kmin", fs_kmin, "Grid start");
    fs->add_option("--kmax", fs_kmax, "Grid end");
    fs->add_option("--n", fs_n, "Grid points");
    fs->add_option("--out", fs_out, "Output CSV path");

    // ----------------------------------------------------------------- pattern
    auto* pt = app.add_subcommand("pattern",
                                  "Reconstruct a physical field (equilibrium pattern, or the "
                                  "interface of a shot orbit)");
    CommonModel pt_m;
    std::string pt_branch = "hex_down", pt_out = "pattern.csv", pt_mode = "equilibrium";
    double pt_eps = 0.3, pt_t = 0.0, pt_amplify = 1.0;
    int pt_nx = 256, pt_ny = 128;
    double pt_Lx = 16.0 * M_PI, pt_Ly = 8.0 * M_PI;
    bool pt_pgm = false;
    add_model_flags(pt, pt_m);
    pt->add_option("--mode", pt_mode, "equilibrium | interface");
    pt->add_option("--branch", pt_branch, "Equilibrium branch (and shot source for interface)");
    pt->add_option("--eps", pt_eps, "Scale parameter eps");
    pt->add_option("--t", pt_t, "Physical time of the interface snapshot");
    pt->add_option("--amplify", pt_amplify, "Field amplification for plots");
    pt->add_option("--nx", pt_nx, "Grid points in x");
    pt->add_option("--ny", pt_ny, "Grid points in y");
    pt->add_option("--Lx", pt_Lx, "Extent in x");
    pt->add_option("--Ly", pt_Ly, "Extent in y");
    pt->add_flag("--pgm", pt_pgm, "Write PGM instead of CSV");
    pt->add_option("--out", pt_out, "Output path");

    // --------------------------------------------------------------------- pde
    auto* pd = app.add_subcommand(
        "pde", "Quadratic-cubic Swift-Hohenberg front experiment (presets theta0, "
               "theta30)");
    std::string pd_preset = "theta0", pd_config, pd_out = "front_report.csv";
    bool pd_dump = false;
    std::map<std::string, std::string> pd_overrides;
    std::vector<std::string> pd_set;
    pd->add_option("--preset", pd_preset, "Preset: theta0 | theta30");
    pd->add_option("--config", pd_config, "key = value file merged under explicit settings");
    pd->add_option("--set", pd_set, "Explicit key=value overrides (repeatable)");
    pd->add_flag("--dump-fields", pd_dump, "Write PGM snapshots at t = 20, 50, 100");
    pd->add_option("--out", pd_out, "Output report CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Manifest man;
    try {
        if (*sp) {
            man.subcommand = "spectrum";
            sp_m.to_json(man.params);
            man.params["eps"] = sp_eps;
            man.params["radius"] = sp_radius;
            DispersionContext ctx{sp_m.mu0, sp_m.c0, sp_eps, sp_m.direction(), sp_kmc, sp_klc};
            std::vector<ModeSpectrum> modes;
            for (const auto& g : enumerate_lattice(sp_m.kind(), sp_radius))
                modes.push_back(mode_spectrum(g, ctx));
            auto os = open_output(sp_out, man);
            write_spectrum_csv(os, modes);
            std::cout << "wrote " << modes.size() << " modes to " << sp_out << "\n";
        } else if (*gp) {
            man.subcommand = "gap";
            gp_m.to_json(man.params);
            man.params["eps"] = gp_eps;
            man.params["radius"] = gp_radius;
            DispersionContext ctx{gp_m.mu0, gp_m.c0, gp_eps, gp_m.direction(), gp_kmc, gp_klc};
            GapReport rep = gap_report(gp_m.kind(), gp_m.direction(), ctx, gp_radius);
            std::cout << "n_mc=" << rep.n_more_central << " n_lc=" << rep.n_less_central
                      << " n_hyp=" << rep.n_hyperbolic
                      << " min_hyperbolic_gap=" << rep.min_hyperbolic_gap
                      << " min_less_central_real=" << rep.min_less_central_real << "\n";
            if (!gp_out.empty()) {
                std::vector<ModeSpectrum> modes;
                for (const auto& g : enumerate_lattice(gp_m.kind(), gp_radius))
                    modes.push_back(mode_spectrum(g, ctx));
                auto os = open_output(gp_out, man);
                write_spectrum_csv(os, modes);
            }
            if (!gp_lattice_out.empty()) {
                auto os = open_output(gp_lattice_out, man);
                write_lattice_csv(os, enumerate_lattice(gp_m.kind(), gp_radius), ctx.dir);
            }
        } else if (*eq) {
            man.subcommand = "equilibria";
            eq_m.to_json(man.params);
            if (eq_preset == "criticality") {
                man.params["preset"] = eq_preset;
                for (double c0 : {0.8, 3.795, 4.0}) {
                    ModeCriticality mc = mode_criticality(0.9, 1.0, c0);
                    std::cout << "c0=" << c0 << " c_crit=" << mc.c_crit
                              << " oscillatory=" << (mc.oscillatory ? "yes" : "no") << " lambda=("
                              << mc.lambda_plus.real() << (mc.lambda_plus.imag() >= 0 ? "+" : "")
                              << mc.lambda_plus.imag() << "i, " << mc.lambda_minus.real()
                              << (mc.lambda_minus.imag() >= 0 ? "+" : "")
                              << mc.lambda_minus.imag() << "i)\n";
                }
            } else if (!eq_preset.empty()) {
                throw std::invalid_argument("unknown preset '" + eq_preset + "'");
            } else {
                auto recs = catalogue(eq_m.params(), eq_m.direction());
                for (const auto& r : recs) {
                    std::cout << to_string(r.branch)
                              << (r.sublabel.empty() ? "" : " [" + r.sublabel + "]");
                    if (!r.exists) {
                        std::cout << ": absent (" << r.violated_condition << ")\n";
                        continue;
                    }
                    std::cout << ": A=(";
                    for (size_t i = 0; i < r.amplitudes.size(); ++i)
                        std::cout << (i ? "," : "") << r.amplitudes[i];
                    std::cout << ") H=" << r.energy << " n_unstable_landau=" << r.n_unstable_landau
                              << " spatial=(" << r.n_stable_spatial << ","
                              << r.n_unstable_spatial << ")\n";
                }
                if (!eq_out.empty()) {
                    auto os = open_output(eq_out, man);
                    double mu0s[1] = {eq_m.mu0};
                    write_bifurcation_csv(os, eq_m.params(), eq_m.direction(), mu0s);
                }
            }
        } else if (*bf) {
            man.subcommand = "bifurcation";
            if (bf_preset == "hex-lowest") {
                bf_m.K0 = -0.3;
                bf_m.Kcross = -0.6;
            } else if (bf_preset == "roll-crossing") {
                bf_m.K0 = -1.2;
                bf_m.Kcross = -0.6;
                bf_hi = std::max(bf_hi, 8.0);
            } else if (!bf_preset.empty()) {
                throw std::invalid_argument("unknown preset '" + bf_preset + "'");
            }
            bf_m.to_json(man.params);
            man.params["mu0_min"] = bf_lo;
            man.params["mu0_max"] = bf_hi;
            man.params["steps"] = bf_n;
            std::vector<double> sweep;
            for (int i = 0; i < bf_n; ++i)
                sweep.push_back(bf_lo + (bf_hi - bf_lo) * double(i) / double(bf_n - 1));
            auto os = open_output(bf_out, man);
            write_bifurcation_csv(os, bf_m.params(), bf_m.direction(), sweep);
            std::cout << "wrote sweep of " << bf_n << " mu0 values to " << bf_out << "\n";
        } else if (*sh) {
            man.subcommand = "shoot";
            if (sh_preset == "hexagon-invasion") {
                sh_m = CommonModel{};  // hex, axis, mu0=1, c0=2, beta2=1, K0=-3, K2=-6
            } else if (!sh_preset.empty()) {
                throw std::invalid_argument("unknown preset '" + sh_preset + "'");
            }
            sh_m.to_json(man.params);
            man.params["source"] = sh_src;
            man.params["target"] = sh_tgt;
            ModelParams params = sh_m.params();
            Direction dir = sh_m.direction();
            AmplitudeSystem sys(natural_variant(params.kind, dir), params, dir);
            auto recs = catalogue(params, dir);
            ShootConfig cfg;
            cfg.seed_density = sh_density;
            ShootResult res = shoot(pick_branch(recs, branch_from_string(sh_src)),
                                    pick_branch(recs, branch_from_string(sh_tgt)), sys, cfg);
            if (!res.success) {
                std::cout << "shoot failed: " << res.message << "\n";
                return 1;
            }
            auto os = open_output(sh_out, man);
            write_orbit_csv(os, res.orbit, sys);
            std::cout << "connected " << sh_src << " -> " << sh_tgt << " (endpoint distance "
                      << res.best_miss << ", residual " << res.endpoint_residual << ", "
                      << (res.orbit.persistent ? "persistent" : "numerical-only") << ")\n";
            for (const auto& visit : res.orbit.plateau_visits)
                std::cout << "  plateau visit near " << visit << "\n";
        } else if (*fs) {
            man.subcommand = "frontspeed";
            man.params["mu0"] = fs_mu0;
            man.params["eps"] = fs_eps;
            man.params["kmin"] = fs_kmin;
            man.params["kmax"] = fs_kmax;
            man.params["n"] = fs_n;
            auto os = open_output(fs_out, man);
            write_frontspeed_table(os, fs_kmin, fs_kmax, fs_n, fs_mu0, fs_eps);
            std::cout << "wrote " << fs_n << " rows to " << fs_out << "\n";
        } else if (*pt) {
            man.subcommand = "pattern";
            pt_m.to_json(man.params);
            man.params["mode"] = pt_mode;
            man.params["branch"] = pt_branch;
            man.params["eps"] = pt_eps;
            GridSpec grid{pt_nx, pt_ny, pt_Lx, pt_Ly, 0.0, 0.0};
            Field2D f;
            ModelParams params = pt_m.params();
            Direction dir = pt_m.direction();
            auto recs = catalogue(params, dir);
            if (pt_mode == "equilibrium") {
                const auto& rec = pick_branch(recs, branch_from_string(pt_branch));
                f = sample_equilibrium_pattern(rec.amplitudes, pt_eps, params.kind, grid);
            } else if (pt_mode == "interface") {
                AmplitudeSystem sys(natural_variant(params.kind, dir), params, dir);
                ShootResult res = shoot(pick_branch(recs, branch_from_string(pt_branch)),
                                        pick_branch(recs, Branch::Trivial), sys, ShootConfig{});
                if (!res.success) throw std::runtime_error("interface orbit: " + res.message);
                f = sample_interface(res.orbit, sys, pt_eps, pt_t, grid, pt_amplify);
            } else {
                throw std::invalid_argument("pattern --mode must be equilibrium or interface");
            }
            auto os = open_output(pt_out, man);
            if (pt_pgm) write_field_pgm(os, f);
            else write_field_csv(os, f);
            std::cout << "wrote " << pt_out << "\n";
        } else if (*pd) {
            man.subcommand = "pde";
            PdeConfig cfg;
            if (pd_preset == "theta0") cfg = preset_theta0();
            else if (pd_preset == "theta30") cfg = preset_theta30();
            else throw std::invalid_argument("unknown preset '" + pd_preset + "'");
            if (!pd_config.empty()) {
                std::ifstream is(pd_config);
                if (!is) throw std::runtime_error("cannot open config file " + pd_config);
                for (const auto& [k, v] : parse_config_file(is)) apply_config_entry(cfg, k, v);
            }
            for (const auto& kv : pd_set) {
                auto eqp = kv.find('=');
                if (eqp == std::string::npos)
                    throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
                apply_config_entry(cfg, kv.substr(0, eqp), kv.substr(eqp + 1));
            }
            if (pd_dump) cfg.field_dump_times = {20.0, 50.0, 100.0};
            man.params["preset"] = pd_preset;
            man.params["eps"] = cfg.eps;
            man.params["nx"] = cfg.nx;
            man.params["ny"] = cfg.ny;
            man.params["T"] = cfg.T;
            std::vector<Field2D> snaps;
            FrontSpeedReport rep = run_experiment(cfg, pd_dump ? &snaps : nullptr);
            auto os = open_output(pd_out, man);
            write_front_report_csv(os, rep);
            for (size_t i = 0; i < snaps.size(); ++i) {
                std::string path = pd_out + ".t" + std::to_string(int(cfg.field_dump_times[i])) +
                                   ".pgm";
                std::ofstream ps(path);
                write_field_pgm(ps, snaps[i]);
                man.outputs.push_back(path);
            }
            std::cout << "fitted=" << rep.fitted_speed << " c_pred=" << rep.c_pred
                      << " rel_err=" << rep.relative_error << " frames=" << rep.frames_used
                      << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    man.write();
    return 0;
}
