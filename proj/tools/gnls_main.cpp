// gnls: travelling waves of the 1D defocusing NLS with nonvanishing boundary
// conditions: hypothesis checks, wave branches and energy/momentum diagrams,
// transition-momentum estimates, long-wave expansion checks, split-step
// evolution and stability probes. Tabular output is CSV, reports are JSON,
// plots are static SVG; every run writes a manifest with content hashes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gnls/branch.hpp"
#include "gnls/envelope.hpp"
#include "gnls/evolution.hpp"
#include "gnls/io.hpp"
#include "gnls/kdv.hpp"
#include "gnls/kernels.hpp"
#include "gnls/nonlinearity.hpp"
#include "gnls/parallel.hpp"
#include "gnls/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gnls;

namespace {

struct Common {
    std::string nl_path;
    std::string out_dir = ".";
    bool as_json = false;
    bool quiet = false;
    bool do_assert = false;
    long seed = 1;
    double tol = 1e-10;
};

void add_common(CLI::App* cmd, Common& c, bool needs_nl = true) {
    auto* opt = cmd->add_option("--nl", c.nl_path, "nonlinearity JSON ({\"coeffs\":[...]})");
    if (needs_nl) opt->required();
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_flag("--json", c.as_json, "machine-readable stdout");
    cmd->add_flag("--quiet", c.quiet, "suppress progress output");
    cmd->add_flag("--assert", c.do_assert, "nonzero exit when thresholds fail");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--tol", c.tol, "quadrature relative tolerance");
}

void say(const Common& c, const std::string& line) {
    if (!c.quiet && !c.as_json) std::cout << line << "\n";
}

std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

// speed grid: uniform body plus a geometric cluster toward the sonic end so
// small momenta are represented
std::vector<double> diagram_speed_grid(double cs, int body, int tail) {
    std::vector<double> c = uniform_grid(0.0, cs * 0.985, body);
    for (int i = 0; i < tail; ++i) {
        const double eps = 0.35 * std::pow(0.05 / 0.35, double(i) / (tail - 1));
        c.push_back(std::sqrt(cs * cs - eps * eps));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

std::vector<double> diagram_q_grid(double qmax, int n_uni) {
    std::vector<double> q;
    const double qmin = 5e-4;
    const int n_geo = 120;
    for (int i = 0; i < n_geo; ++i)
        q.push_back(qmin * std::pow(0.12 / qmin, double(i) / (n_geo - 1)));
    for (int i = 1; i <= n_uni; ++i) q.push_back(0.12 + (qmax - 0.12) * i / n_uni);
    return q;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

SolitonProfile make_profile(const Nonlinearity& nl, double c, double x_max, int n) {
    const RootResult rr = find_xi_c(nl, c);
    if (!rr.ok())
        throw std::runtime_error("no admissible wave at speed " + std::to_string(c) + ": " +
                                 rr.detail);
    if (x_max <= 0.0) x_max = profile_extent(nl, c, rr.xi_c) * 1.05;
    return reconstruct_profile(nl, c, rr.xi_c, x_max, n);
}

// ---------------------------------------------------------------- check ----

int cmd_check(const Common& c, double rho_max, int samples) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const HypothesisReport rep = check_hypotheses(nl, rho_max, samples);
    const StructuralConstants sc = structural_constants(nl);

    json j = io::to_json(rep);
    j["constants"] = io::to_json(sc);
    io::Manifest man("check", nl);
    man.set_param("rho_max", rho_max);
    man.set_param("samples", (long)samples);
    man.write_output(fs::path(c.out_dir) / "hypotheses.json", j.dump(2) + "\n");
    man.save(fs::path(c.out_dir) / "check_manifest.json");

    if (c.as_json) {
        std::cout << j.dump(2) << "\n";
    } else if (!c.quiet) {
        std::printf("c_s = %.12g, k = %.12g, Gamma = %.12g, lambda = %.12g\n", sc.c_s, sc.k,
                    sc.gamma, sc.lambda);
        std::printf("quadratic lower bound: %s (margin %.3g, tail %s)\n",
                    rep.h1_holds ? "ok" : "FAIL", rep.h1_margin, rep.h1_tail_ok ? "ok" : "bad");
        std::printf("polynomial growth bound: exponent %d, constant %.3g\n", rep.h2_exponent,
                    rep.h2_constant);
        std::printf("nondegeneracy f''(1)+3f'(1) = %.12g: %s\n", rep.h3_value,
                    rep.h3_holds ? "ok" : "FAIL");
        if (rep.remark18)
            std::printf("one-parameter family (a = %g, p = %d): %s\n", *rep.remark18_a,
                        *rep.remark18_p, *rep.remark18 ? "inside the bound" : "outside the bound");
    }
    return rep.all_required() ? 0 : 1;
}

// --------------------------------------------------------------- branch ----

int cmd_branch(const Common& c, double c_min, double c_max, int steps) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const double cs = nl.sound_speed();
    if (c_max <= 0.0) c_max = cs * (1.0 - 1e-4);
    ScanOptions opts;
    opts.quad_rel_tol = c.tol;
    const Branch br = scan_branch(nl, uniform_grid(c_min, c_max, steps), opts);

    io::Manifest man("branch", nl);
    man.set_param("c_min", c_min);
    man.set_param("c_max", c_max);
    man.set_param("c_steps", (long)steps);
    man.set_param("tol", c.tol);
    man.write_output(fs::path(c.out_dir) / "branch.csv", io::branch_csv(br));
    man.save(fs::path(c.out_dir) / "branch_manifest.json");

    json j{{"points", br.points.size()}, {"gaps", json::array()}};
    for (const auto& g : br.gaps) j["gaps"].push_back({g.first, g.second});
    if (c.as_json) std::cout << j.dump(2) << "\n";
    say(c, "branch: " + std::to_string(br.points.size()) + " points, " +
               std::to_string(br.gaps.size()) + " gap(s) -> branch.csv");
    return 0;
}

// -------------------------------------------------------------- profile ----

int cmd_profile(const Common& c, double speed, double x_max, int n) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const SolitonProfile prof = make_profile(nl, speed, x_max, n);
    const EnergyMomentum em = profile_energy_momentum(prof, nl);

    io::Manifest man("profile", nl);
    man.set_param("c", speed);
    man.set_param("n", (long)n);
    man.set_param("x_max", prof.xs.back());
    man.write_output(fs::path(c.out_dir) / "profile.csv", io::profile_csv(prof));
    man.save(fs::path(c.out_dir) / "profile_manifest.json");

    json j{{"c", speed}, {"xi_c", prof.xi_c}, {"E", em.E}, {"p", em.p}};
    if (c.as_json) std::cout << j.dump(2) << "\n";
    say(c, "profile: xi_c = " + io::format_double(prof.xi_c) + ", E = " + io::format_double(em.E) +
               ", p = " + io::format_double(em.p) + " -> profile.csv");
    return 0;
}

// ------------------------------------------------------ diagram / qstar ----

struct DiagramResult {
    Branch br;
    MinCurve curve;
    CurveCertification cert;
    std::optional<AsymptoteFit> fit;
    double E0;
};

DiagramResult run_diagram(const Nonlinearity& nl, const Common& c, int body, int tail,
                          double q_max, int q_steps) {
    DiagramResult out;
    ScanOptions opts;
    opts.quad_rel_tol = c.tol;
    out.br = scan_branch(nl, diagram_speed_grid(nl.sound_speed(), body, tail), opts);
    out.E0 = black_soliton_energy(nl);
    if (q_max <= 0.0) q_max = std::max(2.0, 2.2 * out.E0 / nl.sound_speed());
    out.curve = build_min_curve(nl, out.br, out.E0, diagram_q_grid(q_max, q_steps));
    out.cert = certify_curve_properties(out.curve, nl);
    if (!out.br.gaps.empty()) {
        try {
            out.fit = fit_asymptote(nl, out.br);
        } catch (const std::exception&) {
        }
    }
    return out;
}

json qstar_json(const Nonlinearity& nl, const DiagramResult& d) {
    json j{{"q_star", d.curve.q_star},
           {"method", to_string(d.curve.q_star_method)},
           {"E0", d.E0},
           {"c_s", nl.sound_speed()},
           {"certification", io::to_json(d.cert)}};
    j["q_star_alternative"] =
        d.curve.q_star_alternative ? json(*d.curve.q_star_alternative) : json(nullptr);
    if (d.fit) {
        j["asymptote"] = io::to_json(*d.fit);
        j["tangent_q_star"] = tangent_q_star(d.fit->c0, d.fit->intercept, d.E0);
    }
    return j;
}

int cmd_diagram(const Common& c, int body, int tail, double q_max, int q_steps, bool svg) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const DiagramResult d = run_diagram(nl, c, body, tail, q_max, q_steps);

    io::Manifest man("diagram", nl);
    man.set_param("c_steps", (long)body);
    man.set_param("tail_steps", (long)tail);
    man.set_param("q_steps", (long)q_steps);
    man.set_param("tol", c.tol);
    man.write_output(fs::path(c.out_dir) / "branch.csv", io::branch_csv(d.br));
    man.write_output(fs::path(c.out_dir) / "diagram.csv", io::min_curve_csv(d.curve));
    const json qj = qstar_json(nl, d);
    man.write_output(fs::path(c.out_dir) / "qstar.json", qj.dump(2) + "\n");
    if (svg)
        man.write_output(fs::path(c.out_dir) / "diagram.svg",
                         io::diagram_svg(d.br, d.curve, d.fit ? &*d.fit : nullptr));
    man.save(fs::path(c.out_dir) / "diagram_manifest.json");

    if (c.as_json) std::cout << qj.dump(2) << "\n";
    say(c, "diagram: q* = " + io::format_double(d.curve.q_star) + " (" +
               to_string(d.curve.q_star_method) + "), E0 = " + io::format_double(d.E0));
    if (c.do_assert) {
        const bool ok = d.cert.lipschitz_ok && d.cert.monotone_ok && d.cert.concavity_ok &&
                        d.cert.subadditive_ok && d.cert.q_star_above_1_32;
        return ok ? 0 : 1;
    }
    return 0;
}

// ------------------------------------------------------------------ kdv ----

int cmd_kdv(const Common& c, const std::string& eps_csv, int n) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const KdvReport rep = verify_expansions(nl, parse_list(eps_csv), n);

    io::Manifest man("kdv", nl);
    man.set_param("eps", eps_csv);
    man.set_param("n", (long)n);
    const json j = io::to_json(rep);
    man.write_output(fs::path(c.out_dir) / "kdv.json", j.dump(2) + "\n");
    {
        std::string csv = "eps,E_num,E_pred,E_resid,p_num,p_closed,p_resid,q_eps\n";
        for (const auto& r : rep.rows)
            csv += io::format_double(r.eps) + "," + io::format_double(r.E_num) + "," +
                   io::format_double(r.E_pred) + "," + io::format_double(r.E_resid) + "," +
                   io::format_double(r.p_num) + "," + io::format_double(r.p_closed) + "," +
                   io::format_double(r.p_resid) + "," + io::format_double(r.q_eps) + "\n";
        man.write_output(fs::path(c.out_dir) / "kdv.csv", csv);
    }
    man.save(fs::path(c.out_dir) / "kdv_manifest.json");

    if (c.as_json) std::cout << j.dump(2) << "\n";
    say(c, "long-wave check: energy residual slope = " + io::format_double(rep.energy_slope));
    if (c.do_assert) {
        bool ok = rep.energy_slope >= 6.5;
        for (const auto& r : rep.rows) ok = ok && std::abs(r.p_resid) <= 1e-9;
        return ok ? 0 : 1;
    }
    return 0;
}

// --------------------------------------------------------------- evolve ----

int cmd_evolve(const Common& c, double speed, double L, int N, double dt, double T,
               long ledger_every, double max_drift) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const SolitonProfile prof = make_profile(nl, speed, 0.0, 8192);
    StrangStepper stepper(nl, init_pair(prof, L, N), dt);
    const long steps = (long)std::llround(T / dt);
    stepper.run(steps, ledger_every);

    const auto& led = stepper.state().ledger;
    double e0 = led.front().E, drift = 0.0, pdrift = 0.0;
    for (const auto& r : led) {
        drift = std::max(drift, std::abs(r.E - e0) / std::abs(e0));
        if (r.p_defined && led.front().p_defined)
            pdrift = std::max(pdrift, std::abs(r.p - led.front().p) /
                                          std::max(1.0, std::abs(led.front().p)));
    }

    io::Manifest man("evolve", nl);
    man.set_param("c", speed);
    man.set_param("L", L);
    man.set_param("N", (long)N);
    man.set_param("dt", dt);
    man.set_param("T", T);
    man.set_param("ledger_every", ledger_every);
    man.set_param("simd", std::string(kernels::active_ops().name));
    man.write_output(fs::path(c.out_dir) / "ledger.csv", io::ledger_csv(led));
    man.save(fs::path(c.out_dir) / "evolve_manifest.json");

    json j{{"steps", steps},
           {"E_drift", drift},
           {"p_drift", pdrift},
           {"center_final", led.back().center}};
    if (c.as_json) std::cout << j.dump(2) << "\n";
    say(c, "evolve: E drift " + io::format_double(drift) + ", p drift " +
               io::format_double(pdrift) + " over T = " + io::format_double(T));
    if (c.do_assert) return drift <= max_drift ? 0 : 1;
    return 0;
}

// ------------------------------------------------------------ stability ----

int cmd_stability(const Common& c, double speed, int members, double amp, double L, int N,
                  double dt, double T, double A, long cadence, double max_ratio) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const SolitonProfile prof = make_profile(nl, speed, 0.0, 8192);

    struct MemberResult {
        double d0 = 0.0, sup_d = 0.0;
        std::string rows;
    };
    std::vector<MemberResult> results(members);

    parallel_for(members, [&](std::size_t m) {
        Rng rng(std::uint64_t(c.seed) * 1000003ULL + m);
        auto st = init_pair(prof, L, N);
        const double x0 = -L / 2 + rng.uniform(-3.0, 3.0);
        const double width = 0.5 + 1.5 * rng.uniform();
        const double phase = 2.0 * M_PI * rng.uniform();
        add_gaussian_bump(st, amp, x0, width, phase);
        StrangStepper stepper(nl, std::move(st), dt);
        MemberResult& res = results[m];
        const long steps = (long)std::llround(T / dt);
        long done = 0;
        while (true) {
            stepper.record();
            const auto od = orbit_distance(stepper.state(), prof, A);
            if (done == 0) res.d0 = od.d;
            res.sup_d = std::max(res.sup_d, od.d);
            res.rows += std::to_string(m) + "," + io::format_double(stepper.state().t) + "," +
                        io::format_double(od.d) + "," + io::format_double(od.a_opt) + "," +
                        io::format_double(od.theta_opt) + "\n";
            if (done >= steps) break;
            const long chunk = std::min(cadence, steps - done);
            stepper.advance(chunk);
            done += chunk;
        }
    });

    std::string csv = "member,t,d,a_opt,theta_opt\n";
    json summary = json::array();
    bool ok = true;
    for (int m = 0; m < members; ++m) {
        csv += results[m].rows;
        const double ratio = results[m].sup_d / results[m].d0;
        summary.push_back({{"member", m},
                           {"d_initial", results[m].d0},
                           {"d_sup", results[m].sup_d},
                           {"ratio", ratio}});
        if (ratio > max_ratio) ok = false;
    }

    io::Manifest man("stability", nl);
    man.set_param("c", speed);
    man.set_param("members", (long)members);
    man.set_param("amp", amp);
    man.set_param("seed", c.seed);
    man.set_param("T", T);
    man.set_param("A", A);
    man.set_param("simd", std::string(kernels::active_ops().name));
    man.write_output(fs::path(c.out_dir) / "stability.csv", csv);
    json j{{"members", summary}, {"amp", amp}, {"threshold_ratio", max_ratio}};
    man.write_output(fs::path(c.out_dir) / "stability_summary.json", j.dump(2) + "\n");
    man.save(fs::path(c.out_dir) / "stability_manifest.json");

    if (c.as_json) std::cout << j.dump(2) << "\n";
    for (const auto& s : summary)
        say(c, "member " + s["member"].dump() + ": d0 = " +
                   io::format_double(s["d_initial"].get<double>()) + ", sup d = " +
                   io::format_double(s["d_sup"].get<double>()) + " (ratio " +
                   io::format_double(s["ratio"].get<double>()) + ")");
    if (c.do_assert) return ok ? 0 : 1;
    return 0;
}

// ---------------------------------------------------------------- audit ----

int cmd_audit(const Common& c, const std::string& speeds_csv) {
    const Nonlinearity nl = io::load_nonlinearity(c.nl_path);
    const double cs = nl.sound_speed();
    std::vector<double> speeds;
    if (speeds_csv.empty())
        speeds = {0.0, 0.25 * cs, 0.5 * cs, 0.75 * cs};
    else
        speeds = parse_list(speeds_csv);

    json rows = json::array();
    bool all_ok = true;
    for (double s : speeds) {
        json row{{"c", s}};
        try {
            const SolitonProfile prof = make_profile(nl, s, 0.0, 4096);
            const AppendixAudit audit = appendix_a_audit(prof, nl);
            row["audit"] = io::to_json(audit);
            all_ok = all_ok && audit.all_hold();
        } catch (const std::exception& e) {
            row["error"] = e.what();
        }
        rows.push_back(row);
    }

    io::Manifest man("audit", nl);
    man.set_param("speeds", speeds_csv.empty() ? std::string("auto") : speeds_csv);
    json j{{"rows", rows}, {"all_hold", all_ok}};
    man.write_output(fs::path(c.out_dir) / "audit.json", j.dump(2) + "\n");
    man.save(fs::path(c.out_dir) / "audit_manifest.json");

    if (c.as_json) std::cout << j.dump(2) << "\n";
    say(c, std::string("a-priori estimates: ") + (all_ok ? "all hold" : "VIOLATION"));
    if (c.do_assert) return all_ok ? 0 : 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling waves and stability toolkit for the 1D defocusing NLS"};
    app.require_subcommand(1);

    Common c_check, c_branch, c_profile, c_diagram, c_qstar, c_kdv, c_evolve, c_stab, c_audit;

    auto* check = app.add_subcommand("check", "certify the nonlinearity hypotheses");
    double rho_max = 3.0;
    int samples = 2000;
    add_common(check, c_check);
    check->add_option("--rho-max", rho_max, "sampling range upper end");
    check->add_option("--samples", samples, "grid points");

    auto* branch = app.add_subcommand("branch", "scan a speed branch to CSV");
    double c_min = 0.0, c_max = -1.0;
    int c_steps = 200;
    add_common(branch, c_branch);
    branch->add_option("--c-min", c_min);
    branch->add_option("--c-max", c_max, "default: just below the sound speed");
    branch->add_option("--c-steps", c_steps);

    auto* profile = app.add_subcommand("profile", "reconstruct one wave profile");
    double pr_c = 0.5, pr_xmax = 0.0;
    int pr_n = 8192;
    add_common(profile, c_profile);
    profile->add_option("--c", pr_c)->required();
    profile->add_option("--x-max", pr_xmax, "0 = automatic from the decay");
    profile->add_option("--n", pr_n, "points per half grid");

    auto* diagram = app.add_subcommand("diagram", "energy/momentum diagram and q* estimate");
    int dg_body = 400, dg_tail = 60, dg_qsteps = 420;
    double dg_qmax = 0.0;
    bool dg_svg = true;
    add_common(diagram, c_diagram);
    diagram->add_option("--c-steps", dg_body, "uniform speed grid size");
    diagram->add_option("--tail-steps", dg_tail, "extra sonic-end samples");
    diagram->add_option("--q-steps", dg_qsteps);
    diagram->add_option("--q-max", dg_qmax, "0 = automatic");
    diagram->add_flag("--svg,!--no-svg", dg_svg, "write diagram.svg");

    auto* qstar = app.add_subcommand("qstar", "transition-momentum estimate only");
    int qs_body = 400, qs_tail = 60, qs_qsteps = 420;
    double qs_qmax = 0.0;
    add_common(qstar, c_qstar);
    qstar->add_option("--c-steps", qs_body);
    qstar->add_option("--tail-steps", qs_tail);
    qstar->add_option("--q-steps", qs_qsteps);
    qstar->add_option("--q-max", qs_qmax);

    auto* kdv = app.add_subcommand("kdv", "long-wave expansion verification");
    std::string kdv_eps = "0.05,0.1,0.15,0.2";
    int kdv_n = 1 << 15;
    add_common(kdv, c_kdv);
    kdv->add_option("--eps", kdv_eps, "comma-separated eps list");
    kdv->add_option("--n", kdv_n, "grid points per field");

    auto* evolve = app.add_subcommand("evolve", "split-step evolution of a wave pair");
    double ev_c = 0.5, ev_L = 64.0, ev_dt = 1e-3, ev_T = 20.0, ev_maxdrift = 1e-8;
    int ev_N = 4096;
    long ev_every = 200;
    add_common(evolve, c_evolve);
    evolve->add_option("--c", ev_c);
    evolve->add_option("--L", ev_L, "half period of the box");
    evolve->add_option("--N", ev_N, "grid points (power of two)");
    evolve->add_option("--dt", ev_dt);
    evolve->add_option("--T", ev_T);
    evolve->add_option("--ledger-every", ev_every, "steps between ledger rows");
    evolve->add_option("--max-drift", ev_maxdrift, "asserted energy drift bound");

    auto* stability = app.add_subcommand("stability", "perturbation ensemble probe");
    double st_c = 0.5, st_amp = 0.01, st_L = 64.0, st_dt = 1e-3, st_T = 50.0, st_A = 8.0,
           st_maxratio = 10.0;
    int st_n = 8, st_N = 4096;
    long st_every = 500;
    add_common(stability, c_stab);
    stability->add_option("--c", st_c);
    stability->add_option("--n", st_n, "ensemble members");
    stability->add_option("--amp", st_amp, "perturbation amplitude");
    stability->add_option("--L", st_L);
    stability->add_option("--N", st_N);
    stability->add_option("--dt", st_dt);
    stability->add_option("--T", st_T);
    stability->add_option("--A", st_A, "distance window half-width");
    stability->add_option("--cadence", st_every, "steps between distance samples");
    stability->add_option("--max-ratio", st_maxratio, "asserted sup d / d0 bound");

    auto* audit = app.add_subcommand("audit", "a-priori estimate margins on profiles");
    std::string au_speeds;
    add_common(audit, c_audit);
    audit->add_option("--c", au_speeds, "comma-separated speeds (default: spread + kink)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(c_check, rho_max, samples);
        if (branch->parsed()) return cmd_branch(c_branch, c_min, c_max, c_steps);
        if (profile->parsed()) return cmd_profile(c_profile, pr_c, pr_xmax, pr_n);
        if (diagram->parsed())
            return cmd_diagram(c_diagram, dg_body, dg_tail, dg_qmax, dg_qsteps, dg_svg);
        if (qstar->parsed()) {
            const Nonlinearity nl = io::load_nonlinearity(c_qstar.nl_path);
            const DiagramResult d = run_diagram(nl, c_qstar, qs_body, qs_tail, qs_qmax, qs_qsteps);
            const json j = qstar_json(nl, d);
            io::Manifest man("qstar", nl);
            man.set_param("c_steps", (long)qs_body);
            man.write_output(fs::path(c_qstar.out_dir) / "qstar.json", j.dump(2) + "\n");
            man.save(fs::path(c_qstar.out_dir) / "qstar_manifest.json");
            if (c_qstar.as_json)
                std::cout << j.dump(2) << "\n";
            else
                say(c_qstar, "q* = " + io::format_double(d.curve.q_star) + " (" +
                                 to_string(d.curve.q_star_method) + ")");
            return 0;
        }
        if (kdv->parsed()) return cmd_kdv(c_kdv, kdv_eps, kdv_n);
        if (evolve->parsed())
            return cmd_evolve(c_evolve, ev_c, ev_L, ev_N, ev_dt, ev_T, ev_every, ev_maxdrift);
        if (stability->parsed())
            return cmd_stability(c_stab, st_c, st_n, st_amp, st_L, st_N, st_dt, st_T, st_A,
                                 st_every, st_maxratio);
        if (audit->parsed()) return cmd_audit(c_audit, au_speeds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
