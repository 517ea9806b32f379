#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sifrk/benchmarks.hpp"
#include "sifrk/config.hpp"
#include "sifrk/diagnostics.hpp"
#include "sifrk/snapshot.hpp"

namespace fs = std::filesystem;
using namespace sifrk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMbpFlag = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitInconclusive = 4;

std::string fmt_e(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void print_rate_table(const RateTable& table, const char* res_name) {
    std::printf("  %-14s %-14s %-6s %-14s %-6s\n", res_name, "L2", "rate", "Linf", "rate");
    for (const auto& row : table.rows) {
        std::printf("  %-14.6e %-14.6e %-6s %-14.6e %-6s\n", row.resolution, row.l2,
                    row.l2_rate ? (std::to_string(*row.l2_rate).substr(0, 5)).c_str() : "--",
                    row.linf,
                    row.linf_rate ? (std::to_string(*row.linf_rate).substr(0, 5)).c_str() : "--");
    }
}

void write_rate_file(const fs::path& path, const RateTable& table) {
    std::ofstream os(path);
    write_rate_csv(os, table);
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::optional<std::uint64_t> seed_override, bool expect_mbp,
            const std::string& snapshots_override) {
    SimulationConfig cfg = SimulationConfig::from_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override) cfg.seed = *seed_override;
    if (!snapshots_override.empty()) {
        cfg.snapshot_times.clear();
        std::istringstream ss(snapshots_override);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.snapshot_times.push_back(std::stod(tok));
    }

    const Grid grid = cfg.make_grid();
    const NonlinearSpec spec = cfg.make_spec();
    const double kappa = cfg.resolve_kappa(spec);
    const OperatorSymbol sym = laplacian_symbol(grid, cfg.diffusivity()).with_kappa(kappa);
    const StabilizedNonlinearity sn(spec, kappa);
    const SchemeInstance si(cfg.resolve_scheme(), sym, sn, cfg.tau);
    const Field u0 = cfg.make_initial(grid);

    fs::create_directories(cfg.out_dir);
    MbpMonitor monitor(cfg.mbp_gamma(), 1e-12);
    std::vector<bool> snapshot_done(cfg.snapshot_times.size(), false);

    IntegrateOptions opt;
    opt.T = cfg.T;
    opt.record_stride = cfg.record_stride;
    opt.callback = [&](const StepRecord& rec, const Field& state) {
        monitor.observe(rec);
        for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
            if (snapshot_done[k]) continue;
            if (std::abs(rec.t - cfg.snapshot_times[k]) <= 0.5 * cfg.tau) {
                snapshot_done[k] = true;
                write_snapshot_file(
                    (fs::path(cfg.out_dir) / ("snapshot_" + std::to_string(k) + ".sifk")).string(),
                    state);
            }
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    const IntegrationResult res = integrate(si, u0, opt);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    {
        std::ofstream os(fs::path(cfg.out_dir) / "curve.csv");
        write_curve_csv(os, res.records);
    }
    {
        std::ofstream os(fs::path(cfg.out_dir) / "summary");
        os << "scheme = " << tableau_name(si.tableau()) << "\n"
           << "steps = " << res.steps << "\n"
           << "final_t = " << fmt_e(res.t_end) << "\n"
           << "final_sup_norm = " << fmt_e(res.records.back().sup_norm) << "\n"
           << "final_energy = " << fmt_e(res.records.back().energy) << "\n"
           << "mbp_gamma = " << fmt_e(cfg.mbp_gamma()) << "\n";
        if (monitor.flagged())
            os << "mbp_verdict = violated at step " << monitor.flag_step() << " (t = "
               << fmt_e(monitor.flag_time()) << ")\n";
        else
            os << "mbp_verdict = preserved\n";
        os << "wall_seconds = " << wall << "\n";
    }

    std::printf("%s: %lld steps to t = %g, sup norm %.6g, MBP %s\n",
                tableau_name(si.tableau()).c_str(), static_cast<long long>(res.steps),
                res.t_end, res.records.back().sup_norm,
                monitor.flagged() ? "violated" : "preserved");
    if (expect_mbp && monitor.flagged()) return kExitMbpFlag;
    return kExitOk;
}

int cmd_certify(const std::string& what, double x_max, int samples) {
    AnyTableau t = [&]() -> AnyTableau {
        if (const AnyTableau* b = find_builtin(what)) return *b;
        return read_tableau_file(what);
    }();

    CertificationReport rep;
    if (const auto* b = std::get_if<ButcherTableau>(&t)) {
        ButcherCertifyOptions opt;
        opt.x_max = x_max;
        opt.n_samples = samples;
        rep = certify_mbp_butcher(*b, opt);
    } else {
        rep = certify_mbp_shu_osher(std::get<ShuOsherTableau>(t));
    }

    std::cout << tableau_name(t) << ": " << rep;
    switch (rep.verdict) {
        case Verdict::Certified: return kExitOk;
        case Verdict::Refuted: return kExitRefuted;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitError;
}

int bench_temporal(const fs::path& out, const std::string& only_scheme, bool full) {
    const int n = full ? 2048 : 512;
    std::printf("temporal convergence, traveling wave, h = 1/%d\n", n);
    bool ok = true;
    for (const auto& o : run_desk_temporal(n)) {
        if (!only_scheme.empty() && only_scheme != o.scheme) continue;
        std::printf("%s (order %d):\n", o.scheme.c_str(), o.order);
        print_rate_table(o.table, "tau");
        write_rate_file(out / ("temporal_" + o.scheme + ".csv"), o.table);
        const RateWindow win = temporal_rate_window(o.order);
        const bool pass = win.contains(o.finest_l2_rate);
        std::printf("  finest-pair L2 rate %.3f in [%.2f, %.2f]: %s\n", o.finest_l2_rate,
                    win.lo, win.hi, pass ? "pass" : "FAIL");
        ok = ok && pass;
    }
    return ok ? kExitOk : kExitError;
}

int bench_spatial(const fs::path& out) {
    std::printf("spatial self-convergence, traveling wave (Neumann), tau = T/2048\n");
    const RateTable table = run_desk_spatial();
    print_rate_table(table, "h");
    write_rate_file(out / "spatial_sifrk22.csv", table);
    bool ok = true;
    const auto& rows = table.rows;
    for (std::size_t i = rows.size() - 2; i < rows.size(); ++i) {
        const bool pass = kSpatialRateWindow.contains(*rows[i].l2_rate);
        std::printf("  pair at h = %.6e: L2 rate %.3f in [%.2f, %.2f]: %s\n", rows[i].resolution,
                    *rows[i].l2_rate, kSpatialRateWindow.lo, kSpatialRateWindow.hi,
                    pass ? "pass" : "FAIL");
        ok = ok && pass;
    }
    return ok ? kExitOk : kExitError;
}

int bench_mbp(std::uint64_t seed) {
    // Certified schemes x tau sweep x both registry potentials, 20 steps on a
    // 128^2 periodic grid; every step and stage must stay within gamma and
    // the first step within g_s(kappa tau) gamma.
    const std::vector<std::string> schemes = {"sifrk11", "sifrk22", "sifrk32", "sifrk42", "heun33"};
    const std::vector<double> taus = {0.01, 0.1, 1.0, 10.0, 100.0};
    const double eps = 0.01;
    bool ok = true;

    struct Setup {
        const char* label;
        NonlinearSpec spec;
        double kappa;
    };
    const std::vector<Setup> setups = {
        {"cubic", cubic(1.0), 2.0},
        {"flory_huggins", flory_huggins(0.8, 1.6), 8.02},
    };

    const Grid grid = Grid::cube(2, 128, -0.5, 0.5, BoundaryCondition::Periodic);
    const OperatorSymbol lap = laplacian_symbol(grid, eps * eps);
    for (const auto& setup : setups) {
        const double gamma = setup.spec.gamma;
        const Field u0 = random_initial(grid, -0.9 * gamma, 0.9 * gamma, seed);
        for (const auto& name : schemes) {
            const auto& tab = *find_builtin(name);
            for (double tau : taus) {
                const StabilizedNonlinearity sn(setup.spec, setup.kappa);
                const SchemeInstance si(tab, lap.with_kappa(setup.kappa), sn, tau);
                const double gs = g_function(std::get<ButcherTableau>(tab), si.stages(),
                                             setup.kappa * tau);
                Field u = u0;
                std::vector<double> stage_norms;
                double worst = 0.0, first = 0.0;
                for (int step = 1; step <= 20; ++step) {
                    u = si.step(u, &stage_norms);
                    for (double sns : stage_norms) worst = std::max(worst, sns);
                    if (step == 1) first = sup_norm(u);
                }
                const bool bound_ok = worst <= gamma + 1e-12;
                const bool sharp_ok = first <= gs * gamma + 1e-12;
                if (!bound_ok || !sharp_ok) {
                    std::printf("FAIL %s %s tau=%g: worst=%.15g first=%.15g gs*gamma=%.15g\n",
                                setup.label, name.c_str(), tau, worst, first, gs * gamma);
                    ok = false;
                }
            }
        }
        std::printf("%s: certified schemes preserve |u| <= %.6f across tau sweep\n",
                    setup.label, gamma);
    }
    return ok ? kExitOk : kExitError;
}

int bench_violation(const fs::path& out, bool full, std::uint64_t seed) {
    const double certified_T = full ? 440.0 : 50.0;
    const ViolationDemo demo = run_mbp_violation_demo(certified_T, 20.0, seed);
    {
        std::ofstream os(out / "violation_ssp.csv");
        write_curve_csv(os, demo.ssp_curve);
        std::ofstream os2(out / "violation_certified.csv");
        write_curve_csv(os2, demo.certified_curve);
    }
    bool ok = true;
    if (demo.ssp_flagged)
        std::printf("SSP-sIFRK(2,2): sup norm exceeds 1 at t = %.3f\n", demo.ssp_violation_time);
    else {
        std::printf("SSP-sIFRK(2,2): no violation observed (unexpected)\n");
        ok = false;
    }
    if (demo.ssp_violation_time < 4.0 || demo.ssp_violation_time > 8.0) ok = false;
    if (demo.certified_flagged) {
        std::printf("sIFRK(2,2): violated the bound (unexpected)\n");
        ok = false;
    } else {
        std::printf("sIFRK(2,2): bound preserved through t = %g\n", certified_T);
    }
    return ok ? kExitOk : kExitError;
}

int bench_bubble(const fs::path& out, bool full) {
    const double T_end = full ? 330.0 : 100.0;
    std::vector<double> times;
    for (double t = 50.0; t <= std::min(T_end, 300.0) + 1e-9; t += 50.0) times.push_back(t);
    const BubbleRun run = run_bubble(256, 0.01, T_end, times);

    {
        std::ofstream os(out / "bubble_curve.csv");
        write_curve_csv(os, run.curve);
        std::ofstream rs(out / "bubble_radius.csv");
        rs << "t,radius\n";
        for (auto [t, r] : run.radius_at)
            rs << fmt_e(t) << ',' << fmt_e(r) << '\n';
    }

    bool ok = true;
    double prev = bubble_slice_radius(bubble_initial(
        Grid::cube(2, 256, -0.5, 0.5, BoundaryCondition::HomogeneousNeumann)));
    for (auto [t, r] : run.radius_at) {
        std::printf("  t = %5.1f  slice radius = %.6f\n", t, r);
        if (r > prev + 1e-12) {
            std::printf("  FAIL: radius grew\n");
            ok = false;
        }
        prev = r;
    }
    if (full) {
        if (run.vanish_time) {
            std::printf("bubble vanishes at t = %.2f\n", *run.vanish_time);
            if (*run.vanish_time < 290.0 || *run.vanish_time > 330.0) ok = false;
        } else {
            std::printf("FAIL: bubble did not vanish by t = %g\n", T_end);
            ok = false;
        }
    }
    return ok ? kExitOk : kExitError;
}

int bench_threed(const fs::path& out, bool full, std::uint64_t seed) {
    // Random-data relaxation in 3D: bound preservation plus a nonincreasing
    // energy envelope (within per-step slack) at tau = 0.01.
    const int n = full ? 128 : 64;
    const double T_end = full ? 10.0 : 5.0;
    const double eps = 0.01, kappa = 2.0, tau = 0.01;
    const Grid grid = Grid::cube(3, n, -0.5, 0.5, BoundaryCondition::Periodic);
    const OperatorSymbol sym = laplacian_symbol(grid, eps * eps).with_kappa(kappa);
    const StabilizedNonlinearity sn(cubic(1.0), kappa);
    const SchemeInstance si(*find_builtin("sifrk22"), sym, sn, tau);

    IntegrateOptions opt;
    opt.T = T_end;
    opt.record_stride = 10;
    const IntegrationResult res = integrate(si, random_initial(grid, -0.9, 0.9, seed), opt);
    {
        std::ofstream os(out / "threed_curve.csv");
        write_curve_csv(os, res.records);
    }

    bool ok = true;
    double prev_energy = res.records.front().energy;
    for (const auto& rec : res.records) {
        if (rec.sup_norm > 1.0 + 1e-12) ok = false;
        if (rec.energy > prev_energy + 1e-8 * std::abs(prev_energy)) ok = false;
        prev_energy = rec.energy;
    }
    std::printf("3D %d^3: final sup norm %.6f, energy %.6f -> %.6f (%s)\n", n,
                res.records.back().sup_norm, res.records.front().energy,
                res.records.back().energy, ok ? "pass" : "FAIL");
    return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sIFRK spectral solver and benchmark driver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", snapshots, scheme, certify_target, suite;
    std::optional<std::uint64_t> seed;
    bool expect_mbp = false, full = false;
    double x_max = 100.0;
    int samples = 100000;

    auto* run = app.add_subcommand("run", "integrate a configured problem");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--seed", seed, "seed override");
    run->add_option("--snapshots", snapshots, "comma-separated snapshot times");
    run->add_flag("--expect-mbp", expect_mbp, "exit 2 if the bound is violated");

    auto* certify = app.add_subcommand("certify", "certify a tableau");
    certify->add_option("target", certify_target, "builtin name or tableau file")->required();
    certify->add_option("--x-max", x_max, "sampling interval end");
    certify->add_option("--samples", samples, "sample count");

    auto* bench = app.add_subcommand("bench", "run a benchmark suite");
    bench->add_option("suite", suite, "temporal|spatial|mbp|violation|bubble|threed")->required();
    bench->add_option("--out", out_dir, "output directory");
    bench->add_option("--scheme", scheme, "restrict temporal suite to one scheme");
    bench->add_option("--seed", seed, "seed override");
    bench->add_flag("--full", full, "full-resolution (long-running) variant");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(config_path, out_dir == "out" ? "" : out_dir, seed, expect_mbp,
                           snapshots);
        if (*certify) return cmd_certify(certify_target, x_max, samples);
        if (*bench) {
            fs::create_directories(out_dir);
            const std::uint64_t s = seed.value_or(kBenchmarkSeed);
            if (suite == "temporal") return bench_temporal(out_dir, scheme, full);
            if (suite == "spatial") return bench_spatial(out_dir);
            if (suite == "mbp") return bench_mbp(s);
            if (suite == "violation") return bench_violation(out_dir, full, s);
            if (suite == "bubble") return bench_bubble(out_dir, full);
            if (suite == "threed") return bench_threed(out_dir, full, s);
            std::fprintf(stderr, "unknown suite '%s'\n", suite.c_str());
            return kExitError;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
