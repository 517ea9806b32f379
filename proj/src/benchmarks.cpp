#include "sifrk/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sifrk/rng.hpp"

namespace sifrk {

double traveling_wave_speed(double eps) { return 3.0 / (std::numbers::sqrt2 * eps); }

double traveling_wave_exact(double eps, double t, double x) {
    if (!(eps > 0.0)) throw std::invalid_argument("traveling_wave_exact: eps must be positive");
    const double width = 2.0 * std::numbers::sqrt2 * eps;
    return 0.5 * (1.0 - std::tanh((x - traveling_wave_speed(eps) * t) / width));
}

Field traveling_wave_field(const Grid& grid, double eps, double t) {
    Field u(grid);
    const int n0 = grid.extent(0);
    std::size_t stride0 = grid.size() / n0;
    for (int k = 0; k < n0; ++k) {
        const double v = traveling_wave_exact(eps, t, grid.coordinate(0, k));
        std::fill_n(u.data.begin() + k * stride0, stride0, v);
    }
    return u;
}

Field bubble_initial(const Grid& grid, double radius) {
    if (grid.dim() != 2) throw std::invalid_argument("bubble_initial: 2D grid required");
    Field u(grid);
    const int n0 = grid.extent(0), n1 = grid.extent(1);
    const double r2 = radius * radius;
    for (int i = 0; i < n0; ++i) {
        const double x = grid.coordinate(0, i);
        for (int j = 0; j < n1; ++j) {
            const double y = grid.coordinate(1, j);
            u.data[static_cast<std::size_t>(i) * n1 + j] = (x * x + y * y <= r2) ? 1.0 : -1.0;
        }
    }
    return u;
}

Field random_initial(const Grid& grid, double low, double high, std::uint64_t seed) {
    if (!(low < high)) throw std::invalid_argument("random_initial: need low < high");
    Field u(grid);
    SplitMix64 rng(seed);
    for (auto& v : u.data) v = rng.next_in(low, high);
    return u;
}

double TravelingWaveProblem::end_time() const {
    return T > 0.0 ? T : std::numbers::sqrt2 * eps / 4.0;
}

namespace {

Grid tw_grid(const TravelingWaveProblem& p, double h) {
    const int n = static_cast<int>(std::llround(1.0 / h));
    if (std::abs(n * h - 1.0) > 1e-12)
        throw std::invalid_argument("traveling wave: 1/h must be an integer");
    return Grid::cube(p.dim, n, -0.5, 0.5, p.bc);
}

Field tw_solve(const AnyTableau& scheme, const TravelingWaveProblem& p,
               const Grid& grid, double tau) {
    const OperatorSymbol sym = laplacian_symbol(grid, 1.0).with_kappa(p.kappa());
    const StabilizedNonlinearity sn(cubic(p.eps * p.eps), p.kappa());
    const SchemeInstance si(scheme, sym, sn, tau);
    IntegrateOptions opt;
    opt.T = p.end_time();
    opt.record_stride = std::numeric_limits<std::int64_t>::max();
    opt.record_energy = false;
    return integrate(si, traveling_wave_field(grid, p.eps, 0.0), opt).final;
}

}  // namespace

RateTable run_temporal_convergence(const AnyTableau& scheme,
                                   const TravelingWaveProblem& problem,
                                   const std::vector<double>& taus, double h) {
    const Grid grid = tw_grid(problem, h);
    const Field exact = traveling_wave_field(grid, problem.eps, problem.end_time());
    std::vector<std::pair<double, double>> l2;
    std::vector<double> linf;
    for (double tau : taus) {
        const Field u = tw_solve(scheme, problem, grid, tau);
        l2.emplace_back(tau, l2_error(u, exact));
        linf.push_back(linf_error(u, exact));
    }
    return convergence_rates(l2, linf);
}

Field resample(const Field& fine, const Grid& target) {
    const Grid& gf = fine.grid;
    if (gf.dim() != target.dim() || gf.bc() != target.bc())
        throw std::invalid_argument("resample: incompatible grids");
    for (int d = 0; d < gf.dim(); ++d)
        if (gf.lower(d) != target.lower(d) || gf.upper(d) != target.upper(d))
            throw std::invalid_argument("resample: boxes differ");
    if (gf.same_layout(target)) return fine;

    if (gf.bc() == BoundaryCondition::Periodic) {
        // Node-centered grids nest when extents divide evenly.
        std::array<int, 3> ratio{1, 1, 1};
        for (int d = 0; d < gf.dim(); ++d) {
            if (gf.extent(d) % target.extent(d) != 0)
                throw std::invalid_argument("resample: periodic grids must nest");
            ratio[d] = gf.extent(d) / target.extent(d);
        }
        Field out(target);
        const int n0 = target.extent(0);
        const int n1 = target.dim() > 1 ? target.extent(1) : 1;
        const int n2 = target.dim() > 2 ? target.extent(2) : 1;
        const int f1 = gf.dim() > 1 ? gf.extent(1) : 1;
        const int f2 = gf.dim() > 2 ? gf.extent(2) : 1;
        std::size_t idx = 0;
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j)
                for (int k = 0; k < n2; ++k, ++idx)
                    out.data[idx] = fine.data[(static_cast<std::size_t>(i) * ratio[0] * f1 +
                                               static_cast<std::size_t>(j) * ratio[1]) * f2 +
                                              static_cast<std::size_t>(k) * ratio[2]];
        return out;
    }

    // Neumann: evaluate the cosine series of the fine field at the target
    // cell centers, one dimension at a time.
    std::vector<double> coef(gf.size());
    transforms::forward(gf, fine.data, coef);
    std::vector<int> shape = {gf.extent(0), gf.dim() > 1 ? gf.extent(1) : 1,
                              gf.dim() > 2 ? gf.extent(2) : 1};

    for (int d = 0; d < gf.dim(); ++d) {
        const int nf = shape[d];
        const int nt = target.extent(d);
        const double len = gf.upper(d) - gf.lower(d);
        // E[p][k] = cos(pi k (x_p - a)/len) with the REDFT01-style weights.
        std::vector<double> E(static_cast<std::size_t>(nt) * nf);
        for (int p = 0; p < nt; ++p) {
            const double xi = (target.coordinate(d, p) - gf.lower(d)) / len;
            E[static_cast<std::size_t>(p) * nf] = 1.0;
            for (int k = 1; k < nf; ++k)
                E[static_cast<std::size_t>(p) * nf + k] =
                    2.0 * std::cos(std::numbers::pi * k * xi);
        }
        // Contract dimension d: view as outer x nf x inner.
        std::size_t inner = 1;
        for (int dd = d + 1; dd < 3; ++dd) inner *= shape[dd];
        std::size_t outer = 1;
        for (int dd = 0; dd < d; ++dd) outer *= shape[dd];
        std::vector<double> next(outer * nt * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o)
            for (int p = 0; p < nt; ++p) {
                const double* e = &E[static_cast<std::size_t>(p) * nf];
                double* dst = &next[(o * nt + p) * inner];
                for (int k = 0; k < nf; ++k) {
                    const double w = e[k];
                    if (w == 0.0) continue;
                    const double* src = &coef[(o * nf + k) * inner];
                    for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
                }
            }
        coef = std::move(next);
        shape[d] = nt;
        // Divide by this dimension's 2*nf normalization at the end.
    }

    Field out(target);
    double norm = 1.0;
    for (int d = 0; d < gf.dim(); ++d) norm *= 2.0 * gf.extent(d);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = coef[i] / norm;
    return out;
}

RateTable run_spatial_convergence(const AnyTableau& scheme,
                                  const TravelingWaveProblem& problem,
                                  const std::vector<double>& hs, double tau) {
    if (hs.size() < 2) throw std::invalid_argument("run_spatial_convergence: need >= 2 rungs");
    for (std::size_t i = 1; i < hs.size(); ++i)
        if (std::abs(hs[i - 1] / hs[i] - 2.0) > 1e-12)
            throw std::invalid_argument("run_spatial_convergence: h must halve");

    // Self-convergence: each rung against the next finer solution (the finest
    // against one extra run at half its spacing), so the shared temporal
    // error cancels and the spatial component is exposed.
    std::vector<double> all_h = hs;
    all_h.push_back(hs.back() / 2.0);
    std::vector<Field> solutions;
    solutions.reserve(all_h.size());
    for (double h : all_h)
        solutions.push_back(tw_solve(scheme, problem, tw_grid(problem, h), tau));

    std::vector<std::pair<double, double>> l2;
    std::vector<double> linf;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Field finer = resample(solutions[i + 1], solutions[i].grid);
        l2.emplace_back(hs[i], l2_error(solutions[i], finer));
        linf.push_back(linf_error(solutions[i], finer));
    }
    return convergence_rates(l2, linf);
}

RateWindow temporal_rate_window(int order) {
    switch (order) {
        case 1: return {0.85, 1.15};
        case 2: return {1.85, 2.15};
        case 3: return {2.7, 3.3};
        default: throw std::invalid_argument("temporal_rate_window: unsupported order");
    }
}

std::vector<DeskTemporalOutcome> run_desk_temporal(int n, int dim) {
    TravelingWaveProblem problem;
    problem.dim = dim;
    const double T = problem.end_time();
    const double h = 1.0 / n;

    struct Entry {
        const char* scheme;
        int order;
        std::vector<int> divisors;  // tau = T/divisor, coarse -> fine
    };
    const std::vector<Entry> entries = {
        {"sifrk11", 1, {128, 256, 512, 1024, 2048}},
        {"sifrk22", 2, {64, 128, 256, 512, 1024}},
        {"sifrk32", 2, {64, 128, 256, 512, 1024}},
        {"sifrk42", 2, {64, 128, 256, 512, 1024}},
        {"heun33", 3, {32, 64, 128, 256, 512}},
    };

    std::vector<DeskTemporalOutcome> out;
    for (const auto& e : entries) {
        std::vector<double> taus;
        for (int d : e.divisors) taus.push_back(T / d);
        DeskTemporalOutcome o;
        o.scheme = e.scheme;
        o.order = e.order;
        o.table = run_temporal_convergence(*find_builtin(e.scheme), problem, taus, h);
        o.finest_l2_rate = *o.table.rows.back().l2_rate;
        o.finest_l2 = o.table.rows.back().l2;
        out.push_back(std::move(o));
    }
    return out;
}

RateTable run_desk_spatial(int dim) {
    TravelingWaveProblem problem;
    problem.dim = dim;
    problem.bc = BoundaryCondition::HomogeneousNeumann;
    const double full_T = std::numbers::sqrt2 * problem.eps / 4.0;
    problem.T = full_T / 4.0;
    const double tau = full_T / 2048.0;
    return run_spatial_convergence(*find_builtin("sifrk22"), problem,
                                   {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256}, tau);
}

ViolationDemo run_mbp_violation_demo(double certified_T, double ssp_cap,
                                     std::uint64_t seed) {
    const double eps = 0.01, kappa = 2.0, tau = 0.1;
    const Grid grid = Grid::cube(2, 256, -0.5, 0.5, BoundaryCondition::Periodic);
    const OperatorSymbol sym = laplacian_symbol(grid, eps * eps).with_kappa(kappa);
    const StabilizedNonlinearity sn(cubic(1.0), kappa);
    const Field u0 = random_initial(grid, -0.9, 0.9, seed);

    ViolationDemo demo;
    const double tol = 1e-12;

    {
        const SchemeInstance ssp(*find_builtin("ssp-sifrk22"), sym, sn, tau);
        Field u = u0;
        StepRecord rec{0, 0.0, sup_norm(u), 0.0, {}};
        demo.ssp_curve.push_back(rec);
        const auto steps = static_cast<std::int64_t>(std::llround(ssp_cap / tau));
        for (std::int64_t n = 1; n <= steps; ++n) {
            u = ssp.step(u);
            rec = {n, n * tau, sup_norm(u), 0.0, {}};
            demo.ssp_curve.push_back(rec);
            if (rec.sup_norm > 1.0 + tol) {
                demo.ssp_flagged = true;
                demo.ssp_violation_time = rec.t;
                break;
            }
        }
    }

    {
        const SchemeInstance certified(*find_builtin("sifrk22"), sym, sn, tau);
        Field u = u0;
        demo.certified_curve.push_back({0, 0.0, sup_norm(u), 0.0, {}});
        const auto steps = static_cast<std::int64_t>(std::llround(certified_T / tau));
        for (std::int64_t n = 1; n <= steps; ++n) {
            u = certified.step(u);
            StepRecord rec{n, n * tau, sup_norm(u), 0.0, {}};
            demo.certified_curve.push_back(rec);
            if (rec.sup_norm > 1.0 + tol) {
                demo.certified_flagged = true;
                break;
            }
        }
    }
    return demo;
}

double bubble_slice_radius(const Field& u) {
    const Grid& g = u.grid;
    if (g.dim() != 2) throw std::invalid_argument("bubble_slice_radius: 2D field required");
    const int n0 = g.extent(0), n1 = g.extent(1);

    int j0 = 0;
    double best = std::abs(g.coordinate(1, 0));
    for (int j = 1; j < n1; ++j) {
        const double d = std::abs(g.coordinate(1, j));
        if (d < best) {
            best = d;
            j0 = j;
        }
    }
    auto slice = [&](int i) { return u.data[static_cast<std::size_t>(i) * n1 + j0]; };

    int ic = 0;
    best = std::abs(g.coordinate(0, 0));
    for (int i = 1; i < n0; ++i) {
        const double d = std::abs(g.coordinate(0, i));
        if (d < best) {
            best = d;
            ic = i;
        }
    }
    if (slice(ic) <= 0.0) return 0.0;

    auto crossing = [&](int dir) {
        for (int i = ic; i + dir >= 0 && i + dir < n0; i += dir) {
            const double a = slice(i), b = slice(i + dir);
            if (b <= 0.0) {
                const double xa = g.coordinate(0, i), xb = g.coordinate(0, i + dir);
                return std::abs(xa + (xb - xa) * a / (a - b));
            }
        }
        return 0.5;  // positive out to the boundary
    };
    return 0.5 * (crossing(+1) + crossing(-1));
}

BubbleRun run_bubble(int n, double tau, double T_end,
                     const std::vector<double>& radius_times) {
    const double eps = 0.01, kappa = 2.0;
    const Grid grid = Grid::cube(2, n, -0.5, 0.5, BoundaryCondition::HomogeneousNeumann);
    const OperatorSymbol sym = laplacian_symbol(grid, eps * eps).with_kappa(kappa);
    const StabilizedNonlinearity sn(cubic(1.0), kappa);
    const SchemeInstance si(*find_builtin("sifrk22"), sym, sn, tau);

    BubbleRun run;
    Field u = bubble_initial(grid);
    const auto steps = static_cast<std::int64_t>(std::llround(T_end / tau));
    const auto stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(1.0 / tau)));

    auto note_radius = [&](std::int64_t nstep, const Field& state) {
        for (double t : radius_times)
            if (std::abs(nstep * tau - t) <= 0.5 * tau)
                run.radius_at.emplace_back(t, bubble_slice_radius(state));
    };
    auto max_value = [](const Field& f) {
        double m = f.data[0];
        for (double v : f.data) m = std::max(m, v);
        return m;
    };

    run.curve.push_back({0, 0.0, sup_norm(u), 0.0, {}});
    note_radius(0, u);
    for (std::int64_t nstep = 1; nstep <= steps; ++nstep) {
        u = si.step(u);
        note_radius(nstep, u);
        if (!run.vanish_time && max_value(u) < 0.0) run.vanish_time = nstep * tau;
        if (nstep % stride == 0 || nstep == steps)
            run.curve.push_back({nstep, nstep * tau, sup_norm(u), 0.0, {}});
    }
    return run;
}

}  // namespace sifrk
