#include "sifrk/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace sifrk {

namespace transforms {

int thread_count() {
    static const int n = [] {
        const char* env = std::getenv("SIFRK_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        return v > 0 ? v : 1;
    }();
    return n;
}

namespace {

struct Plan {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double norm = 1.0;

    ~Plan() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

using PlanKey = std::tuple<int, int, int, int, int>;  // dim, n0, n1, n2, bc

PlanKey key_of(const Grid& g) {
    return {g.dim(), g.extent(0), g.dim() > 1 ? g.extent(1) : 1,
            g.dim() > 2 ? g.extent(2) : 1, static_cast<int>(g.bc())};
}

// Planner access is serialized; execution through the new-array interface is
// thread safe.  Plans use FFTW_UNALIGNED so they apply to any caller buffer,
// and FFTW_ESTIMATE so repeated runs pick identical algorithms.
const Plan& plan_for(const Grid& g) {
    static std::mutex mu;
    static std::map<PlanKey, std::unique_ptr<Plan>> cache;

    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key_of(g)];
    if (slot) return *slot;

    static bool threads_ready = [] {
        fftw_init_threads();
        return true;
    }();
    (void)threads_ready;
    fftw_plan_with_nthreads(thread_count());

    auto plan = std::make_unique<Plan>();
    int n[3];
    fftw_r2r_kind fk[3], bk[3];
    plan->norm = 1.0;
    for (int d = 0; d < g.dim(); ++d) {
        n[d] = g.extent(d);
        if (g.bc() == BoundaryCondition::Periodic) {
            fk[d] = FFTW_R2HC;
            bk[d] = FFTW_HC2R;
            plan->norm *= n[d];
        } else {
            fk[d] = FFTW_REDFT10;
            bk[d] = FFTW_REDFT01;
            plan->norm *= 2.0 * n[d];
        }
    }
    std::vector<double> in(g.size()), out(g.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan->fwd = fftw_plan_r2r(g.dim(), n, in.data(), out.data(), fk, flags);
    plan->bwd = fftw_plan_r2r(g.dim(), n, in.data(), out.data(), bk, flags);
    if (!plan->fwd || !plan->bwd)
        throw std::runtime_error("transforms: FFTW plan creation failed");
    return *(slot = std::move(plan));
}

}  // namespace

void forward(const Grid& grid, std::span<const double> in, std::span<double> out) {
    if (in.size() != grid.size() || out.size() != grid.size())
        throw std::invalid_argument("transforms::forward: size mismatch");
    fftw_execute_r2r(plan_for(grid).fwd, const_cast<double*>(in.data()), out.data());
}

void backward_raw(const Grid& grid, std::span<const double> in, std::span<double> out) {
    if (in.size() != grid.size() || out.size() != grid.size())
        throw std::invalid_argument("transforms::backward_raw: size mismatch");
    fftw_execute_r2r(plan_for(grid).bwd, const_cast<double*>(in.data()), out.data());
}

double normalization(const Grid& grid) { return plan_for(grid).norm; }

}  // namespace transforms

OperatorSymbol::OperatorSymbol(Grid grid, std::vector<double> lambda, double kappa,
                               double diffusivity)
    : grid_(std::move(grid)), lambda_(std::move(lambda)), kappa_(kappa),
      diffusivity_(diffusivity) {
    if (lambda_.size() != grid_.size())
        throw std::invalid_argument("OperatorSymbol: eigenvalue count mismatch");
    if (kappa_ < 0.0) throw std::invalid_argument("OperatorSymbol: kappa must be >= 0");
    if (std::abs(lambda_[0]) > 1e-12)
        throw std::invalid_argument("OperatorSymbol: constant mode must have lambda = 0");
    for (double l : lambda_)
        if (l > 1e-12 || !std::isfinite(l))
            throw std::invalid_argument("OperatorSymbol: eigenvalues must be nonpositive");
}

OperatorSymbol OperatorSymbol::with_kappa(double kappa) const {
    return OperatorSymbol(grid_, lambda_, kappa, diffusivity_);
}

OperatorSymbol laplacian_symbol(const Grid& grid, double diffusivity) {
    if (!(diffusivity > 0.0))
        throw std::invalid_argument("laplacian_symbol: diffusivity must be positive");
    const bool periodic = grid.bc() == BoundaryCondition::Periodic;

    std::array<std::vector<double>, 3> axis;
    for (int d = 0; d < grid.dim(); ++d) {
        const int n = grid.extent(d);
        const double h2 = grid.spacing(d) * grid.spacing(d);
        axis[d].resize(n);
        for (int k = 0; k < n; ++k) {
            const double theta = (periodic ? 2.0 : 1.0) * std::numbers::pi * k / n;
            axis[d][k] = diffusivity * (2.0 * std::cos(theta) - 2.0) / h2;
        }
        axis[d][0] = 0.0;
    }

    std::vector<double> lambda(grid.size());
    const int n0 = grid.extent(0);
    const int n1 = grid.dim() > 1 ? grid.extent(1) : 1;
    const int n2 = grid.dim() > 2 ? grid.extent(2) : 1;
    std::size_t idx = 0;
    for (int k0 = 0; k0 < n0; ++k0)
        for (int k1 = 0; k1 < n1; ++k1)
            for (int k2 = 0; k2 < n2; ++k2, ++idx) {
                double l = axis[0][k0];
                if (grid.dim() > 1) l += axis[1][k1];
                if (grid.dim() > 2) l += axis[2][k2];
                lambda[idx] = l;
            }
    return OperatorSymbol(grid, std::move(lambda), 0.0, diffusivity);
}

Field apply_exp(const OperatorSymbol& sym, double t, const Field& u) {
    if (!u.grid.same_layout(sym.grid()))
        throw std::invalid_argument("apply_exp: grid mismatch");
    if (t < 0.0) throw std::invalid_argument("apply_exp: t must be nonnegative");

    const Grid& g = sym.grid();
    std::vector<double> spec(g.size());
    transforms::forward(g, u.data, spec);
    const double inv_norm = 1.0 / transforms::normalization(g);
    const auto& lam = sym.eigenvalues();
    const double kappa = sym.kappa();
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] *= std::exp(t * (lam[i] - kappa)) * inv_norm;
    Field out(g);
    transforms::backward_raw(g, spec, out.data);
    return out;
}

Field apply_laplacian(const OperatorSymbol& sym, const Field& u) {
    if (!u.grid.same_layout(sym.grid()))
        throw std::invalid_argument("apply_laplacian: grid mismatch");
    const Grid& g = sym.grid();
    const bool periodic = g.bc() == BoundaryCondition::Periodic;
    const double nu = sym.diffusivity();

    Field out(g, 0.0);
    // Process lines along each dimension; view the array as outer x n x inner.
    std::size_t inner = 1;
    for (int d = g.dim() - 1; d >= 0; --d) {
        const int n = g.extent(d);
        const std::size_t outer = g.size() / (inner * n);
        const double w = nu / (g.spacing(d) * g.spacing(d));
        for (std::size_t o = 0; o < outer; ++o) {
            const std::size_t base = o * n * inner;
            for (std::size_t in_i = 0; in_i < inner; ++in_i) {
                for (int k = 0; k < n; ++k) {
                    const double uc = u.data[base + k * inner + in_i];
                    double ul, ur;
                    if (k > 0) ul = u.data[base + (k - 1) * inner + in_i];
                    else ul = periodic ? u.data[base + (n - 1) * inner + in_i] : uc;
                    if (k < n - 1) ur = u.data[base + (k + 1) * inner + in_i];
                    else ur = periodic ? u.data[base + in_i] : uc;
                    out.data[base + k * inner + in_i] += w * (ul - 2.0 * uc + ur);
                }
            }
        }
        inner *= n;
    }
    return out;
}

double sup_norm(const Field& u) {
    double m = 0.0;
    for (double v : u.data) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace sifrk
