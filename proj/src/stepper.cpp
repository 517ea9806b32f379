#include "sifrk/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sifrk {

namespace {

bool is_finite_field(const Field& u) {
    for (double v : u.data)
        if (!std::isfinite(v)) return false;
    return true;
}

[[noreturn]] void stage_failure(int stage) {
    throw std::runtime_error("non-finite field at stage " + std::to_string(stage));
}

}  // namespace

SchemeInstance::SchemeInstance(AnyTableau tableau, OperatorSymbol sym,
                               StabilizedNonlinearity sn, double tau)
    : tableau_(std::move(tableau)), sym_(std::move(sym)), sn_(std::move(sn)), tau_(tau) {
    if (!(tau_ > 0.0)) throw std::invalid_argument("SchemeInstance: tau must be positive");
    if (sym_.kappa() != sn_.kappa())
        throw std::invalid_argument("SchemeInstance: operator and nonlinearity disagree on kappa");

    // Collect the distinct exponential times c_i*tau and (c_i-c_j)*tau.
    auto add_time = [this](double t) {
        for (double have : times_)
            if (std::abs(have - t) <= 1e-15) return;
        times_.push_back(t);
    };
    const int s = stages();
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            for (int i = 1; i <= s; ++i) {
                if constexpr (std::is_same_v<T, ButcherTableau>) add_time(t.c(i) * tau_);
                for (int j = 0; j < i; ++j) add_time((t.c(i) - t.c(j)) * tau_);
            }
        },
        tableau_);

    const auto& lam = sym_.eigenvalues();
    const double kappa = sym_.kappa();
    const double inv_norm = 1.0 / transforms::normalization(sym_.grid());
    tables_.reserve(times_.size());
    for (double t : times_) {
        std::vector<double> m(lam.size());
        for (std::size_t k = 0; k < lam.size(); ++k)
            m[k] = std::exp(t * (lam[k] - kappa)) * inv_norm;
        tables_.push_back(std::move(m));
    }
}

bool SchemeInstance::is_butcher() const {
    return std::holds_alternative<ButcherTableau>(tableau_);
}

const std::vector<double>& SchemeInstance::multiplier(double time) const {
    for (std::size_t k = 0; k < times_.size(); ++k)
        if (std::abs(times_[k] - time) <= 1e-15) return tables_[k];
    throw std::logic_error("SchemeInstance: missing multiplier table");
}

Field SchemeInstance::step(const Field& u, std::vector<double>* stage_sup_norms) const {
    if (!u.grid.same_layout(sym_.grid()))
        throw std::invalid_argument("SchemeInstance::step: grid mismatch");
    if (stage_sup_norms) stage_sup_norms->clear();
    if (const auto* b = std::get_if<ButcherTableau>(&tableau_))
        return step_butcher(*b, u, stage_sup_norms);
    return step_shu_osher(std::get<ShuOsherTableau>(tableau_), u, stage_sup_norms);
}

// u^(i) = exp(c_i tau L_k) u^n + tau sum_j a_ij exp((c_i-c_j) tau L_k) N[u^(j)]
// All exponentials are diagonal, so each stage is one inverse transform of an
// accumulated spectrum; each stage contributes one forward transform of its
// N-evaluation.
Field SchemeInstance::step_butcher(const ButcherTableau& t, const Field& u,
                                   std::vector<double>* stage_sup_norms) const {
    const Grid& g = sym_.grid();
    const int s = t.stages();
    const std::size_t n = g.size();

    std::vector<double> u_hat(n);
    transforms::forward(g, u.data, u_hat);

    std::vector<std::vector<double>> n_hat(s);  // spectra of N[u^(j)], j = 0..s-1
    Field work(g);
    apply_N(sn_, u, work);
    n_hat[0].resize(n);
    transforms::forward(g, work.data, n_hat[0]);

    std::vector<double> spec(n);
    Field stage(g);
    for (int i = 1; i <= s; ++i) {
        const auto& mc = multiplier(t.c(i) * tau_);
        for (std::size_t k = 0; k < n; ++k) spec[k] = mc[k] * u_hat[k];
        for (int j = 0; j < i; ++j) {
            const double w = tau_ * t.a(i, j);
            if (w == 0.0) continue;
            const auto& mg = multiplier((t.c(i) - t.c(j)) * tau_);
            const auto& nj = n_hat[j];
            for (std::size_t k = 0; k < n; ++k) spec[k] += w * mg[k] * nj[k];
        }
        transforms::backward_raw(g, spec, stage.data);
        if (!is_finite_field(stage)) stage_failure(i);
        if (stage_sup_norms) stage_sup_norms->push_back(sup_norm(stage));
        if (i < s) {
            apply_N(sn_, stage, work);
            n_hat[i].resize(n);
            transforms::forward(g, work.data, n_hat[i]);
        }
    }
    return stage;
}

// u^(i) = sum_j exp((c_i-c_j) tau L_k) (alpha_ij u^(j) + tau beta_ij N[u^(j)])
Field SchemeInstance::step_shu_osher(const ShuOsherTableau& t, const Field& u,
                                     std::vector<double>* stage_sup_norms) const {
    const Grid& g = sym_.grid();
    const int s = t.stages();
    const std::size_t n = g.size();

    std::vector<std::vector<double>> u_hat(s), n_hat(s);
    Field work(g);
    u_hat[0].resize(n);
    transforms::forward(g, u.data, u_hat[0]);
    apply_N(sn_, u, work);
    n_hat[0].resize(n);
    transforms::forward(g, work.data, n_hat[0]);

    std::vector<double> spec(n);
    Field stage(g);
    for (int i = 1; i <= s; ++i) {
        std::fill(spec.begin(), spec.end(), 0.0);
        for (int j = 0; j < i; ++j) {
            const double a = t.alpha(i, j);
            const double b = tau_ * t.beta(i, j);
            if (a == 0.0 && b == 0.0) continue;
            const auto& m = multiplier((t.c(i) - t.c(j)) * tau_);
            const auto& uj = u_hat[j];
            const auto& nj = n_hat[j];
            for (std::size_t k = 0; k < n; ++k)
                spec[k] += m[k] * (a * uj[k] + b * nj[k]);
        }
        transforms::backward_raw(g, spec, stage.data);
        if (!is_finite_field(stage)) stage_failure(i);
        if (stage_sup_norms) stage_sup_norms->push_back(sup_norm(stage));
        if (i < s) {
            u_hat[i].resize(n);
            transforms::forward(g, stage.data, u_hat[i]);
            apply_N(sn_, stage, work);
            n_hat[i].resize(n);
            transforms::forward(g, work.data, n_hat[i]);
        }
    }
    return stage;
}

IntegrationResult integrate(const SchemeInstance& si, const Field& u0,
                            const IntegrateOptions& opt) {
    if (opt.T < 0.0) throw std::invalid_argument("integrate: T must be nonnegative");
    const double tau = si.tau();
    const std::int64_t steps = static_cast<std::int64_t>(std::llround(opt.T / tau));
    const double t_end = steps * tau;
    if (opt.T > 0.0 && std::abs(t_end - opt.T) > 1e-12 * opt.T)
        std::fprintf(stderr, "integrate: T adjusted from %.17g to %.17g (%lld steps)\n",
                     opt.T, t_end, static_cast<long long>(steps));

    IntegrationResult res;
    res.requested_T = opt.T;
    res.steps = steps;
    res.t_end = t_end;

    // The energy's operator part ignores kappa by contract.
    auto energy_of = [&](const Field& u) {
        if (!opt.record_energy) return 0.0;
        const Field lap = apply_laplacian(si.symbol(), u);
        double quad = 0.0, pot = 0.0;
        const auto& F = si.nonlinearity().spec().potential;
        for (std::size_t k = 0; k < u.size(); ++k) {
            quad += u.data[k] * lap.data[k];
            pot += F(u.data[k]);
        }
        return u.grid.cell_volume() * (-0.5 * quad + pot);
    };

    const std::int64_t stride = opt.record_stride > 0 ? opt.record_stride : 1;
    Field u = u0;
    std::vector<double> stage_norms;

    auto record = [&](std::int64_t nstep, const Field& state,
                      const std::vector<double>* stages) {
        StepRecord rec;
        rec.n = nstep;
        rec.t = nstep * tau;
        rec.sup_norm = sup_norm(state);
        rec.energy = energy_of(state);
        if (stages) rec.stage_sup_norms = *stages;
        if (opt.callback) opt.callback(rec, state);
        res.records.push_back(std::move(rec));
    };

    record(0, u, nullptr);
    for (std::int64_t nstep = 1; nstep <= steps; ++nstep) {
        try {
            u = si.step(u, opt.record_stages ? &stage_norms : nullptr);
        } catch (const std::exception& e) {
            throw std::runtime_error("integrate: step " + std::to_string(nstep) + ": " + e.what());
        }
        if (nstep % stride == 0 || nstep == steps)
            record(nstep, u, opt.record_stages ? &stage_norms : nullptr);
    }
    res.final = std::move(u);
    return res;
}

}  // namespace sifrk
