#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sifrk/nonlinearity.hpp"
#include "sifrk/spectral.hpp"
#include "sifrk/tableau.hpp"

namespace sifrk {

/// One scheme bound to one operator, nonlinearity and step size.  The
/// exponential multiplier table holds exp(t (lambda_k - kappa)) for every
/// distinct stage time c_i*tau and gap (c_i-c_j)*tau in the tableau; times
/// coinciding within 1e-15 share one table.  Immutable after construction.
class SchemeInstance {
public:
    SchemeInstance(AnyTableau tableau, OperatorSymbol sym,
                   StabilizedNonlinearity sn, double tau);

    const AnyTableau& tableau() const { return tableau_; }
    const OperatorSymbol& symbol() const { return sym_; }
    const StabilizedNonlinearity& nonlinearity() const { return sn_; }
    double tau() const { return tau_; }
    int stages() const { return tableau_stages(tableau_); }
    bool is_butcher() const;

    /// Advance one step.  If stage_sup_norms is non-null it receives the
    /// sup norm of every internal stage and of the result.
    Field step(const Field& u, std::vector<double>* stage_sup_norms = nullptr) const;

private:
    Field step_butcher(const ButcherTableau& t, const Field& u,
                       std::vector<double>* stage_sup_norms) const;
    Field step_shu_osher(const ShuOsherTableau& t, const Field& u,
                         std::vector<double>* stage_sup_norms) const;
    const std::vector<double>& multiplier(double time) const;

    AnyTableau tableau_;
    OperatorSymbol sym_;
    StabilizedNonlinearity sn_;
    double tau_;
    std::vector<double> times_;                 // distinct exponential times
    std::vector<std::vector<double>> tables_;   // exp(t(lambda-kappa))/norm
};

struct StepRecord {
    std::int64_t n = 0;
    double t = 0.0;
    double sup_norm = 0.0;
    double energy = 0.0;
    std::vector<double> stage_sup_norms;  // filled when requested
};

struct IntegrateOptions {
    double T = 0.0;
    std::int64_t record_stride = 1;   // record every k-th step (plus step 0 and the last)
    bool record_energy = true;
    bool record_stages = false;
    /// Called for every record; the field is the state at that record.
    std::function<void(const StepRecord&, const Field&)> callback;
};

struct IntegrationResult {
    Field final;
    std::vector<StepRecord> records;
    std::int64_t steps = 0;
    double t_end = 0.0;
    double requested_T = 0.0;
};

/// Fixed-step driver: steps = round(T/tau), T adjusted to steps*tau (a
/// warning goes to stderr if the relative adjustment exceeds 1e-12).
/// Energy uses the scheme's symbol with kappa ignored.
IntegrationResult integrate(const SchemeInstance& si, const Field& u0,
                            const IntegrateOptions& opt);

}  // namespace sifrk
