#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sifrk/nonlinearity.hpp"
#include "sifrk/spectral.hpp"
#include "sifrk/stepper.hpp"

namespace sifrk {

struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    double tau_or_h = 0.0;
    std::string label;
};

struct RateRow {
    double resolution = 0.0;
    double l2 = 0.0;
    std::optional<double> l2_rate;
    double linf = 0.0;
    std::optional<double> linf_rate;
};

struct RateTable {
    std::vector<RateRow> rows;
};

/// E[u] = h^d [ -1/2 sum_i u_i (L^h u)_i + sum_i F(u_i) ], with the
/// unstabilized operator (the symbol's kappa is ignored; the diffusivity is
/// part of L^h).
double discrete_energy(const OperatorSymbol& sym, const NonlinearSpec& spec,
                       const Field& u);

/// sqrt(h^d sum (u_i - v_i)^2)
double l2_error(const Field& u, const Field& v);
double linf_error(const Field& u, const Field& v);

/// rate_i = log2(err_{i-1}/err_i) for an ordered ladder of halving
/// resolutions.  Throws on nonpositive errors.
RateTable convergence_rates(const std::vector<std::pair<double, double>>& l2_by_res,
                            const std::vector<double>& linf = {});

/// Watches sup norms against gamma + tolerance and remembers the first
/// violation.  gamma may be +infinity (never flags).
class MbpMonitor {
public:
    MbpMonitor(double gamma, double tolerance)
        : gamma_(gamma), tol_(tolerance) {}

    void observe(const StepRecord& rec);

    bool flagged() const { return flag_.has_value(); }
    std::int64_t flag_step() const { return flag_->first; }
    double flag_time() const { return flag_->second; }

private:
    double gamma_, tol_;
    std::optional<std::pair<std::int64_t, double>> flag_;
};

/// CSV writers; all floats use "%.12e" so identical runs produce identical
/// bytes.
void write_curve_csv(std::ostream& os, const std::vector<StepRecord>& records);
void write_rate_csv(std::ostream& os, const RateTable& table);
std::string format_curve_csv(const std::vector<StepRecord>& records);

}  // namespace sifrk
