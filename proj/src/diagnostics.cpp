#include "sifrk/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sifrk {

double discrete_energy(const OperatorSymbol& sym, const NonlinearSpec& spec,
                       const Field& u) {
    if (!u.grid.same_layout(sym.grid()))
        throw std::invalid_argument("discrete_energy: grid mismatch");
    const Field lap = apply_laplacian(sym, u);
    double quad = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        quad += u.data[i] * lap.data[i];
        pot += spec.potential(u.data[i]);
    }
    return u.grid.cell_volume() * (-0.5 * quad + pot);
}

double l2_error(const Field& u, const Field& v) {
    require_same_grid(u, v, "l2_error");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u.data[i] - v.data[i];
        acc += d * d;
    }
    return std::sqrt(u.grid.cell_volume() * acc);
}

double linf_error(const Field& u, const Field& v) {
    require_same_grid(u, v, "linf_error");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        m = std::max(m, std::abs(u.data[i] - v.data[i]));
    return m;
}

RateTable convergence_rates(const std::vector<std::pair<double, double>>& l2_by_res,
                            const std::vector<double>& linf) {
    if (!linf.empty() && linf.size() != l2_by_res.size())
        throw std::invalid_argument("convergence_rates: linf length mismatch");
    RateTable table;
    for (std::size_t i = 0; i < l2_by_res.size(); ++i) {
        const auto& [res, err] = l2_by_res[i];
        if (!(err > 0.0))
            throw std::invalid_argument("convergence_rates: errors must be positive");
        RateRow row;
        row.resolution = res;
        row.l2 = err;
        row.linf = linf.empty() ? 0.0 : linf[i];
        if (i > 0) {
            row.l2_rate = std::log2(l2_by_res[i - 1].second / err);
            if (!linf.empty() && linf[i - 1] > 0.0 && linf[i] > 0.0)
                row.linf_rate = std::log2(linf[i - 1] / linf[i]);
        }
        table.rows.push_back(row);
    }
    return table;
}

void MbpMonitor::observe(const StepRecord& rec) {
    if (flag_) return;
    double worst = rec.sup_norm;
    for (double s : rec.stage_sup_norms) worst = std::max(worst, s);
    if (worst > gamma_ + tol_) flag_ = {rec.n, rec.t};
}

namespace {
void append_e(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    out += buf;
}
}  // namespace

std::string format_curve_csv(const std::vector<StepRecord>& records) {
    std::string out = "step,t,sup_norm,energy\n";
    for (const auto& r : records) {
        out += std::to_string(r.n);
        out += ',';
        append_e(out, r.t);
        out += ',';
        append_e(out, r.sup_norm);
        out += ',';
        append_e(out, r.energy);
        out += '\n';
    }
    return out;
}

void write_curve_csv(std::ostream& os, const std::vector<StepRecord>& records) {
    os << format_curve_csv(records);
}

void write_rate_csv(std::ostream& os, const RateTable& table) {
    os << "resolution,l2,l2_rate,linf,linf_rate\n";
    for (const auto& row : table.rows) {
        std::string line;
        append_e(line, row.resolution);
        line += ',';
        append_e(line, row.l2);
        line += ',';
        if (row.l2_rate) append_e(line, *row.l2_rate);
        line += ',';
        append_e(line, row.linf);
        line += ',';
        if (row.linf_rate) append_e(line, *row.linf_rate);
        os << line << '\n';
    }
}

}  // namespace sifrk
