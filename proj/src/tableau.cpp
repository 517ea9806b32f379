#include "sifrk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace sifrk {

namespace {
constexpr double kAlgebraicTol = 1e-14;

void check_rows(int s, const std::vector<std::vector<double>>& rows,
                const char* what) {
    if (s < 1) throw std::invalid_argument(std::string(what) + ": stage count must be positive");
    if (static_cast<int>(rows.size()) != s)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(s) + " coefficient rows");
    for (int i = 1; i <= s; ++i)
        if (static_cast<int>(rows[i - 1].size()) != i)
            throw std::invalid_argument(std::string(what) + ": row " + std::to_string(i) +
                                        " must have " + std::to_string(i) + " entries");
}

void check_c(int s, const std::vector<double>& c, const char* what) {
    if (static_cast<int>(c.size()) != s + 1)
        throw std::invalid_argument(std::string(what) + ": abscissa vector must have s+1 entries");
}
}  // namespace

ButcherTableau::ButcherTableau(int stages, std::vector<std::vector<double>> a,
                               std::vector<double> c, std::string name, int order)
    : s_(stages), a_(std::move(a)), c_(std::move(c)), name_(std::move(name)), order_(order) {
    check_rows(s_, a_, "ButcherTableau");
    check_c(s_, c_, "ButcherTableau");
}

double ButcherTableau::a(int i, int j) const {
    if (i < 1 || i > s_ || j < 0 || j >= i)
        throw std::out_of_range("ButcherTableau::a: index out of range");
    return a_[i - 1][j];
}

double ButcherTableau::c(int i) const {
    if (i < 0 || i > s_) throw std::out_of_range("ButcherTableau::c: index out of range");
    return c_[i];
}

ShuOsherTableau::ShuOsherTableau(int stages, std::vector<std::vector<double>> alpha,
                                 std::vector<std::vector<double>> beta,
                                 std::vector<double> c, std::string name, int order)
    : s_(stages), alpha_(std::move(alpha)), beta_(std::move(beta)),
      c_(std::move(c)), name_(std::move(name)), order_(order) {
    check_rows(s_, alpha_, "ShuOsherTableau(alpha)");
    check_rows(s_, beta_, "ShuOsherTableau(beta)");
    check_c(s_, c_, "ShuOsherTableau");
}

double ShuOsherTableau::alpha(int i, int j) const {
    if (i < 1 || i > s_ || j < 0 || j >= i)
        throw std::out_of_range("ShuOsherTableau::alpha: index out of range");
    return alpha_[i - 1][j];
}

double ShuOsherTableau::beta(int i, int j) const {
    if (i < 1 || i > s_ || j < 0 || j >= i)
        throw std::out_of_range("ShuOsherTableau::beta: index out of range");
    return beta_[i - 1][j];
}

double ShuOsherTableau::c(int i) const {
    if (i < 0 || i > s_) throw std::out_of_range("ShuOsherTableau::c: index out of range");
    return c_[i];
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "Certified";
        case Verdict::Refuted: return "Refuted";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const CertificationReport& r) {
    os << to_string(r.verdict);
    if (!r.notes.empty()) os << ": " << r.notes;
    os << "\n";
    for (const auto& ch : r.checks) {
        os << "  stage " << ch.stage << " [" << (ch.ok ? "ok" : "violated") << "] "
           << ch.condition;
        if (ch.witness_x) os << " at x = " << *ch.witness_x;
        if (ch.witness_ij)
            os << " at (i,j) = (" << ch.witness_ij->first << "," << ch.witness_ij->second << ")";
        os << "\n";
    }
    return os;
}

CertificationReport validate_butcher(const ButcherTableau& t) {
    CertificationReport rep;
    const int s = t.stages();

    auto refute = [&](int stage, std::string cond) {
        rep.verdict = Verdict::Refuted;
        rep.checks.push_back({stage, std::move(cond), false, {}, {}});
        rep.notes = rep.checks.back().condition;
        return rep;
    };

    for (int i = 1; i <= s; ++i)
        for (int j = 0; j < i; ++j)
            if (t.a(i, j) < -kAlgebraicTol)
                return refute(i, "coefficient nonnegativity: a(" + std::to_string(i) + "," +
                                     std::to_string(j) + ") < 0");
    if (std::abs(t.c(0)) > kAlgebraicTol) return refute(0, "c_0 = 0");
    for (int i = 1; i <= s; ++i) {
        double row = 0.0;
        for (int j = 0; j < i; ++j) row += t.a(i, j);
        if (std::abs(row - t.c(i)) > kAlgebraicTol)
            return refute(i, "row-sum consistency: c_" + std::to_string(i) + " = sum_j a_ij");
    }
    if (std::abs(t.c(s) - 1.0) > kAlgebraicTol) return refute(s, "c_s = 1");
    for (int i = 1; i <= s; ++i)
        if (t.c(i) < t.c(i - 1) - kAlgebraicTol)
            return refute(i, "nondecreasing abscissas: c_" + std::to_string(i - 1) +
                                 " <= c_" + std::to_string(i));

    rep.verdict = Verdict::Certified;
    rep.checks.push_back({0, "structure and abscissas", true, {}, {}});
    return rep;
}

double g_function(const ButcherTableau& t, int stage, double x) {
    if (stage < 1 || stage > t.stages())
        throw std::out_of_range("g_function: stage index out of range");
    const double ci = t.c(stage);
    double g = std::exp(-ci * x);
    for (int j = 0; j < stage; ++j)
        g += x * t.a(stage, j) * std::exp(-(ci - t.c(j)) * x);
    return g;
}

double g_derivative(const ButcherTableau& t, int stage, double x) {
    if (stage < 1 || stage > t.stages())
        throw std::out_of_range("g_derivative: stage index out of range");
    const double ci = t.c(stage);
    double gp = -ci * std::exp(-ci * x);
    for (int j = 0; j < stage; ++j) {
        const double gap = ci - t.c(j);
        gp += t.a(stage, j) * (1.0 - gap * x) * std::exp(-gap * x);
    }
    return gp;
}

CertificationReport certify_mbp_butcher(const ButcherTableau& t,
                                        const ButcherCertifyOptions& opt) {
    CertificationReport structural = validate_butcher(t);
    if (structural.verdict != Verdict::Certified) return structural;
    if (!(opt.x_max > 0.0) || opt.n_samples < 2)
        throw std::invalid_argument("certify_mbp_butcher: x_max > 0 and n_samples >= 2 required");

    CertificationReport rep;
    rep.verdict = Verdict::Certified;
    const int s = t.stages();

    for (int i = 1; i <= s; ++i) {
        StageCheck check{i, "g_i nonincreasing on [0, x_max]", true, {}, {}};
        for (int k = 0; k < opt.n_samples; ++k) {
            const double x = opt.x_max * k / (opt.n_samples - 1);
            if (g_derivative(t, i, x) > opt.slope_tol) {
                check.ok = false;
                check.witness_x = x;
                break;
            }
        }
        if (!check.ok) {
            rep.verdict = Verdict::Refuted;
            rep.notes = "g_" + std::to_string(i) + "' > 0 at sampled point";
            rep.checks.push_back(std::move(check));
            return rep;
        }
        rep.checks.push_back(check);

        // Tail beyond x_max.  Terms with c_j = c_i contribute the constant
        // a_ij to g_i', so a positive coinciding weight makes the limit
        // positive; all other terms are negative once x > 1/(c_i - c_j).
        double coinciding = 0.0;
        double threshold = 0.0;
        for (int j = 0; j < i; ++j) {
            const double gap = t.c(i) - t.c(j);
            if (gap <= kAlgebraicTol) coinciding += t.a(i, j);
            else if (t.a(i, j) > opt.slope_tol) threshold = std::max(threshold, 1.0 / gap);
        }
        if (coinciding > opt.slope_tol) {
            rep.verdict = Verdict::Refuted;
            StageCheck tail{i, "tail: lim g_i' = " + std::to_string(coinciding) + " > 0",
                            false, std::numeric_limits<double>::infinity(), {}};
            rep.notes = "stage " + std::to_string(i) + " has a coinciding-abscissa term";
            rep.checks.push_back(std::move(tail));
            return rep;
        }
        if (threshold > opt.x_max) {
            rep.verdict = Verdict::Inconclusive;
            StageCheck tail{i, "tail unresolved: x_max < 1/min gap", false, {}, {}};
            rep.notes = "increase x_max beyond " + std::to_string(threshold);
            rep.checks.push_back(std::move(tail));
            return rep;
        }
    }
    return rep;
}

CertificationReport certify_mbp_shu_osher(const ShuOsherTableau& t) {
    CertificationReport rep;
    const int s = t.stages();

    auto refute = [&](int i, int j, std::string cond) {
        rep.verdict = Verdict::Refuted;
        rep.checks.push_back({i, std::move(cond), false, {}, std::make_pair(i, j)});
        rep.notes = rep.checks.back().condition;
        return rep;
    };

    for (int i = 1; i <= s; ++i) {
        double row = 0.0;
        for (int j = 0; j < i; ++j) {
            if (t.alpha(i, j) < -kAlgebraicTol)
                return refute(i, j, "alpha nonnegativity");
            row += t.alpha(i, j);
        }
        if (std::abs(row - 1.0) > kAlgebraicTol)
            return refute(i, 0, "alpha row sum = 1");
    }
    for (int i = 1; i <= s; ++i)
        for (int j = 0; j < i; ++j) {
            if (t.beta(i, j) < -kAlgebraicTol)
                return refute(i, j, "beta nonnegativity");
            if (t.alpha(i, j) <= kAlgebraicTol && std::abs(t.beta(i, j)) > kAlgebraicTol)
                return refute(i, j, "beta support: beta_ij = 0 where alpha_ij = 0");
        }
    if (std::abs(t.c(0)) > kAlgebraicTol) return refute(0, 0, "c_0 = 0");
    if (std::abs(t.c(s) - 1.0) > kAlgebraicTol) return refute(s, 0, "c_s = 1");
    for (int i = 1; i <= s; ++i)
        if (t.c(i) < t.c(i - 1) - kAlgebraicTol)
            return refute(i, 0, "nondecreasing abscissas");

    for (int i = 1; i <= s; ++i)
        for (int j = 0; j < i; ++j) {
            if (t.alpha(i, j) <= kAlgebraicTol) continue;
            const double ratio = t.beta(i, j) / t.alpha(i, j);
            if (ratio > t.c(i) - t.c(j) + kAlgebraicTol)
                return refute(i, j, "beta_ij/alpha_ij <= c_i - c_j (ratio " +
                                        std::to_string(ratio) + ")");
        }

    rep.verdict = Verdict::Certified;
    rep.checks.push_back({0, "convex-combination conditions", true, {}, {}});
    return rep;
}

ShuOsherTableau butcher_to_shu_osher(const ButcherTableau& t,
                                     const std::vector<std::vector<double>>& alpha) {
    const int s = t.stages();
    check_rows(s, alpha, "butcher_to_shu_osher(alpha)");
    std::vector<std::vector<double>> beta(alpha.size());
    for (int i = 1; i <= s; ++i) {
        beta[i - 1].resize(i);
        for (int j = 0; j < i; ++j) {
            double b = t.a(i, j);
            for (int k = j + 1; k <= i - 1; ++k) b -= alpha[i - 1][k] * t.a(k, j);
            beta[i - 1][j] = b;
        }
    }
    std::vector<double> c(s + 1);
    for (int i = 0; i <= s; ++i) c[i] = t.c(i);
    return ShuOsherTableau(s, alpha, std::move(beta), std::move(c),
                           t.name() + " (Shu-Osher)", t.order());
}

ButcherTableau shu_osher_to_butcher(const ShuOsherTableau& t) {
    const int s = t.stages();
    std::vector<std::vector<double>> a(s);
    for (int i = 1; i <= s; ++i) {
        a[i - 1].resize(i);
        for (int j = 0; j < i; ++j) {
            double v = t.beta(i, j);
            for (int k = j + 1; k <= i - 1; ++k) v += t.alpha(i, k) * a[k - 1][j];
            a[i - 1][j] = v;
        }
    }
    std::vector<double> c(s + 1);
    for (int i = 0; i <= s; ++i) c[i] = t.c(i);
    return ButcherTableau(s, std::move(a), std::move(c),
                          t.name() + " (Butcher)", t.order());
}

int tableau_stages(const AnyTableau& t) {
    return std::visit([](const auto& x) { return x.stages(); }, t);
}

const std::string& tableau_name(const AnyTableau& t) {
    return std::visit([](const auto& x) -> const std::string& { return x.name(); }, t);
}

namespace {

ButcherTableau make_sifrk11() {
    return ButcherTableau(1, {{1.0}}, {0.0, 1.0}, "sIFRK(1,1)", 1);
}

// c = [0, 1/s, ..., 1]; a_ij = 1/s for j < i <= s-1; final row 1/(s-1) on
// stages 1..s-1 and 0 on stage 0.
ButcherTableau make_sifrk_s2(int s) {
    std::vector<std::vector<double>> a(s);
    for (int i = 1; i <= s - 1; ++i) a[i - 1].assign(i, 1.0 / s);
    a[s - 1].assign(s, 1.0 / (s - 1));
    a[s - 1][0] = 0.0;
    std::vector<double> c(s + 1);
    for (int i = 0; i <= s; ++i) c[i] = static_cast<double>(i) / s;
    c[s] = 1.0;
    return ButcherTableau(s, std::move(a), std::move(c),
                          "sIFRK(" + std::to_string(s) + ",2)", 2);
}

ButcherTableau make_heun33() {
    return ButcherTableau(3,
                          {{1.0 / 3.0},
                           {0.0, 2.0 / 3.0},
                           {0.25, 0.0, 0.75}},
                          {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, "Heun-sIFRK(3,3)", 3);
}

ShuOsherTableau make_ssp_sifrk22() {
    return ShuOsherTableau(2,
                           {{1.0}, {0.5, 0.5}},
                           {{1.0}, {0.0, 0.5}},
                           {0.0, 1.0, 1.0}, "SSP-sIFRK(2,2)", 2);
}

ShuOsherTableau make_ssp_sifrk33() {
    return ShuOsherTableau(3,
                           {{1.0}, {2.0 / 3.0, 1.0 / 3.0}, {37.0 / 64.0, 0.0, 27.0 / 64.0}},
                           {{2.0 / 3.0}, {0.0, 4.0 / 9.0}, {5.0 / 32.0, 0.0, 9.0 / 16.0}},
                           {0.0, 2.0 / 3.0, 2.0 / 3.0, 1.0}, "SSP-sIFRK(3,3)", 3);
}

const std::map<std::string, std::size_t>& builtin_index() {
    static const std::map<std::string, std::size_t> idx = {
        {"sifrk11", 0}, {"sifrk22", 1}, {"sifrk32", 2}, {"sifrk42", 3},
        {"heun33", 4},  {"ssp-sifrk22", 5}, {"ssp-sifrk33", 6},
    };
    return idx;
}

}  // namespace

const std::vector<AnyTableau>& builtin_tableaus() {
    static const std::vector<AnyTableau> all = {
        make_sifrk11(),     make_sifrk_s2(2), make_sifrk_s2(3), make_sifrk_s2(4),
        make_heun33(),      make_ssp_sifrk22(), make_ssp_sifrk33(),
    };
    return all;
}

const AnyTableau* find_builtin(const std::string& name) {
    auto it = builtin_index().find(name);
    if (it == builtin_index().end()) return nullptr;
    return &builtin_tableaus()[it->second];
}

namespace {

struct TokenLine {
    int line;
    std::vector<std::string> tokens;
};

std::vector<TokenLine> tokenize(std::istream& in) {
    std::vector<TokenLine> lines;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
        std::istringstream ls(raw);
        TokenLine tl{lineno, {}};
        std::string tok;
        while (ls >> tok) tl.tokens.push_back(tok);
        if (!tl.tokens.empty()) lines.push_back(std::move(tl));
    }
    return lines;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::runtime_error("tableau parse error at line " + std::to_string(line) + ": " + msg);
}

double to_real(const TokenLine& tl, const std::string& tok) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) parse_fail(tl.line, "bad number '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        parse_fail(tl.line, "bad number '" + tok + "'");
    }
}

}  // namespace

AnyTableau read_tableau(std::istream& in) {
    auto lines = tokenize(in);
    if (lines.empty()) throw std::runtime_error("tableau parse error at line 1: empty input");
    std::size_t li = 0;

    if (lines[li].tokens[0] != "s" || lines[li].tokens.size() != 2)
        parse_fail(lines[li].line, "expected 's <stages>'");
    const int s = static_cast<int>(to_real(lines[li], lines[li].tokens[1]));
    if (s < 1) parse_fail(lines[li].line, "stage count must be positive");
    ++li;

    if (li >= lines.size() || lines[li].tokens[0] != "c" ||
        static_cast<int>(lines[li].tokens.size()) != s + 2)
        parse_fail(li < lines.size() ? lines[li].line : lines.back().line,
                   "expected 'c' with " + std::to_string(s + 1) + " values");
    std::vector<double> c;
    for (int k = 1; k <= s + 1; ++k) c.push_back(to_real(lines[li], lines[li].tokens[k]));
    ++li;

    std::vector<std::vector<double>> a(s), alpha(s), beta(s);
    bool saw_a = false, saw_so = false;
    for (; li < lines.size(); ++li) {
        const auto& tl = lines[li];
        const std::string& kind = tl.tokens[0];
        std::vector<std::vector<double>>* dest = nullptr;
        if (kind == "a") { dest = &a; saw_a = true; }
        else if (kind == "alpha") { dest = &alpha; saw_so = true; }
        else if (kind == "beta") { dest = &beta; saw_so = true; }
        else parse_fail(tl.line, "expected row 'a', 'alpha' or 'beta', got '" + kind + "'");
        if (tl.tokens.size() < 2) parse_fail(tl.line, "missing row index");
        const int i = static_cast<int>(to_real(tl, tl.tokens[1]));
        if (i < 1 || i > s) parse_fail(tl.line, "row index out of range");
        if (static_cast<int>(tl.tokens.size()) != 2 + i)
            parse_fail(tl.line, "row " + std::to_string(i) + " needs " + std::to_string(i) + " values");
        auto& row = (*dest)[i - 1];
        if (!row.empty()) parse_fail(tl.line, "duplicate row");
        for (int k = 0; k < i; ++k) row.push_back(to_real(tl, tl.tokens[2 + k]));
    }
    if (saw_a && saw_so)
        throw std::runtime_error("tableau parse error: mixed 'a' and 'alpha'/'beta' rows");
    if (saw_a) {
        for (int i = 1; i <= s; ++i)
            if (a[i - 1].empty())
                throw std::runtime_error("tableau parse error: missing row a " + std::to_string(i));
        return ButcherTableau(s, std::move(a), std::move(c), "file tableau", 0);
    }
    for (int i = 1; i <= s; ++i)
        if (alpha[i - 1].empty() || beta[i - 1].empty())
            throw std::runtime_error("tableau parse error: missing alpha/beta row " + std::to_string(i));
    return ShuOsherTableau(s, std::move(alpha), std::move(beta), std::move(c),
                           "file tableau", 0);
}

AnyTableau read_tableau_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tableau file '" + path + "'");
    return read_tableau(in);
}

namespace {
void write_reals(std::ostream& out, const std::vector<double>& v) {
    char buf[32];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, " %.17g", x);
        out << buf;
    }
}
}  // namespace

void write_tableau(std::ostream& out, const AnyTableau& t) {
    out << "# " << tableau_name(t) << "\n";
    if (const auto* b = std::get_if<ButcherTableau>(&t)) {
        out << "s " << b->stages() << "\nc";
        std::vector<double> c;
        for (int i = 0; i <= b->stages(); ++i) c.push_back(b->c(i));
        write_reals(out, c);
        out << "\n";
        for (int i = 1; i <= b->stages(); ++i) {
            out << "a " << i;
            std::vector<double> row;
            for (int j = 0; j < i; ++j) row.push_back(b->a(i, j));
            write_reals(out, row);
            out << "\n";
        }
        return;
    }
    const auto& so = std::get<ShuOsherTableau>(t);
    out << "s " << so.stages() << "\nc";
    std::vector<double> c;
    for (int i = 0; i <= so.stages(); ++i) c.push_back(so.c(i));
    write_reals(out, c);
    out << "\n";
    for (int i = 1; i <= so.stages(); ++i) {
        out << "alpha " << i;
        std::vector<double> row;
        for (int j = 0; j < i; ++j) row.push_back(so.alpha(i, j));
        write_reals(out, row);
        out << "\n";
    }
    for (int i = 1; i <= so.stages(); ++i) {
        out << "beta " << i;
        std::vector<double> row;
        for (int j = 0; j < i; ++j) row.push_back(so.beta(i, j));
        write_reals(out, row);
        out << "\n";
    }
}

}  // namespace sifrk
