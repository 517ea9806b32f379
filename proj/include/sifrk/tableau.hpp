#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sifrk {

/// Explicit Runge-Kutta coefficients in the unified stage form where stage 0
/// is the previous step value and stage s is the new one.  Abscissas run
/// c[0..s] with c[0] = 0 and c[s] = 1; a(i,j) is stored for 1 <= i <= s,
/// 0 <= j < i.
class ButcherTableau {
public:
    ButcherTableau(int stages, std::vector<std::vector<double>> a,
                   std::vector<double> c, std::string name, int order);

    int stages() const { return s_; }
    double a(int i, int j) const;
    double c(int i) const;
    const std::string& name() const { return name_; }
    int order() const { return order_; }

private:
    int s_;
    std::vector<std::vector<double>> a_;  // a_[i-1] holds row i (length i)
    std::vector<double> c_;               // length s+1
    std::string name_;
    int order_;
};

/// Shu-Osher (convex combination) form: stage i is built from stages j < i
/// as sum_j exp((c_i-c_j) tau L_kappa) (alpha_ij u_j + tau beta_ij N[u_j]).
class ShuOsherTableau {
public:
    ShuOsherTableau(int stages, std::vector<std::vector<double>> alpha,
                    std::vector<std::vector<double>> beta,
                    std::vector<double> c, std::string name, int order);

    int stages() const { return s_; }
    double alpha(int i, int j) const;
    double beta(int i, int j) const;
    double c(int i) const;
    const std::string& name() const { return name_; }
    int order() const { return order_; }

private:
    int s_;
    std::vector<std::vector<double>> alpha_, beta_;
    std::vector<double> c_;
    std::string name_;
    int order_;
};

enum class Verdict { Certified, Refuted, Inconclusive };

std::string to_string(Verdict v);

struct StageCheck {
    int stage = 0;
    std::string condition;
    bool ok = true;
    std::optional<double> witness_x;  // sample point violating monotonicity
    std::optional<std::pair<int, int>> witness_ij;  // violating coefficient pair
};

struct CertificationReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<StageCheck> checks;
    std::string notes;
};

std::ostream& operator<<(std::ostream& os, const CertificationReport& r);

/// Structural validation: coefficient nonnegativity, row sums, endpoint and
/// monotonicity constraints on the abscissas (tolerance 1e-14).
CertificationReport validate_butcher(const ButcherTableau& t);

/// g_i(x) = exp(-c_i x) + x sum_j a_ij exp(-(c_i-c_j) x), the per-stage
/// amplification factor; unconditional MBP needs it nonincreasing on [0,inf).
double g_function(const ButcherTableau& t, int stage, double x);

/// Closed-form derivative of g_function with respect to x.
double g_derivative(const ButcherTableau& t, int stage, double x);

struct ButcherCertifyOptions {
    double x_max = 100.0;
    int n_samples = 100000;
    double slope_tol = 1e-12;
};

/// Monotonicity certification: dense sampling of g_i' on [0, x_max] plus an
/// analytic tail argument.  Stages with coinciding abscissas and a positive
/// weight have g_i' -> sum of those weights > 0, hence are refuted outright;
/// otherwise every derivative term is negative beyond 1/(c_i-c_j), so the
/// check is sound once x_max exceeds that threshold (else Inconclusive).
CertificationReport certify_mbp_butcher(const ButcherTableau& t,
                                        const ButcherCertifyOptions& opt = {});

/// Ratio certification of the Shu-Osher form: alpha row sums, beta sign and
/// support, nondecreasing abscissas, and beta_ij/alpha_ij <= c_i - c_j.
CertificationReport certify_mbp_shu_osher(const ShuOsherTableau& t);

/// Convert with a caller-supplied alpha satisfying the row-sum constraint:
/// beta_ij = a_ij - sum_{k=j+1}^{i-1} alpha_ik a_kj.
ShuOsherTableau butcher_to_shu_osher(const ButcherTableau& t,
                                     const std::vector<std::vector<double>>& alpha);

/// Inverse of butcher_to_shu_osher: a_ij = beta_ij + sum_k alpha_ik a_kj.
ButcherTableau shu_osher_to_butcher(const ShuOsherTableau& t);

using AnyTableau = std::variant<ButcherTableau, ShuOsherTableau>;

int tableau_stages(const AnyTableau& t);
const std::string& tableau_name(const AnyTableau& t);

/// The built-in schemes: sIFRK(1,1); sIFRK(s,2) for s = 2,3,4;
/// Heun-sIFRK(3,3); SSP-sIFRK(2,2) and SSP-sIFRK(3,3) in Shu-Osher form.
const std::vector<AnyTableau>& builtin_tableaus();

/// Look up a built-in scheme by its registry name (e.g. "sifrk22").
const AnyTableau* find_builtin(const std::string& name);

/// Plain-text tableau file format:
///   line 1: `s <stages>`
///   line 2: `c <s+1 reals>`
///   then s rows `a <i> <i reals>` (Butcher) or `alpha <i> ...` and
///   `beta <i> ...` pairs (Shu-Osher).  `#` starts a comment.
AnyTableau read_tableau(std::istream& in);
AnyTableau read_tableau_file(const std::string& path);
void write_tableau(std::ostream& out, const AnyTableau& t);

}  // namespace sifrk
