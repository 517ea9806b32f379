#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sifrk/grid.hpp"
#include "sifrk/nonlinearity.hpp"
#include "sifrk/tableau.hpp"

namespace sifrk {

/// Parsed `key = value` file with `[section]` headers and `#` comments.
/// Unknown keys are hard errors at validation time; every diagnostic carries
/// the line number.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text, const std::string& origin);
    static ConfigFile parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    /// Throws if any key outside the allowed (section,key) set is present.
    void require_known(
        const std::map<std::string, std::vector<std::string>>& allowed) const;

    int line_of(const std::string& section, const std::string& key) const;
    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string origin_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

enum class InitialKind { Random, Bubble, TravelingWave };
enum class PotentialKind { Cubic, CubicScaled, FloryHuggins };

struct SimulationConfig {
    PotentialKind potential = PotentialKind::Cubic;
    double epsilon = 0.01;
    double theta = 0.8;
    double theta_c = 1.6;
    bool kappa_auto = true;
    double kappa = 0.0;  // used when !kappa_auto

    InitialKind initial = InitialKind::Random;
    double low = -0.9, high = 0.9;
    std::uint64_t seed = 1;
    double radius = 0.25;

    int dim = 2;
    int n = 128;
    BoundaryCondition bc = BoundaryCondition::Periodic;
    double box_lo = -0.5, box_hi = 0.5;

    std::string scheme_name = "sifrk22";  // builtin name
    std::string tableau_path;             // overrides scheme_name when set

    double tau = 0.01;
    double T = 1.0;

    std::string out_dir = "out";
    std::int64_t record_stride = 1;
    std::vector<double> snapshot_times;

    static SimulationConfig from_file(const std::string& path);
    static SimulationConfig from_config(const ConfigFile& cf);

    /// Materialized pieces.
    NonlinearSpec make_spec() const;
    double resolve_kappa(const NonlinearSpec& spec) const;
    double diffusivity() const;
    Grid make_grid() const;
    Field make_initial(const Grid& grid) const;
    AnyTableau resolve_scheme() const;
    double mbp_gamma() const;  // bound for the monitor
};

}  // namespace sifrk
