#include "sifrk/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sifrk/benchmarks.hpp"

namespace sifrk {

namespace {

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

[[noreturn]] void config_fail(const std::string& origin, int line, const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile cf;
    cf.origin_ = origin;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) config_fail(origin, lineno, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_fail(origin, lineno, "empty key");
        if (section.empty()) config_fail(origin, lineno, "key outside any [section]");
        auto [it, fresh] = cf.sections_[section].emplace(key, Entry{value, lineno});
        if (!fresh) config_fail(origin, lineno, "duplicate key '" + key + "'");
    }
    return cf;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw std::runtime_error(origin_ + ": missing required key [" + section + "] " + key);
    return s->second.at(key).value;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        config_fail(origin_, line_of(section, key), "bad number for '" + key + "': " + v);
    }
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        config_fail(origin_, line_of(section, key), "bad integer for '" + key + "': " + v);
    }
}

std::int64_t ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                    std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

void ConfigFile::require_known(
    const std::map<std::string, std::vector<std::string>>& allowed) const {
    for (const auto& [section, entries] : sections_) {
        auto it = allowed.find(section);
        if (it == allowed.end())
            config_fail(origin_, entries.begin()->second.line,
                        "unknown section [" + section + "]");
        for (const auto& [key, entry] : entries)
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                config_fail(origin_, entry.line,
                            "unknown key '" + key + "' in [" + section + "]");
    }
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return 0;
    auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
}

SimulationConfig SimulationConfig::from_file(const std::string& path) {
    return from_config(ConfigFile::parse_file(path));
}

SimulationConfig SimulationConfig::from_config(const ConfigFile& cf) {
    cf.require_known({
        {"problem", {"potential", "epsilon", "theta", "theta_c", "kappa", "initial",
                     "low", "high", "seed", "radius"}},
        {"grid", {"dim", "n", "bc", "box_lo", "box_hi"}},
        {"scheme", {"name", "tableau_file"}},
        {"time", {"tau", "T"}},
        {"output", {"dir", "stride", "snapshots"}},
    });

    SimulationConfig c;

    const std::string pot = cf.get("problem", "potential");
    if (pot == "cubic") c.potential = PotentialKind::Cubic;
    else if (pot == "cubic_scaled") c.potential = PotentialKind::CubicScaled;
    else if (pot == "flory_huggins") c.potential = PotentialKind::FloryHuggins;
    else throw std::runtime_error(cf.origin() + ":" +
                                  std::to_string(cf.line_of("problem", "potential")) +
                                  ": unknown potential '" + pot + "'");
    c.epsilon = cf.get_double("problem", "epsilon");
    if (!(c.epsilon > 0.0)) throw std::runtime_error(cf.origin() + ": epsilon must be positive");
    c.theta = cf.get_double_or("problem", "theta", c.theta);
    c.theta_c = cf.get_double_or("problem", "theta_c", c.theta_c);

    const std::string kappa = cf.get_or("problem", "kappa", "auto");
    if (kappa == "auto") {
        c.kappa_auto = true;
    } else {
        c.kappa_auto = false;
        c.kappa = std::stod(kappa);
    }

    const std::string init = cf.get_or("problem", "initial", "random");
    if (init == "random") c.initial = InitialKind::Random;
    else if (init == "bubble") c.initial = InitialKind::Bubble;
    else if (init == "traveling_wave") c.initial = InitialKind::TravelingWave;
    else throw std::runtime_error(cf.origin() + ": unknown initial '" + init + "'");
    c.low = cf.get_double_or("problem", "low", c.low);
    c.high = cf.get_double_or("problem", "high", c.high);
    c.seed = static_cast<std::uint64_t>(cf.get_int_or("problem", "seed", 1));
    c.radius = cf.get_double_or("problem", "radius", c.radius);

    c.dim = static_cast<int>(cf.get_int_or("grid", "dim", 2));
    c.n = static_cast<int>(cf.get_int("grid", "n"));
    c.bc = bc_from_string(cf.get_or("grid", "bc", "periodic"));
    c.box_lo = cf.get_double_or("grid", "box_lo", -0.5);
    c.box_hi = cf.get_double_or("grid", "box_hi", 0.5);

    c.scheme_name = cf.get_or("scheme", "name", "sifrk22");
    c.tableau_path = cf.get_or("scheme", "tableau_file", "");

    c.tau = cf.get_double("time", "tau");
    c.T = cf.get_double("time", "T");
    if (!(c.tau > 0.0) || c.T < 0.0)
        throw std::runtime_error(cf.origin() + ": need tau > 0 and T >= 0");

    c.out_dir = cf.get_or("output", "dir", "out");
    c.record_stride = cf.get_int_or("output", "stride", 1);
    if (cf.has("output", "snapshots")) {
        std::istringstream ss(cf.get("output", "snapshots"));
        double t;
        while (ss >> t) c.snapshot_times.push_back(t);
    }
    return c;
}

NonlinearSpec SimulationConfig::make_spec() const {
    switch (potential) {
        case PotentialKind::Cubic: return cubic(1.0);
        case PotentialKind::CubicScaled: return cubic(epsilon * epsilon);
        case PotentialKind::FloryHuggins: return flory_huggins(theta, theta_c);
    }
    throw std::logic_error("make_spec: bad potential kind");
}

double SimulationConfig::resolve_kappa(const NonlinearSpec& spec) const {
    return kappa_auto ? spec.kappa_min : kappa;
}

double SimulationConfig::diffusivity() const {
    // The scaled cubic problem carries unit diffusivity and 1/eps^2 inside
    // the reaction; the others use eps^2 diffusion with an O(1) reaction.
    return potential == PotentialKind::CubicScaled ? 1.0 : epsilon * epsilon;
}

Grid SimulationConfig::make_grid() const {
    return Grid::cube(dim, n, box_lo, box_hi, bc);
}

Field SimulationConfig::make_initial(const Grid& grid) const {
    switch (initial) {
        case InitialKind::Random: {
            const double g = make_spec().gamma;
            (void)g;
            return random_initial(grid, low, high, seed);
        }
        case InitialKind::Bubble: return bubble_initial(grid, radius);
        case InitialKind::TravelingWave: return traveling_wave_field(grid, epsilon, 0.0);
    }
    throw std::logic_error("make_initial: bad initial kind");
}

AnyTableau SimulationConfig::resolve_scheme() const {
    if (!tableau_path.empty()) return read_tableau_file(tableau_path);
    const AnyTableau* t = find_builtin(scheme_name);
    if (!t) throw std::runtime_error("unknown scheme '" + scheme_name + "'");
    return *t;
}

double SimulationConfig::mbp_gamma() const { return make_spec().gamma; }

}  // namespace sifrk
