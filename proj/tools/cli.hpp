#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghg/ghg.hpp"

namespace ghg::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3, kExitCheckFailed = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
    std::string text;
};

enum class Command { Potential, Volume, Distance, Growth, Analyze };

inline const char* command_name(Command c)
{
    switch (c) {
    case Command::Potential: return "potential";
    case Command::Volume: return "volume";
    case Command::Distance: return "distance";
    case Command::Growth: return "growth";
    case Command::Analyze: return "analyze";
    }
    return "?";
}

struct GridSpec {
    bool logarithmic = true;
    double lo = 1.0;
    double hi = 1e6;
    int count = 61;
    std::string text = "log:1:1e6:61";

    std::vector<double> values() const
    {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : double(i) / double(count - 1);
            out.push_back(logarithmic ? lo * std::pow(10.0, t * std::log10(hi / lo)) : lo + t * (hi - lo));
        }
        out.front() = lo;
        out.back() = count == 1 ? lo : hi;
        return out;
    }
};

inline double parse_number(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed " + what + ": '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("malformed " + what + ": '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/// "lin:lo:hi:n" or "log:lo:hi:n".
inline GridSpec parse_grid(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log")) {
        throw UsageError("malformed grid '" + text + "': expected lin|log:lo:hi:n");
    }
    GridSpec g;
    g.text = text;
    g.logarithmic = parts[0] == "log";
    g.lo = parse_number(parts[1], "grid bound");
    g.hi = parse_number(parts[2], "grid bound");
    const double n = parse_number(parts[3], "grid count");
    if (n != std::floor(n) || n < 1 || n > 1e6) throw UsageError("grid count must be an integer in [1, 1e6]");
    g.count = int(n);
    if (!(g.lo > 0.0)) throw UsageError("grid bounds must be positive");
    if (g.count > 1 && !(g.hi > g.lo)) throw UsageError("grid bounds must be increasing");
    return g;
}

inline ImHPoint parse_point(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("malformed point '" + text + "': expected x,y,z");
    return {parse_number(parts[0], "coordinate"), parse_number(parts[1], "coordinate"),
            parse_number(parts[2], "coordinate")};
}

struct CapSpec {
    ImHPoint axis;
    double angle = 0.0;
};

/// "x,y,z,angle" with the angle in radians.
inline CapSpec parse_cap(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw UsageError("malformed cap '" + text + "': expected x,y,z,angle");
    CapSpec c{{parse_number(parts[0], "cap axis"), parse_number(parts[1], "cap axis"), parse_number(parts[2], "cap axis")},
              parse_number(parts[3], "cap angle")};
    if (!(norm(c.axis) > 0.0)) throw UsageError("cap axis must be nonzero");
    if (!(c.angle > 0.0 && c.angle <= std::numbers::pi)) throw UsageError("cap angle must lie in (0, pi]");
    return c;
}

inline std::pair<double, double> parse_window(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError("malformed fit window '" + text + "': expected lo:hi");
    const double lo = parse_number(parts[0], "fit bound");
    const double hi = parse_number(parts[1], "fit bound");
    if (!(lo > 0.0 && hi > lo)) throw UsageError("fit window must satisfy 0 < lo < hi");
    return {lo, hi};
}

struct ConfigSource {
    std::optional<std::string> file;
    std::string family;
    double alpha = 2.0;
    double scale = 1.0;
    std::size_t explicit_count = kDefaultExplicitCount;
    std::vector<ImHPoint> points;
};

struct RunSpec {
    Command command = Command::Growth;
    ConfigSource config;
    GridSpec grid;
    double tol = 1e-10;
    double rtol = 1e-10;
    std::optional<double> taub_nut;
    std::optional<std::pair<double, double>> fit;
    std::optional<CapSpec> cap;
    std::optional<double> R;
    std::vector<ImHPoint> at;
    ImHPoint direction{0.0, 0.0, 1.0};
    std::size_t directions = 0;
    std::optional<double> Q_plus;
    std::string format = "csv";
    std::optional<std::string> out;
};

namespace detail {

inline std::vector<ImHPoint> parse_points(const std::string& text)
{
    std::vector<ImHPoint> out;
    for (const auto& p : split(text, ';')) out.push_back(parse_point(p));
    if (out.empty()) throw UsageError("--points needs at least one point");
    return out;
}

inline void validate_family(const ConfigSource& c)
{
    if (c.family == "power_law") {
        if (!(c.alpha > 1.0)) throw UsageError("inadmissible configuration: power_law needs --alpha > 1");
    } else if (c.family == "exponential") {
        if (!(c.alpha > 0.0)) throw UsageError("exponential needs --alpha > 0");
    } else if (c.family == "single") {
    } else if (c.family == "finite") {
        if (c.points.empty()) throw UsageError("finite family needs --points");
    } else {
        throw UsageError("unknown family '" + c.family + "'");
    }
    if (c.family != "finite" && !c.points.empty()) throw UsageError("--points is only valid with --family finite");
    if (!(c.scale > 0.0)) throw UsageError("--scale must be > 0");
    if (c.explicit_count < 1) throw UsageError("--explicit must be >= 1");
}

}  // namespace detail

/// Parses a full argv (argv[0] is the program name).
inline RunSpec parse_args(int argc, const char* const* argv)
{
    if (argc < 1) throw UsageError("empty argument vector");
    RunSpec spec;
    CLI::App app{"Gibbons-Hawking metric toolkit", "ghg"};
    app.require_subcommand(1);
    std::string grid_text;
    std::string points_text;
    std::string cap_text;
    std::string fit_text;
    std::vector<std::string> at_text;
    std::string direction_text;
    std::string family;
    double alpha = spec.config.alpha;
    double scale = spec.config.scale;
    std::size_t explicit_count = spec.config.explicit_count;
    std::string config_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--family", family, "power_law | exponential | single | finite");
        sub->add_option("--alpha", alpha, "tail exponent or rate");
        sub->add_option("--scale", scale, "tail scale c");
        sub->add_option("--explicit", explicit_count, "explicitly stored points");
        sub->add_option("--points", points_text, "finite points x,y,z;x,y,z;... (must include the origin)");
        sub->add_option("--config", config_file, "JSON configuration file");
        sub->add_option("--grid", grid_text, "lin|log:lo:hi:n");
        sub->add_option("--tol", spec.tol, "absolute tolerance");
        sub->add_option("--rtol", spec.rtol, "relative tolerance for inversions");
        sub->add_option("--taub-nut", spec.taub_nut, "Taub-NUT parameter s > 0");
        sub->add_option("--format", spec.format, "csv | json");
        sub->add_option("--out", spec.out, "output path (stdout when absent)");
    };
    struct Entry {
        Command command;
        const char* help;
    };
    const Entry entries[] = {
        {Command::Potential, "Phi at points"},
        {Command::Volume, "volumes of moment-map preimages of balls and sectors"},
        {Command::Distance, "distance surrogates at points"},
        {Command::Growth, "phi, psi, tau, theta over a radius grid"},
        {Command::Analyze, "growth curves, bounds and limit checks over an r grid"},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(command_name(e.command), e.help);
        add_common(sub);
        subs.emplace_back(sub, e.command);
        switch (e.command) {
        case Command::Potential:
        case Command::Distance:
            sub->add_option("--at", at_text, "evaluation point x,y,z (repeatable)");
            sub->add_option("--direction", direction_text, "ray direction for grid points");
            break;
        case Command::Volume:
            sub->add_option("--R", spec.R, "ball radius (overrides --grid)");
            sub->add_option("--cap", cap_text, "sector cap x,y,z,angle");
            break;
        case Command::Analyze:
            sub->add_option("--fit", fit_text, "fit window lo:hi");
            sub->add_option("--directions", spec.directions, "sphere directions for the sublevel check (0 skips)");
            sub->add_option("--q-plus", spec.Q_plus, "Q_+ (> 2 C_+)");
            break;
        case Command::Growth: break;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (const auto& [sub, command] : subs) {
        if (sub->parsed()) spec.command = command;
    }

    if (spec.taub_nut && !(*spec.taub_nut > 0.0)) throw UsageError("--taub-nut: s must be > 0");
    if (!(spec.tol > 0.0)) throw UsageError("--tol must be > 0");
    if (!(spec.rtol > 0.0 && spec.rtol < 1e-2)) throw UsageError("--rtol must lie in (0, 1e-2)");
    if (spec.format != "csv" && spec.format != "json") throw UsageError("--format must be csv or json");
    if (spec.R && !(*spec.R > 0.0)) throw UsageError("--R must be > 0");
    if (spec.Q_plus && !(*spec.Q_plus > 2.0 * BoundConstants{}.C_plus)) throw UsageError("--q-plus must exceed 2 C_+");

    const bool has_file = !config_file.empty();
    const bool has_family = !family.empty();
    if (has_file == has_family) throw UsageError("give exactly one configuration source: --config or --family");
    if (has_file) {
        spec.config.file = config_file;
    } else {
        spec.config.family = family;
        spec.config.alpha = alpha;
        spec.config.scale = scale;
        spec.config.explicit_count = explicit_count;
        if (!points_text.empty()) spec.config.points = detail::parse_points(points_text);
        detail::validate_family(spec.config);
    }

    if (!grid_text.empty()) {
        spec.grid = parse_grid(grid_text);
    } else if (spec.command == Command::Potential || spec.command == Command::Distance) {
        spec.grid = parse_grid("lin:2:10:5");
    } else if (spec.command == Command::Analyze) {
        spec.grid = parse_grid("log:10:1e6:61");
    }
    if (!cap_text.empty()) spec.cap = parse_cap(cap_text);
    if (!fit_text.empty()) spec.fit = parse_window(fit_text);
    for (const auto& t : at_text) spec.at.push_back(parse_point(t));
    if (!direction_text.empty()) {
        spec.direction = parse_point(direction_text);
        if (!(norm(spec.direction) > 0.0)) throw UsageError("--direction must be nonzero");
    }
    return spec;
}

/// Reads a configuration from JSON: {"family": ..., "alpha": ..., "scale": ...,
/// "explicit_count": ..., "points": [[x, y, z], ...]}.
inline ConfigSource read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    ConfigSource c;
    try {
        c.family = j.at("family").get<std::string>();
        c.alpha = j.value("alpha", c.alpha);
        c.scale = j.value("scale", c.scale);
        c.explicit_count = j.value("explicit_count", c.explicit_count);
        if (j.contains("points")) {
            for (const auto& p : j.at("points")) {
                const auto v = p.get<std::vector<double>>();
                if (v.size() != 3) throw UsageError("config points need three coordinates");
                c.points.push_back({v[0], v[1], v[2]});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
    detail::validate_family(c);
    return c;
}

inline MonopoleConfig build_config(const ConfigSource& c)
{
    if (c.family == "power_law") return make_power_law(c.alpha, c.scale, c.explicit_count);
    if (c.family == "exponential") return make_exponential(c.alpha, c.scale, c.explicit_count);
    if (c.family == "single") return make_finite({ImHPoint{}});
    return make_finite(c.points);
}

/// Fixed 17-significant-digit rendering.
inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string canonical_config(const ConfigSource& c)
{
    std::string s = "family=" + c.family;
    if (c.family == "power_law" || c.family == "exponential") {
        s += ";alpha=" + fmt(c.alpha) + ";scale=" + fmt(c.scale) + ";explicit=" + std::to_string(c.explicit_count);
    }
    if (c.family == "finite") {
        s += ";points=";
        for (const auto& p : c.points) s += fmt(p.zeta1) + "," + fmt(p.zeta2) + "," + fmt(p.zeta3) + ";";
    }
    return s;
}

/// FNV-1a 64-bit hash, printed as 16 hex digits.
inline std::string fingerprint(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> verdicts;
    bool failed = false;

    void verdict(const std::string& name, const std::string& detail, bool pass)
    {
        verdicts.push_back(name + ": " + detail + ", " + (pass ? "PASS" : "FAIL"));
        failed = failed || !pass;
    }
};

inline std::string render_csv(const Table& t)
{
    std::string s;
    for (const auto& [k, v] : t.meta) s += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + fmt(row[i]);
        s += "\n";
    }
    for (const auto& v : t.verdicts) s += "# verdict " + v + "\n";
    return s;
}

inline std::string render_json(const Table& t)
{
    nlohmann::ordered_json j;
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (double v : row) r.push_back(fmt(v));
        j["rows"].push_back(r);
    }
    j["verdicts"] = t.verdicts;
    return j.dump(2) + "\n";
}

namespace detail {

inline std::vector<ImHPoint> evaluation_points(const RunSpec& spec)
{
    if (!spec.at.empty()) return spec.at;
    const ImHPoint e = (1.0 / norm(spec.direction)) * spec.direction;
    std::vector<ImHPoint> out;
    for (double t : spec.grid.values()) out.push_back(t * e);
    return out;
}

inline void run_potential(const RunSpec& spec, const MonopoleConfig& config, Table& t)
{
    t.columns = {"zeta1", "zeta2", "zeta3", "phi", "error", "min_monopole_distance"};
    for (const auto& z : evaluation_points(spec)) {
        const auto s = potential_sample(config, z, spec.tol);
        t.rows.push_back({z.zeta1, z.zeta2, z.zeta3, s.value.value, s.value.error, s.min_monopole_distance});
    }
}

inline void run_distance(const RunSpec& spec, const MonopoleConfig& config, Table& t)
{
    t.columns = {"zeta1", "zeta2", "zeta3", "lower_sq", "gauge_sq", "gauge_error", "radial_length", "radial_error"};
    const double s = spec.taub_nut.value_or(0.0);
    for (const auto& z : evaluation_points(spec)) {
        const auto d = distance_bounds(config, z, spec.tol, s);
        t.rows.push_back({z.zeta1, z.zeta2, z.zeta3, d.lower_sq.value, d.gauge_sq.value, d.gauge_sq.error,
                          d.radial_length.value, d.radial_length.error});
    }
}

inline void run_volume(const RunSpec& spec, const MonopoleConfig& config, Table& t)
{
    const std::vector<double> radii = spec.R ? std::vector<double>{*spec.R} : spec.grid.values();
    t.columns = {"R", "volume", "error"};
    if (spec.cap) t.columns.push_back("lower_bound");
    for (double R : radii) {
        CertifiedValue v;
        std::optional<double> lower;
        if (spec.cap) {
            const auto sector = SectorSpec::cap(R, spec.cap->axis, spec.cap->angle);
            v = sector_volume(config, sector, spec.tol * std::max(1.0, R * R * R));
            lower = sector_volume_lower_bound(config, sector, spec.tol).value;
            if (spec.taub_nut) {
                const double flat = std::numbers::pi * *spec.taub_nut / 4.0 * sector.measure() * R * R * R / 3.0;
                v.value += flat;
                *lower += std::numbers::pi * sector.measure() / 12.0 * *spec.taub_nut * R * R * R;
            }
        } else {
            v = spec.taub_nut ? volume_ball_taubnut(config, *spec.taub_nut, R, spec.tol) : volume_ball(config, R, spec.tol);
        }
        std::vector<double> row{R, v.value, v.error};
        if (lower) row.push_back(*lower);
        t.rows.push_back(row);
    }
}

inline void run_growth(const RunSpec& spec, const MonopoleConfig& config, Table& t)
{
    t.columns = {"R", "phi", "phi_error", "psi", "tau", "theta"};
    if (spec.taub_nut) t.columns.insert(t.columns.end(), {"tau_s", "theta_s"});
    for (double R : spec.grid.values()) {
        const auto g = evaluate_growth(config, R);
        std::vector<double> row{R, g.phi.value, g.phi.error, g.psi.value, g.tau.value, g.theta.value};
        if (spec.taub_nut) {
            row.push_back(tau_s(config, 1.0, *spec.taub_nut, R).value);
            row.push_back(theta_s(config, 1.0, *spec.taub_nut, R).value);
        }
        t.rows.push_back(row);
    }
}

inline void run_analyze_taubnut(const RunSpec& spec, const MonopoleConfig& config, const BoundConstants& constants,
                                Table& t)
{
    const double s = *spec.taub_nut;
    const auto grid = spec.grid.values();
    const auto rows = taubnut_limit(config, s, grid, constants, spec.rtol);
    const double limit = taubnut_limit_value(s);
    t.columns = {"r", "R_hi", "bound_ratio_hi", "bound_ratio_lo", "limit"};
    for (const auto& r : rows) t.rows.push_back({r.r, r.R_hi, r.hi, r.lo, limit});
    const auto& last = rows.back();
    const double from = std::max(grid.front(), grid.back() / 1e3);
    const bool close = std::abs(last.hi / limit - 1.0) <= 0.05 && std::abs(last.lo / limit - 1.0) <= 0.05;
    const bool monotone = monotone_trend(rows, from, [](const TaubNutRow& r) { return r.hi; }, false) &&
                          monotone_trend(rows, from, [](const TaubNutRow& r) { return r.lo; }, false);
    t.verdict("taubnut_limit",
              "hi=" + fmt(last.hi) + ", lo=" + fmt(last.lo) + ", limit=" + fmt(limit) +
                  ", monotone=" + (monotone ? "yes" : "no"),
              close && monotone);
}

inline void run_analyze(const RunSpec& spec, const MonopoleConfig& config, Table& t)
{
    const auto constants = BoundConstants::make(spec.Q_plus);
    t.meta.push_back({"Q_plus", fmt(constants.Q_plus)});
    t.meta.push_back({"m0", fmt(constants.m0)});
    t.meta.push_back({"P_minus", fmt(constants.P_minus)});
    if (spec.taub_nut) return run_analyze_taubnut(spec, config, constants, t);

    const auto grid = spec.grid.values();
    const auto curve = growth_curve(config, grid, constants, spec.rtol);
    const auto ratios = ratio_limits(config, grid, spec.rtol);
    t.columns = {"r", "R", "model", "upper", "lower", "volume_at_R_upper", "model_over_r4", "model_over_r3", "inv_phi"};
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        const auto& g = curve.rows[i];
        const auto& q = ratios[i];
        t.rows.push_back({g.r, g.R, g.model, g.upper, g.lower, g.volume_at_R.value, q.over_r4, q.over_r3, q.inv_phi});
    }

    SandwichOptions options;
    options.directions = spec.directions;
    const auto sandwich = sandwich_check(config, grid, constants, options);
    std::size_t ok = 0;
    for (const auto& row : sandwich) ok += row.ok;
    t.verdict("sandwich", "rows=" + std::to_string(ok) + "/" + std::to_string(sandwich.size()), ok == sandwich.size());

    double worst = 0.0;
    bool identity = true;
    for (const auto& q : ratios) {
        const double dev = std::abs(q.over_r4 - q.inv_phi);
        worst = std::max(worst, dev / q.certified_error);
        identity = identity && dev <= q.certified_error;
    }
    t.verdict("ratio_identity", "max_deviation_over_error=" + fmt(worst), identity);

    const auto window = spec.fit.value_or(default_fit_window(grid));
    const auto fit = fit_exponent(curve, window);
    const auto& tail = config.tail();
    if (tail.kind == TailKind::PowerLaw) {
        const double target = 4.0 - 2.0 / (tail.alpha + 1.0);
        t.verdict("growth_exponent",
                  "slope=" + fmt(fit.slope) + "±" + fmt(fit.residual) + ", target=" + fmt(target),
                  std::abs(fit.slope - target) <= 0.05);
    } else {
        t.verdict("growth_exponent", "slope=" + fmt(fit.slope) + "±" + fmt(fit.residual), true);
    }
    if (tail.kind == TailKind::Exponential) {
        const auto& last = curve.rows.back();
        const double ratio = last.model * std::log(last.r) / std::pow(last.r, 4);
        const double target = tail.alpha / 2.0;
        t.verdict("log_ratio", "value=" + fmt(ratio) + ", target=" + fmt(target),
                  std::abs(ratio / target - 1.0) <= 0.10);
    }
}

}  // namespace detail

/// Executes a parsed spec, writing the rendered table to `out` (or spec.out).
inline int run(const RunSpec& spec, std::ostream& out)
{
    const ConfigSource source = spec.config.file ? read_config_file(*spec.config.file) : spec.config;
    const auto config = build_config(source);
    const auto constants = BoundConstants::make(spec.Q_plus);

    Table t;
    t.meta = {
        {"command", command_name(spec.command)},
        {"config", canonical_config(source)},
        {"fingerprint", fingerprint(canonical_config(source))},
        {"tol", fmt(spec.tol)},
        {"rtol", fmt(spec.rtol)},
        {"grid", spec.grid.text},
        {"P_plus", fmt(constants.P_plus)},
        {"Q_minus", fmt(constants.Q_minus)},
        {"C_minus", fmt(constants.C_minus)},
        {"C_plus", fmt(constants.C_plus)},
    };
    if (spec.taub_nut) t.meta.push_back({"taub_nut_s", fmt(*spec.taub_nut)});

    switch (spec.command) {
    case Command::Potential: detail::run_potential(spec, config, t); break;
    case Command::Distance: detail::run_distance(spec, config, t); break;
    case Command::Volume: detail::run_volume(spec, config, t); break;
    case Command::Growth: detail::run_growth(spec, config, t); break;
    case Command::Analyze: detail::run_analyze(spec, config, t); break;
    }

    const std::string text = spec.format == "json" ? render_json(t) : render_csv(t);
    if (spec.out) {
        std::ofstream file(*spec.out, std::ios::binary);
        if (!file) throw UsageError("cannot write '" + *spec.out + "'");
        file << text;
    } else {
        out << text;
    }
    return t.failed ? kExitCheckFailed : kExitOk;
}

/// parse_args + run with the exit-code contract: 0 ok, 2 usage, 3 numerical failure,
/// 4 a check reported FAIL.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        return run(parse_args(argc, argv), out);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error code=" << to_string(e.code()) << " message=" << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace ghg::cli
