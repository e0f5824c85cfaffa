#include "mhdlab/app/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "mhdlab/errors.hpp"
#include "mhdlab/sturmian.hpp"

namespace mhdlab::app {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::config_invalid, what); }

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

template <class T>
std::string list(const std::vector<T>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>) s += num(v[i]);
        else s += std::to_string(v[i]);
    }
    return s + "]";
}

std::string profile_block(const char* name, const ProfileSpec& p)
{
    std::ostringstream o;
    o << "[profile." << name << "]\n";
    o << "family = \"" << family_name(p.family) << "\"\n";
    o << "offset = " << num(p.offset) << "\n";
    o << "modes = [";
    for (std::size_t i = 0; i < p.modes.size(); ++i)
        o << (i ? ", " : "") << "[" << num(p.modes[i].amplitude) << ", " << p.modes[i].wavenumber << "]";
    o << "]\n";
    o << "steepness = " << num(p.steepness) << "\n";
    return o.str();
}

// Walks a table, rejecting keys not consumed by the caller.
class Section {
public:
    Section(const toml::table* t, std::string name) : t_(t), name_(std::move(name)) {}

    bool present() const { return t_ != nullptr; }

    template <class T>
    void get(const char* key, T& out)
    {
        seen_.insert(key);
        if (!t_) return;
        const toml::node* node = t_->get(key);
        if (!node) return;
        if constexpr (std::is_same_v<T, bool>) {
            const auto v = node->value<bool>();
            if (!v) bad(where(key) + " must be a boolean");
            out = *v;
        } else if constexpr (std::is_same_v<T, std::string>) {
            const auto v = node->value<std::string>();
            if (!v) bad(where(key) + " must be a string");
            out = *v;
        } else if constexpr (std::is_integral_v<T>) {
            const auto v = node->value<std::int64_t>();
            if (!v || !node->is_integer()) bad(where(key) + " must be an integer");
            out = static_cast<T>(*v);
        } else {
            const auto v = node->value<double>();
            if (!v || !std::isfinite(*v)) bad(where(key) + " must be a finite number");
            out = *v;
        }
    }

    template <class T>
    void get_list(const char* key, std::vector<T>& out)
    {
        seen_.insert(key);
        if (!t_) return;
        const toml::node* node = t_->get(key);
        if (!node) return;
        const toml::array* arr = node->as_array();
        if (!arr) bad(where(key) + " must be an array");
        out.clear();
        for (const toml::node& e : *arr) {
            if constexpr (std::is_integral_v<T>) {
                const auto v = e.value<std::int64_t>();
                if (!v || !e.is_integer()) bad(where(key) + " must hold integers");
                out.push_back(static_cast<T>(*v));
            } else {
                const auto v = e.value<double>();
                if (!v || !std::isfinite(*v)) bad(where(key) + " must hold finite numbers");
                out.push_back(*v);
            }
        }
    }

    const toml::array* array(const char* key)
    {
        seen_.insert(key);
        if (!t_) return nullptr;
        const toml::node* node = t_->get(key);
        if (!node) return nullptr;
        if (!node->as_array()) bad(where(key) + " must be an array");
        return node->as_array();
    }

    const toml::table* table(const char* key)
    {
        seen_.insert(key);
        if (!t_) return nullptr;
        const toml::node* node = t_->get(key);
        if (!node) return nullptr;
        if (!node->as_table()) bad(where(key) + " must be a table");
        return node->as_table();
    }

    void finish() const
    {
        if (!t_) return;
        for (auto&& [k, v] : *t_)
            if (!seen_.count(std::string(k.str()))) bad("unknown key " + where(std::string(k.str()).c_str()));
    }

    std::string where(const char* key) const { return name_.empty() ? key : name_ + "." + key; }

private:
    const toml::table* t_;
    std::string name_;
    std::set<std::string> seen_;
};

ProfileSpec parse_profile(const toml::table* t, const std::string& name, ProfileSpec p)
{
    Section s(t, name);
    if (!s.present()) return p;
    std::string family(family_name(p.family));
    s.get("family", family);
    try {
        p.family = parse_family(family);
    } catch (const Error& e) {
        bad(s.where("family") + ": " + e.what());
    }
    s.get("offset", p.offset);
    s.get("steepness", p.steepness);
    if (const toml::array* modes = s.array("modes")) {
        p.modes.clear();
        for (const toml::node& m : *modes) {
            const toml::array* pair = m.as_array();
            if (!pair || pair->size() != 2) bad(s.where("modes") + " entries must be [amplitude, wavenumber]");
            const auto a = (*pair)[0].value<double>();
            const auto k = (*pair)[1].value<std::int64_t>();
            if (!a || !k || !(*pair)[1].is_integer()) bad(s.where("modes") + " entries must be [number, integer]");
            p.modes.push_back({*a, static_cast<int>(*k)});
        }
    }
    // Single-mode shorthand.
    double amplitude = std::nan("");
    int wavenumber = 1;
    s.get("amplitude", amplitude);
    s.get("wavenumber", wavenumber);
    if (!std::isnan(amplitude)) p.modes = {Mode{amplitude, wavenumber}};
    if (p.family == ProfileFamily::constant) p.modes.clear();
    s.finish();
    try {
        p.validate();
    } catch (const Error& e) {
        bad(name + ": " + e.what());
    }
    return p;
}

}  // namespace

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string RunConfig::canonical() const
{
    std::ostringstream o;
    o << "[profile]\nalpha = " << alpha << "\n\n";
    o << profile_block("u", u) << "\n" << profile_block("b", b) << "\n";
    o << "[grid]\nn = " << n << "\n\n";
    o << "[initial]\n"
      << "family = \"" << initial_family_name(initial.family) << "\"\n"
      << "seed = " << initial.seed << "\n"
      << "bandwidth = " << initial.bandwidth << "\n"
      << "decay_power = " << num(initial.decay_power) << "\n"
      << "mode = " << initial.mode << "\n"
      << "center = " << num(initial.center) << "\n"
      << "width = " << num(initial.width) << "\n"
      << "phi_scale = " << num(initial.phi_scale) << "\n"
      << "vanish_at_critical = " << (initial.vanish_at_critical ? "true" : "false") << "\n\n";
    o << "[time]\nT = " << num(time.T) << "\ndt = " << num(time.dt) << "\nsample_every = " << time.sample_every
      << "\n\n";
    o << "[scan]\n"
      << "re_min = " << num(scan.re_min) << "\nre_max = " << num(scan.re_max) << "\nre_count = " << scan.re_count
      << "\nim_values = " << list(scan.im_values) << "\neps_list = " << list(scan.eps_list)
      << "\ngrid_sizes = " << list(scan.grid_sizes) << "\ncontrol_offset = " << num(scan.control_offset)
      << "\ncontour_eps = " << num(scan.contour_eps) << "\ncontour_nodes = " << scan.contour_nodes
      << "\ndunford_times = " << list(scan.dunford_times) << "\njump_eps0 = " << num(scan.jump.eps0)
      << "\njump_levels = " << scan.jump.levels << "\njump_ratio = " << num(scan.jump.ratio)
      << "\njump_panel = " << num(scan.jump.panel) << "\njump_margin = " << num(scan.jump.margin)
      << "\ntoy_t_min = " << num(scan.toy_t_min) << "\ntoy_t_max = " << num(scan.toy_t_max)
      << "\ntoy_samples = " << scan.toy_samples << "\n\n";
    o << "[thresholds]\nvertical_ratio = " << num(thresholds.vertical_ratio)
      << "\nspacetime_ratio = " << num(thresholds.spacetime_ratio)
      << "\ndepletion_ratio = " << num(thresholds.depletion_ratio) << "\ntoy_ratio = " << num(thresholds.toy_ratio)
      << "\ncontrol_ratio = " << num(thresholds.control_ratio) << "\n";
    return o.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

std::string RunConfig::hash_hex() const
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash());
    return buf;
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    toml::table doc;
    try {
        doc = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream o;
        o << source << ":" << e.source().begin.line << ": " << e.description();
        bad(o.str());
    }
    RunConfig cfg;
    Section root(&doc, "");

    Section prof(root.table("profile"), "profile");
    prof.get("alpha", cfg.alpha);
    cfg.u = parse_profile(prof.table("u"), "profile.u", cfg.u);
    cfg.b = parse_profile(prof.table("b"), "profile.b", cfg.b);
    prof.finish();

    Section grid(root.table("grid"), "grid");
    std::int64_t n = static_cast<std::int64_t>(cfg.n);
    grid.get("n", n);
    if (n <= 0) bad("grid.n must be positive");
    cfg.n = static_cast<std::size_t>(n);
    grid.finish();

    Section init(root.table("initial"), "initial");
    std::string family(initial_family_name(cfg.initial.family));
    init.get("family", family);
    try {
        cfg.initial.family = parse_initial_family(family);
    } catch (const Error& e) {
        bad(std::string("initial.family: ") + e.what());
    }
    std::int64_t seed = static_cast<std::int64_t>(cfg.initial.seed);
    init.get("seed", seed);
    if (seed < 0) bad("initial.seed must be nonnegative");
    cfg.initial.seed = static_cast<std::uint64_t>(seed);
    init.get("bandwidth", cfg.initial.bandwidth);
    init.get("decay_power", cfg.initial.decay_power);
    init.get("mode", cfg.initial.mode);
    init.get("center", cfg.initial.center);
    init.get("width", cfg.initial.width);
    init.get("phi_scale", cfg.initial.phi_scale);
    init.get("vanish_at_critical", cfg.initial.vanish_at_critical);
    init.finish();

    Section time(root.table("time"), "time");
    time.get("T", cfg.time.T);
    time.get("dt", cfg.time.dt);
    time.get("sample_every", cfg.time.sample_every);
    time.finish();

    Section scan(root.table("scan"), "scan");
    scan.get("re_min", cfg.scan.re_min);
    scan.get("re_max", cfg.scan.re_max);
    scan.get("re_count", cfg.scan.re_count);
    scan.get_list("im_values", cfg.scan.im_values);
    scan.get_list("eps_list", cfg.scan.eps_list);
    scan.get_list("grid_sizes", cfg.scan.grid_sizes);
    scan.get("control_offset", cfg.scan.control_offset);
    scan.get("contour_eps", cfg.scan.contour_eps);
    scan.get("contour_nodes", cfg.scan.contour_nodes);
    scan.get_list("dunford_times", cfg.scan.dunford_times);
    scan.get("jump_eps0", cfg.scan.jump.eps0);
    scan.get("jump_levels", cfg.scan.jump.levels);
    scan.get("jump_ratio", cfg.scan.jump.ratio);
    scan.get("jump_panel", cfg.scan.jump.panel);
    scan.get("jump_margin", cfg.scan.jump.margin);
    scan.get("toy_t_min", cfg.scan.toy_t_min);
    scan.get("toy_t_max", cfg.scan.toy_t_max);
    scan.get("toy_samples", cfg.scan.toy_samples);
    scan.finish();

    Section th(root.table("thresholds"), "thresholds");
    th.get("vertical_ratio", cfg.thresholds.vertical_ratio);
    th.get("spacetime_ratio", cfg.thresholds.spacetime_ratio);
    th.get("depletion_ratio", cfg.thresholds.depletion_ratio);
    th.get("toy_ratio", cfg.thresholds.toy_ratio);
    th.get("control_ratio", cfg.thresholds.control_ratio);
    th.finish();

    root.finish();

    auto check = [](bool ok, const std::string& what) {
        if (!ok) bad(what);
    };
    check(cfg.alpha != 0, "profile.alpha must be nonzero");
    check(PeriodicGrid::valid_size(cfg.n), "grid.n must be a power of two >= 64");
    check(cfg.time.T >= 0.0 && cfg.time.dt > 0.0, "time.T must be >= 0 and time.dt > 0");
    check(cfg.time.sample_every >= 1, "time.sample_every must be >= 1");
    check(cfg.scan.re_count >= 1 && cfg.scan.re_max >= cfg.scan.re_min, "scan re grid is empty");
    check(cfg.scan.eps_list.size() >= 2 && cfg.scan.eps_list.size() == cfg.scan.grid_sizes.size(),
          "scan.eps_list and scan.grid_sizes need the same length (>= 2)");
    for (std::size_t k = 0; k < cfg.scan.eps_list.size(); ++k) {
        check(cfg.scan.eps_list[k] > 0.0 && (k == 0 || cfg.scan.eps_list[k] < cfg.scan.eps_list[k - 1]),
              "scan.eps_list must be positive and decreasing");
        check(cfg.scan.grid_sizes[k] > 0 && PeriodicGrid::valid_size(std::size_t(cfg.scan.grid_sizes[k])),
              "scan.grid_sizes must be powers of two >= 64");
    }
    check(cfg.scan.contour_nodes >= 16, "scan.contour_nodes must be >= 16");
    for (double t : cfg.scan.dunford_times) check(t >= 0.0, "scan.dunford_times must be >= 0");
    check(cfg.scan.toy_samples >= 10 && cfg.scan.toy_t_min > 0.0 && cfg.scan.toy_t_max > cfg.scan.toy_t_min,
          "toy sampling needs >= 10 samples on 0 < t_min < t_max");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io_failure, "cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

void apply_environment(RunConfig& cfg)
{
    const char* s = std::getenv("MHDLAB_SEED");
    if (!s || !*s) return;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (!end || *end != '\0' || s[0] == '-') fail(ErrorKind::config_invalid, "MHDLAB_SEED must be a nonnegative integer");
    cfg.initial.seed = v;
}

ShearProfile make_profile(const RunConfig& cfg, std::size_t n) { return build_profile(cfg.u, cfg.b, PeriodicGrid(n)); }

ShearProfile make_profile(const RunConfig& cfg) { return make_profile(cfg, cfg.n); }

void validate(const RunConfig& cfg)
{
    const ShearProfile profile = make_profile(cfg);
    (void)elsasser(profile);
    const double dmax = dt_max(profile, cfg.alpha);
    require(cfg.time.dt <= dmax, ErrorKind::step_too_large,
            "time.dt = " + num(cfg.time.dt) + " exceeds the stability bound " + num(dmax));
    const double strip = strip_half_width(profile);
    require(cfg.scan.contour_eps > 0.0 && cfg.scan.contour_eps < strip, ErrorKind::epsilon_too_large,
            "scan.contour_eps must lie in (0, " + num(strip) + ")");
    for (double t : cfg.scan.dunford_times)
        require(std::abs(double(cfg.alpha)) * t * cfg.scan.contour_eps <= 5.0, ErrorKind::epsilon_too_large,
                "contour budget |alpha| t eps <= 5 violated at t = " + num(t));
}

}  // namespace mhdlab::app
