#include "quapi/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace quapi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

struct IniFile {
    // section -> key -> entry; insertion-ordered key list for diagnostics
    std::map<std::string, std::map<std::string, Entry>> sections;

    bool has(const std::string& sec) const { return sections.count(sec) > 0; }

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    }

    Entry* find(const std::string& sec, const std::string& key) {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    }
};

IniFile read_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    IniFile ini;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("line " + std::to_string(lineno) +
                                 ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            ini.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value, got '" + t + "'");
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno) +
                             ": key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (ini.sections[section].count(key))
            throw ParseError("line " + std::to_string(lineno) +
                             ": duplicate key '" + key + "'");
        ini.sections[section][key] = Entry{val, lineno, false};
    }
    return ini;
}

double parse_double(const Entry& e, const std::string& name) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(e.line) +
                         ": malformed numeric value for '" + name + "': '" +
                         e.value + "'");
    }
}

int parse_int(const Entry& e, const std::string& name) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(e.line) +
                         ": malformed integer value for '" + name + "': '" +
                         e.value + "'");
    }
}

bool parse_bool(const Entry& e, const std::string& name) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ParseError("line " + std::to_string(e.line) +
                     ": malformed boolean value for '" + name + "': '" +
                     e.value + "'");
}

// field reader bound to one section
struct SectionReader {
    IniFile& ini;
    std::string sec;

    template <class T, class F>
    bool get(const std::string& key, T& out, F&& conv) {
        Entry* e = ini.find(sec, key);
        if (!e) return false;
        e->used = true;
        out = conv(*e, sec + "." + key);
        return true;
    }
    bool num(const std::string& key, double& out) {
        return get(key, out, parse_double);
    }
    bool integer(const std::string& key, int& out) {
        return get(key, out, parse_int);
    }
    bool boolean(const std::string& key, bool& out) {
        return get(key, out, parse_bool);
    }
    bool text(const std::string& key, std::string& out) {
        Entry* e = ini.find(sec, key);
        if (!e) return false;
        e->used = true;
        out = e->value;
        return true;
    }
    void require(const std::string& key) const {
        if (!ini.find(sec, key))
            throw ParseError("missing required key '" + sec + "." + key + "'");
    }
};

void reject_unused(const IniFile& ini) {
    for (const auto& [sec, keys] : ini.sections)
        for (const auto& [key, e] : keys)
            if (!e.used)
                throw ParseError("line " + std::to_string(e.line) +
                                 ": unknown key '" + sec + "." + key + "'");
}

void read_numerics(IniFile& ini, NumericsSection& n) {
    if (!ini.has("numerics")) return;
    SectionReader r{ini, "numerics"};
    r.num("delta_t", n.delta_t);
    r.integer("n_steps", n.n_steps);
    r.integer("dkmax", n.dkmax);
    r.integer("dkmax_cap", n.dkmax_cap);
    r.integer("workers", n.workers);
    double d;
    if (r.num("omega_max", d)) n.omega_max = d;
    if (r.num("abs_tol", d)) n.abs_tol = d;
    int i;
    if (r.integer("max_panels", i)) n.max_panels = i;
}

void read_bath_like(IniFile& ini, RunConfig& cfg) {
    if (ini.has("bath")) {
        BathSection b;
        SectionReader r{ini, "bath"};
        std::string fam;
        r.require("family");
        r.text("family", fam);
        b.family = bath_family_from_string(fam);
        r.require("g");
        r.num("g", b.g);
        r.num("omega_d", b.omega_d);
        r.num("omega_l", b.omega_l);
        r.num("exponent", b.exponent);
        r.num("temperature_mK", b.temperature_mK);
        cfg.bath = b;
    }
    if (ini.has("material")) {
        MaterialSection m;
        SectionReader r{ini, "material"};
        std::string fam;
        r.require("family");
        r.text("family", fam);
        m.family = bath_family_from_string(fam);
        for (const char* k : {"M", "Xi", "rho", "s", "x", "d", "l"})
            r.require(k);
        r.num("M", m.params.M);
        r.num("Xi", m.params.Xi);
        r.num("rho", m.params.rho);
        r.num("s", m.params.s);
        r.num("x", m.params.x);
        r.num("d", m.params.d);
        r.num("l", m.params.l);
        r.num("temperature_mK", m.temperature_mK);
        cfg.material = m;
    }
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    if (bath.has_value() == material.has_value())
        throw ValidationError(
            "config must contain exactly one of [bath] or [material]");
    if (system.t_c.has_value() == system.t_c_ratio.has_value())
        throw ValidationError(
            "config must set exactly one of system.t_c or system.t_c_ratio");
    if (!(numerics.delta_t > 0.0))
        throw ValidationError("numerics.delta_t must be > 0");
    if (numerics.n_steps < 1)
        throw ValidationError("numerics.n_steps must be >= 1");
    if (numerics.dkmax < 1 || numerics.dkmax > numerics.n_steps)
        throw ValidationError("numerics.dkmax must satisfy 1 <= dkmax <= n_steps");
    if (numerics.workers < 1)
        throw ValidationError("numerics.workers must be >= 1");
    resolve_model().validate();
    if (!(temperature_mK() > 0.0))
        throw ValidationError("temperature_mK must be > 0");
}

SpectralDensityModel RunConfig::resolve_model() const {
    if (bath) {
        SpectralDensityModel m;
        m.family = bath->family;
        m.g = bath->g;
        m.omega_d = bath->omega_d;
        m.omega_l = bath->omega_l;
        m.exponent = bath->exponent;
        return m;
    }
    if (!material) throw ValidationError("config has no bath/material section");
    const auto gm = derive_geometry(material->params);
    switch (material->family) {
        case BathFamily::Piezoelectric: return gm.piezo;
        case BathFamily::Deformation: return gm.deformation;
        default:
            throw ValidationError(
                "material section supports piezoelectric/deformation only");
    }
}

double RunConfig::temperature_mK() const {
    return bath ? bath->temperature_mK : material->temperature_mK;
}

BathSpec RunConfig::make_bath() const {
    QuadraturePolicy q;
    if (numerics.omega_max) q.omega_max = *numerics.omega_max;
    if (numerics.abs_tol) q.abs_tol = *numerics.abs_tol;
    if (numerics.max_panels) q.max_panels = *numerics.max_panels;
    return BathSpec(resolve_model(), thermal_beta(temperature_mK()), q);
}

double RunConfig::resolve_t_c() const {
    if (system.t_c) return *system.t_c;
    return *system.t_c_ratio * resolve_model().omega_l;
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    const auto model = resolve_model();
    os << "[bath]\n";
    os << "family = " << to_string(model.family) << "\n";
    os << "g = " << fmt_g(model.g) << "\n";
    os << "omega_d = " << fmt_g(model.omega_d) << "\n";
    os << "omega_l = " << fmt_g(model.omega_l) << "\n";
    if (model.family == BathFamily::PowerLawGaussian)
        os << "exponent = " << fmt_g(model.exponent) << "\n";
    os << "temperature_mK = " << fmt_g(temperature_mK()) << "\n";
    os << "[system]\n";
    os << "t_c = " << fmt_g(resolve_t_c()) << "\n";
    os << "[numerics]\n";
    os << "delta_t = " << fmt_g(numerics.delta_t) << "\n";
    os << "n_steps = " << numerics.n_steps << "\n";
    os << "dkmax = " << numerics.dkmax << "\n";
    os << "dkmax_cap = " << numerics.dkmax_cap << "\n";
    os << "workers = " << numerics.workers << "\n";
    const auto q = make_bath().quadrature;
    os << "omega_max = " << fmt_g(q.omega_max) << "\n";
    os << "abs_tol = " << fmt_g(q.abs_tol) << "\n";
    os << "max_panels = " << q.max_panels << "\n";
    return os.str();
}

namespace {

void read_run_sections(IniFile& ini, RunConfig& cfg) {
    read_bath_like(ini, cfg);
    if (ini.has("system")) {
        SectionReader r{ini, "system"};
        double v;
        if (r.num("t_c", v)) cfg.system.t_c = v;
        if (r.num("t_c_ratio", v)) cfg.system.t_c_ratio = v;
    }
    read_numerics(ini, cfg.numerics);
    if (ini.has("outputs")) {
        SectionReader r{ini, "outputs"};
        r.text("trajectory", cfg.outputs.trajectory);
        r.text("summary", cfg.outputs.summary);
        r.boolean("bloch", cfg.outputs.bloch);
        std::string s;
        if (r.text("eta_table", s)) cfg.outputs.eta_table = s;
        r.boolean("verify_eta", cfg.outputs.verify_eta);
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& path) {
    IniFile ini = read_ini(path);
    RunConfig cfg;
    read_run_sections(ini, cfg);
    reject_unused(ini);
    cfg.validate();
    return cfg;
}

const std::vector<std::string>& sweepable_fields() {
    static const std::vector<std::string> fields = {
        "bath.g",          "bath.omega_d", "bath.omega_l",
        "bath.temperature_mK", "system.t_c",   "numerics.delta_t",
        "numerics.n_steps",    "numerics.dkmax"};
    return fields;
}

namespace {

void apply_field(RunConfig& cfg, const std::string& field, double value) {
    if (!cfg.bath && field.rfind("bath.", 0) == 0)
        throw ValidationError("sweep axis '" + field +
                              "' requires a [bath] section");
    if (field == "bath.g") cfg.bath->g = value;
    else if (field == "bath.omega_d") cfg.bath->omega_d = value;
    else if (field == "bath.omega_l") cfg.bath->omega_l = value;
    else if (field == "bath.temperature_mK") cfg.bath->temperature_mK = value;
    else if (field == "system.t_c") {
        cfg.system.t_c = value;
        cfg.system.t_c_ratio.reset();
    } else if (field == "numerics.delta_t") cfg.numerics.delta_t = value;
    else if (field == "numerics.n_steps")
        cfg.numerics.n_steps = static_cast<int>(value);
    else if (field == "numerics.dkmax")
        cfg.numerics.dkmax = static_cast<int>(value);
    else
        throw ValidationError("unknown sweep axis '" + field + "'");
}

}  // namespace

std::size_t SweepConfig::cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

std::vector<double> SweepConfig::cell_values(std::size_t index) const {
    std::vector<double> vals(axes.size());
    // row-major: last axis fastest
    for (std::size_t i = axes.size(); i-- > 0;) {
        const auto& a = axes[i];
        vals[i] = a.values[index % a.values.size()];
        index /= a.values.size();
    }
    return vals;
}

RunConfig SweepConfig::cell_config(std::size_t index) const {
    RunConfig cfg = base;
    const auto vals = cell_values(index);
    for (std::size_t i = 0; i < axes.size(); ++i)
        apply_field(cfg, axes[i].field, vals[i]);
    cfg.validate();
    return cfg;
}

SweepConfig parse_sweep_config(const std::string& path) {
    IniFile ini = read_ini(path);
    SweepConfig sw;
    read_run_sections(ini, sw.base);
    if (!ini.has("sweep"))
        throw ParseError("sweep config requires a [sweep] section");
    auto& sec = ini.sections["sweep"];
    std::vector<int> axis_lines;
    for (auto& [key, e] : sec) {
        e.used = true;
        if (key == "cell_cap") {
            sw.cell_cap = static_cast<std::size_t>(parse_int(e, "sweep.cell_cap"));
            continue;
        }
        const auto& fields = sweepable_fields();
        if (std::find(fields.begin(), fields.end(), key) == fields.end())
            throw ParseError("line " + std::to_string(e.line) +
                             ": unknown sweep axis '" + key + "'");
        SweepAxis axis;
        axis.field = key;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            Entry tmp{item, e.line, true};
            axis.values.push_back(parse_double(tmp, key));
        }
        if (axis.values.empty())
            throw ParseError("line " + std::to_string(e.line) +
                             ": empty value list for sweep axis '" + key + "'");
        sw.axes.push_back(std::move(axis));
        axis_lines.push_back(e.line);
    }
    if (sw.axes.empty())
        throw ParseError("sweep config defines no axes");
    // keep axes in file order, not map order
    {
        std::vector<std::size_t> order(sw.axes.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return axis_lines[a] < axis_lines[b];
        });
        std::vector<SweepAxis> sorted;
        sorted.reserve(sw.axes.size());
        for (auto i : order) sorted.push_back(std::move(sw.axes[i]));
        sw.axes = std::move(sorted);
    }
    reject_unused(ini);
    sw.base.validate();
    if (sw.cell_count() > sw.cell_cap) {
        std::ostringstream os;
        os << "sweep would enumerate " << sw.cell_count()
           << " cells, beyond the cap " << sw.cell_cap;
        throw CapacityError(os.str());
    }
    return sw;
}

void FiguresConfig::validate() const {
    if (!(g_pz >= 0.0 && g_df >= 0.0))
        throw ValidationError("figures: couplings must be >= 0");
    if (!(omega_l_a > 0.0 && omega_l_b > 0.0 && omega_d > 0.0))
        throw ValidationError("figures: frequencies must be > 0");
    if (!(temperature_mK > 0.0))
        throw ValidationError("figures: temperature_mK must be > 0");
    if (!(delta_t_pz > 0.0 && delta_t_df > 0.0))
        throw ValidationError("figures: step sizes must be > 0");
    if (n_steps < 1 || dkmax < 1 || dkmax > n_steps)
        throw ValidationError("figures: bad n_steps/dkmax");
    if (response_samples < 2)
        throw ValidationError("figures: response_samples must be >= 2");
}

FiguresConfig parse_figures_config(const std::string& path) {
    IniFile ini = read_ini(path);
    FiguresConfig fc;
    if (ini.has("figures")) {
        SectionReader r{ini, "figures"};
        r.num("g_pz", fc.g_pz);
        r.num("g_df", fc.g_df);
        r.num("omega_d", fc.omega_d);
        r.num("omega_l_a", fc.omega_l_a);
        r.num("omega_l_b", fc.omega_l_b);
        r.num("temperature_mK", fc.temperature_mK);
        r.num("t_c_ratio", fc.t_c_ratio);
        r.num("delta_t_pz", fc.delta_t_pz);
        r.num("delta_t_df", fc.delta_t_df);
        r.integer("n_steps", fc.n_steps);
        r.integer("dkmax", fc.dkmax);
        r.num("response_window", fc.response_window);
        r.integer("response_samples", fc.response_samples);
    }
    read_numerics(ini, fc.numerics);
    reject_unused(ini);
    fc.validate();
    return fc;
}

}  // namespace quapi
