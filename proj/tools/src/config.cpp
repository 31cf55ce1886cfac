#include "config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <hillspec/io.hpp>

namespace hillspec::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': expected a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': expected an integer, got '" + v + "'");
    }
}

std::string fmt(double d) {
    std::ostringstream os;
    os << std::setprecision(17) << d;
    return os.str();
}

// "name:k=v,k=v" -> name, {k: v}
std::pair<std::string, std::map<std::string, std::string>> split_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    std::string name = trim(spec.substr(0, colon));
    std::map<std::string, std::string> kv;
    if (colon == std::string::npos) return {name, kv};
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("spec '" + spec + "': expected key=value, got '" + item + "'");
        kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return {name, kv};
}

}  // namespace

std::map<std::string, std::string> ExperimentConfig::canonical() const {
    return {
        {"flow.K_pde", std::to_string(K_pde)},
        {"flow.dt", fmt(dt)},
        {"flow.t", fmt(t)},
        {"output.out", out},
        {"output.seed", std::to_string(seed)},
        {"potential.spec", potential},
        {"reduction.m", fmt(m)},
        {"reduction.n_from", std::to_string(n_from)},
        {"reduction.n_to", std::to_string(n_to)},
        {"reduction.tol", fmt(tol)},
        {"spectral.K", std::to_string(K)},
        {"spectral.s", fmt(s)},
        {"spectral.weight", weight},
        {"verify.airy_points", std::to_string(airy_points)},
        {"verify.airy_window", std::to_string(airy_window)},
        {"verify.gap_table", gap_table},
        {"verify.suite", suite},
    };
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [k, v] : canonical()) {
        // the output directory does not change results
        if (k == "output.out") continue;
        for (unsigned char c : k + "=" + v + "\n") {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "potential.spec") cfg.potential = v;
    else if (key == "spectral.weight") cfg.weight = v;
    else if (key == "spectral.s") cfg.s = to_double(key, v);
    else if (key == "spectral.K") cfg.K = to_int(key, v);
    else if (key == "reduction.tol") cfg.tol = to_double(key, v);
    else if (key == "reduction.m") cfg.m = to_double(key, v);
    else if (key == "reduction.n_from") cfg.n_from = to_int(key, v);
    else if (key == "reduction.n_to") cfg.n_to = to_int(key, v);
    else if (key == "flow.t") cfg.t = to_double(key, v);
    else if (key == "flow.dt") cfg.dt = to_double(key, v);
    else if (key == "flow.K_pde") cfg.K_pde = to_int(key, v);
    else if (key == "verify.suite") cfg.suite = v;
    else if (key == "verify.gap_table") cfg.gap_table = v;
    else if (key == "verify.airy_window") cfg.airy_window = to_int(key, v);
    else if (key == "verify.airy_points") cfg.airy_points = to_int(key, v);
    else if (key == "output.out") cfg.out = v;
    else if (key == "output.seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    else throw ConfigError("unknown field '" + key + "'");
}

void load_config_text(const std::string& text, ExperimentConfig& cfg, const std::string& origin) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cpos = line.find_first_of("#;");
        const std::string body = trim(cpos == std::string::npos ? line : line.substr(0, cpos));
        if (body.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError(where + "unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        if (section.empty()) throw ConfigError(where + "field '" + key + "' outside any [section]");
        try {
            set_field(cfg, section + "." + key, body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    load_config_text(ss.str(), cfg, path);
}

cplx parse_complex(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty number");
    if (t.back() != 'i') return to_double("value", t);
    // a+bi, a-bi or bi
    const std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string::npos) return {0.0, to_double("value", body)};
    return {to_double("value", body.substr(0, split)), to_double("value", body.substr(split))};
}

Weight parse_weight(const std::string& spec) {
    const auto [name, kv] = split_spec(spec);
    if (name == "trivial") return Weight::trivial();
    if (name == "poly") {
        if (!kv.count("a")) throw ConfigError("weight 'poly' needs a=...");
        Weight w = Weight::polynomial(to_double("weight.a", kv.at("a")));
        if (kv.count("eps")) w = cap_weight(w, to_double("weight.eps", kv.at("eps")));
        return w;
    }
    throw ConfigError("field 'spectral.weight': unknown weight '" + spec + "'");
}

Potential parse_potential(const std::string& spec, double s, const Weight& w, std::uint64_t seed) {
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = trim(spec.substr(5));
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read potential file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return Potential(fourier_seq_from_json(ss.str()), s, w);
    }
    const auto [name, kv] = split_spec(spec);
    auto num = [&](const char* k, double def) { return kv.count(k) ? to_double(k, kv.at(k)) : def; };
    if (name == "zero") return Potential(zero_potential().seq, s, w);
    if (name == "demo") {
        // smooth real potential, |q_2j| = 0.2 (2/<j>)^2
        std::map<index_t, cplx> c;
        for (index_t j = 1; j <= 32; ++j) c[j] = std::polar(0.2 * std::pow(2.0 / bracket(j), 2), 0.7 * j);
        return real_potential(c, s, w);
    }
    if (name == "single-mode") {
        if (!kv.count("c")) throw ConfigError("potential 'single-mode' needs c=...");
        Potential p = single_mode(parse_complex(kv.at("c")));
        return Potential(p.seq, s, w);
    }
    if (name == "power-law") {
        const auto jmax = static_cast<index_t>(num("jmax", 64));
        return power_law_potential(num("amp", 0.1), num("expo", s), jmax, seed, num("cos", 0) != 0.0, s, w);
    }
    if (name == "inline") {
        std::map<index_t, cplx> c;
        for (const auto& [k, v] : kv) c[to_int("potential.inline", k)] = parse_complex(v);
        for (const auto& [j, v] : c)
            if (j <= 0) throw ConfigError("potential 'inline' takes indices j >= 1");
        return real_potential(c, s, w);
    }
    throw ConfigError("field 'potential.spec': unknown potential '" + spec + "'");
}

}  // namespace hillspec::cli
