#include "thlab/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace thlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return static_cast<uint64_t>(x);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an unsigned integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(line, "expected a boolean, got '" + v + "'");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void RunConfig::set(const std::string& key, const std::string& value, int line) {
    if (key == "nx") nx = parse_int(value, line);
    else if (key == "ny") ny = parse_int(value, line);
    else if (key == "nu") nu = parse_double(value, line);
    else if (key == "kappa") kappa = parse_double(value, line);
    else if (key == "k") k = parse_double(value, line);
    else if (key == "n_steps") n_steps = parse_int(value, line);
    else if (key == "eps_nl") eps_nl = parse_double(value, line);
    else if (key == "max_picard") max_picard = parse_int(value, line);
    else if (key == "eps_div") eps_div = parse_double(value, line);
    else if (key == "preset") preset = value;
    else if (key == "amplitude") amplitude = parse_double(value, line);
    else if (key == "seed") seed = parse_u64(value, line);
    else if (key == "couple_buoyancy") couple_buoyancy = parse_bool(value, line);
    else if (key == "couple_v2_source") couple_v2_source = parse_bool(value, line);
    else if (key == "monitors") monitors = parse_bool(value, line);
    else if (key == "strict_gates") strict_gates = parse_bool(value, line);
    else if (key == "c_h") c_h = parse_double(value, line);
    else if (key == "horizon_T") horizon_T = parse_double(value, line);
    else if (key == "r_window") r_window = parse_double(value, line);
    else if (key == "cb_hat") cb_hat = parse_double(value, line);
    else if (key == "cb_samples") cb_samples = parse_int(value, line);
    else if (key == "snapshot_stride") snapshot_stride = parse_int(value, line);
    else if (key == "out_dir") out_dir = value;
    else throw ConfigError(line, "unknown key '" + key + "'");
}

void RunConfig::validate() const {
    if (nx < 4 || ny < 4) throw ConfigError(0, "nx and ny must be >= 4");
    if (!(nu > 0.0) || !(kappa > 0.0) || !(k > 0.0)) throw ConfigError(0, "nu, kappa, k must be positive");
    if (n_steps < 0) throw ConfigError(0, "n_steps must be >= 0");
    if (preset != "zero" && preset != "conductive-perturbation" && preset != "random" &&
        preset.rfind("file:", 0) != 0)
        throw ConfigError(0, "unknown preset '" + preset + "'");
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["nx"] = std::to_string(nx);
    kv["ny"] = std::to_string(ny);
    kv["nu"] = fmt(nu);
    kv["kappa"] = fmt(kappa);
    kv["k"] = fmt(k);
    kv["n_steps"] = std::to_string(n_steps);
    kv["eps_nl"] = fmt(eps_nl);
    kv["max_picard"] = std::to_string(max_picard);
    kv["eps_div"] = fmt(eps_div);
    kv["preset"] = preset;
    kv["amplitude"] = fmt(amplitude);
    kv["seed"] = std::to_string(seed);
    kv["couple_buoyancy"] = couple_buoyancy ? "true" : "false";
    kv["couple_v2_source"] = couple_v2_source ? "true" : "false";
    kv["monitors"] = monitors ? "true" : "false";
    kv["strict_gates"] = strict_gates ? "true" : "false";
    kv["c_h"] = fmt(c_h);
    kv["horizon_T"] = fmt(horizon_T);
    kv["r_window"] = fmt(r_window);
    kv["cb_hat"] = fmt(cb_hat);
    kv["cb_samples"] = std::to_string(cb_samples);
    kv["snapshot_stride"] = std::to_string(snapshot_stride);
    std::ostringstream os;
    for (const auto& [key, value] : kv) os << key << "=" << value << "\n";
    return os.str();
}

std::string RunConfig::config_hash() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

namespace {

void parse_into(RunConfig& cfg, std::istream& in, const std::string& include_root, int depth) {
    if (depth > 8) throw ConfigError(0, "include nesting too deep");
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.rfind("include ", 0) == 0) {
            const std::string inc = trim(s.substr(8));
            std::filesystem::path p = std::filesystem::path(include_root) / inc;
            std::ifstream f(p);
            if (!f) throw ConfigError(line, "cannot open include file '" + p.string() + "'");
            parse_into(cfg, f, p.parent_path().string(), depth + 1);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key=value, got '" + s + "'");
        cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
    }
}

} // namespace

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
    RunConfig cfg;
    parse_into(cfg, f, std::filesystem::path(path).parent_path().string(), 0);
    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& include_root) {
    std::istringstream in(text);
    RunConfig cfg;
    parse_into(cfg, in, include_root, 0);
    cfg.validate();
    return cfg;
}

} // namespace thlab
