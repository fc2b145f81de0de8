#include "coulgas/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "coulgas/error.hpp"

namespace coulgas {

namespace {

// schema: section -> allowed keys
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"gibbs", {"beta", "n", "kernel", "riesz_s", "potential_a"}},
        {"sampler", {"sweeps", "burn_fraction", "thinning", "chains"}},
        {"oracle", {"ensemble", "draws"}},
        {"energy", {"points_file", "eta", "tolerance"}},
        {"fluct", {"xi_center_x", "xi_center_y", "xi_inner", "xi_outer", "record_laplace_s"}},
        {"jellium",
         {"lattice", "tau_re", "tau_im", "chain_length", "dimer_delta", "eta_sequence",
          "scan_nx", "scan_ny", "scan_im_max"}},
        {"logz", {"ns", "beta_anchor", "beta_target", "nodes", "ti_sweeps", "fit"}},
        {"run", {"seed", "workers", "tolerance", "out"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cf;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config: empty section name at line " + std::to_string(lineno));
            cf.sections_[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("config: key outside any section at line " +
                              std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key at line " + std::to_string(lineno));
        if (cf.sections_[section].count(key))
            throw ConfigError("config: duplicate key " + section + "." + key);
        cf.sections_[section][key] = value;
    }
    cf.validate_schema();
    return cf;
}

void ConfigFile::validate_schema() const {
    for (const auto& [section, kv] : sections_) {
        auto it = schema().find(section);
        if (it == schema().end()) throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : kv)
            if (!it->second.count(key))
                throw ConfigError("config: unknown key " + section + "." + key);
    }
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return fallback;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? fallback : jt->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& v = get(section, key, "");
    size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: " + section + "." + key + " is not a number: " + v);
    }
    if (pos != v.size())
        throw ConfigError("config: " + section + "." + key + " is not a number: " + v);
    return out;
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& v = get(section, key, "");
    size_t pos = 0;
    long out;
    try {
        out = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: " + section + "." + key + " is not an integer: " + v);
    }
    if (pos != v.size())
        throw ConfigError("config: " + section + "." + key + " is not an integer: " + v);
    return out;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: " + section + "." + key + " is not a boolean: " + v);
}

std::vector<double> ConfigFile::get_list(const std::string& section, const std::string& key,
                                         const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::istringstream in(get(section, key, ""));
    std::vector<double> out;
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        size_t pos = 0;
        try {
            out.push_back(std::stod(tok, &pos));
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != tok.size())
            throw ConfigError("config: " + section + "." + key + " has a bad list entry: " + tok);
    }
    if (out.empty())
        throw ConfigError("config: " + section + "." + key + " is an empty list");
    return out;
}

std::vector<long> ConfigFile::get_long_list(const std::string& section, const std::string& key,
                                            const std::vector<long>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<long> out;
    for (double v : get_list(section, key, {})) {
        long l = static_cast<long>(v);
        if (static_cast<double>(l) != v)
            throw ConfigError("config: " + section + "." + key + " must be a list of integers");
        out.push_back(l);
    }
    return out;
}

std::string ConfigFile::canonical() const {
    std::ostringstream out;
    for (const auto& [section, kv] : sections_)
        for (const auto& [key, value] : kv) out << section << "." << key << " = " << value << "\n";
    return out.str();
}

std::uint64_t ConfigFile::hash() const {
    // FNV-1a over the canonical form
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace coulgas
