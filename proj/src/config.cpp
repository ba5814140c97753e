#include "khess/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "khess/csv.hpp"

namespace khess {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
    std::ostringstream os;
    os << name << ":" << line << ": " << what;
    throw config_error(os.str());
}

double want_double(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& name) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw config_error(name + ": missing required key '" + key + "'");
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw config_error(name + ": key '" + key + "' is not a number: " + it->second);
    }
}

std::optional<double> maybe_double(const std::map<std::string, std::string>& kv,
                                   const std::string& key, const std::string& name) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw config_error(name + ": key '" + key + "' is not a number: " + it->second);
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(name, lineno, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) fail(name, lineno, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected key = value");
        if (current.empty()) fail(name, lineno, "key outside of any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(name, lineno, "empty key");
        if (sections[current].count(key)) fail(name, lineno, "duplicate key '" + key + "'");
        sections[current][key] = val;
    }

    RunConfig cfg;
    for (const auto& [sec, kv] : sections)
        for (const auto& [k, v] : kv) cfg.raw[sec + "." + k] = v;

    // [params]
    {
        const auto it = sections.find("params");
        if (it == sections.end()) throw config_error(name + ": missing [params] section");
        const auto& kv = it->second;
        cfg.params.n = static_cast<int>(want_double(kv, "n", name));
        cfg.params.k = static_cast<int>(want_double(kv, "k", name));
        cfg.params.q = want_double(kv, "q", name);
        if (auto l = maybe_double(kv, "lambda", name)) cfg.params.lambda = *l;
        cfg.params.validate();
    }

    // [weight]
    {
        const auto it = sections.find("weight");
        if (it == sections.end()) throw config_error(name + ": missing [weight] section");
        const auto& kv = it->second;
        const auto kind_it = kv.find("kind");
        if (kind_it == kv.end()) throw config_error(name + ": weight block needs 'kind'");
        const std::string& kind = kind_it->second;
        if (kind == "constant") {
            cfg.weight = weights::constant(maybe_double(kv, "c", name).value_or(1.0));
        } else if (kind == "power") {
            cfg.weight = weights::power(want_double(kv, "sigma", name),
                                        maybe_double(kv, "c", name).value_or(1.0));
        } else if (kind == "rational") {
            cfg.weight =
                weights::rational(want_double(kv, "a", name), want_double(kv, "atilde", name),
                                  want_double(kv, "beta", name), want_double(kv, "gamma", name));
        } else if (kind == "matukuma") {
            cfg.weight = weights::matukuma(want_double(kv, "mu", name));
        } else if (kind == "example1") {
            cfg.weight = weights::example1(cfg.params.n, cfg.params.k);
        } else if (kind == "tabulated") {
            const auto path_it = kv.find("path");
            if (path_it == kv.end())
                throw config_error(name + ": tabulated weight needs 'path'");
            cfg.weight = weights::tabulated(csv::read_weight_table(path_it->second));
        } else {
            throw config_error(name + ": unknown weight kind '" + kind + "'");
        }
    }

    // [integrator]
    if (const auto it = sections.find("integrator"); it != sections.end()) {
        const auto& kv = it->second;
        auto& ic = cfg.integrator;
        if (auto v = maybe_double(kv, "rel_tol", name)) ic.rel_tol = *v;
        if (auto v = maybe_double(kv, "abs_tol", name)) ic.abs_tol = *v;
        if (auto v = maybe_double(kv, "r_start", name)) ic.r_start = *v;
        if (auto v = maybe_double(kv, "t_min", name)) ic.t_min = *v;
        if (auto v = maybe_double(kv, "t_max", name)) ic.t_max = *v;
        if (auto v = maybe_double(kv, "output_points", name))
            ic.output_points = static_cast<std::size_t>(*v);
        if (auto v = maybe_double(kv, "singular_T", name)) ic.singular_T = *v;
        if (auto v = maybe_double(kv, "singular_t_end", name)) ic.singular_t_end = *v;
        if (auto v = maybe_double(kv, "r_max", name)) cfg.r_max = *v;
        ic.validate();
    }

    // [output]
    if (const auto it = sections.find("output"); it != sections.end()) {
        const auto& kv = it->second;
        if (const auto f = kv.find("format"); f != kv.end()) {
            if (f->second != "json" && f->second != "csv")
                throw config_error(name + ": output format must be json or csv");
            cfg.output.format = f->second;
        }
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace khess
