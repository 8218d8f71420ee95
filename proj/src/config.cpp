#include "btn/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace btn {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string_view::npos) return "";
    return std::string(s.substr(a, b - a + 1));
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad number for '" +
                              key + "': " + v,
                          line);
    }
}

int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad integer for '" +
                              key + "': " + v,
                          line);
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

SourceSpec parse_source(const std::string& v, int line) {
    SourceSpec spec;
    std::string rest = v;
    while (!rest.empty()) {
        std::string part;
        const std::size_t semi = rest.find(';');
        if (semi == std::string::npos) {
            part = rest;
            rest.clear();
        } else {
            part = rest.substr(0, semi);
            rest = rest.substr(semi + 1);
        }
        const auto w = split_ws(part);
        if (w.size() != 4)
            throw ConfigError("line " + std::to_string(line) +
                                  ": source term needs 'cx cy amplitude sigma'",
                              line);
        spec.terms.push_back(GaussianTerm{parse_double(w[0], "source", line),
                                          parse_double(w[1], "source", line),
                                          parse_double(w[2], "source", line),
                                          parse_double(w[3], "source", line)});
    }
    return spec;
}

InitialCondition parse_init(const std::string& v, int line) {
    const auto w = split_ws(v);
    if (w.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty init spec", line);
    if (w[0] == "zero") {
        if (w.size() != 1)
            throw ConfigError("line " + std::to_string(line) + ": init zero takes no arguments", line);
        return InitialCondition::zero();
    }
    if (w[0] == "sines") {
        if (w.size() != 4)
            throw ConfigError("line " + std::to_string(line) +
                                  ": init sines needs 'amplitude dir_x dir_y'",
                              line);
        return InitialCondition::sines(parse_double(w[1], "init", line),
                                       parse_double(w[2], "init", line),
                                       parse_double(w[3], "init", line));
    }
    if (w[0] == "modes") {
        if (w.size() != 4)
            throw ConfigError("line " + std::to_string(line) +
                                  ": init modes needs 'seed amplitude nmodes'",
                              line);
        return InitialCondition::modes(
            static_cast<std::uint64_t>(std::stoull(w[1])),
            parse_double(w[2], "init", line), parse_int(w[3], "init", line));
    }
    throw ConfigError("line " + std::to_string(line) + ": unknown init kind '" + w[0] +
                          "' (zero | sines | modes)",
                      line);
}

} // namespace

SimulationConfig parse_config(std::string_view text) {
    SimulationConfig cfg;
    std::set<std::string> seen;
    int line_no = 0;
    std::istringstream is{std::string(text)};
    std::string raw;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected 'key = value', got: " + trim(raw),
                              line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value",
                              line_no);
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'",
                              line_no);
        if (key == "kappa") cfg.kappa = parse_double(value, key, line_no);
        else if (key == "gamma") cfg.gamma = parse_double(value, key, line_no);
        else if (key == "dt") cfg.dt = parse_double(value, key, line_no);
        else if (key == "t_end") cfg.t_end = parse_double(value, key, line_no);
        else if (key == "nx") cfg.nx = parse_int(value, key, line_no);
        else if (key == "ny") cfg.ny = parse_int(value, key, line_no);
        else if (key == "lx") cfg.lx = parse_double(value, key, line_no);
        else if (key == "ly") cfg.ly = parse_double(value, key, line_no);
        else if (key == "cg_tol") cfg.cg_tol = parse_double(value, key, line_no);
        else if (key == "record_every") cfg.record_every = parse_int(value, key, line_no);
        else if (key == "source") cfg.source = parse_source(value, line_no);
        else if (key == "init") cfg.init = parse_init(value, line_no);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'",
                              line_no);
    }
    cfg.validate();
    return cfg;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string serialize_config(const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "kappa = " << fmt(cfg.kappa) << "\n";
    os << "gamma = " << fmt(cfg.gamma) << "\n";
    os << "dt = " << fmt(cfg.dt) << "\n";
    os << "t_end = " << fmt(cfg.t_end) << "\n";
    os << "nx = " << cfg.nx << "\n";
    os << "ny = " << cfg.ny << "\n";
    os << "lx = " << fmt(cfg.lx) << "\n";
    os << "ly = " << fmt(cfg.ly) << "\n";
    os << "cg_tol = " << fmt(cfg.cg_tol) << "\n";
    os << "record_every = " << cfg.record_every << "\n";
    os << "source = ";
    for (std::size_t k = 0; k < cfg.source.terms.size(); ++k) {
        const GaussianTerm& t = cfg.source.terms[k];
        if (k) os << " ; ";
        os << fmt(t.cx) << " " << fmt(t.cy) << " " << fmt(t.amplitude) << " "
           << fmt(t.sigma);
    }
    os << "\n";
    os << "init = ";
    switch (cfg.init.kind) {
        case InitialCondition::Kind::Zero:
            os << "zero";
            break;
        case InitialCondition::Kind::Sines:
            os << "sines " << fmt(cfg.init.amplitude) << " " << fmt(cfg.init.dir_x)
               << " " << fmt(cfg.init.dir_y);
            break;
        case InitialCondition::Kind::Modes:
            os << "modes " << cfg.init.seed << " " << fmt(cfg.init.amplitude) << " "
               << cfg.init.nmodes;
            break;
    }
    os << "\n";
    return os.str();
}

SimulationConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

} // namespace btn
