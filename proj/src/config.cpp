#include "epns/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace epns {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

RunMode parse_mode(const std::string& v) {
    if (v == "vpns") return RunMode::vpns;
    if (v == "epns") return RunMode::epns;
    if (v == "sweep") return RunMode::sweep;
    if (v == "kinetic-only") return RunMode::kinetic_only;
    throw ConfigError("unknown mode '" + v + "'");
}

void apply(ExperimentConfig& c, const std::string& section, const std::string& key,
           const std::string& value) {
    auto full = section.empty() ? key : section + "." + key;
    try {
        if (full == "physics.mode") c.mode = parse_mode(value);
        else if (full == "grid.d") c.d = std::stoi(value);
        else if (full == "grid.n") c.n = std::stoi(value);
        else if (full == "grid.n_v") c.n_v = std::stoi(value);
        else if (full == "grid.V") c.V = std::stod(value);
        else if (full == "physics.sigma") c.sigma = std::stod(value);
        else if (full == "physics.epsilon") c.epsilon = std::stod(value);
        else if (full == "physics.epsilon_list") c.epsilon_list = parse_list(value);
        else if (full == "physics.delta_floor") c.delta_floor = std::stod(value);
        else if (full == "physics.amplitude") c.amplitude = std::stod(value);
        else if (full == "physics.mode_cutoff") c.mode_cutoff = std::stoi(value);
        else if (full == "physics.seed") c.seed = std::stoull(value);
        else if (full == "physics.misprepare") c.misprepare = (value == "true" || value == "1");
        else if (full == "time.dt") c.dt = std::stod(value);
        else if (full == "time.t_end") c.t_end = std::stod(value);
        else if (full == "output.cadence") c.output_cadence = std::stoi(value);
        else if (full == "output.tracker_s") c.tracker_s = std::stod(value);
        else if (section == "tolerances") c.tolerances[key] = std::stod(value);
        else throw ConfigError("unknown config key '" + full + "'");
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for '" + full + "': " + value);
    } catch (const std::out_of_range&) {
        throw ConfigError("value out of range for '" + full + "': " + value);
    }
}

} // namespace

int ExperimentConfig::steps() const {
    double raw = t_end / dt;
    int s = static_cast<int>(std::llround(raw));
    if (s <= 0 || std::abs(raw - s) > 1e-9 * std::max(1.0, raw))
        throw ConfigError("t_end must be an integer multiple of dt");
    return s;
}

double ExperimentConfig::vbox_halfwidth() const {
    if (V > 0.0) return V;
    // documented defaults: 8 for diffusive runs, 6 max|u0| + 4 for sigma = 0
    return sigma > 0.0 ? 8.0 : 6.0 * amplitude + 4.0;
}

void ExperimentConfig::validate() const {
    if (d < 1 || d > 2) throw ConfigError("d must be 1 or 2");
    if (mode != RunMode::kinetic_only && d != 2)
        throw ConfigError("coupled modes require d = 2");
    if (n < 8 || n % 2) throw ConfigError("n must be even and >= 8");
    if (mode != RunMode::epns && (n_v < 4 || n_v % 2))
        throw ConfigError("n_v must be even and >= 4");
    if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
    if (dt <= 0.0 || t_end < 0.0) throw ConfigError("dt and t_end must be positive");
    if (amplitude < 0.0 || amplitude >= 0.5) throw ConfigError("amplitude must lie in [0, 0.5)");
    if (mode == RunMode::sweep) {
        if (epsilon_list.size() < 3) throw ConfigError("sweep needs epsilon_list of length >= 3");
        for (std::size_t i = 1; i < epsilon_list.size(); ++i)
            if (epsilon_list[i] >= epsilon_list[i - 1])
                throw ConfigError("epsilon_list must be strictly decreasing");
    } else if (mode != RunMode::epns && epsilon <= 0.0) {
        throw ConfigError("epsilon must be > 0");
    }
    if (t_end > 0.0) {
        int s = steps();
        if (output_cadence <= 0 || s % output_cadence)
            throw ConfigError("output cadence must divide the step count");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
        apply(c, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig c = parse_config_text(ss.str());
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + ov);
        std::string full = trim(ov.substr(0, eq));
        auto dot = full.find('.');
        if (dot == std::string::npos) throw ConfigError("override must be section.key=value: " + ov);
        apply(c, full.substr(0, dot), full.substr(dot + 1), trim(ov.substr(eq + 1)));
    }
    c.validate();
    return c;
}

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::vpns: return "vpns";
        case RunMode::epns: return "epns";
        case RunMode::sweep: return "sweep";
        case RunMode::kinetic_only: return "kinetic-only";
    }
    return "?";
}

} // namespace epns
