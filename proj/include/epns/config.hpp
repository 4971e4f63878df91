#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epns/errors.hpp"

namespace epns {

enum class RunMode { vpns, epns, sweep, kinetic_only };

// Full description of one run or one epsilon sweep. Parsed from an INI-shaped
// config file with sections [grid], [physics], [time], [output], [tolerances].
struct ExperimentConfig {
    RunMode mode = RunMode::vpns;
    // [grid]
    int d = 2;
    int n = 32;
    int n_v = 32;
    double V = 8.0;  // velocity box half-width; 0 selects the sigma-dependent default
    // [physics]
    double sigma = 1.0;
    double epsilon = 0.1;
    std::vector<double> epsilon_list;
    double delta_floor = 1e-8;
    double amplitude = 0.1;
    int mode_cutoff = 2;
    std::uint64_t seed = 1;
    bool misprepare = false;
    // [time]
    double dt = 1e-3;
    double t_end = 1.0;
    // [output]
    int output_cadence = 10;  // steps between records
    double tracker_s = 3.0;
    std::map<std::string, double> tolerances;

    int steps() const;
    double vbox_halfwidth() const;  // V, or the documented default when V == 0
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});
std::string mode_name(RunMode m);

} // namespace epns
