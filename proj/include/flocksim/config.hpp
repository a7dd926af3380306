#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/dynamics.hpp"

namespace flocksim {

/// Parsed nested key-value configuration: `key value` entries and
/// `section { ... }` blocks.
struct ConfigNode {
    std::map<std::string, std::string> values;
    std::map<std::string, ConfigNode> children;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const ConfigNode* child(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key, double fallback) const;
    std::vector<double> get_list(const std::string& key) const;
};

ConfigNode parse_config_text(const std::string& text);

struct KernelDescriptor {
    std::string family = "constant";  // constant | bounded_band | power_law | table
    double value = 1.0;
    double psi_m = 0.0, psi_M = 0.0;
    double alpha = 0.5, coefficient = 1.0, lower_coefficient = -1.0, floor = 0.0;
    double radius = std::numeric_limits<double>::infinity();
    double regularization = 0.0;
    std::vector<std::pair<double, double>> knots;

    KernelSpec build() const;
};

struct PotentialDescriptor {
    std::string family = "quadratic";  // quadratic | quadratic_sqrt | coulomb_quadratic
    double lambda = 1.0;
    double a = 1.0, b = 0.0;  // quadratic_sqrt parameters

    PotentialSpec build(int dim) const;
};

struct InitialDescriptor {
    std::string positions = "quantile_uniform";  // quantile_uniform | uniform_box | explicit | csv
    std::string velocities = "zero";             // zero | uniform | sine | explicit
    int count = 64;
    std::vector<double> pos_lo{-1.0}, pos_hi{1.0};
    std::vector<double> vel_lo, vel_hi;
    double sine_amplitude = 0.0, sine_frequency = 1.0;
    std::vector<double> explicit_positions, explicit_velocities, explicit_weights;
    std::string csv_path;

    Ensemble build(int dim, unsigned seed) const;
};

struct DiagnosticsDescriptor {
    std::string mode = "auto";  // auto | convex_1d | coulomb_1d | multi_d
    std::string zeta = "off";   // off | auto | <number>
    std::string xi = "off";
};

struct RunManifest {
    std::string scenario = "custom";
    unsigned seed = 0;
    int dim = 1;
    KernelDescriptor kernel;
    PotentialDescriptor potential;
    InitialDescriptor initial;
    SimConfig sim;
    DiagnosticsDescriptor diagnostics;
    std::string output_dir = "out";
};

RunManifest manifest_from_tree(const ConfigNode& root);
RunManifest load_manifest(const std::string& path);

/// Canonical text form: parsing it reproduces the manifest; its FNV-1a hash
/// is the manifest hash stamped into output headers.
std::string manifest_text(const RunManifest& m);
std::string manifest_hash(const RunManifest& m);

struct ResolvedRun {
    KernelSpec kernel;
    PotentialSpec potential;
    Ensemble initial;
    SimConfig sim;
    DiagnosticsConfig diagnostics;
    ReferenceMap reference;
    std::string output_dir;  // with the environment root override applied
};

/// Builds all runtime objects; resolves "auto" diagnostics choices and the
/// FLOCKSIM_OUTPUT_ROOT override.
ResolvedRun resolve(const RunManifest& m);

std::vector<std::string> bundled_scenario_names();
RunManifest bundled_scenario(const std::string& name);

}  // namespace flocksim
