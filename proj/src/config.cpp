#include "flocksim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "flocksim/csvio.hpp"

namespace flocksim {

namespace {

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double to_num(const std::string& s, const std::string& what) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        raise(Errc::config_parse, "expected a number for " + what + ", got '" + s + "'");
    return v;
}

}  // namespace

const ConfigNode* ConfigNode::child(const std::string& key) const {
    auto it = children.find(key);
    return it == children.end() ? nullptr : &it->second;
}

std::string ConfigNode::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ConfigNode::get_num(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : to_num(it->second, key);
}

std::vector<double> ConfigNode::get_list(const std::string& key) const {
    std::vector<double> out;
    auto it = values.find(key);
    if (it == values.end()) return out;
    for (const auto& tok : split_ws(it->second)) out.push_back(to_num(tok, key));
    return out;
}

ConfigNode parse_config_text(const std::string& text) {
    ConfigNode root;
    std::vector<ConfigNode*> stack{&root};
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line == "}") {
            if (stack.size() == 1)
                raise(Errc::config_parse, "unmatched '}' at line " + std::to_string(line_no));
            stack.pop_back();
            continue;
        }
        if (line.back() == '{') {
            const std::string name = trim(line.substr(0, line.size() - 1));
            if (name.empty() || name.find(' ') != std::string::npos)
                raise(Errc::config_parse, "bad section header at line " + std::to_string(line_no));
            stack.push_back(&stack.back()->children[name]);
            continue;
        }
        const auto sp = line.find_first_of(" \t");
        if (sp == std::string::npos) {
            raise(Errc::config_parse,
                  "expected 'key value' at line " + std::to_string(line_no) + ": '" + line + "'");
        }
        stack.back()->values[line.substr(0, sp)] = trim(line.substr(sp + 1));
    }
    if (stack.size() != 1) raise(Errc::config_parse, "unterminated section (missing '}')");
    return root;
}

KernelSpec KernelDescriptor::build() const {
    if (family == "constant") return KernelSpec::constant_weight(value).regularized(regularization);
    if (family == "bounded_band")
        return KernelSpec::bounded_band(psi_m, psi_M, radius).regularized(regularization);
    if (family == "power_law")
        return KernelSpec::power_law(alpha, coefficient, floor, radius, lower_coefficient)
            .regularized(regularization);
    if (family == "table") return KernelSpec::table(knots).regularized(regularization);
    raise(Errc::config_parse, "unknown kernel family '" + family + "'");
}

PotentialSpec PotentialDescriptor::build(int dim) const {
    if (family == "quadratic") return PotentialSpec::quadratic(lambda, dim);
    if (family == "quadratic_sqrt") return PotentialSpec::quadratic_sqrt(a, b, dim);
    if (family == "coulomb_quadratic") {
        if (dim != 1) raise(Errc::config_parse, "coulomb_quadratic potential is 1D only");
        return PotentialSpec::coulomb_quadratic_1d();
    }
    raise(Errc::config_parse, "unknown potential family '" + family + "'");
}

Ensemble InitialDescriptor::build(int dim, unsigned seed) const {
    if (positions == "csv") return load_initial_csv(csv_path);

    InitialCondition ic;
    ic.dim = dim;
    ic.count = count;
    ic.seed = seed;
    ic.pos_lo = pos_lo;
    ic.pos_hi = pos_hi;
    ic.vel_lo = vel_lo;
    ic.vel_hi = vel_hi;
    ic.sine_amplitude = sine_amplitude;
    ic.sine_frequency = sine_frequency;

    if (positions == "quantile_uniform")
        ic.positions_kind = InitialCondition::Positions::quantile_uniform;
    else if (positions == "uniform_box")
        ic.positions_kind = InitialCondition::Positions::uniform_box;
    else if (positions == "explicit") {
        ic.positions_kind = InitialCondition::Positions::explicit_list;
        ic.explicit_positions = explicit_positions;
        ic.explicit_weights = explicit_weights.empty()
                                  ? std::vector<double>(explicit_positions.size() / dim, 1.0)
                                  : explicit_weights;
        ic.explicit_velocities = explicit_velocities;
        if (ic.explicit_velocities.empty())
            ic.explicit_velocities.assign(ic.explicit_positions.size(), 0.0);
        return sample_initial(ic);
    } else {
        raise(Errc::unsupported_descriptor, "unknown position descriptor '" + positions + "'");
    }

    if (velocities == "zero")
        ic.velocities_kind = InitialCondition::Velocities::zero;
    else if (velocities == "uniform")
        ic.velocities_kind = InitialCondition::Velocities::uniform_box;
    else if (velocities == "sine")
        ic.velocities_kind = InitialCondition::Velocities::sine;
    else if (velocities == "explicit") {
        ic.velocities_kind = InitialCondition::Velocities::explicit_list;
        ic.explicit_velocities = explicit_velocities;
    } else {
        raise(Errc::unsupported_descriptor, "unknown velocity descriptor '" + velocities + "'");
    }
    return sample_initial(ic);
}

namespace {

std::string join(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += format_double(v[i]);
    }
    return out;
}

void read_kernel(const ConfigNode& node, KernelDescriptor& k) {
    k.family = node.get("family", k.family);
    k.value = node.get_num("value", k.value);
    k.psi_m = node.get_num("psi_m", k.psi_m);
    k.psi_M = node.get_num("psi_M", k.psi_M);
    k.alpha = node.get_num("alpha", k.alpha);
    k.coefficient = node.get_num("coefficient", k.coefficient);
    k.lower_coefficient = node.get_num("lower_coefficient", k.lower_coefficient);
    k.floor = node.get_num("floor", k.floor);
    k.radius = node.get_num("radius", k.radius);
    k.regularization = node.get_num("regularization", k.regularization);
    const auto flat = node.get_list("knots");  // r0 v0 r1 v1 ...
    if (!flat.empty()) {
        if (flat.size() % 2 != 0) raise(Errc::config_parse, "knots need radius value pairs");
        k.knots.clear();
        for (size_t i = 0; i < flat.size(); i += 2) k.knots.push_back({flat[i], flat[i + 1]});
    }
}

void read_initial(const ConfigNode& node, InitialDescriptor& ic) {
    ic.positions = node.get("positions", ic.positions);
    ic.velocities = node.get("velocities", ic.velocities);
    ic.count = int(node.get_num("count", ic.count));
    if (node.has("pos_lo")) ic.pos_lo = node.get_list("pos_lo");
    if (node.has("pos_hi")) ic.pos_hi = node.get_list("pos_hi");
    if (node.has("vel_lo")) ic.vel_lo = node.get_list("vel_lo");
    if (node.has("vel_hi")) ic.vel_hi = node.get_list("vel_hi");
    ic.sine_amplitude = node.get_num("sine_amplitude", ic.sine_amplitude);
    ic.sine_frequency = node.get_num("sine_frequency", ic.sine_frequency);
    if (node.has("positions_data")) ic.explicit_positions = node.get_list("positions_data");
    if (node.has("velocities_data")) ic.explicit_velocities = node.get_list("velocities_data");
    if (node.has("weights_data")) ic.explicit_weights = node.get_list("weights_data");
    ic.csv_path = node.get("csv", ic.csv_path);
}

}  // namespace

RunManifest manifest_from_tree(const ConfigNode& root) {
    RunManifest m;
    m.scenario = root.get("scenario", m.scenario);
    m.seed = unsigned(root.get_num("seed", m.seed));
    m.dim = int(root.get_num("dim", m.dim));
    if (m.dim < 1) raise(Errc::config_parse, "dim must be at least 1");

    if (const auto* node = root.child("kernel")) read_kernel(*node, m.kernel);
    if (const auto* node = root.child("potential")) {
        m.potential.family = node->get("family", m.potential.family);
        m.potential.lambda = node->get_num("lambda", m.potential.lambda);
        m.potential.a = node->get_num("a", m.potential.a);
        m.potential.b = node->get_num("b", m.potential.b);
    }
    if (const auto* node = root.child("initial")) read_initial(*node, m.initial);
    if (const auto* node = root.child("sim")) {
        const std::string integ = node->get("integrator", "rk45");
        if (integ == "rk45")
            m.sim.integrator = SimConfig::Integrator::adaptive_rk45;
        else if (integ == "rk4")
            m.sim.integrator = SimConfig::Integrator::rk4;
        else
            raise(Errc::config_parse, "unknown integrator '" + integ + "'");
        m.sim.dt_init = node->get_num("dt_init", m.sim.dt_init);
        m.sim.dt_max = node->get_num("dt_max", m.sim.dt_max);
        m.sim.t_final = node->get_num("t_final", m.sim.t_final);
        m.sim.rel_tol = node->get_num("rel_tol", m.sim.rel_tol);
        m.sim.abs_tol = node->get_num("abs_tol", m.sim.abs_tol);
        m.sim.record_every = int(node->get_num("record_every", m.sim.record_every));
        m.sim.min_separation_guard =
            node->get_num("min_separation_guard", m.sim.min_separation_guard);
        m.sim.deterministic_reduction =
            node->get_num("deterministic_reduction", m.sim.deterministic_reduction ? 1 : 0) != 0;
    }
    if (const auto* node = root.child("diagnostics")) {
        m.diagnostics.mode = node->get("mode", m.diagnostics.mode);
        m.diagnostics.zeta = node->get("zeta", m.diagnostics.zeta);
        m.diagnostics.xi = node->get("xi", m.diagnostics.xi);
    }
    if (const auto* node = root.child("output")) m.output_dir = node->get("dir", m.output_dir);
    return m;
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::config_parse, "cannot open configuration file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return manifest_from_tree(parse_config_text(buf.str()));
}

std::string manifest_text(const RunManifest& m) {
    std::ostringstream os;
    os << "scenario " << m.scenario << "\n";
    os << "seed " << m.seed << "\n";
    os << "dim " << m.dim << "\n";
    os << "kernel {\n";
    os << "  family " << m.kernel.family << "\n";
    if (m.kernel.family == "constant") os << "  value " << format_double(m.kernel.value) << "\n";
    if (m.kernel.family == "bounded_band") {
        os << "  psi_m " << format_double(m.kernel.psi_m) << "\n";
        os << "  psi_M " << format_double(m.kernel.psi_M) << "\n";
        os << "  radius " << format_double(m.kernel.radius) << "\n";
    }
    if (m.kernel.family == "power_law") {
        os << "  alpha " << format_double(m.kernel.alpha) << "\n";
        os << "  coefficient " << format_double(m.kernel.coefficient) << "\n";
        if (m.kernel.lower_coefficient >= 0.0)
            os << "  lower_coefficient " << format_double(m.kernel.lower_coefficient) << "\n";
        if (m.kernel.floor > 0.0) os << "  floor " << format_double(m.kernel.floor) << "\n";
        if (std::isfinite(m.kernel.radius))
            os << "  radius " << format_double(m.kernel.radius) << "\n";
    }
    if (m.kernel.family == "table") {
        os << "  knots";
        for (const auto& [r, v] : m.kernel.knots)
            os << " " << format_double(r) << " " << format_double(v);
        os << "\n";
    }
    if (m.kernel.regularization > 0.0)
        os << "  regularization " << format_double(m.kernel.regularization) << "\n";
    os << "}\n";
    os << "potential {\n";
    os << "  family " << m.potential.family << "\n";
    if (m.potential.family == "quadratic")
        os << "  lambda " << format_double(m.potential.lambda) << "\n";
    if (m.potential.family == "quadratic_sqrt") {
        os << "  a " << format_double(m.potential.a) << "\n";
        os << "  b " << format_double(m.potential.b) << "\n";
    }
    os << "}\n";
    os << "initial {\n";
    os << "  positions " << m.initial.positions << "\n";
    os << "  velocities " << m.initial.velocities << "\n";
    if (m.initial.positions == "explicit") {
        os << "  positions_data " << join(m.initial.explicit_positions) << "\n";
        if (!m.initial.explicit_weights.empty())
            os << "  weights_data " << join(m.initial.explicit_weights) << "\n";
    } else if (m.initial.positions == "csv") {
        os << "  csv " << m.initial.csv_path << "\n";
    } else {
        os << "  count " << m.initial.count << "\n";
        os << "  pos_lo " << join(m.initial.pos_lo) << "\n";
        os << "  pos_hi " << join(m.initial.pos_hi) << "\n";
    }
    if (m.initial.velocities == "uniform") {
        os << "  vel_lo " << join(m.initial.vel_lo) << "\n";
        os << "  vel_hi " << join(m.initial.vel_hi) << "\n";
    }
    if (m.initial.velocities == "sine") {
        os << "  sine_amplitude " << format_double(m.initial.sine_amplitude) << "\n";
        os << "  sine_frequency " << format_double(m.initial.sine_frequency) << "\n";
    }
    if (m.initial.velocities == "explicit")
        os << "  velocities_data " << join(m.initial.explicit_velocities) << "\n";
    os << "}\n";
    os << "sim {\n";
    os << "  integrator "
       << (m.sim.integrator == SimConfig::Integrator::adaptive_rk45 ? "rk45" : "rk4") << "\n";
    os << "  dt_init " << format_double(m.sim.dt_init) << "\n";
    if (std::isfinite(m.sim.dt_max)) os << "  dt_max " << format_double(m.sim.dt_max) << "\n";
    os << "  t_final " << format_double(m.sim.t_final) << "\n";
    os << "  rel_tol " << format_double(m.sim.rel_tol) << "\n";
    os << "  abs_tol " << format_double(m.sim.abs_tol) << "\n";
    os << "  record_every " << m.sim.record_every << "\n";
    if (m.sim.min_separation_guard >= 0.0)
        os << "  min_separation_guard " << format_double(m.sim.min_separation_guard) << "\n";
    os << "  deterministic_reduction " << (m.sim.deterministic_reduction ? 1 : 0) << "\n";
    os << "}\n";
    os << "diagnostics {\n";
    os << "  mode " << m.diagnostics.mode << "\n";
    os << "  zeta " << m.diagnostics.zeta << "\n";
    os << "  xi " << m.diagnostics.xi << "\n";
    os << "}\n";
    os << "output {\n";
    os << "  dir " << m.output_dir << "\n";
    os << "}\n";
    return os.str();
}

std::string manifest_hash(const RunManifest& m) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(manifest_text(m))));
    return buf;
}

ResolvedRun resolve(const RunManifest& m) {
    ResolvedRun run;
    run.kernel = m.kernel.build();
    run.potential = m.potential.build(m.dim);
    run.initial = m.initial.build(m.dim, m.seed);
    run.sim = m.sim;
    run.sim.validate();

    if (m.diagnostics.mode == "auto") {
        if (m.dim > 1)
            run.diagnostics.mode = DiagnosticsConfig::Mode::multi_d;
        else if (run.potential.family == PotentialFamily::coulomb_quadratic_1d)
            run.diagnostics.mode = DiagnosticsConfig::Mode::coulomb_1d;
        else
            run.diagnostics.mode = DiagnosticsConfig::Mode::convex_1d;
    } else if (m.diagnostics.mode == "convex_1d") {
        run.diagnostics.mode = DiagnosticsConfig::Mode::convex_1d;
    } else if (m.diagnostics.mode == "coulomb_1d") {
        run.diagnostics.mode = DiagnosticsConfig::Mode::coulomb_1d;
    } else if (m.diagnostics.mode == "multi_d") {
        run.diagnostics.mode = DiagnosticsConfig::Mode::multi_d;
    } else {
        raise(Errc::config_parse, "unknown diagnostics mode '" + m.diagnostics.mode + "'");
    }

    auto resolve_weight = [&](const std::string& text, bool is_zeta) -> std::optional<double> {
        if (text == "off") return std::nullopt;
        if (text == "auto") {
            const auto [zeta_sup, xi_sup] = admissibility_limits(run.potential, run.kernel);
            const double sup = is_zeta ? zeta_sup : xi_sup;
            if (!(sup > 0.0)) return std::nullopt;
            return 0.9 * sup;
        }
        return to_num(text, is_zeta ? "zeta" : "xi");
    };
    if (run.diagnostics.mode == DiagnosticsConfig::Mode::multi_d) {
        run.diagnostics.zeta = resolve_weight(m.diagnostics.zeta, true);
        run.diagnostics.xi = resolve_weight(m.diagnostics.xi, false);
        if (run.diagnostics.zeta || run.diagnostics.xi) {
            // Validate now so a bad manifest fails before the run starts.
            lyapunov_multid(run.initial, run.potential, run.kernel, run.diagnostics.zeta,
                            run.diagnostics.xi);
        }
    }

    run.reference = reference_map(run.initial, run.potential);

    run.output_dir = m.output_dir;
    if (const char* root = std::getenv("FLOCKSIM_OUTPUT_ROOT")) {
        if (!m.output_dir.empty() && m.output_dir.front() != '/')
            run.output_dir = std::string(root) + "/" + m.output_dir;
    }
    return run;
}

std::vector<std::string> bundled_scenario_names() {
    return {"twobody",      "thm1-bounded", "thm1-singular", "thm2-bounded",
            "thm2-singular", "thm3-bounded", "thm3-singular"};
}

RunManifest bundled_scenario(const std::string& name) {
    RunManifest m;
    m.scenario = name;
    m.seed = 42;

    if (name == "twobody") {
        m.dim = 1;
        m.kernel.family = "constant";
        m.kernel.value = 1.0;
        m.potential.family = "quadratic";
        m.potential.lambda = 1.0;
        m.initial.positions = "explicit";
        m.initial.explicit_positions = {-1.0, 1.0};
        m.initial.explicit_velocities = {0.3, -0.2};
        m.initial.explicit_weights = {1.0, 1.0};
        m.initial.velocities = "explicit";
        m.sim.t_final = 10.0;
        m.sim.rel_tol = 1e-9;
        m.sim.abs_tol = 1e-12;
        m.sim.record_every = 5;
        m.output_dir = "out/twobody";
        return m;
    }
    if (name == "thm1-bounded") {
        m.dim = 1;
        m.kernel.family = "bounded_band";
        m.kernel.psi_m = 0.5;
        m.kernel.psi_M = 2.0;
        m.kernel.radius = 4.0;
        m.potential.family = "quadratic";
        m.potential.lambda = 1.0;
        m.initial.positions = "quantile_uniform";
        m.initial.pos_lo = {-1.0};
        m.initial.pos_hi = {1.0};
        m.initial.count = 64;
        m.initial.velocities = "sine";
        m.initial.sine_amplitude = 0.5;
        m.initial.sine_frequency = 3.0;
        m.sim.dt_max = 0.2;
        m.sim.t_final = 16.0;
        m.sim.record_every = 2;
        m.output_dir = "out/thm1-bounded";
        return m;
    }
    if (name == "thm1-singular") {
        m.dim = 1;
        m.kernel.family = "power_law";
        m.kernel.alpha = 0.5;
        m.kernel.coefficient = 1.0;
        m.potential.family = "quadratic";
        m.potential.lambda = 1.0;
        m.initial.positions = "quantile_uniform";
        m.initial.pos_lo = {-1.0};
        m.initial.pos_hi = {1.0};
        m.initial.count = 64;
        m.initial.velocities = "sine";
        m.initial.sine_amplitude = 0.1;
        m.initial.sine_frequency = 3.0;
        m.sim.dt_max = 0.5;
        m.sim.t_final = 300.0;
        m.sim.record_every = 2;
        m.output_dir = "out/thm1-singular";
        return m;
    }
    if (name == "thm2-bounded") {
        m.dim = 1;
        m.kernel.family = "bounded_band";
        m.kernel.psi_m = 0.75;
        m.kernel.psi_M = 1.25;
        m.kernel.radius = 3.0;
        m.potential.family = "coulomb_quadratic";
        m.initial.positions = "quantile_uniform";
        m.initial.pos_lo = {-0.5};
        m.initial.pos_hi = {0.5};
        m.initial.count = 64;
        m.initial.velocities = "sine";
        m.initial.sine_amplitude = 0.2;
        m.initial.sine_frequency = 3.0;
        m.sim.dt_max = 0.25;
        m.sim.t_final = 40.0;
        m.sim.record_every = 2;
        m.output_dir = "out/thm2-bounded";
        return m;
    }
    if (name == "thm2-singular") {
        m.dim = 1;
        m.kernel.family = "power_law";
        m.kernel.alpha = 0.5;
        m.kernel.coefficient = 1.0;
        m.potential.family = "coulomb_quadratic";
        m.initial.positions = "quantile_uniform";
        m.initial.pos_lo = {-0.8};
        m.initial.pos_hi = {0.8};
        m.initial.count = 64;
        m.initial.velocities = "sine";
        m.initial.sine_amplitude = 0.3;
        m.initial.sine_frequency = 3.0;
        m.sim.dt_max = 0.5;
        m.sim.t_final = 150.0;
        m.sim.record_every = 3;
        m.output_dir = "out/thm2-singular";
        return m;
    }
    if (name == "thm3-bounded") {
        m.dim = 2;
        m.kernel.family = "bounded_band";
        m.kernel.psi_m = 0.5;
        m.kernel.psi_M = 2.0;
        m.kernel.radius = 4.0;
        m.potential.family = "quadratic";
        m.potential.lambda = 1.0;
        m.initial.positions = "uniform_box";
        m.initial.pos_lo = {-1.0, -1.0};
        m.initial.pos_hi = {1.0, 1.0};
        m.initial.count = 64;
        m.initial.velocities = "uniform";
        m.initial.vel_lo = {-0.5, -0.5};
        m.initial.vel_hi = {0.5, 0.5};
        m.diagnostics.zeta = "0.15";
        m.diagnostics.xi = "0.4";
        m.sim.dt_max = 0.1;
        m.sim.t_final = 25.0;
        m.sim.record_every = 3;
        m.output_dir = "out/thm3-bounded";
        return m;
    }
    if (name == "thm3-singular") {
        m.dim = 2;
        m.kernel.family = "power_law";
        m.kernel.alpha = 1.0;
        m.kernel.coefficient = 1.0;
        m.kernel.floor = 0.5;
        m.potential.family = "quadratic";
        m.potential.lambda = 1.0;
        m.initial.positions = "uniform_box";
        m.initial.pos_lo = {-1.0, -1.0};
        m.initial.pos_hi = {1.0, 1.0};
        m.initial.count = 64;
        m.initial.velocities = "uniform";
        m.initial.vel_lo = {-0.5, -0.5};
        m.initial.vel_hi = {0.5, 0.5};
        m.diagnostics.xi = "0.4";
        m.sim.dt_max = 0.2;
        m.sim.t_final = 40.0;
        m.sim.record_every = 3;
        m.output_dir = "out/thm3-singular";
        return m;
    }
    raise(Errc::bad_argument, "unknown bundled scenario '" + name + "'");
}

}  // namespace flocksim
