#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "flocksim/config.hpp"
#include "flocksim/csvio.hpp"
#include "flocksim/odi.hpp"
#include "flocksim/verify.hpp"

namespace fs = std::filesystem;
using namespace flocksim;

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::config_parse:
        case Errc::column_missing:
            return 2;
        case Errc::admissibility_violation:
            return 3;
        case Errc::inconclusive:
        case Errc::insufficient_data:
            return 4;
        default:
            return 1;
    }
}

std::map<std::string, std::string> output_meta(const RunManifest& m) {
    return {{"manifest", manifest_hash(m)}, {"seed", std::to_string(m.seed)},
            {"scenario", m.scenario}};
}

int cmd_simulate(const std::string& config_path) {
    RunManifest manifest;
    try {
        const auto names = bundled_scenario_names();
        if (std::find(names.begin(), names.end(), config_path) != names.end())
            manifest = bundled_scenario(config_path);
        else
            manifest = load_manifest(config_path);
    } catch (const Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_code_for(e);
    }

    try {
        const ResolvedRun run = resolve(manifest);
        fs::create_directories(run.output_dir);

        std::ofstream echo(run.output_dir + "/manifest.cfg");
        echo << "# " << tool_version() << ", resolved manifest (hash " << manifest_hash(manifest)
             << ")\n";
        echo << manifest_text(manifest);
        echo.close();

        const auto records =
            simulate(run.initial, run.sim, run.potential, run.kernel, [&](const Ensemble& e) {
                return compute_frame(e, run.potential, run.kernel, &run.reference, run.diagnostics);
            });
        const auto meta = output_meta(manifest);
        write_frames_csv(run.output_dir + "/frames.csv", records, meta);
        write_final_state_csv(run.output_dir + "/final_state.csv", records.back().state, meta);
        std::cout << "wrote " << records.size() << " frames to " << run.output_dir
                  << "/frames.csv\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_fit(const std::string& frames_path, const std::string& column, const std::string& law,
            double t_lo, double t_hi, const std::string& out_path) {
    try {
        const CsvTable table = read_csv(frames_path);
        Series series = table.series("t", column);
        std::optional<FitWindow> window;
        if (t_hi > t_lo) window = FitWindow{t_lo, t_hi};

        RateFit fit;
        if (law == "exp")
            fit = fit_exponential(series, window);
        else if (law == "alg")
            fit = fit_algebraic(series, window);
        else if (law.empty())
            fit = classify_decay(series);
        else {
            std::cerr << "unknown law '" << law << "' (use exp or alg)\n";
            return 2;
        }
        std::cout << column << ": " << fit.summary() << "\n";

        std::map<std::string, std::string> meta;
        if (auto it = table.meta.find("manifest"); it != table.meta.end()) meta["manifest"] = it->second;
        if (auto it = table.meta.find("seed"); it != table.meta.end()) meta["seed"] = it->second;
        meta["column"] = column;
        meta["law"] = fit.law_name();
        write_csv(out_path, {"value", "intercept", "t_lo", "t_hi", "r_squared", "residual_rms",
                             "floor_detected"},
                  {{fit.value, fit.intercept, fit.t_lo, fit.t_hi, fit.r_squared, fit.residual_rms,
                    fit.floor_detected ? 1.0 : 0.0}},
                  meta);
        return 0;
    } catch (const Error& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_verify(const std::string& suite, const std::string& report_path) {
    std::vector<int> ids;
    try {
        ids = suite_criteria(suite);
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    bool all_pass = true;
    std::ostringstream report;
    for (int id : ids) {
        CriterionResult result;
        try {
            result = run_criterion(id);
        } catch (const Error& e) {
            result.id = id;
            result.name = criterion_name(id);
            result.pass = false;
            result.lines.push_back(std::string("FAIL (error): ") + e.what());
        }
        all_pass = all_pass && result.pass;
        std::cout << result.summary();
        report << result.summary();
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.str();
    }
    std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return all_pass ? 0 : 1;
}

// Reduced-system sweep declared in a config file: pair grids for the damping
// and restoring constants, exponents for the singular kind, optional fuzzed
// interior trajectories. One CSV row per lemma check.
int cmd_odi(const std::string& config_path, const std::string& out_path) {
    try {
        std::ifstream in(config_path);
        if (!in) raise(Errc::config_parse, "cannot open sweep file: " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        const ConfigNode root = parse_config_text(buf.str());

        OdiSystem base;
        const std::string kind = root.get("kind", "linear");
        if (kind == "basic")
            base.kind = OdiSystem::Kind::basic;
        else if (kind == "linear")
            base.kind = OdiSystem::Kind::linear;
        else if (kind == "singular")
            base.kind = OdiSystem::Kind::singular;
        else if (kind == "flock")
            base.kind = OdiSystem::Kind::flock;
        else
            raise(Errc::config_parse, "unknown odi kind '" + kind + "'");
        base.x0 = root.get_num("x0", 1.0);
        base.y0 = root.get_num("y0", 1.0);
        base.kappa = root.get_num("kappa", 1.0);
        base.shift = root.get_num("shift", 2.0);
        const std::string barrier = root.get("barrier", "zero");
        if (barrier == "linear") {
            base.barrier = OdiSystem::Barrier::linear;
            base.barrier_slope = root.get_num("barrier_slope", 0.5);
        } else if (barrier == "kernel") {
            base.barrier = OdiSystem::Barrier::kernel_primitive;
            base.barrier_kernel = KernelSpec::constant_weight(root.get_num("barrier_value", 1.0));
        }
        const double t_final = root.get_num("t_final", 20.0);
        const double rel_tol = root.get_num("rel_tol", 1e-10);
        const double abs_tol = root.get_num("abs_tol", 1e-13);
        const int fuzz = int(root.get_num("fuzz", 0));

        auto pairs_of = [&](const std::string& key, double da, double db) {
            std::vector<std::pair<double, double>> out;
            const auto flat = root.get_list(key);
            if (flat.empty()) {
                out.push_back({da, db});
                return out;
            }
            if (flat.size() % 2 != 0)
                raise(Errc::config_parse, key + " needs an even list of values");
            for (size_t i = 0; i < flat.size(); i += 2) out.push_back({flat[i], flat[i + 1]});
            return out;
        };
        const auto c_pairs = pairs_of("c_pairs", 1.0, 1.0);            // (c1, c2)
        const auto moduli_pairs = pairs_of("lambda_pairs", 1.0, 1.0);  // (lambda, Lambda)
        std::vector<double> alphas = root.get_list("alpha");
        if (alphas.empty()) alphas.push_back(base.alpha);

        std::ofstream out(out_path);
        if (!out) raise(Errc::bad_argument, "cannot open output file: " + out_path);
        out << "# tool: " << tool_version() << "\n";
        out << "# sweep: " << config_path << "\n";
        out << "kind,boundary,c1,c2,lambda,Lambda,alpha,seed,check,pass,measured,bound\n";

        bool all_pass = true;
        int rows = 0;
        auto run_one = [&](OdiSystem sys, const char* boundary_name, int seed) {
            OdiModulation mod;
            const OdiModulation* mod_ptr = nullptr;
            if (seed > 0) {
                mod = random_modulation(unsigned(seed), t_final);
                mod_ptr = &mod;
            }
            const auto result = integrate_odi(sys, t_final, rel_tol, abs_tol, mod_ptr);
            const auto report = check_lemma(sys, result);
            all_pass = all_pass && report.pass;
            for (const auto& item : report.items) {
                std::string name = item.name;
                for (char& ch : name)
                    if (ch == ',') ch = ';';
                out << kind << "," << boundary_name << "," << sys.c1 << "," << sys.c2 << ","
                    << sys.lambda << "," << sys.Lambda << "," << sys.alpha << "," << seed << ","
                    << name << "," << (item.pass ? 1 : 0) << "," << format_double(item.measured)
                    << "," << format_double(item.bound) << "\n";
                ++rows;
            }
        };

        for (const auto& [c1, c2] : c_pairs)
            for (const auto& [lam, Lam] : moduli_pairs)
                for (const double alpha : alphas) {
                    OdiSystem sys = base;
                    sys.c1 = std::max(c1, c2);
                    sys.c2 = std::min(c1, c2);
                    sys.lambda = std::min(lam, Lam);
                    sys.Lambda = std::max(lam, Lam);
                    sys.alpha = alpha;
                    sys.boundary = OdiSystem::Boundary::upper_equality;
                    run_one(sys, "upper", 0);
                    sys.boundary = OdiSystem::Boundary::lower_equality;
                    run_one(sys, "lower", 0);
                    for (int seed = 1; seed <= fuzz; ++seed) run_one(sys, "interior", seed);
                }
        std::cout << "wrote " << rows << " check rows to " << out_path << "; "
                  << (all_pass ? "all checks passed" : "FAILURES present") << "\n";
        return all_pass ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "odi sweep error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

std::map<std::string, std::string> parse_spec(const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) raise(Errc::bad_argument, "plot spec items are key=value");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

void write_svg(const std::string& path, const Series& series, const RateFit* fit) {
    const int width = 640, height = 420, margin = 56;
    double t_lo = series.front().first, t_hi = series.back().first;
    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& [t, y] : series) {
        y_lo = std::min(y_lo, std::log10(y));
        y_hi = std::max(y_hi, std::log10(y));
    }
    if (y_hi - y_lo < 1e-12) y_hi = y_lo + 1.0;
    auto px = [&](double t) {
        return margin + (t - t_lo) / (t_hi - t_lo) * (width - 2 * margin);
    };
    auto py = [&](double logy) {
        return height - margin - (logy - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
    };

    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
        << "' y2='" << height - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << height - margin << "' stroke='black'/>\n";
    out << "<text x='" << width / 2 << "' y='" << height - 12 << "' font-size='12'>t</text>\n";
    out << "<text x='12' y='" << height / 2 << "' font-size='12' transform='rotate(-90 12 "
        << height / 2 << ")'>log10 value</text>\n";

    out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
    for (const auto& [t, y] : series) out << px(t) << "," << py(std::log10(y)) << " ";
    out << "'/>\n";

    if (fit) {
        out << "<polyline fill='none' stroke='crimson' stroke-dasharray='6 3' points='";
        for (const auto& [t, y] : series) {
            double model = fit->law == RateFit::Law::exponential
                               ? fit->intercept - fit->value * t
                               : fit->intercept - fit->value * std::log(std::max(t, 1e-12));
            out << px(t) << "," << py(model / std::log(10.0)) << " ";
        }
        out << "'/>\n";
        out << "<text x='" << margin + 8 << "' y='" << margin + 14 << "' font-size='12'>"
            << fit->law_name() << (fit->law == RateFit::Law::exponential ? " rate " : " exponent ")
            << fit->value << "</text>\n";
    }
    out << "</svg>\n";
}

int cmd_export_plot(const std::string& frames_path, const std::string& spec,
                    const std::string& out_path) {
    try {
        const auto kv = parse_spec(spec);
        const auto col_it = kv.find("column");
        if (col_it == kv.end()) raise(Errc::bad_argument, "plot spec needs column=<name>");
        const CsvTable table = read_csv(frames_path);
        Series series = table.series("t", col_it->second);
        Series positive;
        for (const auto& [t, y] : series)
            if (y > 0.0) positive.push_back({t, y});
        if (positive.size() < 2) raise(Errc::insufficient_data, "column has too few positive values");

        std::optional<RateFit> fit;
        if (auto it = kv.find("law"); it != kv.end()) {
            if (it->second == "exp")
                fit = fit_exponential(positive, late_window(positive));
            else if (it->second == "alg")
                fit = fit_algebraic(positive, late_window(positive));
            else
                raise(Errc::bad_argument, "law must be exp or alg");
        }

        std::vector<std::vector<double>> rows;
        for (const auto& [t, y] : positive) {
            double envelope = kNan;
            if (fit) {
                const double model = fit->law == RateFit::Law::exponential
                                         ? fit->intercept - fit->value * t
                                         : fit->intercept - fit->value * std::log(std::max(t, 1e-300));
                envelope = std::exp(model);
            }
            rows.push_back({t, y, t > 0.0 ? std::log(t) : kNan, std::log(y), envelope});
        }
        std::map<std::string, std::string> meta;
        meta["column"] = col_it->second;
        if (auto it = table.meta.find("manifest"); it != table.meta.end()) meta["manifest"] = it->second;
        if (auto it = table.meta.find("seed"); it != table.meta.end()) meta["seed"] = it->second;
        write_csv(out_path, {"t", "value", "log_t", "log_value", "fit_envelope"}, rows, meta);
        std::cout << "wrote " << out_path << "\n";

        if (auto it = kv.find("svg"); it != kv.end()) {
            write_svg(it->second, positive, fit ? &*fit : nullptr);
            std::cout << "wrote " << it->second << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "export error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flocksim: particle simulator and rate-verification harness for "
                 "nonlocal alignment-aggregation dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "run a configuration (path or bundled scenario name)");
    sim->add_option("config", config_path, "configuration file or bundled scenario")->required();

    std::string frames_path, column, law, fit_out = "fit.csv";
    double t_lo = 0.0, t_hi = -1.0;
    auto* fit = app.add_subcommand("fit", "fit a decay law to a frames.csv column");
    fit->add_option("frames", frames_path, "frames.csv produced by simulate")->required();
    fit->add_option("--column", column, "column to fit")->required();
    fit->add_option("--law", law, "exp or alg (default: classify)");
    fit->add_option("--t-lo", t_lo, "window start");
    fit->add_option("--t-hi", t_hi, "window end");
    fit->add_option("--out", fit_out, "fit report csv path");

    std::string suite, report_path;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "lemmas | theorem1 | theorem2 | theorem3 | all")->required();
    verify->add_option("--report", report_path, "also write the report to this file");

    std::string plot_frames, plot_spec, plot_out = "plot.csv";
    auto* xp = app.add_subcommand("export-plot", "export plot-ready series and optional SVG");
    xp->add_option("frames", plot_frames, "frames.csv produced by simulate")->required();
    xp->add_option("--spec", plot_spec, "column=<name>[,law=exp|alg][,svg=<path>]")->required();
    xp->add_option("--out", plot_out, "plot csv path");

    std::string odi_config, odi_out = "odi_report.csv";
    auto* odi = app.add_subcommand("odi", "run a reduced-system sweep declared in a config file");
    odi->add_option("config", odi_config, "sweep configuration file")->required();
    odi->add_option("--out", odi_out, "report csv path");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) return cmd_simulate(config_path);
    if (fit->parsed()) return cmd_fit(frames_path, column, law, t_lo, t_hi, fit_out);
    if (verify->parsed()) return cmd_verify(suite, report_path);
    if (xp->parsed()) return cmd_export_plot(plot_frames, plot_spec, plot_out);
    if (odi->parsed()) return cmd_odi(odi_config, odi_out);
    return 2;
}
