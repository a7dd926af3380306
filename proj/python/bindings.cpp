#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flocksim/config.hpp"
#include "flocksim/csvio.hpp"
#include "flocksim/odi.hpp"
#include "flocksim/verify.hpp"

namespace py = pybind11;
using namespace flocksim;

namespace {

std::vector<double> as_vector(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    std::vector<double> out(arr.size());
    std::copy(arr.data(), arr.data() + arr.size(), out.begin());
    return out;
}

py::array_t<double> as_matrix(const std::vector<double>& data, int rows, int cols) {
    py::array_t<double> out({rows, cols});
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

py::array_t<double> as_array(const std::vector<double>& data) {
    const std::vector<py::ssize_t> shape{py::ssize_t(data.size())};
    py::array_t<double> out(shape);
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

WassersteinOrder order_of(const std::string& p) {
    if (p == "1") return WassersteinOrder::w1;
    if (p == "2") return WassersteinOrder::w2;
    if (p == "inf") return WassersteinOrder::winf;
    raise(Errc::bad_argument, "order must be '1', '2' or 'inf'");
}

Series series_of(py::array_t<double> t, py::array_t<double> y) {
    const auto tv = as_vector(t);
    const auto yv = as_vector(y);
    if (tv.size() != yv.size()) raise(Errc::bad_argument, "t and y must have equal length");
    Series s;
    for (size_t i = 0; i < tv.size(); ++i) s.push_back({tv[i], yv[i]});
    return s;
}

DiagnosticsConfig::Mode mode_of(const std::string& mode, const Ensemble& e,
                                const PotentialSpec& pot) {
    if (mode == "convex_1d") return DiagnosticsConfig::Mode::convex_1d;
    if (mode == "coulomb_1d") return DiagnosticsConfig::Mode::coulomb_1d;
    if (mode == "multi_d") return DiagnosticsConfig::Mode::multi_d;
    if (mode != "auto") raise(Errc::bad_argument, "unknown diagnostics mode '" + mode + "'");
    if (e.dim > 1) return DiagnosticsConfig::Mode::multi_d;
    if (pot.family == PotentialFamily::coulomb_quadratic_1d)
        return DiagnosticsConfig::Mode::coulomb_1d;
    return DiagnosticsConfig::Mode::convex_1d;
}

py::dict run_to_dict(const std::vector<TrajectoryRecord>& records) {
    py::dict out;
    const auto& columns = DiagnosticsFrame::columns();
    py::list names;
    for (const auto& c : columns) names.append(c);
    out["columns"] = names;
    py::array_t<double> data({py::ssize_t(records.size()), py::ssize_t(columns.size())});
    auto* ptr = data.mutable_data();
    for (const auto& rec : records) {
        const auto row = rec.frame.row();
        ptr = std::copy(row.begin(), row.end(), ptr);
    }
    out["data"] = data;
    py::list times;
    for (const auto& rec : records) times.append(rec.t);
    out["t"] = times;
    out["final"] = records.back().state;
    return out;
}

std::vector<TrajectoryRecord> simulate_with_diag(const Ensemble& e, const SimConfig& cfg,
                                                  const PotentialSpec& pot, const KernelSpec& ker,
                                                  const std::string& mode,
                                                  std::optional<double> zeta,
                                                  std::optional<double> xi) {
    DiagnosticsConfig diag;
    diag.mode = mode_of(mode, e, pot);
    diag.zeta = zeta;
    diag.xi = xi;
    ReferenceMap ref;
    const bool need_ref = diag.mode != DiagnosticsConfig::Mode::multi_d;
    if (need_ref) ref = reference_map(e, pot);
    return simulate(e, cfg, pot, ker, [&, diag](const Ensemble& s) {
        return compute_frame(s, pot, ker, need_ref ? &ref : nullptr, diag);
    });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Particle simulator and decay-rate verification harness for nonlocal "
              "alignment-aggregation dynamics";

    py::register_exception<Error>(m, "Error");

    py::class_<KernelSpec>(m, "Kernel")
        .def_static("constant", &KernelSpec::constant_weight, py::arg("value"))
        .def_static("bounded_band", &KernelSpec::bounded_band, py::arg("psi_m"), py::arg("psi_M"),
                    py::arg("radius"))
        .def_static("power_law", &KernelSpec::power_law, py::arg("alpha"), py::arg("coefficient"),
                    py::arg("floor") = 0.0,
                    py::arg("radius") = std::numeric_limits<double>::infinity(),
                    py::arg("lower_coefficient") = -1.0)
        .def_static("table", &KernelSpec::table, py::arg("knots"))
        .def("regularized", &KernelSpec::regularized, py::arg("eps"))
        .def("psi", &KernelSpec::psi, py::arg("r"))
        .def("primitive", &KernelSpec::primitive, py::arg("r"))
        .def("primitive_quadrature", &KernelSpec::primitive_quadrature, py::arg("r"),
             py::arg("abs_tol") = 1e-10)
        .def("alignment_potential", &KernelSpec::alignment_potential, py::arg("r"))
        .def("increment_bounds", &KernelSpec::increment_bounds, py::arg("a"), py::arg("b"),
             py::arg("diameter"))
        .def("averaged_lipschitz", &KernelSpec::averaged_lipschitz, py::arg("a"), py::arg("b"))
        .def("lower_bound", &KernelSpec::lower_bound)
        .def("upper_bound", &KernelSpec::upper_bound)
        .def_property_readonly("family", &KernelSpec::family_name);

    py::class_<PotentialSpec>(m, "Potential")
        .def_static("quadratic", &PotentialSpec::quadratic, py::arg("lam"), py::arg("dim") = 1)
        .def_static("coulomb_quadratic_1d", &PotentialSpec::coulomb_quadratic_1d)
        .def_static("quadratic_sqrt", &PotentialSpec::quadratic_sqrt, py::arg("a"), py::arg("b"),
                    py::arg("dim") = 1)
        .def("value",
             [](const PotentialSpec& p, py::array_t<double> x) { return p.value(as_vector(x)); })
        .def("gradient",
             [](const PotentialSpec& p, py::array_t<double> x) {
                 const auto v = as_vector(x);
                 std::vector<double> g(v.size());
                 p.gradient(v, g);
                 return as_array(g);
             })
        .def("convexity_moduli", &PotentialSpec::convexity_moduli)
        .def_property_readonly("dim", [](const PotentialSpec& p) { return p.dim; })
        .def_property_readonly("family", &PotentialSpec::family_name);

    py::class_<Ensemble>(m, "Ensemble")
        .def_property_readonly("dim", [](const Ensemble& e) { return e.dim; })
        .def_property_readonly("time", [](const Ensemble& e) { return e.time; })
        .def_property_readonly("size", &Ensemble::size)
        .def_property_readonly(
            "positions", [](const Ensemble& e) { return as_matrix(e.positions, e.size(), e.dim); })
        .def_property_readonly(
            "velocities",
            [](const Ensemble& e) { return as_matrix(e.velocities, e.size(), e.dim); })
        .def_property_readonly("weights", [](const Ensemble& e) { return as_array(e.weights); });

    m.def(
        "init_particles",
        [](py::array_t<double> pos, py::array_t<double> vel, py::array_t<double> w, int dim) {
            return init_particles(as_vector(pos), as_vector(vel), as_vector(w), dim);
        },
        py::arg("positions"), py::arg("velocities"), py::arg("weights"), py::arg("dim") = 1);

    m.def(
        "sample_quantile_uniform",
        [](double lo, double hi, int count) {
            InitialCondition ic;
            ic.positions_kind = InitialCondition::Positions::quantile_uniform;
            ic.count = count;
            ic.pos_lo = {lo};
            ic.pos_hi = {hi};
            return sample_initial(ic);
        },
        py::arg("lo"), py::arg("hi"), py::arg("count"));

    m.def("center_of_mass", &center_of_mass);
    m.def("mean_velocity", &mean_velocity);

    py::class_<ReferenceMap>(m, "ReferenceMap")
        .def_property_readonly("kind",
                               [](const ReferenceMap& r) {
                                   return r.kind == ReferenceMap::Kind::dirac_at_center
                                              ? "dirac_at_center"
                                              : "coulomb_uniform";
                               })
        .def_property_readonly("offsets",
                               [](const ReferenceMap& r) { return as_array(r.offsets); })
        .def(
            "evaluate",
            [](const ReferenceMap& r, double t, int count) {
                return as_matrix(r.evaluate(t, count), count, r.dim);
            },
            py::arg("t"), py::arg("count"));

    m.def("reference_map", &reference_map, py::arg("ensemble"), py::arg("potential"));
    m.def("aux_omega", [](const Ensemble& e, const KernelSpec& k) {
        return as_array(aux_omega(e, k));
    });
    m.def("aux_omega_tilde",
          [](const Ensemble& e, const ReferenceMap& r, const KernelSpec& k) {
              return as_array(aux_omega_tilde(e, r, k));
          });

    m.def(
        "accelerations",
        [](const Ensemble& e, const PotentialSpec& p, const KernelSpec& k, double guard) {
            std::vector<double> acc;
            accelerations(e, p, k, guard, acc);
            return as_matrix(acc, e.size(), e.dim);
        },
        py::arg("ensemble"), py::arg("potential"), py::arg("kernel"), py::arg("guard") = 0.0);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("dt_init", &SimConfig::dt_init)
        .def_readwrite("t_final", &SimConfig::t_final)
        .def_readwrite("rel_tol", &SimConfig::rel_tol)
        .def_readwrite("abs_tol", &SimConfig::abs_tol)
        .def_readwrite("record_every", &SimConfig::record_every)
        .def_readwrite("min_separation_guard", &SimConfig::min_separation_guard)
        .def_property(
            "integrator",
            [](const SimConfig& c) {
                return c.integrator == SimConfig::Integrator::adaptive_rk45 ? "rk45" : "rk4";
            },
            [](SimConfig& c, const std::string& s) {
                if (s == "rk45")
                    c.integrator = SimConfig::Integrator::adaptive_rk45;
                else if (s == "rk4")
                    c.integrator = SimConfig::Integrator::rk4;
                else
                    raise(Errc::bad_argument, "integrator must be rk45 or rk4");
            });

    m.def(
        "simulate",
        [](const Ensemble& e, const SimConfig& cfg, const PotentialSpec& pot,
           const KernelSpec& ker, const std::string& mode, std::optional<double> zeta,
           std::optional<double> xi) {
            return run_to_dict(simulate_with_diag(e, cfg, pot, ker, mode, zeta, xi));
        },
        py::arg("ensemble"), py::arg("config"), py::arg("potential"), py::arg("kernel"),
        py::arg("mode") = "auto", py::arg("zeta") = std::nullopt, py::arg("xi") = std::nullopt);

    m.def(
        "run_scenario",
        [](const std::string& name, std::optional<double> t_final) {
            auto manifest = bundled_scenario(name);
            if (t_final) manifest.sim.t_final = *t_final;
            const auto run = resolve(manifest);
            const auto records =
                simulate(run.initial, run.sim, run.potential, run.kernel, [&](const Ensemble& s) {
                    return compute_frame(s, run.potential, run.kernel, &run.reference,
                                         run.diagnostics);
                });
            return run_to_dict(records);
        },
        py::arg("name"), py::arg("t_final") = std::nullopt);
    m.def("bundled_scenarios", &bundled_scenario_names);

    m.def("dissipation_energy", &dissipation_energy);
    m.def("wasserstein_2_to_dirac", &wasserstein_2_to_dirac);
    m.def(
        "wasserstein_to_dirac",
        [](const std::string& p, const Ensemble& e, double x) {
            return wasserstein_1d(order_of(p), e, WassersteinTarget::dirac(x));
        },
        py::arg("order"), py::arg("ensemble"), py::arg("point"));
    m.def(
        "wasserstein_to_uniform",
        [](const std::string& p, const Ensemble& e, double center, double half_width) {
            return wasserstein_1d(order_of(p), e, WassersteinTarget::uniform(center, half_width));
        },
        py::arg("order"), py::arg("ensemble"), py::arg("center"), py::arg("half_width"));
    m.def(
        "wasserstein_to_atoms",
        [](const std::string& p, const Ensemble& e, py::array_t<double> pos,
           py::array_t<double> w) {
            return wasserstein_1d(order_of(p), e,
                                  WassersteinTarget::atoms(as_vector(pos), as_vector(w)));
        },
        py::arg("order"), py::arg("ensemble"), py::arg("positions"), py::arg("weights"));

    py::class_<RateFit>(m, "RateFit")
        .def_property_readonly("law", &RateFit::law_name)
        .def_readonly("value", &RateFit::value)
        .def_readonly("r_squared", &RateFit::r_squared)
        .def_readonly("residual_rms", &RateFit::residual_rms)
        .def_readonly("floor_detected", &RateFit::floor_detected)
        .def("summary", &RateFit::summary);

    m.def(
        "fit_exponential",
        [](py::array_t<double> t, py::array_t<double> y) {
            return fit_exponential(series_of(t, y));
        },
        py::arg("t"), py::arg("y"));
    m.def(
        "fit_algebraic",
        [](py::array_t<double> t, py::array_t<double> y) { return fit_algebraic(series_of(t, y)); },
        py::arg("t"), py::arg("y"));
    m.def(
        "classify_decay",
        [](py::array_t<double> t, py::array_t<double> y) { return classify_decay(series_of(t, y)); },
        py::arg("t"), py::arg("y"));

    py::class_<OdiSystem> odi_sys(m, "OdiSystem");
    py::enum_<OdiSystem::Kind>(odi_sys, "Kind")
        .value("basic", OdiSystem::Kind::basic)
        .value("linear", OdiSystem::Kind::linear)
        .value("singular", OdiSystem::Kind::singular)
        .value("flock", OdiSystem::Kind::flock);
    py::enum_<OdiSystem::Boundary>(odi_sys, "Boundary")
        .value("upper_equality", OdiSystem::Boundary::upper_equality)
        .value("lower_equality", OdiSystem::Boundary::lower_equality);
    odi_sys.def(py::init<>())
        .def_readwrite("kind", &OdiSystem::kind)
        .def_readwrite("boundary", &OdiSystem::boundary)
        .def_readwrite("lam", &OdiSystem::lambda)
        .def_readwrite("Lam", &OdiSystem::Lambda)
        .def_readwrite("c1", &OdiSystem::c1)
        .def_readwrite("c2", &OdiSystem::c2)
        .def_readwrite("alpha", &OdiSystem::alpha)
        .def_readwrite("kappa", &OdiSystem::kappa)
        .def_readwrite("shift", &OdiSystem::shift)
        .def_readwrite("x0", &OdiSystem::x0)
        .def_readwrite("y0", &OdiSystem::y0)
        .def("set_kernel_barrier", [](OdiSystem& sys, const KernelSpec& k) {
            sys.barrier = OdiSystem::Barrier::kernel_primitive;
            sys.barrier_kernel = k;
        })
        .def("set_linear_barrier", [](OdiSystem& sys, double slope) {
            sys.barrier = OdiSystem::Barrier::linear;
            sys.barrier_slope = slope;
        });

    m.def(
        "integrate_odi",
        [](const OdiSystem& sys, double t_final, double rel_tol, double abs_tol,
           std::optional<unsigned> fuzz_seed) {
            OdiModulation mod;
            const OdiModulation* mod_ptr = nullptr;
            if (fuzz_seed) {
                mod = random_modulation(*fuzz_seed, t_final);
                mod_ptr = &mod;
            }
            const auto result = integrate_odi(sys, t_final, rel_tol, abs_tol, mod_ptr);
            std::vector<double> t, x, y;
            for (const auto& p : result.samples) {
                t.push_back(p.t);
                x.push_back(p.x);
                y.push_back(p.y);
            }
            py::dict out;
            out["t"] = as_array(t);
            out["x"] = as_array(x);
            out["y"] = as_array(y);
            out["exited"] = result.exited;
            return out;
        },
        py::arg("system"), py::arg("t_final"), py::arg("rel_tol") = 1e-10,
        py::arg("abs_tol") = 1e-13, py::arg("fuzz_seed") = std::nullopt);

    m.def(
        "check_lemma",
        [](const OdiSystem& sys, double t_final, double rel_tol, double abs_tol,
           std::optional<unsigned> fuzz_seed) {
            OdiModulation mod;
            const OdiModulation* mod_ptr = nullptr;
            if (fuzz_seed) {
                mod = random_modulation(*fuzz_seed, t_final);
                mod_ptr = &mod;
            }
            const auto result = integrate_odi(sys, t_final, rel_tol, abs_tol, mod_ptr);
            const auto report = check_lemma(sys, result);
            return py::make_tuple(report.pass, report.summary());
        },
        py::arg("system"), py::arg("t_final"), py::arg("rel_tol") = 1e-10,
        py::arg("abs_tol") = 1e-13, py::arg("fuzz_seed") = std::nullopt);

    m.def(
        "check_delta_game",
        [](double kappa, double alpha, double c0, double l0, double t_final) {
            DeltaGameModel model{kappa, alpha, c0, l0};
            const auto series = integrate_delta_game(model, t_final);
            const auto item = check_delta_game(model, series);
            return py::make_tuple(item.pass, item.measured, item.bound);
        },
        py::arg("kappa"), py::arg("alpha"), py::arg("c0") = 0.0, py::arg("l0") = 1.0,
        py::arg("t_final") = 1000.0);

    m.def(
        "diameter_bound",
        [](double d_eta0, double d_omega0, const KernelSpec& kernel) {
            DiagnosticsFrame f;
            f.d_eta = d_eta0;
            f.d_omega = d_omega0;
            return diameter_bound(f, kernel);
        },
        py::arg("d_eta0"), py::arg("d_omega0"), py::arg("kernel"));

    m.def("admissibility_limits", &admissibility_limits, py::arg("potential"), py::arg("kernel"));

    m.def(
        "run_criterion",
        [](int id) {
            const auto r = run_criterion(id);
            return py::make_tuple(r.pass, r.summary());
        },
        py::arg("id"));
    m.def("criterion_count", &criterion_count);

    m.attr("__version__") = "0.1.0";
}
