#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "flocksim/config.hpp"
#include "flocksim/csvio.hpp"

using namespace flocksim;

TEST_CASE("config tree parsing") {
    const std::string text = R"(# a comment
scenario demo
seed 7
kernel {
  family power_law
  alpha 0.5
  coefficient 1.25
}
sim {
  t_final 3.5
}
)";
    const auto root = parse_config_text(text);
    CHECK(root.get("scenario", "") == "demo");
    CHECK(root.get_num("seed", 0) == 7);
    REQUIRE(root.child("kernel") != nullptr);
    CHECK(root.child("kernel")->get("family", "") == "power_law");
    CHECK(root.child("kernel")->get_num("alpha", 0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(parse_config_text("kernel {\n"), Error);
    CHECK_THROWS_AS(parse_config_text("}\n"), Error);
    CHECK_THROWS_AS(parse_config_text("orphan\n"), Error);
}

TEST_CASE("manifest serialization round-trips") {
    for (const auto& name : bundled_scenario_names()) {
        const auto m = bundled_scenario(name);
        const std::string text = manifest_text(m);
        const auto reparsed = manifest_from_tree(parse_config_text(text));
        CHECK(manifest_text(reparsed) == text);
        CHECK(manifest_hash(reparsed) == manifest_hash(m));
    }
}

TEST_CASE("bundled scenario files match the in-code registry") {
    for (const auto& name : bundled_scenario_names()) {
        const std::string path = std::string(FLOCKSIM_SOURCE_DIR) + "/scenarios/" + name + ".cfg";
        std::ifstream in(path);
        REQUIRE_MESSAGE(bool(in), "missing scenario file ", path);
        std::stringstream buf;
        buf << in.rdbuf();
        const auto from_file = manifest_from_tree(parse_config_text(buf.str()));
        CHECK_MESSAGE(manifest_text(from_file) == manifest_text(bundled_scenario(name)),
                      "scenario file drifted from the registry: ", name);
    }
}

TEST_CASE("resolution picks the right diagnostics mode") {
    const auto convex = resolve(bundled_scenario("thm1-bounded"));
    CHECK(convex.diagnostics.mode == DiagnosticsConfig::Mode::convex_1d);

    const auto coulomb = resolve(bundled_scenario("thm2-bounded"));
    CHECK(coulomb.diagnostics.mode == DiagnosticsConfig::Mode::coulomb_1d);
    CHECK(coulomb.reference.kind == ReferenceMap::Kind::coulomb_uniform);

    const auto multid = resolve(bundled_scenario("thm3-singular"));
    CHECK(multid.diagnostics.mode == DiagnosticsConfig::Mode::multi_d);
    CHECK_FALSE(multid.diagnostics.zeta.has_value());
    REQUIRE(multid.diagnostics.xi.has_value());
    CHECK(*multid.diagnostics.xi == doctest::Approx(0.4));
}

TEST_CASE("inadmissible zeta fails at resolve time") {
    auto m = bundled_scenario("thm3-bounded");
    m.diagnostics.zeta = "0.49";  // above psi_m (1 + psi_M^2/(2 lambda))^{-1} = 1/6
    CHECK_THROWS_AS(resolve(m), Error);
}

TEST_CASE("missing configuration file") {
    CHECK_THROWS_AS(load_manifest("/definitely/not/here.cfg"), Error);
}

TEST_CASE("identical manifest and seed give byte-identical frames") {
    auto m = bundled_scenario("twobody");
    m.sim.t_final = 2.0;
    auto run_once = [&](const std::string& path) {
        const auto run = resolve(m);
        const auto records =
            simulate(run.initial, run.sim, run.potential, run.kernel, [&](const Ensemble& e) {
                return compute_frame(e, run.potential, run.kernel, &run.reference, run.diagnostics);
            });
        write_frames_csv(path, records, {{"manifest", manifest_hash(m)}, {"seed", "42"}});
    };
    run_once("frames_a.csv");
    run_once("frames_b.csv");
    std::ifstream a("frames_a.csv"), b("frames_b.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("# tool:") == 0);
    CHECK(sa.str().find("# manifest:") != std::string::npos);
    CHECK(sa.str().find("# seed:") != std::string::npos);
    std::remove("frames_a.csv");
    std::remove("frames_b.csv");
}

TEST_CASE("csv round trip and series extraction") {
    write_csv("t_roundtrip.csv", {"t", "a"}, {{0.0, 1.0}, {1.0, kNan}, {2.0, 4.0}},
              {{"seed", "1"}});
    const auto table = read_csv("t_roundtrip.csv");
    CHECK(table.meta.at("seed") == "1");
    CHECK(table.columns.size() == 2);
    CHECK(table.rows.size() == 3);
    const auto s = table.series("t", "a");
    CHECK(s.size() == 2);  // the NaN row is skipped
    CHECK_THROWS_AS(table.series("t", "missing"), Error);
    std::remove("t_roundtrip.csv");
}

TEST_CASE("environment variable overrides the output root") {
    auto m = bundled_scenario("twobody");
    setenv("FLOCKSIM_OUTPUT_ROOT", "/tmp/flocksim_test_root", 1);
    const auto run = resolve(m);
    CHECK(run.output_dir.rfind("/tmp/flocksim_test_root/", 0) == 0);
    unsetenv("FLOCKSIM_OUTPUT_ROOT");
}
