#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "cm/harness.hpp"

using namespace cm;

namespace {
HarnessConfig fast_config() {
    HarnessConfig cfg;
    cfg.curve_n = 256;
    cfg.centers = 128;
    cfg.radii = 32;
    cfg.area_cells = 96;
    cfg.power_angles = 4096;
    cfg.cloud_atoms = 400;
    cfg.theodorsen_n = 256;
    cfg.de_radii = 20;
    cfg.de_angles = 96;
    cfg.s1_pairs = 300;
    return cfg;
}
}  // namespace

TEST_CASE("experiment registry covers the verification suite") {
    REQUIRE(experiment_ids().size() == 8);
    REQUIRE_THROWS_AS(run_experiment("EXP-NOPE", fast_config()), std::invalid_argument);
}

TEST_CASE("EXP-COLLAR: segment persists, density vanishes") {
    auto rep = run_experiment("EXP-COLLAR", fast_config());
    REQUIRE(rep.pass());
    bool found_segment = false;
    for (const auto& v : rep.verdicts)
        if (v.name == "segment_non_vanishing") {
            found_segment = true;
            REQUIRE(v.pass);
        }
    REQUIRE(found_segment);
    // the segment deficit stays at unit height: a non-vanishing witness
    for (const auto& [k, val] : rep.metrics)
        if (k == "segment.deficit_at_0.001") REQUIRE(val >= 0.9);
}

TEST_CASE("EXP-Z1 and EXP-Z2: bounded transported norms, stable constants") {
    for (const char* id : {"EXP-Z1", "EXP-Z2"}) {
        auto rep = run_experiment(id, fast_config());
        INFO(rep.canonical_json().dump(2));
        REQUIRE(rep.pass());
    }
}

TEST_CASE("EXP-VPULL and EXP-VPUSH: vanishing survives transport") {
    for (const char* id : {"EXP-VPULL", "EXP-VPUSH"}) {
        auto rep = run_experiment(id, fast_config());
        INFO(rep.canonical_json().dump(2));
        REQUIRE(rep.pass());
        REQUIRE_FALSE(rep.profiles.empty());
    }
}

TEST_CASE("EXP-QC: S1/S2 certified and transport bounded") {
    auto rep = run_experiment("EXP-QC", fast_config());
    INFO(rep.canonical_json().dump(2));
    REQUIRE(rep.pass());
    for (const auto& [k, v] : rep.metrics) {
        if (k == "s1.constant") {
            REQUIRE(v >= 1.0);
            REQUIRE(v < 5.0);
        }
        if (k == "beltrami.sup") REQUIRE(v < 1.0);
    }
}

TEST_CASE("EXP-WELD: rotation, convergence, BMO trend") {
    auto rep = run_experiment("EXP-WELD", fast_config());
    INFO(rep.canonical_json().dump(2));
    REQUIRE(rep.pass());
}

TEST_CASE("EXP-NEG: koch growth and polymap cusp trend") {
    auto rep = run_experiment("EXP-NEG", fast_config());
    INFO(rep.canonical_json().dump(2));
    REQUIRE(rep.pass());
    double prev = 0;
    for (const auto& [k, v] : rep.metrics)
        if (k.find("corner_ratio") != std::string::npos) {
            REQUIRE(v > prev);
            prev = v;
        }
}

TEST_CASE("reports: determinism and rendering") {
    auto cfg = fast_config();
    auto r1 = run_experiment("EXP-COLLAR", cfg);
    auto r2 = run_experiment("EXP-COLLAR", cfg);
    REQUIRE(r1.canonical_json().dump() == r2.canonical_json().dump());  // byte-identical
    REQUIRE(r1.config_hash == r2.config_hash);

    auto dir = std::filesystem::temp_directory_path() / "cm_harness_test";
    std::filesystem::remove_all(dir);
    auto paths = report_render(r1, dir.string());
    REQUIRE(paths.size() >= 3);
    for (const auto& p : paths) REQUIRE(std::filesystem::exists(p));
    bool has_svg = false, has_csv = false;
    for (const auto& p : paths) {
        if (p.ends_with(".svg")) has_svg = true;
        if (p.ends_with(".csv")) has_csv = true;
    }
    REQUIRE(has_svg);
    REQUIRE(has_csv);

    // empty report still renders valid JSON with empty tables
    Report empty;
    empty.id = "EXP-EMPTY";
    empty.config = cfg.to_json();
    empty.config_hash = fnv1a64_hex(empty.config.dump());
    auto paths2 = report_render(empty, dir.string());
    auto j = load_json_file((dir / "EXP-EMPTY.json").string());
    REQUIRE(j.at("metrics").is_object());
    REQUIRE(j.at("verdicts").is_array());
    REQUIRE(j.at("verdicts").empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("config hash covers the verdict thresholds") {
    auto cfg = fast_config();
    auto r1 = run_experiment("EXP-COLLAR", cfg);
    cfg.collar_segment_min = 0.95;  // changing a threshold must change the hash
    auto r2 = run_experiment("EXP-COLLAR", cfg);
    REQUIRE(r1.config_hash != r2.config_hash);
    REQUIRE(r1.config.at("thresholds").contains("collar_segment_min"));
}
