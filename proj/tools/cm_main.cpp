// Command-line front end: curve generation, Carleson norms and profiles,
// conformal transport, welding, and the verification experiments.

#include <iostream>

#include <CLI11.hpp>

#include "cm/harness.hpp"

namespace {

using namespace cm;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "cm_out";
    std::uint64_t seed = 0;
    std::string grid;  // "CxR"
    bool has_seed = false;
};

HarnessConfig load_config(const GlobalOpts& g) {
    HarnessConfig cfg;
    if (!g.config_path.empty()) cfg = HarnessConfig::from_json(load_json_file(g.config_path));
    if (g.has_seed) cfg.seed = g.seed;
    if (!g.grid.empty()) {
        auto x = g.grid.find('x');
        if (x == std::string::npos) throw std::invalid_argument("--grid expects <centers>x<radii>");
        cfg.centers = std::stoul(g.grid.substr(0, x));
        cfg.radii = std::stoul(g.grid.substr(x + 1));
    }
    return cfg;
}

CarlesonGrid grid_for(const Measure& m, const HarnessConfig& cfg) {
    return default_grid(m.domain(), cfg.centers, cfg.radii);
}

void emit(const Json& j, const std::string& output) {
    if (output.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_text_file(output, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace cm;
    CLI::App app{"Carleson measures, conformal transport and quasiconformal diagnostics"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    GlobalOpts g;
    app.add_option("--config", g.config_path, "harness config JSON");
    app.add_option("--out", g.out_dir, "output directory for verify/report artifacts");
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed override");
    app.add_option("--grid", g.grid, "carleson grid as <centers>x<radii>");

    // gen-curve
    std::string family = "circle", params_json = "{}", output;
    std::size_t n = 256;
    auto* gen = app.add_subcommand("gen-curve", "generate a curve sample file");
    gen->add_option("--family", family, "circle|ellipse|polygon|polyimage|lens|star|koch")->required();
    gen->add_option("--params", params_json, "family parameters as JSON");
    gen->add_option("--n", n, "sample count (power of two >= 64)");
    gen->add_option("--output", output, "output path (stdout if omitted)");

    // norm
    std::string measure_path;
    auto* norm = app.add_subcommand("norm", "Carleson norm of a measure");
    norm->add_option("--measure", measure_path, "measure JSON")->required();
    norm->add_option("--output", output, "report path");

    // profile
    std::string radii_spec, csv_path;
    auto* prof = app.add_subcommand("profile", "vanishing profile of a measure");
    prof->add_option("--measure", measure_path, "measure JSON")->required();
    prof->add_option("--radii", radii_spec, "lo:hi:count (log-spaced)");
    prof->add_option("--csv", csv_path, "also write CSV (r,value)");
    prof->add_option("--output", output, "profile JSON path");

    // transport
    std::string map_path;
    bool do_pull = false, do_push = false;
    auto* tr = app.add_subcommand("transport", "pull-back or push-forward a measure");
    tr->add_option("--map", map_path, "conformal map JSON")->required();
    tr->add_option("--measure", measure_path, "measure JSON")->required();
    tr->add_flag("--pull", do_pull, "pull back (Omega -> disk)");
    tr->add_flag("--push", do_push, "push forward (disk -> Omega)");
    tr->add_option("--output", output, "transported measure path");

    // weld
    std::string curve_path;
    double weld_tol = 1e-12;
    int weld_iter = 300;
    auto* weld = app.add_subcommand("weld", "welding homeomorphism of a star-like curve");
    weld->add_option("--curve", curve_path, "curve JSON")->required();
    weld->add_option("--tol", weld_tol, "fixed-point tolerance");
    weld->add_option("--max-iter", weld_iter, "iteration cap");
    weld->add_option("--output", output, "welding JSON path");

    // verify
    std::vector<std::string> exp_ids;
    auto* verify = app.add_subcommand("verify", "run verification experiments");
    verify->add_option("ids", exp_ids, "experiment ids or 'all'")->required();

    // report
    std::vector<std::string> report_paths;
    auto* report = app.add_subcommand("report", "render stored report JSON to CSV/SVG");
    report->add_option("files", report_paths, "report JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        g.has_seed = seed_opt->count() > 0;
        HarnessConfig cfg = load_config(g);

        if (gen->parsed()) {
            auto fam = family_from_json(family, Json::parse(params_json));
            emit(curve_to_json(generate_curve(fam, n)), output);
            return 0;
        }
        if (norm->parsed()) {
            auto m = measure_from_json(load_json_file(measure_path));
            emit(carleson_report_to_json(carleson_norm(m, grid_for(m, cfg))), output);
            return 0;
        }
        if (prof->parsed()) {
            auto m = measure_from_json(load_json_file(measure_path));
            auto grid = grid_for(m, cfg);
            std::vector<double> radii = grid.radii;
            if (!radii_spec.empty()) {
                double lo, hi;
                std::size_t count;
                if (std::sscanf(radii_spec.c_str(), "%lf:%lf:%zu", &lo, &hi, &count) != 3 ||
                    !(lo > 0 && hi > lo && count >= 2))
                    throw std::invalid_argument("--radii expects lo:hi:count");
                radii.resize(count);
                for (std::size_t k = 0; k < count; ++k)
                    radii[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
            }
            auto p = vanishing_profile(m, grid.centers, radii);
            if (!csv_path.empty()) {
                std::vector<std::vector<double>> rows;
                for (auto [r, v] : p.entries) rows.push_back({r, v});
                write_csv(csv_path, {"r", "value"}, rows);
            }
            emit(profile_to_json(p), output);
            return 0;
        }
        if (tr->parsed()) {
            if (do_pull == do_push) throw std::invalid_argument("transport: pass exactly one of --pull/--push");
            auto m = measure_from_json(load_json_file(measure_path));
            auto map = map_from_json(load_json_file(map_path));
            emit(measure_to_json(do_pull ? pull_back(m, map) : push_forward(m, map)), output);
            return 0;
        }
        if (weld->parsed()) {
            auto curve = curve_from_json(load_json_file(curve_path));
            auto w = welding(curve, weld_tol, weld_iter);
            Json j;
            j["h"] = homeo_to_json(w.h);
            j["residual"] = w.residual;
            j["interior_residuals"] = w.interior.residual_history;
            j["exterior_residuals"] = w.exterior.residual_history;
            j["normalization"] =
                "both Riemann maps fix the origin (resp. infinity) with positive derivative";
            emit(j, output);
            return 0;
        }
        if (verify->parsed()) {
            std::vector<std::string> ids = exp_ids;
            if (ids.size() == 1 && ids[0] == "all") ids = experiment_ids();
            bool all_pass = true;
            for (const std::string& id : ids) {
                auto rep = run_experiment(id, cfg);
                report_render(rep, g.out_dir);
                for (const auto& v : rep.verdicts) {
                    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << id << " " << v.name
                              << (v.detail.empty() ? "" : "  (" + v.detail + ")") << "\n";
                    all_pass = all_pass && v.pass;
                }
                std::cout << id << ": " << (rep.pass() ? "pass" : "FAIL") << "  ("
                          << rep.runtime_seconds << " s, config " << rep.config_hash << ")\n";
            }
            return all_pass ? 0 : 1;
        }
        if (report->parsed()) {
            for (const std::string& p : report_paths)
                report_render(report_from_json(load_json_file(p)), g.out_dir);
            return 0;
        }
    } catch (const Json::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
