#pragma once
// JSON schemas for curves, measures, maps, homeomorphisms and fields, plus
// the CSV/SVG writers used by the reporting layer. nlohmann::json keeps keys
// sorted, so the emitted JSON is canonical for a given value.

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cm/circle.hpp"
#include "cm/confmap.hpp"
#include "cm/core.hpp"
#include "cm/geometry.hpp"
#include "cm/measure.hpp"
#include "cm/qcmap.hpp"

namespace cm {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

inline Json family_params_json(const CurveFamily& f) {
    Json p = Json::object();
    if (const auto* e = std::get_if<EllipseFamily>(&f)) p["c"] = e->c;
    if (const auto* pg = std::get_if<PolygonFamily>(&f)) {
        Json v = Json::array();
        for (Cpx z : pg->vertices) v.push_back({z.real(), z.imag()});
        p["vertices"] = v;
    }
    if (const auto* pi = std::get_if<PolyimageFamily>(&f)) p["c"] = pi->c;
    if (const auto* l = std::get_if<LensFamily>(&f)) p["alpha"] = l->alpha;
    if (const auto* s = std::get_if<StarFamily>(&f)) {
        p["a"] = s->a;
        p["k"] = s->k;
    }
    if (const auto* k = std::get_if<KochFamily>(&f)) p["level"] = k->level;
    return p;
}

inline CurveFamily family_from_json(const std::string& name, const Json& params) {
    if (name == "circle") return CircleFamily{};
    if (name == "ellipse") return EllipseFamily{params.at("c").get<double>()};
    if (name == "polygon") {
        PolygonFamily pg;
        for (const auto& v : params.at("vertices")) pg.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
        return pg;
    }
    if (name == "polyimage") return PolyimageFamily{params.at("c").get<double>()};
    if (name == "lens") return LensFamily{params.at("alpha").get<double>()};
    if (name == "star") return StarFamily{params.at("a").get<double>(), params.at("k").get<int>()};
    if (name == "koch") return KochFamily{params.at("level").get<int>()};
    throw std::invalid_argument("unknown curve family: " + name);
}

inline Json curve_to_json(const JordanCurve& c) {
    Json j;
    j["family"] = family_name(c.family());
    j["params"] = family_params_json(c.family());
    j["n"] = c.size();
    Json samples = Json::array();
    for (const Cpx& z : c.samples()) samples.push_back({z.real(), z.imag()});
    j["samples"] = samples;
    return j;
}

inline JordanCurve curve_from_json(const Json& j) {
    CurveFamily fam = family_from_json(j.at("family").get<std::string>(), j.value("params", Json::object()));
    if (j.contains("samples")) {
        std::vector<Cpx> s;
        for (const auto& v : j.at("samples")) s.emplace_back(v[0].get<double>(), v[1].get<double>());
        if (j.contains("n") && j.at("n").get<std::size_t>() != s.size())
            throw std::invalid_argument("curve json: n does not match samples");
        return JordanCurve(std::move(s), fam);
    }
    return generate_curve(fam, j.at("n").get<std::size_t>());
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

inline Json measure_to_json(const Measure& m) {
    Json j;
    j["domain"] = curve_to_json(m.domain());
    j["side"] = m.side() == DomainSide::Interior ? "interior" : "exterior";
    Json atoms = Json::array();
    for (const Atom& a : m.atoms()) atoms.push_back({a.pos.real(), a.pos.imag(), a.weight});
    j["atoms"] = atoms;
    return j;
}

inline Measure measure_from_json(const Json& j) {
    auto dom = std::make_shared<JordanCurve>(curve_from_json(j.at("domain")));
    DomainSide side = j.value("side", std::string("interior")) == "exterior" ? DomainSide::Exterior
                                                                             : DomainSide::Interior;
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({Cpx(a[0].get<double>(), a[1].get<double>()), a[2].get<double>()});
    return Measure(std::move(atoms), std::move(dom), side, true);
}

// ---------------------------------------------------------------------------
// Conformal maps
// ---------------------------------------------------------------------------

inline Json map_to_json(const ConformalMap& m) {
    Json j;
    struct V {
        Json* j;
        void operator()(const MobiusMap& m) const {
            (*j)["kind"] = "mobius";
            (*j)["params"] = {{"a", {m.a.real(), m.a.imag()}}, {"rot", m.rot}};
        }
        void operator()(const PolyMap& m) const {
            (*j)["kind"] = "polymap";
            (*j)["params"] = {{"c", m.c}};
        }
        void operator()(const LensMap& m) const {
            (*j)["kind"] = "lens";
            (*j)["params"] = {{"alpha", m.alpha}};
        }
        void operator()(const KoebeMap&) const {
            (*j)["kind"] = "koebe";
            (*j)["params"] = Json::object();
        }
        void operator()(const EllipseExteriorMap& m) const {
            (*j)["kind"] = "ellipse_exterior";
            (*j)["params"] = {{"c", m.c}};
        }
        void operator()(const std::shared_ptr<const TheodorsenMap>& t) const {
            (*j)["kind"] = "theodorsen";
            Json corr = Json::array();
            for (std::size_t i = 0; i < t->n; ++i) corr.push_back({t->theta[i], t->Theta[i]});
            (*j)["params"] = {{"correspondence", corr}, {"log_rho", t->log_rho}};
        }
    };
    std::visit(V{&j}, m.rep());
    return j;
}

inline ConformalMap map_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Json& p = j.at("params");
    if (kind == "mobius") {
        auto a = p.at("a");
        return ConformalMap(MobiusMap{Cpx(a[0].get<double>(), a[1].get<double>()), p.at("rot").get<double>()});
    }
    if (kind == "polymap") return ConformalMap(PolyMap{p.at("c").get<double>()});
    if (kind == "lens") return ConformalMap(LensMap{p.at("alpha").get<double>()});
    if (kind == "koebe") return ConformalMap(KoebeMap{});
    if (kind == "ellipse_exterior") return ConformalMap(EllipseExteriorMap{p.at("c").get<double>()});
    if (kind == "theodorsen") {
        auto tm = std::make_shared<TheodorsenMap>();
        const auto& corr = p.at("correspondence");
        tm->n = corr.size();
        for (const auto& row : corr) {
            tm->theta.push_back(row[0].get<double>());
            tm->Theta.push_back(row[1].get<double>());
        }
        tm->log_rho = p.at("log_rho").get<std::vector<double>>();
        if (tm->log_rho.size() != tm->n)
            throw std::invalid_argument("theodorsen json: table size mismatch");
        std::vector<Cpx> bnd(tm->n);
        for (std::size_t i = 0; i < tm->n; ++i)
            bnd[i] = Cpx(tm->log_rho[i], tm->Theta[i] - tm->theta[i]);
        tm->coef = analytic_coefficients(bnd);
        tm->coef[0] = Cpx(tm->coef[0].real(), 0.0);
        tm->converged = true;
        for (double r : {0.15, 0.35, 0.55, 0.75, 0.9, 0.98})
            for (std::size_t k = 0; k < 64; ++k) {
                Cpx z = std::polar(r, kTwoPi * static_cast<double>(k) / 64.0);
                tm->seed_points.emplace_back(z, tm->value(z));
            }
        return ConformalMap(std::move(tm));
    }
    throw std::invalid_argument("unknown map kind: " + kind);
}

// ---------------------------------------------------------------------------
// Circle homeomorphisms, Beltrami fields, reports
// ---------------------------------------------------------------------------

inline Json homeo_to_json(const CircleHomeomorphism& h) {
    Json j;
    Json theta = Json::array(), H = Json::array();
    for (std::size_t k = 0; k < h.size(); ++k) {
        theta.push_back(kTwoPi * static_cast<double>(k) / static_cast<double>(h.size()));
        H.push_back(h.lift_samples()[k]);
    }
    j["theta"] = theta;
    j["H"] = H;
    return j;
}

inline CircleHomeomorphism homeo_from_json(const Json& j) {
    return CircleHomeomorphism(j.at("H").get<std::vector<double>>());
}

inline Json beltrami_to_json(const BeltramiField& f) {
    Json j;
    j["radii"] = f.grid.radii;
    j["n_theta"] = f.grid.n_theta;
    Json mu = Json::array();
    for (const Cpx& v : f.mu) mu.push_back({v.real(), v.imag()});
    j["mu"] = mu;
    return j;
}

inline Json carleson_report_to_json(const CarlesonReport& r) {
    return Json{{"norm", r.norm},
                {"witness_center", {r.witness_center.real(), r.witness_center.imag()}},
                {"witness_radius", r.witness_radius},
                {"grid", {{"centers", r.n_centers}, {"radii", r.n_radii}}}};
}

inline Json profile_to_json(const VanishingProfile& p) {
    Json entries = Json::array();
    for (auto [r, v] : p.entries) entries.push_back({r, v});
    return Json{{"entries", entries}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path + ": " + std::strerror(errno));
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path + ": " + std::strerror(errno));
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Json j;
    in >> j;
    return j;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    os << std::setprecision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    write_text_file(path, os.str());
}

/// Minimal SVG line plot; log-log axes when requested (zero/negative points
/// are dropped in log scale).
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::vector<std::pair<double, double>>& points, bool loglog) {
    const double W = 640, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : points) {
        if (loglog && (x <= 0 || y <= 0)) continue;
        pts.emplace_back(loglog ? std::log10(x) : x, loglog ? std::log10(y) : y);
    }
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
       << (loglog ? " (log-log)" : "") << "</text>\n";
    if (!pts.empty()) {
        double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
        for (auto [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 - x0 < 1e-12) x1 = x0 + 1;
        if (y1 - y0 < 1e-12) y1 = y0 + 1;
        auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
        auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
        os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
           << "' stroke='black'/>\n";
        os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << ml << "' y2='" << mt
           << "' stroke='black'/>\n";
        os << std::setprecision(4);
        for (int k = 0; k <= 4; ++k) {
            double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
            os << "<text x='" << px(xv) << "' y='" << H - mb + 18
               << "' text-anchor='middle' font-size='11'>" << (loglog ? "1e" : "") << xv
               << "</text>\n";
            os << "<text x='" << ml - 8 << "' y='" << py(yv) + 4
               << "' text-anchor='end' font-size='11'>" << (loglog ? "1e" : "") << yv
               << "</text>\n";
        }
        os << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
        os << std::setprecision(8);
        for (auto [x, y] : pts) os << px(x) << "," << py(y) << " ";
        os << "'/>\n";
    }
    os << "</svg>\n";
    write_text_file(path, os.str());
}

}  // namespace cm
