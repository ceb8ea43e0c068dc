#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperalg/engine.hpp"
#include "hyperalg/expsum.hpp"
#include "hyperalg/geometry.hpp"
#include "hyperalg/mpoly.hpp"
#include "hyperalg/multiindex.hpp"
#include "hyperalg/symbol.hpp"

namespace hyperalg {

using json = nlohmann::json;

inline json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

// ---- Symbol ----------------------------------------------------------------

inline json to_json(const Symbol& s) {
    json j;
    switch (s.kind()) {
        case Symbol::Kind::poly: {
            j["kind"] = "poly";
            json coeffs = json::array();
            for (const auto& c : s.coeffs()) coeffs.push_back(to_json(c));
            j["coeffs"] = coeffs;
            break;
        }
        case Symbol::Kind::exp:
            j["kind"] = "exp";
            j["a"] = to_json(s.scale());
            break;
        case Symbol::Kind::sin:
            j["kind"] = "sin";
            j["a"] = to_json(s.scale());
            break;
        case Symbol::Kind::cos:
            j["kind"] = "cos";
            j["a"] = to_json(s.scale());
            break;
    }
    return j;
}

inline Symbol symbol_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly") {
        std::vector<cplx> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(cplx_from_json(c));
        return Symbol::polynomial(std::move(coeffs));
    }
    const cplx a = cplx_from_json(j.at("a"));
    if (kind == "exp") return Symbol::exponential(a);
    if (kind == "sin") return Symbol::sine(a);
    if (kind == "cos") return Symbol::cosine(a);
    throw std::invalid_argument("unknown symbol kind: " + kind);
}

// ---- ExpSum (floating and exact) -------------------------------------------

inline json to_json(const ExpSum& f) {
    json terms = json::array();
    for (const auto& t : f.terms())
        terms.push_back(json{{"lambda", to_json(t.lambda)}, {"coeff", to_json(t.coeff)}});
    return json{{"terms", terms}};
}

inline ExpSum expsum_from_json(const json& j) {
    std::vector<ExpSum::Term> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({cplx_from_json(t.at("lambda")), cplx_from_json(t.at("coeff"))});
    return ExpSum::from_terms(std::move(terms));
}

inline json to_json(const GaussianRational& v) {
    return json::array({rational_to_string(v.re), rational_to_string(v.im)});
}

// Exact values are serialized as strings ("p/q"); numeric literals here would
// silently lose exactness, so they are rejected.
inline GaussianRational gaussian_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw std::invalid_argument(
            "inexact-exponents: exact values must be [\"p/q\", \"p/q\"] string pairs");
    return {rational_from_string(j[0].get<std::string>()),
            rational_from_string(j[1].get<std::string>())};
}

inline json to_json(const ExactExpSum& f) {
    json terms = json::array();
    for (const auto& t : f.terms())
        terms.push_back(json{{"lambda", to_json(t.lambda)}, {"coeff", to_json(t.coeff)}});
    return json{{"terms", terms}};
}

inline ExactExpSum exact_expsum_from_json(const json& j) {
    std::vector<ExactExpSum::Term> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({gaussian_from_json(t.at("lambda")), gaussian_from_json(t.at("coeff"))});
    return ExactExpSum::from_terms(std::move(terms));
}

// ---- MPoly ------------------------------------------------------------------

inline json to_json(const RationalPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json t;
        t["exps"] = e;
        t["num"] = numerator(c).str();
        t["den"] = denominator(c).str();
        terms.push_back(t);
    }
    return json{{"nvars", p.nvars()}, {"terms", terms}};
}

inline json to_json(const GaussianPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json t;
        t["exps"] = e;
        t["num"] = json::array({numerator(c.re).str(), numerator(c.im).str()});
        t["den"] = json::array({denominator(c.re).str(), denominator(c.im).str()});
        terms.push_back(t);
    }
    return json{{"nvars", p.nvars()}, {"terms", terms}};
}

inline RationalPoly rational_poly_from_json(const json& j) {
    RationalPoly p(j.at("nvars").get<std::uint32_t>());
    for (const auto& t : j.at("terms")) {
        MultiIndex e = t.at("exps").get<MultiIndex>();
        const BigInt num(t.at("num").get<std::string>());
        const BigInt den(t.at("den").get<std::string>());
        p.add_term(std::move(e), Rational(num, den));
    }
    return p;
}

// ---- Geometry ----------------------------------------------------------------

inline json to_json(const Arc& arc) {
    json points = json::array();
    for (const auto& z : arc.points) points.push_back(to_json(z));
    return json{{"level", arc.level}, {"points", points}, {"curvatures", arc.curvatures}};
}

inline Arc arc_from_json(const json& j) {
    Arc arc;
    arc.level = j.at("level").get<double>();
    for (const auto& p : j.at("points")) arc.points.push_back(cplx_from_json(p));
    if (j.contains("curvatures")) arc.curvatures = j.at("curvatures").get<std::vector<double>>();
    if (arc.curvatures.size() != arc.points.size()) fill_curvatures(arc);
    return arc;
}

inline json to_json(const Segment& s) {
    json samples = json::array();
    for (const auto& z : s.samples) samples.push_back(to_json(z));
    return json{{"endpoints", json::array({to_json(s.a), to_json(s.b)})}, {"samples", samples}};
}

inline Segment segment_from_json(const json& j) {
    const auto& e = j.at("endpoints");
    int count = j.contains("samples") ? static_cast<int>(j.at("samples").size()) : 64;
    return make_segment(cplx_from_json(e.at(0)), cplx_from_json(e.at(1)), std::max(2, count));
}

inline json to_json(const ConditionCheck& c) {
    return json{{"name", c.name},
                {"pass", c.pass},
                {"vacuous", c.vacuous},
                {"witness", to_json(c.witness)},
                {"witness_value", c.witness_value}};
}

inline json to_json(const MinkowskiReport& r) {
    return json{{"lambda_sums", to_json(r.lambda_sums)},
                {"hull_plus_lambda", to_json(r.hull_plus_lambda)},
                {"scaled_arc_sums", to_json(r.scaled_arc_sums)},
                {"hull_condition", to_json(r.hull_condition)},
                {"all_pass", r.all_pass()}};
}

inline json to_json(const TheoremData& t) {
    return json{{"r", t.r},
                {"rotation", to_json(t.rotation)},
                {"lambda", to_json(t.lambda)},
                {"gamma_r", to_json(t.gamma_r)},
                {"seed_arc", to_json(t.seed_arc)},
                {"certificate", to_json(t.certificate)}};
}

// ---- Multi-index data ---------------------------------------------------------

inline json to_json(const MultiIndexSet& s) {
    json weights = json::array();
    for (const auto& k : s.weights) weights.push_back(rational_to_string(k));
    return json{{"dimension", s.dimension}, {"indices", s.indices},
                {"weights", weights},       {"beta", s.beta},
                {"M_A", s.max_linf},        {"i_A", s.distinguished_coord + 1},
                {"d_A", s.max_l1}};
}

inline std::vector<MultiIndex> indices_from_json(const json& j) {
    std::vector<MultiIndex> out;
    for (const auto& row : j) out.push_back(row.get<MultiIndex>());
    return out;
}

// ---- Orbit report --------------------------------------------------------------

inline std::string alpha_label(const MultiIndex& alpha) {
    std::string s;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(alpha[i]);
    }
    return s;
}

inline json to_json(const OrbitReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"alpha", row.alpha},
                            {"n", row.n},
                            {"distance", row.distance},
                            {"dominant_term", to_json(row.dominant)}});
    json diags = json::array();
    for (std::size_t i = 0; i < r.beta_diagnostics_by_n.size(); ++i) {
        json values = json::array();
        for (const auto& v : r.beta_diagnostics_by_n[i]) values.push_back(to_json(v));
        diags.push_back(json{{"n", r.schedule[i]}, {"X_beta", values}});
    }
    return json{{"schedule", r.schedule}, {"rows", rows}, {"beta_diagnostics", diags}};
}

// ---- CSV writers ----------------------------------------------------------------

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string arc_to_csv(const Arc& arc, const std::string& manifest_comment = {}) {
    std::string out;
    if (!manifest_comment.empty()) out += "# " + manifest_comment + "\n";
    out += "re,im,curvature\n";
    for (std::size_t i = 0; i < arc.points.size(); ++i) {
        out += format_g17(arc.points[i].real()) + "," + format_g17(arc.points[i].imag()) + "," +
               format_g17(i < arc.curvatures.size() ? arc.curvatures[i] : 0.0) + "\n";
    }
    return out;
}

inline std::string orbit_report_to_csv(const OrbitReport& r,
                                       const std::string& manifest_comment = {}) {
    std::string out;
    if (!manifest_comment.empty()) out += "# " + manifest_comment + "\n";
    out += "alpha,n,distance,dominant_term_re,dominant_term_im\n";
    for (const auto& row : r.rows) {
        out += alpha_label(row.alpha) + "," + std::to_string(row.n) + "," +
               format_g17(row.distance) + "," + format_g17(row.dominant.real()) + "," +
               format_g17(row.dominant.imag()) + "\n";
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace hyperalg
