#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "confactor/factors.hpp"
#include "confactor/ons.hpp"
#include "confactor/piecewise.hpp"
#include "confactor/search.hpp"

namespace confactor {

using json = nlohmann::json;

// {"breakpoints": ["0","1/4","1"], "values": [...]}: breakpoints as "p/q"
// strings, values as JSON numbers. PiecewiseConstant has one fewer value
// than breakpoints, PiecewiseLinear one value per breakpoint.

inline json to_json(const PiecewiseConstant& F) {
    json j;
    for (const auto& b : F.breakpoints()) j["breakpoints"].push_back(rational_to_string(b));
    j["values"] = F.values();
    return j;
}

inline json to_json(const PiecewiseLinear& P) {
    json j;
    for (const auto& b : P.breakpoints()) j["breakpoints"].push_back(rational_to_string(b));
    j["values"] = P.node_values();
    return j;
}

inline std::vector<Rational> breakpoints_from_json(const json& j) {
    std::vector<Rational> breaks;
    for (const auto& s : j.at("breakpoints")) breaks.push_back(rational_from_string(s.get<std::string>()));
    return breaks;
}

inline PiecewiseConstant piecewise_constant_from_json(const json& j) {
    return PiecewiseConstant(breakpoints_from_json(j), j.at("values").get<std::vector<double>>());
}

inline PiecewiseLinear piecewise_linear_from_json(const json& j) {
    return PiecewiseLinear(breakpoints_from_json(j), j.at("values").get<std::vector<double>>());
}

// Custom system file: JSON array of PiecewiseConstant objects. The loader
// delegates the 1e-10 orthonormality check to OrthonormalSystem::custom.
inline OrthonormalSystem load_custom_system(const std::string& path, bool mean_zero_only = false) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open system file '" + path + "'");
    json j = json::parse(in);
    if (!j.is_array()) throw std::invalid_argument("custom system file must be a JSON array");
    std::vector<PiecewiseConstant> fns;
    for (const auto& item : j) fns.push_back(piecewise_constant_from_json(item));
    return OrthonormalSystem::custom(std::move(fns), mean_zero_only);
}

// Weight grammar: "const:1.0", "logpow:1.0", "power:-0.1667",
// "custom:path.json" (JSON array of positive numbers).
inline WeightSequence parse_weights(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument(
            "weight spec '" + spec +
            "': expected const:<c> | logpow:<eps> | power:<gamma> | custom:<path.json>");
    std::string family = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (family == "const") return WeightSequence::constant(std::stod(arg));
    if (family == "logpow") return WeightSequence::logpow(std::stod(arg));
    if (family == "power") return WeightSequence::power(std::stod(arg));
    if (family == "custom") {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open weight table '" + arg + "'");
        json j = json::parse(in);
        return WeightSequence::custom(j.get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown weight family '" + family + "'");
}

inline std::string weights_spec_string(const WeightSequence& w) {
    std::ostringstream os;
    switch (w.family()) {
        case WeightSequence::Family::constant: os << "const:" << w.param(); break;
        case WeightSequence::Family::logpow: os << "logpow:" << w.param(); break;
        case WeightSequence::Family::power: os << "power:" << w.param(); break;
        case WeightSequence::Family::custom: os << "custom"; break;
    }
    return os.str();
}

// System grammar: haar | walsh | trig | rademacher | custom:<path.json>.
inline OrthonormalSystem parse_system(const std::string& spec, bool mean_zero_only = true) {
    if (spec.rfind("custom:", 0) == 0) return load_custom_system(spec.substr(7), mean_zero_only);
    switch (system_kind_from_string(spec)) {
        case SystemKind::haar: return OrthonormalSystem::haar(mean_zero_only);
        case SystemKind::walsh: return OrthonormalSystem::walsh(mean_zero_only);
        case SystemKind::trig: return OrthonormalSystem::trig();
        case SystemKind::rademacher: return OrthonormalSystem::rademacher();
        default: break;
    }
    throw std::invalid_argument("unknown system '" + spec + "'");
}

// Epsilon grammar: "ones" | "best" | "rademacher:<t>" | comma list "1,-1,0".
// "best" is resolved by the caller (runs a search first).
inline SignSequence parse_signs(const std::string& spec, int N) {
    if (spec == "ones") return SignSequence::ones(N);
    if (spec == "zeros") return SignSequence::zeros(N);
    if (spec.rfind("rademacher:", 0) == 0)
        return SignSequence::rademacher(rational_from_string(spec.substr(11)), N);
    std::vector<int> entries;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        entries.push_back(std::stoi(tok));
    }
    if (static_cast<int>(entries.size()) != N)
        throw std::invalid_argument("eps list has " + std::to_string(entries.size()) +
                                    " entries, expected N = " + std::to_string(N));
    return SignSequence(std::move(entries));
}

// Grid grammar "a:b:xk": geometric from a to b with ratio k.
inline std::vector<int> parse_grid(const std::string& spec) {
    auto c1 = spec.find(':');
    auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || spec[c2 + 1] != 'x')
        throw std::invalid_argument("grid spec '" + spec + "': expected a:b:xk (geometric)");
    int a = std::stoi(spec.substr(0, c1));
    int b = std::stoi(spec.substr(c1 + 1, c2 - c1 - 1));
    double k = std::stod(spec.substr(c2 + 2));
    if (a < 1 || b < a || k <= 1.0)
        throw std::invalid_argument("grid spec '" + spec + "': need 1 <= a <= b and ratio > 1");
    std::vector<int> grid;
    double x = a;
    while (static_cast<int>(std::lround(x)) <= b) {
        int v = static_cast<int>(std::lround(x));
        if (grid.empty() || v != grid.back()) grid.push_back(v);
        x *= k;
    }
    return grid;
}

inline json to_json(const SearchResult& r, int N) {
    json j;
    j["N"] = N;
    j["best_value"] = r.best_value;
    j["signs"] = r.best_signs.entries;
    j["evaluations"] = r.evaluations;
    j["seed"] = r.seed;
    j["strategy"] = r.strategy == Strategy::exhaustive ? "exhaustive" : "greedy";
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// Minimal deterministic SVG line chart: best D_N against log2 N with the
// fitted model overlaid. Diagnostic output, not publication-grade.
inline std::string render_scan_svg(const GrowthScan& scan) {
    if (scan.N_grid.empty()) throw std::invalid_argument("render_scan_svg: empty scan");
    const double W = 640, H = 400, ml = 60, mr = 20, mt = 20, mb = 40;
    double x0 = std::log2(static_cast<double>(scan.N_grid.front()));
    double x1 = std::log2(static_cast<double>(scan.N_grid.back()));
    if (x1 <= x0) x1 = x0 + 1.0;
    double vmax = 0.0;
    for (double v : scan.values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;

    auto px = [&](double lx) { return ml + (lx - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - v / (vmax * 1.1) * (H - mt - mb); };
    std::ostringstream svg;
    svg << std::setprecision(12);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";

    // fitted model
    std::ostringstream fitpts;
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        double lx = x0 + (x1 - x0) * i / samples;
        double Nv = std::exp2(lx);
        double v;
        switch (scan.fit.model) {
            case ModelFit::Model::constant: v = scan.fit.intercept; break;
            case ModelFit::Model::log: v = scan.fit.intercept + scan.fit.slope * std::log(Nv); break;
            case ModelFit::Model::power:
                v = std::exp(scan.fit.intercept + scan.fit.slope * std::log(Nv));
                break;
            default: v = 0;
        }
        fitpts << px(lx) << "," << py(std::max(0.0, std::min(v, vmax * 1.1))) << " ";
    }
    svg << "<polyline points=\"" << fitpts.str()
        << "\" fill=\"none\" stroke=\"#cc3333\" stroke-dasharray=\"4 3\"/>\n";

    std::ostringstream pts;
    for (std::size_t i = 0; i < scan.N_grid.size(); ++i)
        pts << px(std::log2(static_cast<double>(scan.N_grid[i]))) << "," << py(scan.values[i])
            << " ";
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"#3355bb\"/>\n";
    for (std::size_t i = 0; i < scan.N_grid.size(); ++i)
        svg << "<circle cx=\"" << px(std::log2(static_cast<double>(scan.N_grid[i]))) << "\" cy=\""
            << py(scan.values[i]) << "\" r=\"3\" fill=\"#3355bb\"/>\n";
    svg << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 10)
        << "\" font-size=\"12\" text-anchor=\"middle\">log2 N</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << (mt - 5) << "\" font-size=\"12\">best D_N (fit: "
        << model_name(scan.fit.model) << ")</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

inline std::string scan_csv(const GrowthScan& scan) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "N,best_DN\n";
    for (std::size_t i = 0; i < scan.N_grid.size(); ++i)
        os << scan.N_grid[i] << "," << scan.values[i] << "\n";
    os << "# fit," << model_name(scan.fit.model) << ",slope," << scan.fit.slope << ",r_squared,"
       << scan.fit.r_squared << "\n";
    return os.str();
}

}  // namespace confactor
