// confactor: convergence-factor diagnostics for general orthonormal systems.
//
// Subcommands: dn, search, scan, extremal, coeffs, checks, olevsky.
// Exit codes: 0 success, 2 invalid configuration, 3 failed inequality check.

#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confactor/confactor.hpp"

namespace cf = confactor;
using cf::json;

namespace {

struct CommonOpts {
    std::string system = "haar";
    std::string weights = "const:1";
    bool include_mean = false;  // default: mean-zero filtering on
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--system", o.system, "haar | walsh | trig | rademacher | custom:<path.json>");
    cmd->add_option("--weights", o.weights, "const:<c> | logpow:<eps> | power:<gamma> | custom:<path.json>");
    cmd->add_flag("--include-mean", o.include_mean,
                  "keep functions with nonzero integral (default: mean-zero slots are emptied)");
    cmd->add_option("--out", o.out, "output file path");
}

cf::OrthonormalSystem make_system(const CommonOpts& o) {
    return cf::parse_system(o.system, !o.include_mean);
}

json config_echo(const CommonOpts& o) {
    json j;
    j["system"] = o.system;
    j["weights"] = o.weights;
    j["mean_zero_only"] = !o.include_mean;
    return j;
}

cf::SignSequence resolve_signs(const std::string& eps_spec, const cf::OrthonormalSystem& sys,
                               const cf::WeightSequence& w, int N, cf::Strategy strategy,
                               int restarts, std::uint64_t seed) {
    if (eps_spec == "best") {
        cf::PrimitiveMatrix B = cf::PrimitiveMatrix::build(sys, w, N);
        if (strategy == cf::Strategy::automatic)
            strategy = N <= 20 ? cf::Strategy::exhaustive : cf::Strategy::greedy;
        cf::SearchResult r = strategy == cf::Strategy::exhaustive
                                 ? cf::exhaustive_max(B)
                                 : cf::greedy_ascent(B, seed, restarts > 0 ? restarts : cf::default_restarts(N));
        return r.best_signs;
    }
    return cf::parse_signs(eps_spec, N);
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) std::cout << content;
    else cf::write_text_file(path, content);
}

cf::PiecewiseLinear random_piecewise_linear(std::mt19937_64& rng, int max_nodes = 8) {
    std::uniform_int_distribution<int> nn(2, max_nodes);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    int K = nn(rng);
    std::vector<cf::Rational> breaks;
    std::vector<double> nodes;
    for (int i = 0; i <= K; ++i) {
        breaks.push_back(cf::make_rational(i, K));
        nodes.push_back(uv(rng));
    }
    return cf::PiecewiseLinear(std::move(breaks), std::move(nodes));
}

int run_checks(const CommonOpts& common, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto haar = cf::OrthonormalSystem::haar();
    auto walsh = cf::OrthonormalSystem::walsh();
    std::uniform_int_distribution<int> pickN(8, 128);
    std::uniform_int_distribution<int> pick3(0, 2);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto random_weights = [&rng, &pick3, &u01]() {
        switch (pick3(rng)) {
            case 0: return cf::WeightSequence::constant(0.25 + u01(rng));
            case 1: return cf::WeightSequence::logpow(0.5 + u01(rng));
            default: return cf::WeightSequence::power(-0.5 * u01(rng));
        }
    };
    auto random_signs = [&rng](int N) {
        std::uniform_int_distribution<int> s(-1, 1);
        std::vector<int> e(N);
        for (auto& v : e) v = s(rng);
        return cf::SignSequence(std::move(e));
    };

    int failures = 0;
    double worst_lemma1 = 0, worst_parseval = 0, worst_sbp = 0, worst_lower = 0;
    for (int trial = 0; trial < count; ++trial) {
        const auto& sys = (trial % 2 == 0) ? haar : walsh;
        int N = pickN(rng);
        auto w = random_weights();
        auto eps = random_signs(N);
        auto q = cf::build_QN(sys, w, eps, N);

        auto l1 = cf::lemma1_check(q.piecewise_form(), N);
        worst_lemma1 = std::max(worst_lemma1, l1.lhs - l1.rhs);
        if (!l1.holds) ++failures;

        double pr = cf::parseval_check(sys, w, eps, N);
        worst_parseval = std::max(worst_parseval, pr);
        if (pr > 1e-10 * N) ++failures;

        auto f = random_piecewise_linear(rng);
        std::uniform_int_distribution<int> sbpN(2, 16);
        double sbp = cf::sbp_residual(f, q.piecewise_form(), sbpN(rng));
        worst_sbp = std::max(worst_sbp, sbp);
        if (sbp > 1e-11) ++failures;

        auto wit = cf::lower_bound_check(sys, w, eps, N);
        worst_lower = std::max(worst_lower, wit.bound.d_n - wit.bound.deficit_bound -
                                                std::abs(wit.bound.functional_value));
        if (!wit.bound.holds) ++failures;
    }

    json rep;
    rep["schema"] = 1;
    rep["config"] = config_echo(common);
    rep["config"]["count"] = count;
    rep["config"]["seed"] = seed;
    rep["failures"] = failures;
    rep["worst_lemma1_excess"] = worst_lemma1;
    rep["worst_parseval_residual"] = worst_parseval;
    rep["worst_sbp_residual"] = worst_sbp;
    rep["worst_lower_bound_deficit"] = worst_lower;
    emit(common.out, rep.dump(2) + "\n");
    std::cerr << (failures == 0 ? "checks: all passed\n"
                                : "checks: " + std::to_string(failures) + " failure(s)\n");
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"criterion functional D_N, sign-cube search and extremal witnesses "
                 "for general orthonormal systems"};
    app.require_subcommand(1);

    // dn
    auto* dn_cmd = app.add_subcommand("dn", "compute a single D_N(eps)");
    CommonOpts dn_o;
    int dn_N = 4;
    std::string dn_eps = "ones";
    add_common(dn_cmd, dn_o);
    dn_cmd->add_option("--N", dn_N, "number of terms")->required();
    dn_cmd->add_option("--eps", dn_eps, "ones | zeros | rademacher:<t> | best | comma list");

    // search
    auto* search_cmd = app.add_subcommand("search", "maximize D_N over sign sequences");
    CommonOpts se_o;
    int se_N = 64, se_restarts = 0;
    std::string se_strategy = "auto";
    std::uint64_t se_seed = 1;
    add_common(search_cmd, se_o);
    search_cmd->add_option("--N", se_N, "number of terms")->required();
    search_cmd->add_option("--strategy", se_strategy, "exhaustive | greedy | auto");
    search_cmd->add_option("--restarts", se_restarts, "greedy restarts (0 = max(32, N/4))");
    search_cmd->add_option("--seed", se_seed, "RNG seed");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "best D_N across an N grid with a growth fit");
    CommonOpts sc_o;
    std::string sc_grid = "16:1024:x2", sc_strategy = "auto", sc_svg;
    int sc_restarts = 0;
    std::uint64_t sc_seed = 1;
    add_common(scan_cmd, sc_o);
    scan_cmd->add_option("--grid", sc_grid, "geometric grid a:b:xk");
    scan_cmd->add_option("--strategy", sc_strategy, "exhaustive | greedy | auto");
    scan_cmd->add_option("--restarts", sc_restarts, "greedy restarts (0 = max(32, N/4))");
    scan_cmd->add_option("--seed", sc_seed, "RNG seed");
    scan_cmd->add_option("--svg", sc_svg, "also write an SVG chart here");

    // extremal
    auto* ext_cmd = app.add_subcommand("extremal", "build f_N and check the lower bound");
    CommonOpts ex_o;
    int ex_N = 64, ex_restarts = 0;
    std::string ex_eps = "best", ex_strategy = "auto";
    std::uint64_t ex_seed = 1;
    add_common(ext_cmd, ex_o);
    ext_cmd->add_option("--N", ex_N, "number of terms")->required();
    ext_cmd->add_option("--eps", ex_eps, "ones | rademacher:<t> | best | comma list");
    ext_cmd->add_option("--strategy", ex_strategy, "search strategy when --eps best");
    ext_cmd->add_option("--restarts", ex_restarts, "greedy restarts when --eps best");
    ext_cmd->add_option("--seed", ex_seed, "RNG seed");

    // coeffs
    auto* co_cmd = app.add_subcommand("coeffs", "Fourier coefficients and weighted partial sums");
    CommonOpts co_o;
    int co_N = 64;
    std::string co_f = "x";
    add_common(co_cmd, co_o);
    co_cmd->add_option("--N", co_N, "number of coefficients")->required();
    co_cmd->add_option("--f", co_f, "x | json:<path> (piecewise-linear JSON)");

    // checks
    auto* ch_cmd = app.add_subcommand("checks", "exceptional-set / Parseval / summation-by-parts / lower-bound suites");
    CommonOpts ch_o;
    int ch_count = 200;
    std::uint64_t ch_seed = 1;
    add_common(ch_cmd, ch_o);
    ch_cmd->add_option("--count", ch_count, "number of random instances");
    ch_cmd->add_option("--seed", ch_seed, "RNG seed");

    // olevsky
    auto* ol_cmd = app.add_subcommand("olevsky", "prescribed-coefficient system demo");
    CommonOpts ol_o;
    int ol_N = 256;
    double ol_gamma = 1.0 / 3.0, ol_exponent = 4.0 / 3.0;
    std::optional<double> ol_b;
    double ol_b_raw = -1.0;
    add_common(ol_cmd, ol_o);
    ol_cmd->add_option("--N", ol_N, "number of prescribed coefficients");
    ol_cmd->add_option("--gamma", ol_gamma, "weight exponent (< 1/2)");
    ol_cmd->add_option("--exponent", ol_exponent, "coefficient decay exponent");
    ol_cmd->add_option("--b", ol_b_raw, "scale b (default 0.9 ||f0||/||a||)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*dn_cmd) {
            auto sys = make_system(dn_o);
            auto w = cf::parse_weights(dn_o.weights);
            auto eps = resolve_signs(dn_eps, sys, w, dn_N, cf::Strategy::automatic, 0, 1);
            double v = cf::compute_DN(sys, w, eps, dn_N);
            json rep;
            rep["schema"] = 1;
            rep["config"] = config_echo(dn_o);
            rep["config"]["N"] = dn_N;
            rep["config"]["eps"] = dn_eps;
            rep["D_N"] = v;
            std::cout << std::setprecision(12) << v << "\n";
            if (!dn_o.out.empty()) cf::write_text_file(dn_o.out, rep.dump(2) + "\n");
        } else if (*search_cmd) {
            auto sys = make_system(se_o);
            auto w = cf::parse_weights(se_o.weights);
            auto strategy = cf::strategy_from_string(se_strategy);
            cf::PrimitiveMatrix B = cf::PrimitiveMatrix::build(sys, w, se_N);
            if (strategy == cf::Strategy::automatic)
                strategy = se_N <= 20 ? cf::Strategy::exhaustive : cf::Strategy::greedy;
            cf::SearchResult r =
                strategy == cf::Strategy::exhaustive
                    ? cf::exhaustive_max(B)
                    : cf::greedy_ascent(B, se_seed,
                                        se_restarts > 0 ? se_restarts : cf::default_restarts(se_N));
            json rep = cf::to_json(r, se_N);
            rep["schema"] = 1;
            rep["config"] = config_echo(se_o);
            rep["config"]["N"] = se_N;
            rep["config"]["strategy"] = se_strategy;
            rep["config"]["restarts"] = se_restarts;
            rep["config"]["seed"] = se_seed;
            emit(se_o.out, rep.dump(2) + "\n");
            std::cerr << "best D_" << se_N << " = " << std::setprecision(12) << r.best_value
                      << " (" << r.evaluations << " evaluations)\n";
        } else if (*scan_cmd) {
            auto sys = make_system(sc_o);
            auto w = cf::parse_weights(sc_o.weights);
            auto grid = cf::parse_grid(sc_grid);
            auto scan = cf::growth_scan(sys, w, grid, cf::strategy_from_string(sc_strategy),
                                        sc_restarts, sc_seed);
            emit(sc_o.out, cf::scan_csv(scan));
            if (!sc_svg.empty()) cf::write_text_file(sc_svg, cf::render_scan_svg(scan));
            std::cerr << "fit: " << cf::model_name(scan.fit.model) << " slope=" << scan.fit.slope
                      << " r2=" << scan.fit.r_squared << "\n";
        } else if (*ext_cmd) {
            auto sys = make_system(ex_o);
            auto w = cf::parse_weights(ex_o.weights);
            auto eps = resolve_signs(ex_eps, sys, w, ex_N, cf::strategy_from_string(ex_strategy),
                                     ex_restarts, ex_seed);
            auto wit = cf::lower_bound_check(sys, w, eps, ex_N);
            json rep;
            rep["schema"] = 1;
            rep["config"] = config_echo(ex_o);
            rep["config"]["N"] = ex_N;
            rep["config"]["eps"] = ex_eps;
            rep["config"]["seed"] = ex_seed;
            rep["f_N"] = cf::to_json(wit.f_N.representation);
            rep["functional_value"] = wit.bound.functional_value;
            rep["D_N"] = wit.bound.d_n;
            rep["deficit_bound"] = wit.bound.deficit_bound;
            rep["holds"] = wit.bound.holds;
            rep["lip1_norm"] = cf::lip1_norm(wit.f_N);
            emit(ex_o.out, rep.dump(2) + "\n");
        } else if (*co_cmd) {
            auto sys = make_system(co_o);
            auto w = cf::parse_weights(co_o.weights);
            cf::LipschitzFunction f;
            if (co_f == "x") {
                f = cf::LipschitzFunction::from(
                    cf::PiecewiseLinear({cf::Rational(0), cf::Rational(1)}, {0.0, 1.0}));
            } else if (co_f.rfind("json:", 0) == 0) {
                std::ifstream in(co_f.substr(5));
                if (!in) throw std::invalid_argument("cannot open '" + co_f.substr(5) + "'");
                f = cf::LipschitzFunction::from(cf::piecewise_linear_from_json(json::parse(in)));
            } else {
                throw std::invalid_argument("--f expects 'x' or 'json:<path>'");
            }
            auto sums = cf::weighted_partial_sums(f, sys, w, co_N);
            std::ostringstream os;
            os << std::setprecision(17) << "k,c_k,S_k\n";
            for (int k = 1; k <= co_N; ++k)
                os << k << "," << cf::fourier_coefficient(f, sys, k) << "," << sums[k - 1] << "\n";
            emit(co_o.out, os.str());
        } else if (*ch_cmd) {
            return run_checks(ch_o, ch_count, ch_seed);
        } else if (*ol_cmd) {
            if (ol_b_raw >= 0.0) ol_b = ol_b_raw;
            auto rep = cf::theorem_d_demo(ol_N, ol_gamma, ol_exponent, ol_b);
            std::ostringstream os;
            os << std::setprecision(17) << "m,S_m,b_H_m,deviation\n";
            for (int m = 1; m <= rep.N; ++m)
                os << m << "," << rep.partial_sums[m - 1] << "," << rep.predicted[m - 1] << ","
                   << (rep.partial_sums[m - 1] - rep.predicted[m - 1]) << "\n";
            emit(ol_o.out, os.str());
            std::cerr << "b=" << rep.b << " max_deviation=" << rep.max_deviation
                      << " coeff_fidelity=" << rep.coefficient_max_error
                      << " gram_error=" << rep.gram_max_error << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
