#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "confactor/factors.hpp"

namespace confactor {

enum class Strategy { exhaustive, greedy, automatic };

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "exhaustive") return Strategy::exhaustive;
    if (s == "greedy") return Strategy::greedy;
    if (s == "auto") return Strategy::automatic;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

struct SearchResult {
    SignSequence best_signs;
    double best_value = 0.0;
    Strategy strategy = Strategy::exhaustive;
    std::uint64_t evaluations = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline int thread_cap() {
    if (const char* env = std::getenv("CONFACTOR_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Keeps column sums S_i and the running objective under single flips.
class FlipState {
public:
    FlipState(const PrimitiveMatrix& B, std::vector<int> eps)
        : B_(B), eps_(std::move(eps)), sums_(B.column_sums(eps_)) {
        long double acc = 0.0L;
        for (int i = 1; i < B.N(); ++i) acc += std::abs(sums_[i]);
        total_ = static_cast<double>(acc);
    }

    double value() const { return total_ / B_.N(); }
    const std::vector<int>& eps() const { return eps_; }

    // Objective change (times N) if eps_k were negated; does not mutate.
    double flip_gain(int k) const {
        double delta = 0.0;
        for (const auto& e : B_.row(k)) {
            double ns = sums_[e.i] - 2.0 * eps_[k - 1] * e.value;
            delta += std::abs(ns) - std::abs(sums_[e.i]);
        }
        return delta;
    }

    void flip(int k) {
        for (const auto& e : B_.row(k)) {
            double ns = sums_[e.i] - 2.0 * eps_[k - 1] * e.value;
            total_ += std::abs(ns) - std::abs(sums_[e.i]);
            sums_[e.i] = ns;
        }
        eps_[k - 1] = -eps_[k - 1];
    }

private:
    const PrimitiveMatrix& B_;
    std::vector<int> eps_;
    std::vector<double> sums_;
    double total_ = 0.0;
};

}  // namespace detail

// Global maximum of D_N over {-1,+1}^N by Gray-code enumeration of the
// 2^N vertices. By convexity of D_N on [-1,1]^N this is also the maximum
// over {-1,0,+1}^N.
inline SearchResult exhaustive_max(const PrimitiveMatrix& B) {
    const int N = B.N();
    if (N > 24) throw std::invalid_argument("exhaustive_max: N <= 24 required (2^N evaluations)");
    detail::FlipState st(B, std::vector<int>(N, 1));
    SearchResult best;
    best.strategy = Strategy::exhaustive;
    best.best_signs = SignSequence(st.eps());
    best.best_value = st.value();
    best.evaluations = 1;
    const std::uint64_t count = 1ULL << N;
    for (std::uint64_t g = 1; g < count; ++g) {
        int k = static_cast<int>(std::countr_zero(g)) + 1;  // Gray code flip position
        st.flip(k);
        ++best.evaluations;
        double v = st.value();
        if (v > best.best_value + 1e-15 ||
            (std::abs(v - best.best_value) <= 1e-15 &&
             detail::lex_less(st.eps(), best.best_signs.entries))) {
            best.best_value = std::max(v, best.best_value);
            best.best_signs = SignSequence(st.eps());
        }
    }
    return best;
}

inline SearchResult exhaustive_max(const OrthonormalSystem& system, const WeightSequence& weights,
                                   int N) {
    return exhaustive_max(PrimitiveMatrix::build(system, weights, N));
}

// Coordinate ascent from a seeded random +/-1 start: flip any single sign
// that increases D_N, sweep until no flip helps. Deterministic given seed.
inline SearchResult greedy_ascent(const PrimitiveMatrix& B, std::uint64_t seed, int restarts = 1) {
    const int N = B.N();
    if (restarts < 1) throw std::invalid_argument("greedy_ascent: restarts >= 1 required");

    auto run_one = [&B, N](std::uint64_t restart_seed, SearchResult& out) {
        std::mt19937_64 rng(restart_seed);
        std::vector<int> start(N);
        for (int k = 0; k < N; ++k) start[k] = (rng() & 1) ? 1 : -1;
        detail::FlipState st(B, std::move(start));
        std::uint64_t evals = 1;
        bool improved = true;
        while (improved) {
            improved = false;
            for (int k = 1; k <= N; ++k) {
                ++evals;
                if (st.flip_gain(k) > 1e-12) {
                    st.flip(k);
                    improved = true;
                }
            }
        }
        out.best_signs = SignSequence(st.eps());
        out.best_value = st.value();
        out.evaluations = evals;
    };

    std::vector<SearchResult> results(restarts);
    int threads = std::min(detail::thread_cap(), restarts);
    if (threads <= 1) {
        for (int r = 0; r < restarts; ++r) run_one(seed + static_cast<std::uint64_t>(r), results[r]);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t) {
            futs.push_back(std::async(std::launch::async, [&]() {
                int r;
                while ((r = next.fetch_add(1)) < restarts)
                    run_one(seed + static_cast<std::uint64_t>(r), results[r]);
            }));
        }
        for (auto& f : futs) f.get();
    }

    SearchResult best = results[0];
    std::uint64_t evals = results[0].evaluations;
    for (int r = 1; r < restarts; ++r) {
        evals += results[r].evaluations;
        if (results[r].best_value > best.best_value + 1e-15 ||
            (std::abs(results[r].best_value - best.best_value) <= 1e-15 &&
             detail::lex_less(results[r].best_signs.entries, best.best_signs.entries))) {
            best = results[r];
        }
    }
    best.evaluations = evals;
    best.seed = seed;
    best.strategy = Strategy::greedy;
    return best;
}

inline SearchResult greedy_ascent(const OrthonormalSystem& system, const WeightSequence& weights,
                                  int N, std::uint64_t seed, int restarts = 1) {
    return greedy_ascent(PrimitiveMatrix::build(system, weights, N), seed, restarts);
}

struct ModelFit {
    enum class Model { constant, log, power };
    Model model = Model::constant;
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

inline const char* model_name(ModelFit::Model m) {
    switch (m) {
        case ModelFit::Model::constant: return "constant";
        case ModelFit::Model::log: return "log";
        case ModelFit::Model::power: return "power";
    }
    return "?";
}

// Fits constant, v = a + b ln N, and v = e^a N^b by least squares; R^2 is
// always computed on the original scale so the models are comparable.
// A growing model is accepted only with slope > 0.05 and R^2 > 0.9;
// otherwise the classification stays "constant".
inline ModelFit fit_growth(const std::vector<int>& N_grid, const std::vector<double>& values) {
    if (N_grid.size() != values.size() || N_grid.empty())
        throw std::invalid_argument("fit_growth: mismatched or empty inputs");
    const std::size_t n = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss_tot = 0.0;
    for (double v : values) ss_tot += (v - mean) * (v - mean);

    auto r2_of = [&](auto&& predict) {
        double ss_res = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double e = values[j] - predict(N_grid[j]);
            ss_res += e * e;
        }
        if (ss_tot <= 1e-24) return ss_res <= 1e-24 ? 1.0 : 0.0;
        return 1.0 - ss_res / ss_tot;
    };

    auto lsq = [n](const std::vector<double>& x, const std::vector<double>& y) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t j = 0; j < n; ++j) {
            sx += x[j]; sy += y[j]; sxx += x[j] * x[j]; sxy += x[j] * y[j];
        }
        double denom = n * sxx - sx * sx;
        double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
        double a = (sy - b * sx) / n;
        return std::pair{a, b};
    };

    std::vector<double> lnN(n);
    for (std::size_t j = 0; j < n; ++j) lnN[j] = std::log(static_cast<double>(N_grid[j]));

    ModelFit log_fit;
    {
        auto [a, b] = lsq(lnN, values);
        log_fit = {ModelFit::Model::log, a, b,
                   r2_of([a, b](int N) { return a + b * std::log(static_cast<double>(N)); })};
    }

    bool power_ok = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    ModelFit pow_fit{ModelFit::Model::power, 0.0, 0.0, -1.0};
    if (power_ok) {
        std::vector<double> lnv(n);
        for (std::size_t j = 0; j < n; ++j) lnv[j] = std::log(values[j]);
        auto [a, b] = lsq(lnN, lnv);
        pow_fit = {ModelFit::Model::power, a, b,
                   r2_of([a, b](int N) { return std::exp(a + b * std::log(static_cast<double>(N))); })};
    }

    auto growing = [](const ModelFit& f) { return f.slope > 0.05 && f.r_squared > 0.9; };
    if (growing(log_fit) || growing(pow_fit)) {
        if (growing(log_fit) && growing(pow_fit))
            return pow_fit.r_squared > log_fit.r_squared ? pow_fit : log_fit;
        return growing(log_fit) ? log_fit : pow_fit;
    }
    ModelFit c;
    c.model = ModelFit::Model::constant;
    c.intercept = mean;
    c.r_squared = ss_tot <= 1e-24 ? 1.0 : 0.0;
    return c;
}

struct GrowthScan {
    std::vector<int> N_grid;
    std::vector<double> values;
    std::vector<SearchResult> results;
    ModelFit fit;
};

inline int default_restarts(int N) { return std::max(32, N / 4); }

// Best-found D_N across an ascending N grid, with a growth-model fit.
// Strategy "auto": exhaustive for N <= 20, seeded greedy otherwise.
inline GrowthScan growth_scan(const OrthonormalSystem& system, const WeightSequence& weights,
                              const std::vector<int>& N_grid, Strategy strategy, int restarts,
                              std::uint64_t seed) {
    if (!std::is_sorted(N_grid.begin(), N_grid.end()))
        throw std::invalid_argument("growth_scan: N grid must be ascending");
    GrowthScan scan;
    scan.N_grid = N_grid;
    for (int N : N_grid) {
        PrimitiveMatrix B = PrimitiveMatrix::build(system, weights, N);
        Strategy s = strategy;
        if (s == Strategy::automatic) s = (N <= 20) ? Strategy::exhaustive : Strategy::greedy;
        SearchResult r = (s == Strategy::exhaustive)
                             ? exhaustive_max(B)
                             : greedy_ascent(B, seed, restarts > 0 ? restarts : default_restarts(N));
        scan.values.push_back(r.best_value);
        scan.results.push_back(std::move(r));
    }
    scan.fit = fit_growth(scan.N_grid, scan.values);
    return scan;
}

}  // namespace confactor
