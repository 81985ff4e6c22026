#pragma once

// Test-only helpers: random instance generators and independent numeric
// oracles that bypass the piecewise machinery.

#include <cmath>
#include <random>
#include <vector>

#include "confactor/confactor.hpp"

namespace testutil {

using namespace confactor;

// Direct Haar evaluation from the dyadic support formula; independent of
// the PiecewiseConstant construction path.
inline double haar_value_direct(int k, double x) {
    if (k == 1) return 1.0;
    int s = 0;
    while ((2 << s) < k) ++s;
    int l = k - (1 << s);
    double left = static_cast<double>(l - 1) / (1 << s);
    double mid = static_cast<double>(2 * l - 1) / (2 << s);
    double right = static_cast<double>(l) / (1 << s);
    double h = std::sqrt(std::ldexp(1.0, s));
    if (x > left && x < mid) return h;
    if (x > mid && x < right) return -h;
    return 0.0;
}

// Riemann-sum oracle on a dyadic grid: exact for step functions whose
// breakpoints have denominator dividing `cells` (midpoints avoid them).
template <typename F>
double riemann_integral(F&& f, double a, double b, int cells = 1 << 14) {
    long double acc = 0.0L;
    double h = (b - a) / cells;
    for (int i = 0; i < cells; ++i) acc += f(a + (i + 0.5) * h);
    return static_cast<double>(acc * h);
}

// D_N oracle: evaluates Q pointwise from the direct Haar formula, builds
// primitives by cumulative midpoint sums. The grid of N*2^K cells (with
// 2^K >= 2N) contains every dyadic jump of Q and every endpoint i/N, so
// the sums are exact up to rounding.
inline double dn_haar_oracle(const WeightSequence& w, const SignSequence& eps, int N,
                             bool mean_zero = true) {
    auto Q = [&](double x) {
        double v = 0.0;
        for (int k = mean_zero ? 2 : 1; k <= N; ++k)
            if (eps[k] != 0) v += w(k) * std::sqrt(static_cast<double>(k)) * eps[k] * haar_value_direct(k, x);
        return v;
    };
    int K = 1;
    while ((1L << K) < 2L * N) ++K;
    const long D = static_cast<long>(N) << K;
    long double acc = 0.0L, P = 0.0L;
    long next = 1L << K;  // next multiple of D/N
    int done = 0;
    for (long j = 0; j < D && done < N - 1; ++j) {
        P += Q((j + 0.5) / static_cast<double>(D));
        if (j + 1 == next) {
            acc += std::abs(P / D);
            next += 1L << K;
            ++done;
        }
    }
    return static_cast<double>(acc / N);
}

inline PiecewiseLinear random_piecewise_linear(std::mt19937_64& rng, int max_nodes = 8,
                                               double amplitude = 1.0) {
    std::uniform_int_distribution<int> nn(2, max_nodes);
    std::uniform_real_distribution<double> uv(-amplitude, amplitude);
    int K = nn(rng);
    std::vector<Rational> breaks;
    std::vector<double> nodes;
    for (int i = 0; i <= K; ++i) {
        breaks.push_back(make_rational(i, K));
        nodes.push_back(uv(rng));
    }
    return PiecewiseLinear(std::move(breaks), std::move(nodes));
}

// Random Lip1 function: unit-capped slopes and sup norm.
inline LipschitzFunction random_lip1(std::mt19937_64& rng, int max_nodes = 8) {
    PiecewiseLinear p = random_piecewise_linear(rng, max_nodes, 1.0);
    double scale = std::max(p.max_abs_slope(), p.max_abs_node());
    if (scale > 1.0) {
        std::vector<double> nodes = p.node_values();
        for (auto& v : nodes) v /= scale;
        p = PiecewiseLinear(p.breakpoints(), std::move(nodes));
    }
    return LipschitzFunction::from(std::move(p));
}

inline SignSequence random_signs(std::mt19937_64& rng, int N, bool allow_zero = true) {
    std::uniform_int_distribution<int> s(allow_zero ? -1 : 0, 1);
    std::vector<int> e(N);
    for (auto& v : e) {
        int x = s(rng);
        v = allow_zero ? x : (x == 0 ? 1 : -1);
    }
    return SignSequence(std::move(e));
}

inline PiecewiseConstant random_haar_polynomial(std::mt19937_64& rng, int terms = 8) {
    std::uniform_int_distribution<int> pick(2, 32);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<std::pair<double, PiecewiseConstant>> parts;
    for (int t = 0; t < terms; ++t) parts.emplace_back(coef(rng), haar_function(pick(rng)));
    return linear_combination(parts);
}

}  // namespace testutil
