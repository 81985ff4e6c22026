#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "confactor/factors.hpp"
#include "confactor/piecewise.hpp"

namespace confactor {

// f_N(x) = int_0^x sign(int_0^y Q) dy: piecewise-linear with slopes in
// {-1, 0, +1}.
inline LipschitzFunction build_extremal(const PiecewiseConstant& Q) {
    return LipschitzFunction::from(antiderivative(sign_function(antiderivative(Q))));
}

// Trig variant: the primitive of Q is sampled on a uniform grid of 2^16
// cells, sign changes refined by bisection to 1e-12; f_N is piecewise-linear
// on the resulting grid.
inline LipschitzFunction build_extremal(const QFunction& Q) {
    if (Q.is_piecewise()) return build_extremal(Q.piecewise_form());
    const int cells = 1 << 16;
    auto P = [&Q](double t) { return Q.primitive(rational_from_double(t)); };

    std::vector<Rational> breaks;
    breaks.push_back(Rational(0));
    double prev_t = 0.0, prev_v = 0.0;
    for (int i = 1; i <= cells; ++i) {
        double t = static_cast<double>(i) / cells;
        double v = P(t);
        if ((prev_v < 0.0) != (v < 0.0) && prev_v != 0.0 && v != 0.0) {
            double lo = prev_t, hi = t, vlo = prev_v;
            while (hi - lo > 1e-12) {
                double mid = 0.5 * (lo + hi);
                double vm = P(mid);
                if ((vlo < 0.0) == (vm < 0.0)) { lo = mid; vlo = vm; }
                else hi = mid;
            }
            Rational root = rational_from_double(0.5 * (lo + hi));
            if (root > breaks.back() && root < Rational(1)) breaks.push_back(root);
        }
        prev_t = t;
        prev_v = v;
    }
    breaks.push_back(Rational(1));
    // sign per interval from the midpoint value
    std::vector<double> signs(breaks.size() - 1);
    double scale = 0.0;
    std::vector<double> mids(signs.size());
    for (std::size_t j = 0; j < signs.size(); ++j) {
        mids[j] = P(to_double((breaks[j] + breaks[j + 1]) / 2));
        scale = std::max(scale, std::abs(mids[j]));
    }
    for (std::size_t j = 0; j < signs.size(); ++j)
        signs[j] = std::abs(mids[j]) <= 1e-14 * scale ? 0.0 : (mids[j] > 0.0 ? 1.0 : -1.0);
    return LipschitzFunction::from(antiderivative(PiecewiseConstant(std::move(breaks), std::move(signs))));
}

inline double functional_value(const LipschitzFunction& f, const PiecewiseConstant& Q) {
    return integrate_product(f.representation, Q);
}

inline double functional_value(const LipschitzFunction& f, const QFunction& Q) {
    if (Q.is_piecewise()) return functional_value(f, Q.piecewise_form());
    long double acc = 0.0L;
    const auto& p = f.representation;
    for (const auto& term : Q.trig_terms()) {
        for (std::size_t i = 0; i + 1 < p.breakpoints().size(); ++i) {
            double a = to_double(p.breakpoints()[i]);
            double b = to_double(p.breakpoints()[i + 1]);
            acc += term.coef *
                   detail::trig_piece_integral(p.node_values()[i], p.slope(i), a, b, term.fn);
        }
    }
    return static_cast<double>(acc);
}

inline double lip1_norm(const LipschitzFunction& f) { return f.lip_seminorm + f.sup_norm; }

struct LowerBoundResult {
    double functional_value = 0.0;
    double d_n = 0.0;
    double deficit_bound = 0.0;
    bool holds = true;
};

struct ExtremalWitness {
    LipschitzFunction f_N;
    QFunction Q_N;
    LowerBoundResult bound;
};

// |int f_N Q_N| >= D_N - 3 N^{-1} ||Q_N||_2, with
// ||Q_N||_2 = (sum_{eps_k != 0} k d_k^2)^{1/2}. The 3/N constant combines
// the 2/N of the exceptional-set step with the 1/N of the Cauchy step.
inline ExtremalWitness lower_bound_check(const OrthonormalSystem& system,
                                         const WeightSequence& weights, const SignSequence& signs,
                                         int N) {
    if (N < 2) throw std::invalid_argument("lower_bound_check: N >= 2 required");
    ExtremalWitness w;
    w.Q_N = build_QN(system, weights, signs, N);
    w.f_N = build_extremal(w.Q_N);
    w.bound.functional_value = functional_value(w.f_N, w.Q_N);
    w.bound.d_n = compute_DN(system, weights, signs, N);
    long double sq = 0.0L;
    for (int k = 1; k <= N; ++k) {
        if (signs[k] == 0) continue;
        if (!system.is_trig() && system.slot_empty(k)) continue;
        long double d = weights(k);
        sq += d * d * k;
    }
    w.bound.deficit_bound = 3.0 / N * std::sqrt(static_cast<double>(sq));
    w.bound.holds =
        std::abs(w.bound.functional_value) >= w.bound.d_n - w.bound.deficit_bound - 1e-10;
    return w;
}

}  // namespace confactor
