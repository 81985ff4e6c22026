#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confactor/ons.hpp"
#include "confactor/piecewise.hpp"
#include "confactor/rational.hpp"

namespace confactor {

// Bounded positive weight sequence d(k).
class WeightSequence {
public:
    enum class Family { constant, logpow, power, custom };

    static WeightSequence constant(double c) {
        if (!(c > 0)) throw std::invalid_argument("weights const: c > 0 required");
        return WeightSequence(Family::constant, c);
    }
    // d(k) = 1/log2^{1+eps}(k+1); the base-2 log makes d(2^s) = s^{-(1+eps)}.
    static WeightSequence logpow(double eps) {
        if (!(eps > 0)) throw std::invalid_argument("weights logpow: eps > 0 required");
        return WeightSequence(Family::logpow, eps);
    }
    // d(k) = k^gamma, gamma <= 0 (boundedness).
    static WeightSequence power(double gamma) {
        if (gamma > 0) throw std::invalid_argument("weights power: gamma <= 0 required (boundedness)");
        return WeightSequence(Family::power, gamma);
    }
    static WeightSequence custom(std::vector<double> table) {
        if (table.empty()) throw std::invalid_argument("weights custom: empty table");
        for (double v : table)
            if (!(v > 0)) throw std::invalid_argument("weights custom: entries must be positive");
        WeightSequence w(Family::custom, 0.0);
        w.table_ = std::move(table);
        return w;
    }

    double operator()(int k) const {
        switch (family_) {
            case Family::constant: return param_;
            case Family::logpow: return 1.0 / std::pow(std::log2(static_cast<double>(k) + 1.0), 1.0 + param_);
            case Family::power: return std::pow(static_cast<double>(k), param_);
            case Family::custom:
                if (k < 1 || static_cast<std::size_t>(k) > table_.size())
                    throw std::out_of_range("weights custom: index " + std::to_string(k) + " out of table");
                return table_[k - 1];
        }
        throw std::logic_error("unreachable");
    }

    Family family() const { return family_; }
    double param() const { return param_; }
    const std::vector<double>& table() const { return table_; }

private:
    WeightSequence(Family f, double p) : family_(f), param_(p) {}
    Family family_;
    double param_;
    std::vector<double> table_;
};

// Element of the class Delta: entries in {-1, 0, +1}.
struct SignSequence {
    std::vector<int> entries;

    SignSequence() = default;
    explicit SignSequence(std::vector<int> e) : entries(std::move(e)) {
        for (int v : entries)
            if (v < -1 || v > 1) throw std::invalid_argument("sign sequence: entries must be in {-1,0,1}");
    }

    static SignSequence ones(int N) { return SignSequence(std::vector<int>(N, 1)); }
    static SignSequence zeros(int N) { return SignSequence(std::vector<int>(N, 0)); }
    static SignSequence rademacher(const Rational& t, int N) {
        return SignSequence(rademacher_signs(t, N));
    }

    int size() const { return static_cast<int>(entries.size()); }
    int operator[](int k) const { return entries[k - 1]; }  // 1-based like the index k
};

// Q_N(x, eps) = sum d_k k^{1/2} phi_k(x) eps_k. Piecewise-constant for the
// step-function systems, a closed-form trig sum for the trigonometric one.
class QFunction {
public:
    struct TrigTerm {
        double coef;
        ClosedFormTrig fn;
    };

    static QFunction piecewise(PiecewiseConstant pc) {
        QFunction q;
        q.pc_ = std::move(pc);
        return q;
    }
    static QFunction trig_sum(std::vector<TrigTerm> terms) {
        QFunction q;
        q.trig_ = std::move(terms);
        return q;
    }

    bool is_piecewise() const { return pc_.has_value(); }
    const PiecewiseConstant& piecewise_form() const {
        if (!pc_) throw std::logic_error("QFunction: no piecewise form");
        return *pc_;
    }
    const std::vector<TrigTerm>& trig_terms() const { return trig_; }

    double value(double x) const {
        if (pc_) return pc_->value_at(x);
        double v = 0.0;
        for (const auto& t : trig_) v += t.coef * t.fn.value(x);
        return v;
    }

    double primitive(const Rational& t) const {
        if (pc_) return antiderivative(*pc_).value_at(t);
        double tt = to_double(t), v = 0.0;
        for (const auto& term : trig_) v += term.coef * term.fn.primitive(tt);
        return v;
    }

    double primitive(double t) const { return primitive(rational_from_double(t)); }

    // Exact for step functions; composite Simpson for the trig sum.
    double l2_norm_sq() const {
        if (pc_) return confactor::l2_norm_sq(*pc_);
        const int panels = 1 << 14;
        long double acc = 0.0L;
        double h = 1.0 / panels;
        auto sq = [this](double x) { double v = value(x); return static_cast<long double>(v) * v; };
        for (int i = 0; i < panels; ++i) {
            double a = i * h;
            acc += (sq(a) + 4.0L * sq(a + 0.5 * h) + sq(a + h)) * (h / 6.0);
        }
        return static_cast<double>(acc);
    }

private:
    std::optional<PiecewiseConstant> pc_;
    std::vector<TrigTerm> trig_;
};

inline QFunction build_QN(const OrthonormalSystem& system, const WeightSequence& weights,
                          const SignSequence& signs, int N) {
    if (signs.size() < N) throw std::invalid_argument("build_QN: sign sequence shorter than N");
    if (system.is_trig()) {
        std::vector<QFunction::TrigTerm> terms;
        for (int k = 1; k <= N; ++k) {
            if (signs[k] == 0) continue;
            terms.push_back({weights(k) * std::sqrt(static_cast<double>(k)) * signs[k],
                             system.trig_function(k)});
        }
        return QFunction::trig_sum(std::move(terms));
    }
    std::vector<std::pair<double, PiecewiseConstant>> terms;
    for (int k = 1; k <= N; ++k) {
        if (signs[k] == 0 || system.slot_empty(k)) continue;
        terms.emplace_back(weights(k) * std::sqrt(static_cast<double>(k)) * signs[k],
                           system.function(k));
    }
    return QFunction::piecewise(linear_combination(terms));
}

// D_N(eps) = (1/N) sum_{i=1}^{N-1} |int_0^{i/N} Q_N|.
inline double compute_DN(const OrthonormalSystem& system, const WeightSequence& weights,
                         const SignSequence& signs, int N) {
    if (N < 1) throw std::invalid_argument("compute_DN: N >= 1 required");
    if (N == 1) return 0.0;
    QFunction q = build_QN(system, weights, signs, N);
    long double acc = 0.0L;
    if (q.is_piecewise()) {
        PiecewiseLinear P = antiderivative(q.piecewise_form());
        for (int i = 1; i < N; ++i) acc += std::abs(P.value_at(make_rational(i, N)));
    } else {
        for (int i = 1; i < N; ++i) acc += std::abs(q.primitive(make_rational(i, N)));
    }
    return static_cast<double>(acc / N);
}

// B[k][i] = d_k k^{1/2} \int_0^{i/N} phi_k, stored sparse by row. Makes
// D_N(eps) = (1/N) sum_i |sum_k B[k][i] eps_k| cheap to evaluate and to
// update under single sign flips.
class PrimitiveMatrix {
public:
    struct Entry {
        int i;  // 1..N-1
        double value;
    };

    static PrimitiveMatrix build(const OrthonormalSystem& system, const WeightSequence& weights,
                                 int N) {
        PrimitiveMatrix m;
        m.N_ = N;
        m.rows_.resize(N);
        for (int k = 1; k <= N; ++k) {
            double c = weights(k) * std::sqrt(static_cast<double>(k));
            if (system.is_trig()) {
                ClosedFormTrig fn = system.trig_function(k);
                for (int i = 1; i < N; ++i) {
                    double v = c * fn.primitive(static_cast<double>(i) / N);
                    if (v != 0.0) m.rows_[k - 1].push_back({i, v});
                }
            } else {
                if (system.slot_empty(k)) continue;
                PiecewiseLinear P = antiderivative(system.function(k));
                for (int i = 1; i < N; ++i) {
                    double v = c * P.value_at(make_rational(i, N));
                    if (v != 0.0) m.rows_[k - 1].push_back({i, v});
                }
            }
        }
        return m;
    }

    int N() const { return N_; }
    const std::vector<Entry>& row(int k) const { return rows_[k - 1]; }

    // S_i = sum_k B[k][i] eps_k, i = 1..N-1 (index 0 unused).
    std::vector<double> column_sums(const std::vector<int>& eps) const {
        std::vector<double> s(N_, 0.0);
        for (int k = 1; k <= N_; ++k) {
            if (eps[k - 1] == 0) continue;
            for (const auto& e : rows_[k - 1]) s[e.i] += eps[k - 1] * e.value;
        }
        return s;
    }

    double dn(const SignSequence& signs) const { return dn_real_columns(column_sums(signs.entries)); }

    // D_N extended to real-valued eps (used by the convexity property).
    double dn_real(const std::vector<double>& eps) const {
        std::vector<double> s(N_, 0.0);
        for (int k = 1; k <= N_; ++k) {
            if (eps[k - 1] == 0.0) continue;
            for (const auto& e : rows_[k - 1]) s[e.i] += eps[k - 1] * e.value;
        }
        return dn_real_columns(s);
    }

    // (1/N) sum |B[k][i]|: an upper bound for D_N over the whole cube.
    double upper_bound() const {
        long double acc = 0.0L;
        for (const auto& r : rows_)
            for (const auto& e : r) acc += std::abs(e.value);
        return static_cast<double>(acc / N_);
    }

private:
    double dn_real_columns(const std::vector<double>& s) const {
        long double acc = 0.0L;
        for (int i = 1; i < N_; ++i) acc += std::abs(s[i]);
        return static_cast<double>(acc / N_);
    }

    int N_ = 0;
    std::vector<std::vector<Entry>> rows_;
};

// Exceptional set: i is exceptional iff the primitive P of Q
// vanishes somewhere on [(i-1)/n, i/n] while P(i/n) != 0, or P changes
// strict sign inside the interval. Decided from the piecewise-linear
// extrema of P; node values within 1e-14 * max|P| count as zero.
inline std::vector<int> exceptional_set(const PiecewiseConstant& Q, int n) {
    if (n < 2) throw std::invalid_argument("exceptional_set: n >= 2 required");
    PiecewiseLinear P = antiderivative(Q);
    const double tol = 1e-14 * P.max_abs_node();
    auto cls = [tol](double v) -> int { return std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1); };

    std::vector<Rational> cuts;
    cuts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) cuts.push_back(make_rational(i, n));
    auto grid = detail::merge_grids({&P.breakpoints(), &cuts});

    std::vector<int> E;
    std::size_t g = 0;
    for (int i = 1; i < n; ++i) {
        const Rational& right = cuts[i];
        double lo = P.value_at(cuts[i - 1]), hi = lo;
        while (g + 1 < grid.size() && grid[g + 1] <= right) {
            ++g;
            double v = P.value_at(grid[g]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        int end_sign = cls(P.value_at(right));
        bool touches_zero = cls(lo) <= 0 && cls(hi) >= 0;
        bool strict_cross = cls(lo) < 0 && cls(hi) > 0;
        if ((touches_zero && end_sign != 0) || strict_cross) E.push_back(i);
    }
    return E;
}

struct Lemma1Result {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

// Eq: sum_{i in E_n} |P(i/n)| <= (int Q^2)^{1/2}.
inline Lemma1Result lemma1_check(const PiecewiseConstant& Q, int n) {
    Lemma1Result r;
    PiecewiseLinear P = antiderivative(Q);
    long double lhs = 0.0L;
    for (int i : exceptional_set(Q, n)) lhs += std::abs(P.value_at(make_rational(i, n)));
    r.lhs = static_cast<double>(lhs);
    r.rhs = std::sqrt(l2_norm_sq(Q));
    r.holds = r.lhs <= r.rhs + 1e-12;
    return r;
}

// |int Q_N^2 - sum_{eps_k != 0, slot nonempty} k d_k^2|.
inline double parseval_check(const OrthonormalSystem& system, const WeightSequence& weights,
                             const SignSequence& signs, int N) {
    QFunction q = build_QN(system, weights, signs, N);
    long double expected = 0.0L;
    for (int k = 1; k <= N; ++k) {
        if (signs[k] == 0) continue;
        if (!system.is_trig() && system.slot_empty(k)) continue;
        long double d = weights(k);
        expected += d * d * k;
    }
    return std::abs(q.l2_norm_sq() - static_cast<double>(expected));
}

namespace detail {

// \int_a^b (f_lin) * sqrt2 trig on one linear piece of f, closed form.
inline double trig_piece_integral(double fa, double slope, double a, double b,
                                  const ClosedFormTrig& fn) {
    double w = 2.0 * std::numbers::pi * fn.frequency;
    auto f = [fa, slope, a](double x) { return fa + slope * (x - a); };
    double v;
    if (fn.phase == ClosedFormTrig::Phase::cos) {
        auto anti = [&](double x) { return f(x) * std::sin(w * x) / w + slope * std::cos(w * x) / (w * w); };
        v = anti(b) - anti(a);
    } else {
        auto anti = [&](double x) { return -f(x) * std::cos(w * x) / w + slope * std::sin(w * x) / (w * w); };
        v = anti(b) - anti(a);
    }
    return std::numbers::sqrt2 * v;
}

}  // namespace detail

// c_n(f) = int_0^1 f phi_n.
inline double fourier_coefficient(const LipschitzFunction& f, const OrthonormalSystem& system,
                                  int n) {
    if (system.is_trig()) {
        ClosedFormTrig fn = system.trig_function(n);
        const auto& p = f.representation;
        long double acc = 0.0L;
        for (std::size_t i = 0; i + 1 < p.breakpoints().size(); ++i) {
            double a = to_double(p.breakpoints()[i]);
            double b = to_double(p.breakpoints()[i + 1]);
            acc += detail::trig_piece_integral(p.node_values()[i], p.slope(i), a, b, fn);
        }
        return static_cast<double>(acc);
    }
    if (system.slot_empty(n)) return 0.0;
    return integrate_product(f.representation, system.function(n));
}

// S_m = sum_{k<=m} |c_k| k^{1/2} d_k, m = 1..N.
inline std::vector<double> weighted_partial_sums(const LipschitzFunction& f,
                                                 const OrthonormalSystem& system,
                                                 const WeightSequence& weights, int N) {
    std::vector<double> s(N);
    long double acc = 0.0L;
    for (int k = 1; k <= N; ++k) {
        acc += std::abs(fourier_coefficient(f, system, k)) * std::sqrt(static_cast<double>(k)) *
               weights(k);
        s[k - 1] = static_cast<double>(acc);
    }
    return s;
}

// Residual of the summation-by-parts identity
//   int f F = sum_{i<N} (f(i/N) - f((i+1)/N)) Phi(i/N)
//           + sum_{i<=N} int_{(i-1)/N}^{i/N} (f - f(i/N)) F
//           + f(1) int F.
inline double sbp_residual(const PiecewiseLinear& f, const PiecewiseConstant& F, int N) {
    if (N < 2) throw std::invalid_argument("sbp_residual: N >= 2 required");
    double lhs = integrate_product(f, F);
    PiecewiseLinear Phi = antiderivative(F);
    long double rhs = 0.0L;
    for (int i = 1; i < N; ++i) {
        rhs += (static_cast<long double>(f.value_at(make_rational(i, N))) -
                f.value_at(make_rational(i + 1, N))) *
               Phi.value_at(make_rational(i, N));
    }
    for (int i = 1; i <= N; ++i) {
        Rational a = make_rational(i - 1, N), b = make_rational(i, N);
        double fi = f.value_at(b);
        rhs += integrate_product_over(f, F, a, b);
        rhs -= static_cast<long double>(fi) *
               (Phi.value_at(b) - Phi.value_at(a));
    }
    rhs += static_cast<long double>(f.value_at(Rational(1))) * Phi.value_at(Rational(1));
    return std::abs(lhs - static_cast<double>(rhs));
}

// Fourier coefficients with the Bessel bound as a sanity contract.
struct FourierCoefficients {
    std::vector<double> c;  // c[n-1] = c_n(f)

    static FourierCoefficients compute(const LipschitzFunction& f, const OrthonormalSystem& system,
                                       int N) {
        FourierCoefficients out;
        out.c.resize(N);
        for (int n = 1; n <= N; ++n) out.c[n - 1] = fourier_coefficient(f, system, n);
        return out;
    }

    double sum_sq() const {
        long double acc = 0.0L;
        for (double v : c) acc += static_cast<long double>(v) * v;
        return static_cast<double>(acc);
    }
};

}  // namespace confactor
