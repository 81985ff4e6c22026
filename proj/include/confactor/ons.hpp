#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confactor/piecewise.hpp"
#include "confactor/rational.hpp"

namespace confactor {

// sqrt(2)*cos(2*pi*n*x) or sqrt(2)*sin(2*pi*n*x); primitives in closed form.
struct ClosedFormTrig {
    enum class Phase { cos, sin };
    int frequency = 1;
    Phase phase = Phase::cos;

    double value(double x) const {
        double w = 2.0 * std::numbers::pi * frequency * x;
        return std::numbers::sqrt2 * (phase == Phase::cos ? std::cos(w) : std::sin(w));
    }

    // \int_0^t value
    double primitive(double t) const {
        double w = 2.0 * std::numbers::pi * frequency;
        if (phase == Phase::cos) return std::numbers::sqrt2 * std::sin(w * t) / w;
        return std::numbers::sqrt2 * (1.0 - std::cos(w * t)) / w;
    }
};

// Haar function in the standard enumeration: k = 2^s + l, 1 <= l <= 2^s
// (k >= 2), chi_1 == 1.
inline PiecewiseConstant haar_function(int k) {
    if (k < 1) throw std::invalid_argument("haar: k >= 1 required");
    if (k == 1) return PiecewiseConstant::constant(1.0);
    int s = 0;
    while ((2 << s) < k) ++s;  // s = floor(log2(k-1))
    long l = k - (1L << s);
    double h = (s % 2 == 0) ? std::ldexp(1.0, s / 2) : std::numbers::sqrt2 * std::ldexp(1.0, (s - 1) / 2);
    long den = 1L << (s + 1);
    std::vector<Rational> breaks;
    std::vector<double> values;
    breaks.push_back(Rational(0));
    if (l > 1) { values.push_back(0.0); breaks.push_back(make_rational(2 * l - 2, den)); }
    values.push_back(h);
    breaks.push_back(make_rational(2 * l - 1, den));
    values.push_back(-h);
    breaks.push_back(make_rational(2 * l, den));
    if (2 * l < den) { values.push_back(0.0); breaks.push_back(Rational(1)); }
    return PiecewiseConstant(std::move(breaks), std::move(values));
}

// Walsh-Paley: w_1 == 1; w_k = product of Rademacher functions over the set
// bits of k-1, constant on dyadic intervals of length 2^-B.
inline PiecewiseConstant walsh_function(int k) {
    if (k < 1) throw std::invalid_argument("walsh: k >= 1 required");
    if (k == 1) return PiecewiseConstant::constant(1.0);
    unsigned n = static_cast<unsigned>(k - 1);
    int B = 0;
    while ((1u << B) <= n) ++B;
    if (B > 24) throw std::invalid_argument("walsh: index too large");
    long cells = 1L << B;
    std::vector<Rational> breaks;
    std::vector<double> values;
    breaks.reserve(cells + 1);
    breaks.push_back(Rational(0));
    for (long j = 0; j < cells; ++j) {
        int sign = 1;
        for (int b = 0; b < B; ++b)
            if ((n >> b) & 1u)
                if ((j >> (B - 1 - b)) & 1L) sign = -sign;
        values.push_back(sign);
        breaks.push_back(make_rational(j + 1, cells));
    }
    return PiecewiseConstant(std::move(breaks), std::move(values));
}

// r_k(x) = sign(sin(2^k pi x)): +/-1 alternating on intervals of length 2^-k.
inline PiecewiseConstant rademacher_function(int k) {
    if (k < 1 || k > 22) throw std::invalid_argument("rademacher: 1 <= k <= 22 required");
    long cells = 1L << k;
    std::vector<Rational> breaks;
    std::vector<double> values;
    breaks.push_back(Rational(0));
    for (long j = 0; j < cells; ++j) {
        values.push_back(j % 2 == 0 ? 1.0 : -1.0);
        breaks.push_back(make_rational(j + 1, cells));
    }
    return PiecewiseConstant(std::move(breaks), std::move(values));
}

// eps_k = sign(sin(2^k pi t)); exact: zero whenever 2^k t is an integer.
inline std::vector<int> rademacher_signs(const Rational& t, int N) {
    if (!(t > 0) || t > 1) throw std::invalid_argument("rademacher_signs: t in (0,1] required");
    std::vector<int> eps(N);
    Rational x = t;
    for (int k = 0; k < N; ++k) {
        x = (k == 0) ? t * 2 : x * 2;
        // reduce mod 2
        mpz_class q, r;
        mpz_class den2 = x.get_den() * 2;
        mpz_fdiv_r(r.get_mpz_t(), x.get_num().get_mpz_t(), den2.get_mpz_t());
        Rational f(r, x.get_den());
        f.canonicalize();
        x = f;
        if (f == 0 || f == 1) eps[k] = 0;
        else eps[k] = (f < 1) ? 1 : -1;
    }
    return eps;
}

enum class SystemKind { haar, walsh, trig, rademacher, custom };

inline SystemKind system_kind_from_string(const std::string& s) {
    if (s == "haar") return SystemKind::haar;
    if (s == "walsh") return SystemKind::walsh;
    if (s == "trig") return SystemKind::trig;
    if (s == "rademacher") return SystemKind::rademacher;
    throw std::invalid_argument("unknown system kind '" + s + "'");
}

// Indexed family k -> phi_k with exact primitives. With mean_zero_only the
// functions with nonzero integral keep their slot k but contribute the zero
// function, so the k^{1/2} weight indexing is unchanged.
class OrthonormalSystem {
public:
    static OrthonormalSystem haar(bool mean_zero_only = true) {
        return OrthonormalSystem(SystemKind::haar, mean_zero_only);
    }
    static OrthonormalSystem walsh(bool mean_zero_only = true) {
        return OrthonormalSystem(SystemKind::walsh, mean_zero_only);
    }
    static OrthonormalSystem trig() { return OrthonormalSystem(SystemKind::trig, true); }
    static OrthonormalSystem rademacher() { return OrthonormalSystem(SystemKind::rademacher, true); }

    // Loader contract: rejects families that are not orthonormal to 1e-10.
    static OrthonormalSystem custom(std::vector<PiecewiseConstant> fns, bool mean_zero_only = false) {
        OrthonormalSystem sys(SystemKind::custom, mean_zero_only);
        for (std::size_t j = 0; j < fns.size(); ++j) {
            for (std::size_t k = j; k < fns.size(); ++k) {
                double ip = inner_product(fns[j], fns[k]);
                double target = (j == k) ? 1.0 : 0.0;
                if (std::abs(ip - target) > 1e-10)
                    throw std::invalid_argument("custom system: not orthonormal at pair (" +
                                                std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
            }
        }
        sys.custom_ = std::move(fns);
        return sys;
    }

    SystemKind kind() const { return kind_; }
    bool mean_zero_only() const { return mean_zero_only_; }
    bool is_trig() const { return kind_ == SystemKind::trig; }
    std::size_t custom_size() const { return custom_.size(); }

    // True when slot k carries the zero function (mean-zero filtering, or an
    // index past the end of a custom family).
    bool slot_empty(int k) const {
        if (k < 1) throw std::invalid_argument("system: k >= 1 required");
        switch (kind_) {
            case SystemKind::haar:
            case SystemKind::walsh:
                return mean_zero_only_ && k == 1;
            case SystemKind::trig:
            case SystemKind::rademacher:
                return false;
            case SystemKind::custom: {
                if (static_cast<std::size_t>(k) > custom_.size()) return true;
                if (!mean_zero_only_) return false;
                return std::abs(integral(custom_[k - 1])) > 1e-12;
            }
        }
        return false;
    }

    PiecewiseConstant function(int k) const {
        if (slot_empty(k)) return PiecewiseConstant();
        switch (kind_) {
            case SystemKind::haar: return haar_function(k);
            case SystemKind::walsh: return walsh_function(k);
            case SystemKind::rademacher: return rademacher_function(k);
            case SystemKind::custom: return custom_[k - 1];
            case SystemKind::trig:
                throw std::logic_error("trig system has no piecewise representation; use trig_function");
        }
        throw std::logic_error("unreachable");
    }

    // phi_{2m-1} = sqrt2 cos(2 pi m x), phi_{2m} = sqrt2 sin(2 pi m x).
    ClosedFormTrig trig_function(int k) const {
        if (kind_ != SystemKind::trig) throw std::logic_error("trig_function: not a trig system");
        if (k < 1) throw std::invalid_argument("system: k >= 1 required");
        ClosedFormTrig t;
        t.frequency = (k + 1) / 2;
        t.phase = (k % 2 == 1) ? ClosedFormTrig::Phase::cos : ClosedFormTrig::Phase::sin;
        return t;
    }

    // \int_0^t phi_k
    double primitive(int k, const Rational& t) const {
        if (kind_ == SystemKind::trig) return trig_function(k).primitive(to_double(t));
        if (slot_empty(k)) return 0.0;
        return antiderivative(function(k)).value_at(t);
    }

    static double inner_product(const PiecewiseConstant& f, const PiecewiseConstant& g) {
        auto grid = detail::merge_grids({&f.breakpoints(), &g.breakpoints()});
        long double acc = 0.0L;
        std::size_t ci = 0, cj = 0;
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            const auto& fb = f.breakpoints();
            const auto& gb = g.breakpoints();
            while (ci + 2 < fb.size() && fb[ci + 1] <= grid[j]) ++ci;
            while (cj + 2 < gb.size() && gb[cj + 1] <= grid[j]) ++cj;
            acc += static_cast<long double>(f.values()[ci]) * g.values()[cj] *
                   to_double(grid[j + 1] - grid[j]);
        }
        return static_cast<double>(acc);
    }

private:
    OrthonormalSystem(SystemKind kind, bool mean_zero_only)
        : kind_(kind), mean_zero_only_(mean_zero_only) {}

    SystemKind kind_;
    bool mean_zero_only_;
    std::vector<PiecewiseConstant> custom_;
};

}  // namespace confactor
