#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confactor/rational.hpp"

namespace confactor {

namespace detail {

inline void check_grid(const std::vector<Rational>& breaks) {
    if (breaks.size() < 2) throw std::invalid_argument("piecewise: need at least two breakpoints");
    if (breaks.front() != 0) throw std::invalid_argument("piecewise: first breakpoint must be 0");
    if (breaks.back() != 1) throw std::invalid_argument("piecewise: last breakpoint must be 1");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw std::invalid_argument("piecewise: breakpoints must be strictly increasing");
}

// Sorted union of several breakpoint grids.
inline std::vector<Rational> merge_grids(const std::vector<const std::vector<Rational>*>& grids) {
    std::vector<Rational> all;
    std::size_t total = 0;
    for (const auto* g : grids) total += g->size();
    all.reserve(total);
    for (const auto* g : grids) all.insert(all.end(), g->begin(), g->end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace detail

// Step function on [0,1]: exact rational breakpoints, double values on the
// open intervals between them. Canonical: adjacent equal values are merged
// (exact double equality, so the representation is deterministic).
class PiecewiseConstant {
public:
    PiecewiseConstant() : breaks_{Rational(0), Rational(1)}, values_{0.0} {}

    PiecewiseConstant(std::vector<Rational> breaks, std::vector<double> values) {
        detail::check_grid(breaks);
        if (values.size() + 1 != breaks.size())
            throw std::invalid_argument("piecewise-constant: values.count must be breakpoints.count - 1");
        breaks_.push_back(breaks.front());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values_.empty() && values_.back() == values[i]) {
                breaks_.back() = breaks[i + 1];  // merge: extend previous interval
                continue;
            }
            values_.push_back(values[i]);
            breaks_.push_back(breaks[i + 1]);
        }
    }

    static PiecewiseConstant constant(double c) {
        return PiecewiseConstant({Rational(0), Rational(1)}, {c});
    }

    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    // Index of the piece containing t; breakpoints resolve to the right-hand
    // piece, t = 1 resolves to the last piece.
    std::size_t piece_index(const Rational& t) const {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        if (it == breaks_.begin()) throw std::out_of_range("piecewise: t < 0");
        std::size_t idx = static_cast<std::size_t>(it - breaks_.begin()) - 1;
        if (idx >= values_.size()) {
            if (t == breaks_.back()) return values_.size() - 1;
            throw std::out_of_range("piecewise: t > 1");
        }
        return idx;
    }

    double value_at(const Rational& t) const { return values_[piece_index(t)]; }
    double value_at(double t) const { return value_at(rational_from_double(t)); }

private:
    std::vector<Rational> breaks_;
    std::vector<double> values_;
};

// Continuous piecewise-linear function on [0,1]: one node value per
// breakpoint, linear in between.
class PiecewiseLinear {
public:
    PiecewiseLinear() : breaks_{Rational(0), Rational(1)}, nodes_{0.0, 0.0} {}

    PiecewiseLinear(std::vector<Rational> breaks, std::vector<double> nodes)
        : breaks_(std::move(breaks)), nodes_(std::move(nodes)) {
        detail::check_grid(breaks_);
        if (nodes_.size() != breaks_.size())
            throw std::invalid_argument("piecewise-linear: one node value per breakpoint");
    }

    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<double>& node_values() const { return nodes_; }
    std::size_t piece_count() const { return breaks_.size() - 1; }

    double slope(std::size_t i) const {
        return (nodes_[i + 1] - nodes_[i]) / to_double(breaks_[i + 1] - breaks_[i]);
    }

    double value_at(const Rational& t) const {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        if (it == breaks_.begin()) throw std::out_of_range("piecewise: t < 0");
        std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
        if (i + 1 >= breaks_.size()) {
            if (t == breaks_.back()) return nodes_.back();
            throw std::out_of_range("piecewise: t > 1");
        }
        Rational frac = (t - breaks_[i]) / (breaks_[i + 1] - breaks_[i]);
        return nodes_[i] + (nodes_[i + 1] - nodes_[i]) * to_double(frac);
    }
    double value_at(double t) const { return value_at(rational_from_double(t)); }

    double max_abs_node() const {
        double m = 0.0;
        for (double v : nodes_) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_slope() const {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) m = std::max(m, std::abs(slope(i)));
        return m;
    }

private:
    std::vector<Rational> breaks_;
    std::vector<double> nodes_;
};

// Lip1 element carried as a piecewise-linear representative. Seminorm and
// sup norm are exact for this class.
struct LipschitzFunction {
    PiecewiseLinear representation;
    double lip_seminorm = 0.0;
    double sup_norm = 0.0;

    static LipschitzFunction from(PiecewiseLinear p) {
        LipschitzFunction f;
        f.lip_seminorm = p.max_abs_slope();
        f.sup_norm = p.max_abs_node();
        f.representation = std::move(p);
        return f;
    }

    double lip1_norm() const { return lip_seminorm + sup_norm; }
};

// P with P(0) = 0 and P' = F on every open interval.
inline PiecewiseLinear antiderivative(const PiecewiseConstant& F) {
    const auto& b = F.breakpoints();
    std::vector<double> nodes(b.size());
    long double acc = 0.0L;
    nodes[0] = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        acc += static_cast<long double>(F.values()[i]) * static_cast<long double>(to_double(b[i + 1] - b[i]));
        nodes[i + 1] = static_cast<double>(acc);
    }
    return PiecewiseLinear(b, std::move(nodes));
}

// Exact \int_a^b f*F on the merged grid; each cell contributes
// F-value times the trapezoid area of f.
inline double integrate_product_over(const PiecewiseLinear& f, const PiecewiseConstant& F,
                                     const Rational& a, const Rational& b) {
    if (a > b) throw std::invalid_argument("integrate_product_over: a > b");
    std::vector<Rational> endpoints{a, b};
    auto grid = detail::merge_grids({&f.breakpoints(), &F.breakpoints(), &endpoints});
    long double acc = 0.0L;
    double left_val = 0.0;
    bool have_left = false;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        if (grid[j] < a || grid[j + 1] > b) { have_left = false; continue; }
        double fa = have_left ? left_val : f.value_at(grid[j]);
        double fb = f.value_at(grid[j + 1]);
        double len = to_double(grid[j + 1] - grid[j]);
        acc += static_cast<long double>(F.value_at(grid[j])) * 0.5L * (fa + fb) * len;
        left_val = fb;
        have_left = true;
    }
    return static_cast<double>(acc);
}

inline double integrate_product(const PiecewiseLinear& f, const PiecewiseConstant& F) {
    return integrate_product_over(f, F, Rational(0), Rational(1));
}

// sign(P) as a step function with values in {-1, 0, +1}. Roots of linear
// pieces become breakpoints, rounded to denominator 2^63. Node values with
// |v| <= 1e-14 * max|node| count as zero.
inline PiecewiseConstant sign_function(const PiecewiseLinear& P) {
    const auto& b = P.breakpoints();
    const auto& n = P.node_values();
    const double tol = 1e-14 * P.max_abs_node();
    auto cls = [tol](double v) -> int { return std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1); };

    std::vector<Rational> breaks{b.front()};
    std::vector<double> values;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        int sa = cls(n[i]), sb = cls(n[i + 1]);
        if (sa * sb < 0) {
            // strict crossing: split at the root
            Rational frac = rational_from_double(-n[i] / (n[i + 1] - n[i]));
            Rational root = round_to_dyadic63(b[i] + (b[i + 1] - b[i]) * frac);
            if (root <= b[i]) root = b[i] + (b[i + 1] - b[i]) / 2;  // degenerate rounding guard
            if (root >= b[i + 1]) root = b[i] + (b[i + 1] - b[i]) / 2;
            values.push_back(sa);
            breaks.push_back(root);
            values.push_back(sb);
            breaks.push_back(b[i + 1]);
        } else {
            int s;
            if (sa == 0 && sb == 0) s = 0;
            else if (sa == 0) s = sb;
            else if (sb == 0) s = sa;
            else s = sa;  // sa == sb
            values.push_back(s);
            breaks.push_back(b[i + 1]);
        }
    }
    return PiecewiseConstant(std::move(breaks), std::move(values));
}

inline double l2_norm_sq(const PiecewiseConstant& F) {
    const auto& b = F.breakpoints();
    long double acc = 0.0L;
    for (std::size_t i = 0; i < F.piece_count(); ++i) {
        long double v = F.values()[i];
        acc += v * v * static_cast<long double>(to_double(b[i + 1] - b[i]));
    }
    return static_cast<double>(acc);
}

inline double integral(const PiecewiseConstant& F) {
    const auto& b = F.breakpoints();
    long double acc = 0.0L;
    for (std::size_t i = 0; i < F.piece_count(); ++i)
        acc += static_cast<long double>(F.values()[i]) * to_double(b[i + 1] - b[i]);
    return static_cast<double>(acc);
}

// Exact sum of coefficient * step-function on the merged grid.
inline PiecewiseConstant linear_combination(
    const std::vector<std::pair<double, const PiecewiseConstant*>>& terms) {
    if (terms.empty()) return PiecewiseConstant();
    std::vector<const std::vector<Rational>*> grids;
    grids.reserve(terms.size());
    for (const auto& [c, F] : terms) grids.push_back(&F->breakpoints());
    auto grid = detail::merge_grids(grids);

    std::vector<std::size_t> cursor(terms.size(), 0);
    std::vector<double> values(grid.size() - 1);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        long double acc = 0.0L;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& tb = terms[t].second->breakpoints();
            auto& c = cursor[t];
            while (c + 2 < tb.size() && tb[c + 1] <= grid[j]) ++c;
            acc += static_cast<long double>(terms[t].first) * terms[t].second->values()[c];
        }
        values[j] = static_cast<double>(acc);
    }
    return PiecewiseConstant(std::move(grid), std::move(values));
}

inline PiecewiseConstant linear_combination(
    const std::vector<std::pair<double, PiecewiseConstant>>& terms) {
    std::vector<std::pair<double, const PiecewiseConstant*>> views;
    views.reserve(terms.size());
    for (const auto& [c, F] : terms) views.emplace_back(c, &F);
    return linear_combination(views);
}

}  // namespace confactor
