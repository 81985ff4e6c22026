#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "confactor/factors.hpp"
#include "confactor/ons.hpp"
#include "confactor/piecewise.hpp"

namespace confactor {

// Finite family of N orthonormal step functions on a uniform grid of
// M = N+1 cells with prescribed inner products <f0, phi_n> = b * a_n.
struct PrescribedSystem {
    int N = 0;
    int M = 0;
    double b = 0.0;
    std::vector<double> targets;            // a_n
    std::vector<std::vector<double>> phi;   // phi[n][m]: cell values

    PiecewiseConstant function(int n) const {
        if (n < 1 || n > N) throw std::out_of_range("prescribed system: index out of range");
        std::vector<Rational> breaks;
        breaks.reserve(M + 1);
        for (int j = 0; j <= M; ++j) breaks.push_back(make_rational(j, M));
        return PiecewiseConstant(std::move(breaks), std::vector<double>(phi[n - 1]));
    }

    std::vector<PiecewiseConstant> functions() const {
        std::vector<PiecewiseConstant> out;
        out.reserve(N);
        for (int n = 1; n <= N; ++n) out.push_back(function(n));
        return out;
    }

    // max |<phi_j, phi_k> - delta_jk| over all pairs, computed on the cells.
    double gram_max_error() const {
        double worst = 0.0;
        for (int j = 0; j < N; ++j) {
            for (int k = j; k < N; ++k) {
                long double ip = 0.0L;
                for (int m = 0; m < M; ++m) ip += static_cast<long double>(phi[j][m]) * phi[k][m];
                ip /= M;
                worst = std::max(worst, std::abs(static_cast<double>(ip) - (j == k ? 1.0 : 0.0)));
            }
        }
        return worst;
    }
};

// Builds phi_n = beta_n u + sum_j C[n][j] e_j with u = f0/||f0||,
// beta_n = b a_n / ||f0||, (e_j) an orthonormal basis of the complement of
// u (via a Householder reflection) and C the symmetric square root of
// I - beta beta^T, available in closed form from the rank-one structure.
inline PrescribedSystem olevsky_construct(const std::vector<double>& a,
                                          const PiecewiseConstant& f0, double b) {
    const int N = static_cast<int>(a.size());
    if (N < 1) throw std::invalid_argument("olevsky: need at least one target coefficient");
    for (double v : a)
        if (!(v > 0)) throw std::invalid_argument("olevsky: targets must be positive");
    if (b < 0) throw std::invalid_argument("olevsky: b >= 0 required");
    const int M = N + 1;

    // f0 must be constant on every cell of the uniform grid.
    for (const auto& bp : f0.breakpoints()) {
        Rational scaled = bp * M;
        if (scaled.get_den() != 1)
            throw std::invalid_argument("olevsky: f0 is not representable on the uniform grid of " +
                                        std::to_string(M) + " cells");
    }
    std::vector<double> f0cells(M);
    for (int m = 0; m < M; ++m) f0cells[m] = f0.value_at(make_rational(2 * m + 1, 2 * M));

    long double f0sq = 0.0L, asq = 0.0L;
    for (double v : f0cells) f0sq += static_cast<long double>(v) * v;
    f0sq /= M;
    for (double v : a) asq += static_cast<long double>(v) * v;
    const double f0norm = std::sqrt(static_cast<double>(f0sq));
    const double anorm = std::sqrt(static_cast<double>(asq));
    if (f0norm == 0.0) throw std::invalid_argument("olevsky: f0 must be nonzero");

    std::vector<double> beta(N);
    long double s = 0.0L;
    for (int n = 0; n < N; ++n) {
        beta[n] = b * a[n] / f0norm;
        s += static_cast<long double>(beta[n]) * beta[n];
    }
    if (static_cast<double>(s) > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "olevsky: infeasible prescription; b must satisfy b <= ||f0||_2/||a||_2 = "
            << (f0norm / anorm);
        throw std::invalid_argument(msg.str());
    }
    const double ssafe = std::min(static_cast<double>(s), 1.0);

    // Euclidean coordinates: x_m = v_m / sqrt(M), so <f,g> = x . y.
    const double sqrtM = std::sqrt(static_cast<double>(M));
    std::vector<double> u(M);
    for (int m = 0; m < M; ++m) u[m] = f0cells[m] / f0norm / sqrtM;

    // Householder H = I - 2 w w^T / (w.w) with H e_1 = -sign(u_1) u.
    double sgn = u[0] >= 0.0 ? 1.0 : -1.0;
    std::vector<double> w(u);
    w[0] += sgn;  // w = u + sign(u_1) e_1
    long double wsq = 0.0L;
    for (double v : w) wsq += static_cast<long double>(v) * v;
    auto householder_col = [&](int col, std::vector<double>& out) {
        // out = H e_{col}
        long double dot = w[col];
        for (int m = 0; m < M; ++m) out[m] = 0.0;
        out[col] = 1.0;
        double f = static_cast<double>(2.0L * dot / wsq);
        for (int m = 0; m < M; ++m) out[m] -= f * w[m];
    };

    // Orthonormal basis of the complement of u: e_j = H e_{j+1}, j = 1..N.
    std::vector<std::vector<double>> basis(N, std::vector<double>(M));
    for (int j = 0; j < N; ++j) householder_col(j + 1, basis[j]);

    // C = I - tau beta beta^T, tau = 1/(1 + sqrt(1 - |beta|^2)).
    const double tau = 1.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - ssafe)));

    PrescribedSystem sys;
    sys.N = N;
    sys.M = M;
    sys.b = b;
    sys.targets = a;
    sys.phi.assign(N, std::vector<double>(M));
    // (C E)[n] = e_n - tau beta_n (beta . E)
    std::vector<long double> betaE(M, 0.0L);
    for (int j = 0; j < N; ++j)
        for (int m = 0; m < M; ++m) betaE[m] += static_cast<long double>(beta[j]) * basis[j][m];
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < M; ++m) {
            long double x = static_cast<long double>(beta[n]) * u[m] + basis[n][m] -
                            static_cast<long double>(tau) * beta[n] * betaE[m];
            sys.phi[n][m] = static_cast<double>(x * sqrtM);  // back to function values
        }
    }
    return sys;
}

// Default b: 0.9 ||f0||_2 / ||a||_2 keeps I - beta beta^T well conditioned.
inline double olevsky_default_b(const std::vector<double>& a, const PiecewiseConstant& f0) {
    long double asq = 0.0L;
    for (double v : a) asq += static_cast<long double>(v) * v;
    return 0.9 * std::sqrt(l2_norm_sq(f0)) / std::sqrt(static_cast<double>(asq));
}

struct TheoremDReport {
    int N = 0;
    double gamma = 0.0;
    double exponent = 0.0;
    double b = 0.0;
    std::vector<double> coefficients;   // c_n(f0)
    std::vector<double> partial_sums;   // S_m = sum_{n<=m} n^gamma |c_n|
    std::vector<double> predicted;      // b * H_m
    double max_deviation = 0.0;
    double coefficient_max_error = 0.0;
    double gram_max_error = 0.0;
    double coeff_sq_sum = 0.0;          // sum c_n^2
    double coeff_sq_sum_bound = 0.0;    // b^2 * sum n^{-2*exponent} (partial)
};

// Desk-scale reproduction: a_n = n^{-exponent}, coefficients b a_n against
// f0 == 1; with gamma - exponent = -1 the weighted partial sums are exactly
// the scaled harmonic numbers b H_m.
inline TheoremDReport theorem_d_demo(int N, double gamma = 1.0 / 3.0, double exponent = 4.0 / 3.0,
                                     std::optional<double> b_policy = std::nullopt) {
    if (!(gamma < 0.5)) throw std::invalid_argument("theorem_d_demo: gamma < 1/2 required");
    PiecewiseConstant f0 = PiecewiseConstant::constant(1.0);
    std::vector<double> a(N);
    for (int n = 1; n <= N; ++n) a[n - 1] = std::pow(static_cast<double>(n), -exponent);
    double b = b_policy ? *b_policy : olevsky_default_b(a, f0);
    PrescribedSystem sys = olevsky_construct(a, f0, b);

    TheoremDReport rep;
    rep.N = N;
    rep.gamma = gamma;
    rep.exponent = exponent;
    rep.b = b;
    rep.gram_max_error = sys.gram_max_error();

    LipschitzFunction f0lip = LipschitzFunction::from(
        PiecewiseLinear({Rational(0), Rational(1)}, {1.0, 1.0}));
    OrthonormalSystem ons = OrthonormalSystem::custom(sys.functions());

    rep.coefficients.resize(N);
    rep.partial_sums.resize(N);
    rep.predicted.resize(N);
    long double S = 0.0L, H = 0.0L, csq = 0.0L, bound = 0.0L;
    for (int n = 1; n <= N; ++n) {
        double c = fourier_coefficient(f0lip, ons, n);
        rep.coefficients[n - 1] = c;
        rep.coefficient_max_error =
            std::max(rep.coefficient_max_error, std::abs(c - b * a[n - 1]));
        S += std::pow(static_cast<double>(n), gamma) * std::abs(c);
        H += 1.0L / n;
        csq += static_cast<long double>(c) * c;
        bound += std::pow(static_cast<double>(n), -2.0 * exponent);
        rep.partial_sums[n - 1] = static_cast<double>(S);
        rep.predicted[n - 1] = static_cast<double>(b * H);
        rep.max_deviation =
            std::max(rep.max_deviation, std::abs(rep.partial_sums[n - 1] - rep.predicted[n - 1]));
    }
    rep.coeff_sq_sum = static_cast<double>(csq);
    rep.coeff_sq_sum_bound = b * b * static_cast<double>(bound);
    return rep;
}

}  // namespace confactor
