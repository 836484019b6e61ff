#include "qbd/jacobi.hpp"

#include "qbd/factorization.hpp"
#include "qbd/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qbd {

namespace {

Real poch(Real a, std::size_t n) {
    Real r = 1;
    for (std::size_t j = 0; j < n; ++j) r *= a + static_cast<Real>(j);
    return r;
}

// Generalized binomial t choose m for integer m >= 0.
Real binom(Real t, int m) {
    Real r = 1;
    for (int j = 0; j < m; ++j) r *= (t - j) / (j + 1);
    return r;
}

void require_d2(const JacobiParams& p, const char* who) {
    if (p.d != 2) throw ParameterError(std::string(who) + " is only defined for d = 2");
}

void require_finite(const Block& m, const char* what) {
    if (!m.allFinite()) throw ParameterError(std::string(what) + " is not finite for these parameters");
}

Block make2(Real a11, Real a12, Real a21, Real a22) {
    Block m(2, 2);
    m << a11, a12, a21, a22;
    return m;
}

}  // namespace

LocalCoefficients local_coefficients(const JacobiParams& p, int i, std::size_t level) {
    if (i < 0 || i >= p.d) throw ParameterError("local coefficient index i out of range");
    const Real a = p.alpha, b = p.beta, k = p.k, d = p.d, n = static_cast<Real>(level), ii = i;
    LocalCoefficients c;
    c.a1 = (n + k) * (n + b + d) / ((2 * n + a + b + d + ii) * (n + k + d - ii - 1));
    c.a2 = i == p.d - 1 ? 0
                        : (d - ii - 1) * (b - k + ii + 1) / ((n + a + b - k + 2 * ii + 1) * (n + k + d - ii - 1));
    c.a3 = (n + a + ii) * (n + a + b - k + d + ii) / ((2 * n + a + b + d + ii) * (n + a + b - k + 2 * ii + 1));
    c.b1 = level == 0 ? 0 : n * (n + k + d - 1) / ((2 * n + a + b + d + ii - 1) * (n + k + d - ii - 1));
    c.b2 = i == 0 ? 0 : ii * (k + d - ii - 1) / ((n + a + b - k + 2 * ii) * (n + k + d - ii - 1));
    if (level == 0 && i == 0) {
        // S_0 row 0 is e_0; the closed form reads 0/0 when a + b + d = 1.
        c.b3 = 1;
    } else if (i == 0) {
        // The factor (n + a + b - k) cancels; dividing it out keeps b3 finite when it vanishes.
        c.b3 = (n + a + b + d - 1) / (2 * n + a + b + d - 1);
    } else {
        c.b3 = (n + a + b + d + ii - 1) * (n + a + b - k + ii) / ((2 * n + a + b + d + ii - 1) * (n + a + b - k + 2 * ii));
    }
    return c;
}

TridiagonalBlocks block_coefficients(const JacobiParams& p, std::size_t n) {
    const int d = p.d;
    TridiagonalBlocks t{Block::Zero(d, d), Block::Zero(d, d), Block::Zero(d, d)};
    for (int i = 0; i < d; ++i) {
        const LocalCoefficients c = local_coefficients(p, i, n);
        const LocalCoefficients up = local_coefficients(p, i, n + 1);
        t.A(i, i) = c.a1 * up.b3;
        t.B(i, i) = c.a1 * up.b1 + c.a3 * c.b3;
        t.C(i, i) = c.a3 * c.b1;
        if (i + 1 < d) {
            const LocalCoefficients next = local_coefficients(p, i + 1, n);
            const LocalCoefficients next_up = local_coefficients(p, i + 1, n + 1);
            t.B(i, i) += c.a2 * next.b2;
            t.A(i + 1, i) = next.a1 * next_up.b2;
            t.B(i + 1, i) = next.a3 * next.b2;
            t.B(i, i + 1) = c.a2 * next.b3;
            t.C(i, i + 1) = c.a2 * next.b1;
        }
    }
    require_finite(t.A, "A_n");
    require_finite(t.B, "B_n");
    require_finite(t.C, "C_n");
    return t;
}

TridiagonalBlocks block_coefficients_d2(const JacobiParams& p, std::size_t level) {
    require_d2(p, "block_coefficients_d2");
    const Real a = p.alpha, b = p.beta, k = p.k, n = static_cast<Real>(level);
    TridiagonalBlocks t;
    t.A = make2((b + n + 2) * (k + n) * (a + b + n + 2) / ((k + n + 1) * (a + b + 2 * n + 2) * (a + b + 2 * n + 3)), 0,
                k * (b + n + 2) / ((a + b - k + n + 3) * (a + b + 2 * n + 3) * (k + n + 1)),
                (b + n + 2) * (a + b + n + 3) * (a + b - k + n + 2) /
                    ((a + b + 2 * n + 3) * (a + b + 2 * n + 4) * (a + b - k + n + 3)));
    const Real b11 =
        (n + k) * (n + b + 2) * (n + 1) / ((a + b + 2 * n + 2) * (n + k + 1) * (a + b + 2 * n + 3)) +
        (n + a) * (a + b - k + n + 2) * (n + a + b + 1) / ((a + b + 2 * n + 2) * (a + 1 + n - k + b) * (a + b + 2 * n + 1)) +
        k * (b - k + 1) / ((a + 1 + n - k + b) * (n + k + 1) * (a + b - k + n + 2) * (n + k));
    const Real b22 =
        (n + b + 2) * (n + 1) * (n + k + 2) / ((a + b + 2 * n + 3) * (a + b + 2 * n + 4) * (n + k + 1)) +
        (a + n + 1) * (a + b + n + 2) * (a + 1 + n - k + b) / ((a + b + 2 * n + 3) * (a + b + 2 * n + 2) * (a + b - k + n + 2));
    t.B = make2(b11, (b - k + 1) * (a + b + n + 2) / ((k + n + 1) * (a + b + 2 * n + 2) * (a + b - k + n + 2)),
                (a + n + 1) * k / ((k + n) * (a + b - k + n + 2) * (a + b + 2 * n + 3)), b22);
    t.C = make2(n * (a + n) * (a + b - k + n + 2) / ((a + b - k + n + 1) * (a + b + 2 * n + 1) * (a + b + 2 * n + 2)),
                n * (b - k + 1) / ((a + b - k + n + 1) * (a + b + 2 * n + 2) * (k + n)), 0,
                n * (a + n + 1) * (k + n + 1) / ((k + n) * (a + b + 2 * n + 2) * (a + b + 2 * n + 3)));
    return t;
}

BlockSequence jacobi_block_sequence(const JacobiParams& p) {
    return BlockSequence(p.d, Band::tridiagonal, [p](std::size_t n) {
        TridiagonalBlocks t = block_coefficients(p, n);
        LevelBlocks lb;
        if (n > 0) lb.sub = std::move(t.C);
        lb.diag = std::move(t.B);
        lb.super = std::move(t.A);
        return lb;
    });
}

FactorBlocks paper_factors(const JacobiParams& p, std::size_t n) {
    const int d = p.d;
    FactorBlocks f{Block::Zero(d, d), Block::Zero(d, d), Block::Zero(d, d), Block::Zero(d, d)};
    for (int i = 0; i < d; ++i) {
        const LocalCoefficients c = local_coefficients(p, i, n);
        f.X(i, i) = c.a1;
        f.Y(i, i) = c.a3;
        f.R(i, i) = c.b1;
        f.S(i, i) = c.b3;
        if (i + 1 < d) {
            f.Y(i, i + 1) = c.a2;
            f.S(i + 1, i) = local_coefficients(p, i + 1, n).b2;
        }
    }
    return f;
}

FactorBlocks paper_factors_d2(const JacobiParams& p, std::size_t level) {
    require_d2(p, "paper_factors_d2");
    const Real a = p.alpha, b = p.beta, k = p.k, n = static_cast<Real>(level);
    FactorBlocks f;
    f.X = make2((n + k) * (n + b + 2) / ((2 * n + a + b + 2) * (n + k + 1)), 0, 0, (n + b + 2) / (2 * n + a + b + 3));
    f.Y = make2((n + a) * (n + a + b - k + 2) / ((2 * n + a + b + 2) * (n + a + 1 - k + b)),
                (b - k + 1) / ((n + a + 1 - k + b) * (n + k + 1)), 0, (n + a + 1) / (2 * n + a + b + 3));
    f.S = make2((n + a + b + 1) / (2 * n + a + b + 1), 0, k / ((n + a + b - k + 2) * (n + k)),
                (n + a + b + 2) * (n + a + 1 - k + b) / ((2 * n + a + b + 2) * (n + a + b - k + 2)));
    f.R = make2(n / (2 * n + a + b + 1), 0, 0, n * (n + k + 1) / ((2 * n + a + b + 2) * (n + k)));
    return f;
}

BlockSequence paper_upper_factor(const JacobiParams& p) {
    return BlockSequence(p.d, Band::upper_bidiagonal, [p](std::size_t n) {
        FactorBlocks f = paper_factors(p, n);
        LevelBlocks lb;
        lb.diag = std::move(f.Y);
        lb.super = std::move(f.X);
        return lb;
    });
}

BlockSequence paper_lower_factor(const JacobiParams& p) {
    return BlockSequence(p.d, Band::lower_bidiagonal, [p](std::size_t n) {
        FactorBlocks f = paper_factors(p, n);
        LevelBlocks lb;
        if (n > 0) lb.sub = std::move(f.R);
        lb.diag = std::move(f.S);
        return lb;
    });
}

Block monic_l_d2(const JacobiParams& p, std::size_t level) {
    require_d2(p, "monic_l_d2");
    const Real a = p.alpha, b = p.beta, k = p.k, n = static_cast<Real>(level);
    const Real den = poch(b + 2, level);
    return make2((n + k) * poch(a + b + n + 2, level) / (k * den), 0,
                 -n * poch(a + b + n + 3, level) / ((a + b - k + 2) * den),
                 (a + b + n - k + 2) * poch(a + b + n + 3, level) / ((a + b - k + 2) * den));
}

Block jacobi_tau0_inverse(const JacobiParams& p) {
    const int d = p.d;
    const Real s = p.alpha + p.beta - p.k;
    Block t = Block::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        t(i, i) = i == 0 ? Real(1) : (s + i) / (s + 2 * i);
        if (i + 1 < d) t(i + 1, i) = static_cast<Real>(i + 1) / (s + 2 * i + 2);
    }
    require_finite(t, "tau_0^{-1}");
    return t;
}

Block jacobi_tau0_inverse_d2(const JacobiParams& p) {
    require_d2(p, "jacobi_tau0_inverse_d2");
    const Real g = p.alpha + p.beta - p.k + 2;
    return make2(1, 0, 1 / g, (g - 1) / g);
}

Block alpha0_paper(const JacobiParams& p) {
    Block alpha0 = block_coefficients(p, 0).B;
    for (int i = 0; i < p.d; ++i) alpha0(i, i) -= local_coefficients(p, i, 0).a1 * local_coefficients(p, i, 1).b1;
    return alpha0;
}

Block alpha0_paper_d2(const JacobiParams& p) {
    require_d2(p, "alpha0_paper_d2");
    const Real a = p.alpha, b = p.beta, k = p.k;
    return make2((b - k + 1) / ((1 + a + b - k) * (1 + k) * (2 + a + b - k)) +
                     a * (2 + a + b - k) / ((2 + a + b) * (1 + a + b - k)),
                 (b - k + 1) / ((1 + k) * (2 + a + b - k)), (1 + a) / ((3 + a + b) * (2 + a + b - k)),
                 (1 + a) * (1 + a + b - k) / ((3 + a + b) * (2 + a + b - k)));
}

MomentPair moments_d2(const JacobiParams& p) {
    require_d2(p, "moments_d2");
    validate(p);
    if (p.alpha <= 0) throw ParameterError("mu_{-1} diverges unless alpha > 0");
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real c0 = std::exp(std::lgamma(a + 1) + std::lgamma(b + 2) - std::lgamma(a + b + 3)) * (a + b - k + 2);
    const Real cm = std::exp(std::lgamma(a) + std::lgamma(b + 2) - std::lgamma(a + b + 2));
    MomentPair m;
    m.mu0 = c0 * make2(1, 0, 0, (a + 1) * (k + 1) / ((a + b + 3) * (b - k + 1)));
    m.mu_minus1 = cm * make2(a + b - k + 1, -1, -1,
                             ((a + 1) * (k + 1) * (a + b - k + 2) - k * (b - k + 1)) / ((a + b + 2) * (b - k + 1)));
    return m;
}

Block alpha0_from_moments(const JacobiParams& p) {
    const MomentPair m = moments_d2(p);
    return m.mu0 * small_inverse(m.mu_minus1, std::nullopt, "mu_{-1}");
}

GeronimusMass geronimus_mass(const Block& alpha0, const MomentPair& moments, Real tol) {
    GeronimusMass g;
    g.alpha0_used = alpha0;
    g.M = small_inverse(alpha0, std::nullopt, "alpha_0") * moments.mu0 - moments.mu_minus1;
    const Real scale = std::max(moments.mu0.cwiseAbs().maxCoeff(), moments.mu_minus1.cwiseAbs().maxCoeff());
    const Real eps = tol * std::max<Real>(scale, 1e-300L);
    g.symmetric = (g.M - g.M.transpose()).cwiseAbs().maxCoeff() <= eps;
    const Block sym = (g.M + g.M.transpose()) / 2;
    Eigen::SelfAdjointEigenSolver<Block> es(sym, Eigen::EigenvaluesOnly);
    g.min_eigenvalue = es.eigenvalues().minCoeff();
    g.psd = g.symmetric && g.min_eigenvalue >= -eps;
    return g;
}

Real symmetric_s12(const JacobiParams& p, Real s21) {
    return (p.beta - p.k + 1) * (p.alpha + p.beta + 3) / ((p.alpha + 1) * (p.k + 1)) * s21;
}

Block alpha0_case1(const JacobiParams& p, Real s21, Real s11) {
    require_d2(p, "alpha0_case1");
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real c = (a + b + 3) * (b - k + 1) / ((k + 1) * (a + 1));
    return make2(c / (a + b - k + 1) * s11, c * s21, s21, (a + b - k + 1) * s21);
}

Block alpha0_case2a(const JacobiParams& p, Real s11, Real s12) {
    Block m = alpha0_paper_d2(p);
    m(0, 0) *= s11;
    m(0, 1) *= s12;
    return m;
}

Block alpha0_case2b(const JacobiParams& p, Real s11, Real s21) {
    Block m = alpha0_paper_d2(p);
    m(0, 0) = s11;
    m(1, 0) = s21;
    return m;
}

Block alpha0_case2c(Real s21, Real s22) { return make2(0, 0, s21, s22); }

Block alpha0_case2d(Real s12, Real s22) { return make2(0, s12, 0, s22); }

Real case1_s21_bound(const JacobiParams& p) {
    const Real a = p.alpha, b = p.beta, k = p.k;
    return (a + 1) / ((a + b + 3) * (a + b - k + 2));
}

Real case1_s11_bound(const JacobiParams& p, Real s21) {
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real c1 = (a + 1) * (a + 1) * (k + 1) / (k * (b - k + 1) * (a + b + 3));
    const Real c2 = (a + 1) * (k + 1) / (k * (a + b - k + 1) * (a + b + 3));
    return s21 * (s21 - c1) / (s21 - c2);
}

Real case1_psd_s11_bound(const JacobiParams& p, Real s21) {
    const Real a = p.alpha, b = p.beta, k = p.k;
    return s21 + poch(a, 2) * (k + 1) * (a + b - k + 2) / ((b - k + 1) * poch(a + b + 2, 2));
}

bool case1_analytic_inside(const JacobiParams& p, Real s21, Real s11) {
    return s21 > 0 && s21 <= case1_s21_bound(p) && s11 > s21 && s11 <= case1_s11_bound(p, s21);
}

Real case2a_slope(const JacobiParams& p) {
    const Real a = p.alpha, b = p.beta, k = p.k;
    return 1 + a * (k + 1) * (a + b - k + 2) * (a + b - k + 2) / ((a + b + 2) * (b - k + 1));
}

bool case2a_analytic_inside(const JacobiParams& p, Real s11, Real s12) {
    return s11 > 0 && s11 <= 1 && s12 >= s11 && s12 <= std::min<Real>(case2a_slope(p) * s11, 1);
}

Block weight_matrix_part(const JacobiParams& p, Real x) {
    const int d = p.d;
    Block Z = Block::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Real s = 0;
            for (int r = 0; r < d; ++r) {
                s += binom(r, i) * binom(r, j) * binom(d + p.k - r - 2, d - r - 1) * binom(p.beta - p.k + r, r) *
                     std::pow(x, d - r - 1);
            }
            Z(i, j) = s * std::pow(1 - x, i + j);
        }
    }
    Block V = Block::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const Real sign = i % 2 == 0 ? 1 : -1;
            V(i, j) = sign * poch(-j, i) / poch(1 - d, i) * poch(p.alpha + p.beta - p.k + j + 1, i) /
                      poch(p.beta - p.k + 1, i);
        }
    }
    return V.transpose() * Z * V;
}

int weight_matrix_degree(const JacobiParams& p) { return 2 * (p.d - 1); }

Block weight_eval(const JacobiParams& p, Real x) {
    validate(p);
    if (!(x > 0 && x < 1)) throw ParameterError("weight_eval needs 0 < x < 1");
    return std::pow(x, p.alpha) * std::pow(1 - x, p.beta) * weight_matrix_part(p, x);
}

OdeCoefficients ode_coefficients(const JacobiParams& p) {
    require_d2(p, "ode_coefficients");
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real g = a + b - k + 2;
    OdeCoefficients o;
    o.F2a = make2(0, 0, 1, -1);
    o.F2b = make2((b - k + 1) / g, -(b - k + 1) / g, -(a + 1) / g, (a + 1) / g);
    o.F1a = make2(0, 0, k + 1, -(a + b + 3));
    o.F1b = make2(-(b - k + 1) / g, -(b - k + 1) * (a + b - k + 1) / g, (a + 1) / g, (a + 1) * (a + b - k + 1) / g);
    o.F0 = make2((k + 1) * (a + b - k + 1), 0, -(k + 1), 0);
    return o;
}

OdeCheck ode_check(const JacobiParams& p, Real s11, Real s12, std::size_t n, const std::vector<Real>& xs) {
    require_d2(p, "ode_check");
    validate(p);
    if (s12 != 1) throw ParameterError("ode_check supports only the case s12 = 1");
    const Block alpha0 = alpha0_case2a(p, s11, s12);
    const MonicData monic = monic_reduce(jacobi_block_sequence(p), n + 2);
    const ULCoefficients uc = ul_coefficients(monic, alpha0, n + 1);

    // Monic polynomials of J~ = beta alpha: diagonal beta_m + alpha_m, subdiagonal beta_m alpha_{m-1}.
    std::vector<Block> diag, sub;
    for (std::size_t m = 0; m <= n; ++m) {
        const Block beta_m = m == 0 ? Block(Block::Zero(2, 2)) : uc.beta[m];
        diag.push_back(beta_m + uc.alpha[m]);
        sub.push_back(m == 0 ? Block(Block::Zero(2, 2)) : Block(beta_m * uc.alpha[m - 1]));
    }
    const MatrixPolynomial P = monic_polynomial_sequence(diag, sub, n)[n];

    const OdeCoefficients o = ode_coefficients(p);
    const MatrixPolynomial F2(2, {Block::Zero(2, 2), o.F2b, o.F2a});
    const MatrixPolynomial F1(2, {o.F1b, o.F1a});
    const MatrixPolynomial F0(2, {o.F0});
    const MatrixPolynomial lhs = P.derivative().derivative() * F2 + P.derivative() * F1 + P * F0;

    OdeCheck out;
    out.lambda = lhs.coeff(n) * small_inverse(P.coeff(n), n, "leading coefficient");
    const MatrixPolynomial residual = lhs - out.lambda * P;
    for (Real x : xs) out.residual = std::max(out.residual, residual(x).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace qbd
