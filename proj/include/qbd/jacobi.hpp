#pragma once

#include "qbd/blockmat.hpp"
#include "qbd/jacobi_params.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qbd {

struct LocalCoefficients {
    Real a1 = 0, a2 = 0, a3 = 0;
    Real b1 = 0, b2 = 0, b3 = 0;
};

/// a_j(i, n), b_j(i, n) for 0 <= i < d. a1 + a2 + a3 = b1 + b2 + b3 = 1.
LocalCoefficients local_coefficients(const JacobiParams& p, int i, std::size_t n);

struct TridiagonalBlocks {
    Block A, B, C;  // C is zero at n = 0
};

/// A_n, B_n, C_n assembled from the local coefficients (any d).
TridiagonalBlocks block_coefficients(const JacobiParams& p, std::size_t n);

/// Explicit d = 2 entries; kept independent of the general assembly.
TridiagonalBlocks block_coefficients_d2(const JacobiParams& p, std::size_t n);

/// The semi-infinite tridiagonal P of the example. The parameters are not
/// range-checked so that shifted chains can be built.
BlockSequence jacobi_block_sequence(const JacobiParams& p);

struct FactorBlocks {
    Block X, Y, R, S;
};

/// X_n = diag(a1), Y_n = diag(a3) + super(a2), R_n = diag(b1),
/// S_n = diag(b3) + sub(b2(i+1, n)).
FactorBlocks paper_factors(const JacobiParams& p, std::size_t n);
FactorBlocks paper_factors_d2(const JacobiParams& p, std::size_t n);

BlockSequence paper_upper_factor(const JacobiParams& p);
BlockSequence paper_lower_factor(const JacobiParams& p);

/// L_n = (A_0 ... A_{n-1})^{-1} in closed form (d = 2).
Block monic_l_d2(const JacobiParams& p, std::size_t n);

/// tau_0^{-1} = S_0: diagonal (a+b-k+i)/(a+b-k+2i), subdiagonal (i+1)/(a+b-k+2i+2).
Block jacobi_tau0_inverse(const JacobiParams& p);
Block jacobi_tau0_inverse_d2(const JacobiParams& p);

/// alpha_0 = B_0 - D_0 with D_0 = diag(a1(i,0) b1(i,1)).
Block alpha0_paper(const JacobiParams& p);
/// Explicit d = 2 entries of the same matrix.
Block alpha0_paper_d2(const JacobiParams& p);

struct MomentPair {
    Block mu0;
    Block mu_minus1;
};

/// Closed-form mu_0 and mu_{-1} (d = 2). Requires alpha > 0.
MomentPair moments_d2(const JacobiParams& p);

/// alpha_0 = mu_0 mu_{-1}^{-1} (d = 2).
Block alpha0_from_moments(const JacobiParams& p);

struct GeronimusMass {
    Block M;
    Block alpha0_used;
    bool symmetric = false;
    bool psd = false;
    Real min_eigenvalue = 0;  // of the symmetric part
};

/// M = alpha_0^{-1} mu_0 - mu_{-1}. Flags use an absolute tolerance scaled by
/// the largest moment entry.
GeronimusMass geronimus_mass(const Block& alpha0, const MomentPair& moments, Real tol = 1e-12L);

/// s12 that makes M symmetric for a given s21 (d = 2).
Real symmetric_s12(const JacobiParams& p, Real s21);

/// Two-parameter alpha_0 families for d = 2.
Block alpha0_case1(const JacobiParams& p, Real s21, Real s11);
Block alpha0_case2a(const JacobiParams& p, Real s11, Real s12);
Block alpha0_case2b(const JacobiParams& p, Real s11, Real s21);
Block alpha0_case2c(Real s21, Real s22);
Block alpha0_case2d(Real s12, Real s22);

/// Case 1 bounds: 0 < s21 <= s21_bound, s21 < s11 <= s11_bound(s21).
Real case1_s21_bound(const JacobiParams& p);
Real case1_s11_bound(const JacobiParams& p, Real s21);
/// Upper s11 bound below which M is positive semidefinite.
Real case1_psd_s11_bound(const JacobiParams& p, Real s21);
bool case1_analytic_inside(const JacobiParams& p, Real s21, Real s11);

/// Case 2(a): 0 < s11 <= 1, s11 <= s12 <= min(factor * s11, 1).
Real case2a_slope(const JacobiParams& p);
bool case2a_analytic_inside(const JacobiParams& p, Real s11, Real s12);

/// W(x) = x^alpha (1-x)^beta V^T Z(x) V on (0, 1).
Block weight_eval(const JacobiParams& p, Real x);

/// V^T Z(x) V, a matrix polynomial of degree 2(d-1).
Block weight_matrix_part(const JacobiParams& p, Real x);
int weight_matrix_degree(const JacobiParams& p);

/// Coefficients of the second-order operator for the Darboux polynomials
/// (d = 2, s12 = 1): F2(x) = x (F2a x + F2b), F1(x) = F1a x + F1b, F0.
struct OdeCoefficients {
    Block F2a, F2b, F1a, F1b, F0;
};

OdeCoefficients ode_coefficients(const JacobiParams& p);

struct OdeCheck {
    Real residual = 0;  // max over the sample points of the entrywise residual
    Block lambda;
};

/// Builds the monic polynomial of degree n for J~ = beta alpha with the case
/// 2(a) alpha_0, derives Lambda_n from the leading coefficient and evaluates
/// P'' F2 + P' F1 + P F0 - Lambda_n P at the sample points.
OdeCheck ode_check(const JacobiParams& p, Real s11, Real s12, std::size_t n,
                   const std::vector<Real>& xs);

}  // namespace qbd
