#pragma once

#include "qbd/blockmat.hpp"
#include "qbd/jacobi_params.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace qbd {

/// Monic reduction P = L J L^{-1} with L_n = (A_0 ... A_{n-1})^{-1}.
///
/// For a reduction to `levels` levels, L and L_inv hold n = 0..levels,
/// Bhat holds n = 0..levels-1 and Chat holds n = 1..levels-1 (Chat[0] is empty).
struct MonicData {
    int d = 1;
    std::vector<Block> L;
    std::vector<Block> L_inv;
    std::vector<Block> Bhat;
    std::vector<Block> Chat;

    std::size_t levels() const noexcept { return Bhat.size(); }
};

/// Reduces a tridiagonal P to its monic form. Requires A_0..A_{levels-1}
/// nonsingular; throws SingularMatrixError naming the first bad level.
MonicData monic_reduce(const BlockSequence& P, std::size_t levels);

/// UL coefficients of J = alpha * beta: Bhat_n = beta_{n+1} + alpha_n,
/// Chat_n = alpha_n beta_n. alpha holds n = 0..levels, beta holds
/// n = 1..levels (beta[0] is empty).
struct ULCoefficients {
    Block alpha0;
    std::vector<Block> alpha;
    std::vector<Block> beta;
};

/// LU coefficients: Bhat_n = betat_n + alphat_n, Chat_n = betat_n alphat_{n-1},
/// betat_0 = 0. Both vectors hold n = 0..levels-1.
struct LUCoefficients {
    std::vector<Block> alpha;
    std::vector<Block> beta;
};

/// Runs beta_{n+1} = Bhat_n - alpha_n, alpha_{n+1} = Chat_{n+1} beta_{n+1}^{-1}
/// from the free seed alpha0. Every beta_n and alpha_n (n >= 1) must be
/// nonsingular; the first failure raises SingularMatrixError with its level.
/// Needs a monic reduction to levels + 1 levels.
ULCoefficients ul_coefficients(const MonicData& monic, const Block& alpha0, std::size_t levels);

/// alphat_0 = Bhat_0, betat_n = Chat_n alphat_{n-1}^{-1}, alphat_n = Bhat_n - betat_n.
LUCoefficients lu_coefficients(const MonicData& monic, std::size_t levels);

/// How the normalisation matrices tau_n are chosen.
struct TauExplicit {
    std::vector<Block> taus;
};

/// tau_n lower triangular with Y_n upper triangular (UL), or tau_n^{-1} lower
/// triangular with Ytilde_n upper triangular (LU). Each level solves a d^2 x d^2
/// linear system made of the d row-sum equations and the two sets of
/// strict-triangle zero constraints.
struct TauLowerTriangular {};

/// Closed-form choice for the Jacobi example: tau_n = tau_0 (L_n^{-1} at alpha-1)
/// for UL, tautilde_n = tautilde_0 (L_n^{-1} at alpha+1) for LU.
struct TauJacobiPaper {
    JacobiParams params;
};

using TauStrategy = std::variant<TauExplicit, TauLowerTriangular, TauJacobiPaper>;

/// Relative tolerance for the row-sum equations tau_n e = v_n.
inline constexpr Real kTauRowSumTol = 1e-10L;

/// Normalisations for a UL factorisation: tau_0..tau_levels, satisfying
/// tau_0^{-1} e = e and tau_{n+1} e = (beta_{n+1} L_n^{-1} + L_{n+1}^{-1}) e.
std::vector<Block> solve_tau(const ULCoefficients& coeffs, const MonicData& monic,
                             const TauStrategy& strategy, std::size_t levels);

/// Normalisations for an LU factorisation: tautilde_0..tautilde_{levels-1}
/// with tautilde_n e = (alphat_n L_n^{-1} + L_{n+1}^{-1}) e.
std::vector<Block> solve_tau(const LUCoefficients& coeffs, const MonicData& monic,
                             const TauStrategy& strategy, std::size_t levels);

struct ULFactors {
    BlockSequence upper;  // P_U: Y_n, X_n for n < levels
    BlockSequence lower;  // P_L: R_n, S_n for n <= levels
};

struct LUFactors {
    BlockSequence lower;  // Ptilde_L: Rtilde_n, Stilde_n for n < levels
    BlockSequence upper;  // Ptilde_U: Ytilde_n, Xtilde_n for n < levels
};

/// X_n = L_n tau_{n+1}, Y_n = L_n alpha_n tau_n, S_n = tau_n^{-1} L_n^{-1},
/// R_{n+1} = tau_{n+1}^{-1} beta_{n+1} L_n^{-1}. Entries are not checked for
/// sign; use validate_stochastic on the result.
ULFactors assemble_ul(const MonicData& monic, const ULCoefficients& coeffs,
                      const std::vector<Block>& taus);

/// Xtilde_n = tau_n^{-1} L_{n+1}^{-1}, Ytilde_n = tau_n^{-1} alphat_n L_n^{-1},
/// Stilde_n = L_n tau_n, Rtilde_{n+1} = L_{n+1} betat_{n+1} tau_n.
LUFactors assemble_lu(const MonicData& monic, const LUCoefficients& coeffs,
                      const std::vector<Block>& taus);

/// Max entrywise |P - left * right| over the leading (levels-1) d rows of the
/// level-`levels` truncations.
Real factorization_residual(const BlockSequence& P, const BlockSequence& left,
                            const BlockSequence& right, std::size_t levels);

/// Everything produced by one UL factorisation run.
struct ULFactorization {
    MonicData monic;
    ULCoefficients coeffs;
    std::vector<Block> taus;
    ULFactors factors;
};

struct LUFactorization {
    MonicData monic;
    LUCoefficients coeffs;
    std::vector<Block> taus;
    LUFactors factors;
};

ULFactorization factorize_ul(const BlockSequence& P, const Block& alpha0,
                             const TauStrategy& strategy, std::size_t levels);

/// Same as above with a precomputed monic reduction to levels + 1 levels
/// (reused across seeds).
ULFactorization factorize_ul(const MonicData& monic, const Block& alpha0,
                             const TauStrategy& strategy, std::size_t levels);

LUFactorization factorize_lu(const BlockSequence& P, const TauStrategy& strategy,
                             std::size_t levels);

}  // namespace qbd
