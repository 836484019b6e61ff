#include "qbd/factorization.hpp"

#include "qbd/jacobi.hpp"

#include <sstream>
#include <string>

namespace qbd {

namespace {

std::string indexed(const char* name, std::size_t n) { return std::string(name) + "_" + std::to_string(n); }

void require_levels(const MonicData& monic, std::size_t levels, const char* who) {
    if (levels < 1) throw ParameterError(std::string(who) + ": need at least one level");
    if (monic.levels() < levels) {
        std::ostringstream os;
        os << who << ": monic data covers " << monic.levels() << " levels, " << levels << " requested";
        throw ParameterError(os.str());
    }
}

// A difference that cancels to rounding level is singular even when its
// condition number looks fine (always the case for d = 1).
void require_no_cancellation(const Block& diff, const Block& lhs, const Block& rhs, std::size_t level,
                             const std::string& which) {
    const Real scale = std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
    if (diff.cwiseAbs().maxCoeff() <= kSingularRcond * scale) {
        throw SingularMatrixError(which + " cancels to zero at level " + std::to_string(level), level, which);
    }
}

void check_row_sums(const Block& tau, const Vector& target, std::size_t n, const char* what) {
    const Real scale = std::max<Real>(1, target.cwiseAbs().maxCoeff());
    const Real err = (tau.rowwise().sum() - target).cwiseAbs().maxCoeff();
    if (!(err <= kTauRowSumTol * scale)) {
        std::ostringstream os;
        os << what << " at level " << n << " violates its row-sum equation by "
           << static_cast<double>(err);
        throw ParameterError(os.str());
    }
}

// Solves for a d x d matrix T (row-major unknowns) subject to
//   T e_row-sums:      sum_j T_ij w_j = rhs_i   (w = e or w = v)
//   strictly upper:    T_ij = 0, i < j
//   strictly lower of (T M) or (M T) zero, i > j
enum class Side { left, right };

Block solve_triangular_system(const Vector& weights, const Vector& rhs, const Block& coupling,
                              Side side, std::size_t level, const char* what) {
    const Eigen::Index d = rhs.size();
    const Eigen::Index m = d * d;
    Block K = Block::Zero(m, m);
    Vector b = Vector::Zero(m);
    auto idx = [d](Eigen::Index i, Eigen::Index j) { return i * d + j; };
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < d; ++i, ++row) {
        for (Eigen::Index j = 0; j < d; ++j) K(row, idx(i, j)) = weights(j);
        b(row) = rhs(i);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (j > i) {
                K(row++, idx(i, j)) = 1;
            } else if (j < i) {
                // (M T)_ij = sum_l M_il T_lj  or  (T M)_ij = sum_l T_il M_lj
                for (Eigen::Index l = 0; l < d; ++l) {
                    if (side == Side::left) {
                        K(row, idx(l, j)) += coupling(i, l);
                    } else {
                        K(row, idx(i, l)) += coupling(l, j);
                    }
                }
                ++row;
            }
        }
    }
    // L_n grows quickly with n, so rows are equilibrated before the
    // conditioning test; this leaves the solution unchanged.
    for (Eigen::Index r = 0; r < m; ++r) {
        const Real scale = K.row(r).cwiseAbs().maxCoeff();
        if (scale > 0) {
            K.row(r) /= scale;
            b(r) /= scale;
        }
    }
    if (reciprocal_condition(K) < kSingularRcond) {
        std::ostringstream os;
        os << "triangular " << what << " system is singular at level " << level;
        throw SingularMatrixError(os.str(), level, indexed(what, level));
    }
    const Vector sol = K.fullPivLu().solve(b);
    Block T(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) T(i, j) = sol(idx(i, j));
    return T;
}

// L_n^{-1} of the Jacobi chain with alpha shifted by delta, n = 0..count-1.
std::vector<Block> shifted_l_inverses(const JacobiParams& p, Real delta, std::size_t count) {
    const MonicData shifted = monic_reduce(jacobi_block_sequence(shift_alpha(p, delta)), count - 1);
    return std::vector<Block>(shifted.L_inv.begin(), shifted.L_inv.begin() + static_cast<long>(count));
}

}  // namespace

MonicData monic_reduce(const BlockSequence& P, std::size_t levels) {
    if (P.band() != Band::tridiagonal) throw DimensionError("monic reduction needs a tridiagonal sequence");
    if (levels < 1) throw ParameterError("monic reduction needs at least one level");
    MonicData m;
    m.d = P.dim();
    m.L.reserve(levels + 1);
    m.L_inv.reserve(levels + 1);
    m.L.push_back(Block::Identity(m.d, m.d));
    m.L_inv.push_back(Block::Identity(m.d, m.d));
    m.Chat.emplace_back();
    for (std::size_t n = 0; n < levels; ++n) {
        const LevelBlocks b = P.level(n);
        m.Bhat.push_back(m.L_inv[n] * b.diag * m.L[n]);
        if (n > 0) m.Chat.push_back(m.L_inv[n] * (*b.sub) * m.L[n - 1]);
        const Block a_inv = small_inverse(*b.super, n, indexed("A", n));
        // L_{n+1} = A_n^{-1} L_n,  L_{n+1}^{-1} = L_n^{-1} A_n
        m.L.push_back(a_inv * m.L[n]);
        m.L_inv.push_back(m.L_inv[n] * (*b.super));
    }
    return m;
}

ULCoefficients ul_coefficients(const MonicData& monic, const Block& alpha0, std::size_t levels) {
    require_levels(monic, levels + 1, "ul_coefficients");
    if (alpha0.rows() != monic.d || alpha0.cols() != monic.d) throw DimensionError("alpha0 has the wrong size");
    ULCoefficients c;
    c.alpha0 = alpha0;
    c.alpha.push_back(alpha0);
    c.beta.emplace_back();
    for (std::size_t n = 0; n < levels; ++n) {
        c.beta.push_back(monic.Bhat[n] - c.alpha[n]);
        require_no_cancellation(c.beta.back(), monic.Bhat[n], c.alpha[n], n + 1, indexed("beta", n + 1));
        const Block beta_inv = small_inverse(c.beta.back(), n + 1, indexed("beta", n + 1));
        c.alpha.push_back(monic.Chat[n + 1] * beta_inv);
        if (reciprocal_condition(c.alpha.back()) < kSingularRcond) {
            throw SingularMatrixError("alpha is singular at level " + std::to_string(n + 1), n + 1,
                                      indexed("alpha", n + 1));
        }
    }
    return c;
}

LUCoefficients lu_coefficients(const MonicData& monic, std::size_t levels) {
    require_levels(monic, levels, "lu_coefficients");
    LUCoefficients c;
    c.alpha.push_back(monic.Bhat[0]);
    c.beta.push_back(Block::Zero(monic.d, monic.d));
    for (std::size_t n = 1; n < levels; ++n) {
        const Block prev_inv = small_inverse(c.alpha[n - 1], n - 1, indexed("alphatilde", n - 1));
        c.beta.push_back(monic.Chat[n] * prev_inv);
        c.alpha.push_back(monic.Bhat[n] - c.beta[n]);
        require_no_cancellation(c.alpha[n], monic.Bhat[n], c.beta[n], n, indexed("alphatilde", n));
    }
    // The last alphat enters the factors through Ytilde only, but the
    // factorisation still requires it to be invertible.
    small_inverse(c.alpha[levels - 1], levels - 1, indexed("alphatilde", levels - 1));
    return c;
}

std::vector<Block> solve_tau(const ULCoefficients& coeffs, const MonicData& monic,
                             const TauStrategy& strategy, std::size_t levels) {
    require_levels(monic, levels, "solve_tau");
    if (coeffs.alpha.size() < levels + 1 || coeffs.beta.size() < levels + 1)
        throw ParameterError("solve_tau: UL coefficients do not cover the requested levels");
    const int d = monic.d;
    auto target = [&](std::size_t n) -> Vector {
        if (n == 0) return ones(d);
        return (coeffs.beta[n] * monic.L_inv[n - 1] + monic.L_inv[n]) * ones(d);
    };

    std::vector<Block> taus;
    taus.reserve(levels + 1);
    if (const auto* ex = std::get_if<TauExplicit>(&strategy)) {
        if (ex->taus.size() < levels + 1) {
            throw ParameterError("explicit tau sequence has " + std::to_string(ex->taus.size()) +
                                 " entries, " + std::to_string(levels + 1) + " required");
        }
        taus.assign(ex->taus.begin(), ex->taus.begin() + static_cast<long>(levels + 1));
    } else if (std::holds_alternative<TauLowerTriangular>(strategy)) {
        for (std::size_t n = 0; n <= levels; ++n) {
            const Block coupling = monic.L[n] * coeffs.alpha[n];
            taus.push_back(solve_triangular_system(ones(d), target(n), coupling, Side::left, n, "tau"));
        }
    } else {
        const auto& paper = std::get<TauJacobiPaper>(strategy);
        const Block tau0 = small_inverse(jacobi_tau0_inverse(paper.params), 0, "tau_0^{-1}");
        const auto shifted = shifted_l_inverses(paper.params, -1, levels + 1);
        for (std::size_t n = 0; n <= levels; ++n) taus.push_back(tau0 * shifted[n]);
    }

    for (std::size_t n = 0; n <= levels; ++n) {
        if (taus[n].rows() != d || taus[n].cols() != d) throw DimensionError("tau block has the wrong size");
        check_row_sums(taus[n], target(n), n, "tau");
        small_inverse(taus[n], n, indexed("tau", n));
    }
    return taus;
}

std::vector<Block> solve_tau(const LUCoefficients& coeffs, const MonicData& monic,
                             const TauStrategy& strategy, std::size_t levels) {
    require_levels(monic, levels, "solve_tau");
    if (coeffs.alpha.size() < levels) throw ParameterError("solve_tau: LU coefficients do not cover the requested levels");
    const int d = monic.d;
    auto target = [&](std::size_t n) -> Vector {
        return (coeffs.alpha[n] * monic.L_inv[n] + monic.L_inv[n + 1]) * ones(d);
    };

    std::vector<Block> taus;
    taus.reserve(levels);
    if (const auto* ex = std::get_if<TauExplicit>(&strategy)) {
        if (ex->taus.size() < levels) {
            throw ParameterError("explicit tau sequence has " + std::to_string(ex->taus.size()) +
                                 " entries, " + std::to_string(levels) + " required");
        }
        taus.assign(ex->taus.begin(), ex->taus.begin() + static_cast<long>(levels));
    } else if (std::holds_alternative<TauLowerTriangular>(strategy)) {
        for (std::size_t n = 0; n < levels; ++n) {
            // G = tau^{-1}: G v = e, G lower, G alphat_n L_n^{-1} upper.
            const Block coupling = coeffs.alpha[n] * monic.L_inv[n];
            const Block g = solve_triangular_system(target(n), ones(d), coupling, Side::right, n, "tautilde");
            taus.push_back(small_inverse(g, n, indexed("tautilde^{-1}", n)));
        }
    } else {
        const auto& paper = std::get<TauJacobiPaper>(strategy);
        const Block tau0 = jacobi_tau0_inverse(shift_alpha(paper.params, 1));
        const auto shifted = shifted_l_inverses(paper.params, 1, levels);
        for (std::size_t n = 0; n < levels; ++n) taus.push_back(tau0 * shifted[n]);
    }

    for (std::size_t n = 0; n < levels; ++n) {
        if (taus[n].rows() != d || taus[n].cols() != d) throw DimensionError("tau block has the wrong size");
        check_row_sums(taus[n], target(n), n, "tautilde");
        small_inverse(taus[n], n, indexed("tautilde", n));
    }
    return taus;
}

ULFactors assemble_ul(const MonicData& monic, const ULCoefficients& coeffs,
                      const std::vector<Block>& taus) {
    if (taus.empty()) throw ParameterError("assemble_ul: empty tau sequence");
    const std::size_t levels = taus.size() - 1;
    require_levels(monic, levels, "assemble_ul");
    if (coeffs.alpha.size() < levels || coeffs.beta.size() < levels + 1)
        throw ParameterError("assemble_ul: coefficients do not cover the tau levels");

    std::vector<Block> tau_inv;
    tau_inv.reserve(taus.size());
    for (std::size_t n = 0; n < taus.size(); ++n) tau_inv.push_back(small_inverse(taus[n], n, indexed("tau", n)));

    std::vector<LevelBlocks> upper(levels);
    std::vector<LevelBlocks> lower(levels + 1);
    for (std::size_t n = 0; n < levels; ++n) {
        upper[n].super = monic.L[n] * taus[n + 1];
        upper[n].diag = monic.L[n] * coeffs.alpha[n] * taus[n];
    }
    for (std::size_t n = 0; n <= levels; ++n) {
        lower[n].diag = tau_inv[n] * monic.L_inv[n];
        if (n > 0) lower[n].sub = tau_inv[n] * coeffs.beta[n] * monic.L_inv[n - 1];
    }
    return {BlockSequence::stored(monic.d, Band::upper_bidiagonal, std::move(upper)),
            BlockSequence::stored(monic.d, Band::lower_bidiagonal, std::move(lower))};
}

LUFactors assemble_lu(const MonicData& monic, const LUCoefficients& coeffs,
                      const std::vector<Block>& taus) {
    const std::size_t levels = taus.size();
    if (levels == 0) throw ParameterError("assemble_lu: empty tau sequence");
    require_levels(monic, levels, "assemble_lu");
    if (coeffs.alpha.size() < levels) throw ParameterError("assemble_lu: coefficients do not cover the tau levels");

    std::vector<LevelBlocks> lower(levels);
    std::vector<LevelBlocks> upper(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        const Block tau_inv = small_inverse(taus[n], n, indexed("tautilde", n));
        upper[n].super = tau_inv * monic.L_inv[n + 1];
        upper[n].diag = tau_inv * coeffs.alpha[n] * monic.L_inv[n];
        lower[n].diag = monic.L[n] * taus[n];
        if (n > 0) lower[n].sub = monic.L[n] * coeffs.beta[n] * taus[n - 1];
    }
    return {BlockSequence::stored(monic.d, Band::lower_bidiagonal, std::move(lower)),
            BlockSequence::stored(monic.d, Band::upper_bidiagonal, std::move(upper))};
}

Real factorization_residual(const BlockSequence& P, const BlockSequence& left,
                            const BlockSequence& right, std::size_t levels) {
    if (P.dim() != left.dim() || P.dim() != right.dim()) throw DimensionError("factor dimensions differ");
    if (levels < 2) throw ParameterError("residual needs at least two levels");
    const Block p = truncate_dense(P, levels);
    const Block prod = truncate_dense(left, levels) * truncate_dense(right, levels);
    const Eigen::Index rows = static_cast<Eigen::Index>(levels - 1) * P.dim();
    return (p.topRows(rows) - prod.topRows(rows)).cwiseAbs().maxCoeff();
}

ULFactorization factorize_ul(const MonicData& monic, const Block& alpha0,
                             const TauStrategy& strategy, std::size_t levels) {
    ULFactorization out{monic, ul_coefficients(monic, alpha0, levels), {}, {BlockSequence::stored(monic.d, Band::upper_bidiagonal, {}), BlockSequence::stored(monic.d, Band::lower_bidiagonal, {})}};
    out.taus = solve_tau(out.coeffs, monic, strategy, levels);
    out.factors = assemble_ul(monic, out.coeffs, out.taus);
    return out;
}

ULFactorization factorize_ul(const BlockSequence& P, const Block& alpha0,
                             const TauStrategy& strategy, std::size_t levels) {
    return factorize_ul(monic_reduce(P, levels + 1), alpha0, strategy, levels);
}

LUFactorization factorize_lu(const BlockSequence& P, const TauStrategy& strategy, std::size_t levels) {
    MonicData monic = monic_reduce(P, levels);
    LUCoefficients coeffs = lu_coefficients(monic, levels);
    std::vector<Block> taus = solve_tau(coeffs, monic, strategy, levels);
    LUFactors factors = assemble_lu(monic, coeffs, taus);
    return {std::move(monic), std::move(coeffs), std::move(taus), std::move(factors)};
}

}  // namespace qbd
