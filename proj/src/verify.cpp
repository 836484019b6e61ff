#include "qbd/verify.hpp"

#include "qbd/darboux.hpp"
#include "qbd/factorization.hpp"
#include "qbd/jacobi.hpp"
#include "qbd/spectral.hpp"

#include <functional>

namespace qbd {

namespace {

Real factor_mismatch(const BlockSequence& upper, const BlockSequence& lower, const JacobiParams& ref,
                     std::size_t max_level) {
    Real err = 0;
    for (std::size_t n = 0; n <= max_level; ++n) {
        const FactorBlocks f = paper_factors(ref, n);
        const LevelBlocks u = upper.level(n);
        const LevelBlocks l = lower.level(n);
        err = std::max({err, (*u.super - f.X).cwiseAbs().maxCoeff(), (u.diag - f.Y).cwiseAbs().maxCoeff(),
                        (l.diag - f.S).cwiseAbs().maxCoeff()});
        if (n > 0) err = std::max(err, (*l.sub - f.R).cwiseAbs().maxCoeff());
    }
    return err;
}

}  // namespace

Real kmcg_vs_power_error(const JacobiParams& p, std::size_t max_level, std::size_t max_steps,
                         std::size_t truncation) {
    const BlockSequence P = jacobi_block_sequence(p);
    const WeightSpec W = jacobi_weight(p);
    const Block T = truncate_dense(P, truncation);
    const auto d = static_cast<Eigen::Index>(p.d);
    Block power = Block::Identity(T.rows(), T.cols());
    Real err = 0;
    for (std::size_t n = 0; n <= max_steps; ++n) {
        for (std::size_t i = 0; i <= max_level; ++i) {
            for (std::size_t j = 0; j <= max_level; ++j) {
                const Block exact = power.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d);
                err = std::max(err, (kmcg_entry(P, W, n, i, j) - exact).cwiseAbs().maxCoeff());
            }
        }
        power = power * T;
    }
    return err;
}

Real invariant_measure_error(const JacobiParams& p, std::size_t blocks, std::size_t truncation) {
    const BlockSequence P = jacobi_block_sequence(p);
    const auto pi = invariant_measure(P, jacobi_weight(p), truncation);
    const auto d = static_cast<Eigen::Index>(p.d);
    Vector row(static_cast<Eigen::Index>(truncation) * d);
    for (std::size_t n = 0; n < truncation; ++n) row.segment(static_cast<Eigen::Index>(n) * d, d) = pi[n];
    const Vector residual = (row.transpose() * truncate_dense(P, truncation)).transpose() - row;
    return residual.head(static_cast<Eigen::Index>(blocks) * d).cwiseAbs().maxCoeff();
}

VerifyReport verify_all(const JacobiParams& p) {
    validate(p);
    if (p.d != 2) throw ParameterError("verify needs d = 2");
    VerifyReport report;
    auto run = [&](const std::string& name, Real tol, const std::function<Real()>& measure, bool at_most = true) {
        VerifyCheck c;
        c.name = name;
        c.tolerance = tol;
        try {
            c.value = measure();
            c.passed = at_most ? c.value <= tol : c.value >= tol;
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = e.what();
        }
        report.checks.push_back(std::move(c));
    };

    const BlockSequence P = jacobi_block_sequence(p);
    const JacobiParams shifted = shift_alpha(p, 1);
    std::optional<ULFactorization> ul;
    std::optional<LUFactorization> lu;
    try {
        ul = factorize_ul(P, alpha0_paper(p), TauJacobiPaper{p}, 30);
    } catch (const std::exception&) {
    }
    try {
        lu = factorize_lu(P, TauJacobiPaper{p}, 31);
    } catch (const std::exception&) {
    }
    auto need_ul = [&]() -> const ULFactorization& {
        if (!ul) throw Error("UL factorisation failed");
        return *ul;
    };
    auto need_lu = [&]() -> const LUFactorization& {
        if (!lu) throw Error("LU factorisation failed");
        return *lu;
    };

    run("factorization_residual", 1e-10L,
        [&] { return factorization_residual(P, need_ul().factors.upper, need_ul().factors.lower, 30); });
    run("factor_stochasticity", 1e-10L, [&] {
        const auto a = validate_stochastic(need_ul().factors.upper, 30, 1);
        const auto b = validate_stochastic(need_ul().factors.lower, 31, 1);
        return std::max({-a.max_negative_entry, -b.max_negative_entry, a.max_row_sum_deviation,
                         b.max_row_sum_deviation});
    });
    run("paper_factors", 1e-10L, [&] { return factor_mismatch(need_ul().factors.upper, need_ul().factors.lower, p, 20); });
    run("darboux_ul_stochasticity", 1e-10L, [&] {
        const auto r = validate_stochastic(darboux_from_ul(need_ul().factors.upper, need_ul().factors.lower, 20).transformed, 20, 1);
        return std::max(-r.max_negative_entry, r.max_row_sum_deviation);
    });
    run("darboux_lu_stochasticity", 1e-10L, [&] {
        const auto r = validate_stochastic(darboux_from_lu(need_lu().factors.upper, need_lu().factors.lower, 20).transformed, 20, 1);
        return std::max(-r.max_negative_entry, r.max_row_sum_deviation);
    });
    run("orthogonality", 1e-10L, [&] {
        const WeightSpec W = jacobi_weight(p);
        const auto Q = polynomial_sequence(P, 8);
        Real worst = 0;
        for (std::size_t n = 0; n <= 8; ++n) {
            const Real norm = inner_product(Q[n], Q[n], W).cwiseAbs().maxCoeff();
            for (std::size_t m = 0; m < n; ++m)
                worst = std::max(worst, inner_product(Q[n], Q[m], W).cwiseAbs().maxCoeff() / norm);
        }
        return worst;
    });
    run("kmcg_vs_power", 1e-8L, [&] { return kmcg_vs_power_error(p, 3, 6, 15); });
    run("invariant_measure", 1e-8L, [&] { return invariant_measure_error(p, 9, 15); });
    run("lu_alpha_shift", 1e-10L, [&] { return factor_mismatch(need_lu().factors.upper, need_lu().factors.lower, shifted, 20); });
    run("ode_remark", 1e-8L, [&] {
        std::vector<Real> xs;
        for (int i = 0; i < 20; ++i) xs.push_back(Real(0.05) + Real(0.9) * i / 19);
        Real worst = 0;
        for (std::size_t n = 0; n <= 5; ++n) {
            const OdeCheck a = ode_check(p, Real(0.25), 1, n, xs);
            const OdeCheck b = ode_check(p, Real(0.5), 1, n, xs);
            worst = std::max({worst, a.residual, b.residual, (a.lambda - b.lambda).cwiseAbs().maxCoeff()});
        }
        return worst;
    });
    return report;
}

}  // namespace qbd
