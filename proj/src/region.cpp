#include "qbd/region.hpp"

#include <algorithm>
#include <thread>

namespace qbd {

std::string_view to_string(RegionCase c) {
    switch (c) {
        case RegionCase::case1: return "1";
        case RegionCase::case2a: return "2a";
        case RegionCase::case2b: return "2b";
        case RegionCase::case2c: return "2c";
        case RegionCase::case2d: return "2d";
    }
    return "?";
}

RegionCase region_case_from_string(std::string_view name) {
    if (name == "1" || name == "case1") return RegionCase::case1;
    if (name == "2a" || name == "case2a") return RegionCase::case2a;
    if (name == "2b" || name == "case2b") return RegionCase::case2b;
    if (name == "2c" || name == "case2c") return RegionCase::case2c;
    if (name == "2d" || name == "case2d") return RegionCase::case2d;
    throw ParameterError("unknown region case '" + std::string(name) + "'");
}

Block region_alpha0(const JacobiParams& p, RegionCase which, Real s_a, Real s_b) {
    switch (which) {
        case RegionCase::case1: return alpha0_case1(p, s_a, s_b);
        case RegionCase::case2a: return alpha0_case2a(p, s_a, s_b);
        case RegionCase::case2b: return alpha0_case2b(p, s_a, s_b);
        case RegionCase::case2c: return alpha0_case2c(s_a, s_b);
        case RegionCase::case2d: return alpha0_case2d(s_a, s_b);
    }
    throw ParameterError("unknown region case");
}

RegionEvaluator::RegionEvaluator(const JacobiParams& p, std::size_t n_check) : p_(p), n_check_(n_check) {
    validate(p);
    if (p.d != 2) throw ParameterError("region analysis is only defined for d = 2");
    if (n_check < 1) throw ParameterError("n_check must be at least 1");
    monic_ = monic_reduce(jacobi_block_sequence(p), n_check + 2);
    if (p.alpha > 0) moments_ = moments_d2(p);
}

RegionResult RegionEvaluator::evaluate(RegionCase which, Real s_a, Real s_b) const {
    RegionResult r;
    if (which == RegionCase::case1) r.analytic_inside = case1_analytic_inside(p_, s_a, s_b);
    if (which == RegionCase::case2a) r.analytic_inside = case2a_analytic_inside(p_, s_a, s_b);
    const Block alpha0 = region_alpha0(p_, which, s_a, s_b);

    if (which == RegionCase::case1 && moments_) {
        try {
            r.m_psd = geronimus_mass(alpha0, *moments_).psd;
        } catch (const SingularMatrixError&) {
            r.m_psd.reset();
        }
    }

    try {
        // Factors up to a level do not depend on the horizon, so short horizons
        // are tried first and most outside points are rejected cheaply.
        for (std::size_t horizon : {std::size_t{4}, std::size_t{16}, n_check_}) {
            if (horizon > n_check_) continue;
            const std::size_t levels = horizon + 1;
            const ULFactorization f = factorize_ul(monic_, alpha0, TauLowerTriangular{}, levels);
            const StochasticityReport up = validate_stochastic(f.factors.upper, levels, 1);
            const StochasticityReport low = validate_stochastic(f.factors.lower, levels + 1, 1);
            r.min_entry = std::min(up.max_negative_entry, low.max_negative_entry);
            const Real row_dev = std::max(up.max_row_sum_deviation, low.max_row_sum_deviation);
            r.stochastic_ok = r.min_entry >= -kRegionEntryTol && row_dev <= kRegionRowSumTol;
            if (row_dev > kRegionRowSumTol) r.reason = "row sums drift from 1";
            if (!r.stochastic_ok) break;
        }
    } catch (const Error& e) {
        r.stochastic_ok = false;
        r.reason = e.what();
    }
    return r;
}

RegionResult region_membership(const JacobiParams& p, const RegionQuery& q) {
    return RegionEvaluator(p, q.n_check).evaluate(q.which, q.s_a, q.s_b);
}

std::pair<GridAxis, GridAxis> default_region_axes(const JacobiParams& p, RegionCase which, std::size_t count) {
    if (which == RegionCase::case1) {
        const Real s21 = case1_s21_bound(p);
        const Real top = std::max(case1_s11_bound(p, s21), case1_psd_s11_bound(p, s21));
        return {GridAxis{0, Real(1.2) * s21, count}, GridAxis{0, Real(1.2) * top, count}};
    }
    return {GridAxis{0, Real(1.25), count}, GridAxis{0, Real(1.25), count}};
}

RegionScan scan_region(const JacobiParams& p, RegionCase which, const GridAxis& a, const GridAxis& b,
                       std::size_t n_check, unsigned threads) {
    if (a.count < 1 || b.count < 1) throw ParameterError("grid needs at least one point per axis");
    const RegionEvaluator eval(p, n_check);
    RegionScan scan;
    scan.which = which;
    scan.a = a;
    scan.b = b;
    const std::size_t total = a.count * b.count;
    scan.cells.resize(total);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    auto work = [&](unsigned t) {
        for (std::size_t idx = t; idx < total; idx += threads)
            scan.cells[idx] = eval.evaluate(which, a.at(idx / b.count), b.at(idx % b.count));
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();

    scan.boundary.assign(total, false);
    for (std::size_t i = 0; i < a.count; ++i) {
        for (std::size_t j = 0; j < b.count; ++j) {
            const auto& here = scan.cell(i, j).analytic_inside;
            if (!here) continue;
            bool edge = false;
            for (int di = -1; di <= 1 && !edge; ++di) {
                for (int dj = -1; dj <= 1 && !edge; ++dj) {
                    const auto ni = static_cast<long>(i) + di, nj = static_cast<long>(j) + dj;
                    if (ni < 0 || nj < 0 || ni >= static_cast<long>(a.count) || nj >= static_cast<long>(b.count))
                        continue;
                    edge = scan.cell(ni, nj).analytic_inside != here;
                }
            }
            scan.boundary[i * b.count + j] = edge;
            if (!edge) {
                ++scan.compared;
                if (*here == scan.cell(i, j).stochastic_ok) ++scan.agreed;
            }
        }
    }
    return scan;
}

}  // namespace qbd
