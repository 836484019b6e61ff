// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "qbd/cli.hpp"
#include "qbd/darboux.hpp"
#include "qbd/factorization.hpp"
#include "qbd/jacobi.hpp"
#include "qbd/region.hpp"
#include "qbd/spectral.hpp"
#include "qbd/urnsim.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace qbd;

namespace {

const JacobiParams kP321{3, 2, 1, 2};
const JacobiParams kP122{1, 2, 2, 2};
const oracle::Params kP321Exact{3, 2, 1};
const oracle::Params kP122Exact{1, 2, 2};

struct Outcome {
    bool passed = false;
    std::string detail;
};

Block to_block(const oracle::FMat& f) {
    Block m(2, 2);
    m << f[0][0].value(), f[0][1].value(), f[1][0].value(), f[1][1].value();
    return m;
}

Real max_diff(const Block& a, const Block& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. UL round trip over 30 levels with stochastic factors, under 1 s.
Outcome round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    Real worst = 0;
    bool stochastic = true;
    for (const auto& [p, e] : {std::pair{kP321, kP321Exact}, std::pair{kP122, kP122Exact}}) {
        const BlockSequence P = jacobi_block_sequence(p);
        const ULFactorization f = factorize_ul(P, alpha0_paper(p), TauJacobiPaper{p}, 31);
        const BlockSequence prod = multiply_banded(f.factors.upper, f.factors.lower, 30);
        for (int n = 0; n < 30; ++n) {
            const oracle::Tri t = oracle::blocks(e, n);
            const auto un = static_cast<std::size_t>(n);
            worst = std::max(worst, max_diff(prod.diag(un), to_block(t.B)));
            worst = std::max(worst, max_diff(prod.super(un), to_block(t.A)));
            if (n > 0) worst = std::max(worst, max_diff(prod.sub(un), to_block(t.C)));
        }
        stochastic = stochastic && validate_stochastic(f.factors.upper, 30, 1e-10L).passed &&
                     validate_stochastic(f.factors.lower, 30, 1e-10L).passed;
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-10 && stochastic && secs < 1,
            "max|P - P_U P_L| = " + fmt("%.3g", double(worst)) + ", factors stochastic = " + (stochastic ? "yes" : "no") +
                ", " + fmt("%.3f", secs) + " s"};
}

// 2. Assembled factors equal the exact closed-form factors for n <= 20.
Outcome factor_reproduction() {
    Real worst = 0;
    for (const auto& [p, e] : {std::pair{kP321, kP321Exact}, std::pair{kP122, kP122Exact}}) {
        const ULFactorization f = factorize_ul(jacobi_block_sequence(p), alpha0_paper(p), TauJacobiPaper{p}, 22);
        for (int n = 0; n <= 20; ++n) {
            const oracle::Factors o = oracle::factors(e, n);
            const auto un = static_cast<std::size_t>(n);
            worst = std::max(worst, max_diff(f.factors.upper.super(un), to_block(o.X)));
            worst = std::max(worst, max_diff(f.factors.upper.diag(un), to_block(o.Y)));
            worst = std::max(worst, max_diff(f.factors.lower.diag(un), to_block(o.S)));
            if (n > 0) worst = std::max(worst, max_diff(f.factors.lower.sub(un), to_block(o.R)));
        }
    }
    return {worst <= 1e-10, "max entry mismatch = " + fmt("%.3g", double(worst))};
}

// 3. Both Darboux transforms are stochastic over 20 levels.
Outcome darboux_stochasticity() {
    Real worst = 0;
    bool ok = true;
    for (const auto& p : {kP321, kP122}) {
        const BlockSequence P = jacobi_block_sequence(p);
        const ULFactorization ul = factorize_ul(P, alpha0_paper(p), TauJacobiPaper{p}, 21);
        const LUFactorization lu = factorize_lu(P, TauJacobiPaper{p}, 21);
        for (const auto& r : {darboux_from_ul(ul.factors.upper, ul.factors.lower, 20),
                              darboux_from_lu(lu.factors.upper, lu.factors.lower, 20)}) {
            const StochasticityReport s = validate_stochastic(r.transformed, 20, 1e-10L);
            ok = ok && s.passed;
            worst = std::max({worst, s.max_row_sum_deviation, -s.max_negative_entry});
        }
    }
    return {ok, "worst row-sum deviation or negative entry = " + fmt("%.3g", double(worst))};
}

// 4. Geronimus/Christoffel identities and the moments.
Outcome spectral_identities() {
    const WeightSpec W = jacobi_weight(kP321);
    const WeightSpec G = geronimus_transform(W, alpha0_paper(kP321));
    const Real atom = G.atom0 ? G.atom0->cwiseAbs().maxCoeff() : Real(0);
    const bool i = atom <= 1e-12 && G.a == W.a - 1 && G.b == W.b;

    const WeightSpec back = christoffel_transform(G);
    const bool ii = back.a == W.a && back.b == W.b && !back.atom0 && back.part == W.part;

    // mu_0 of the alpha-1 weight against tau_0^{-1} mu_{-1} tau_0^{-T}, all by quadrature.
    const Block tinv = jacobi_tau0_inverse(kP321);
    const MatrixPolynomial I = MatrixPolynomial::identity(2);
    const Block mu0_shift = inner_product(I, I, jacobi_weight(shift_alpha(kP321, -1)));
    const Block rel = tinv * weight_moments(W).mu_minus1 * tinv.transpose();
    const Real iii_err = max_diff(mu0_shift, rel);

    Block expect(2, 2);
    expect << Real(3) / 70, 0, 0, Real(3) / 140;
    const Real iv_err = max_diff(inner_product(I, I, W), expect);

    const bool ok = i && ii && iii_err <= 1e-12 && iv_err <= 1e-12;
    return {ok, "atom " + fmt("%.3g", double(atom)) + ", inverse " + (ii ? "ok" : "bad") + ", moment relation " +
                    fmt("%.3g", double(iii_err)) + ", mu_0 " + fmt("%.3g", double(iv_err))};
}

// 5. Karlin-McGregor blocks against exact truncated powers, under 5 s.
Outcome karlin_mcgregor() {
    const auto t0 = std::chrono::steady_clock::now();
    const BlockSequence P = jacobi_block_sequence(kP321);
    const WeightSpec W = jacobi_weight(kP321);
    const oracle::Dense T = oracle::jacobi_truncation(kP321Exact, 15);
    oracle::Dense Pn = oracle::dense_identity(T.size());
    Real worst = 0;
    for (std::size_t n = 0; n <= 6; ++n) {
        if (n > 0) Pn = oracle::dense_mul(Pn, T);
        for (std::size_t i = 0; i <= 3; ++i)
            for (std::size_t j = 0; j <= 3; ++j) {
                const Block K = kmcg_entry(P, W, n, i, j);
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        worst = std::max(worst, std::abs(K(r, c) - Pn[2 * i + r][2 * j + c]));
            }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs < 5, "max error = " + fmt("%.3g", double(worst)) + ", " + fmt("%.3f", secs) + " s"};
}

// 6. Stationarity of the invariant measure on blocks m <= 8, truncation 15.
Outcome invariant_measure_check() {
    Real worst = 0;
    for (const auto& [p, e] : {std::pair{kP321, kP321Exact}, std::pair{kP122, kP122Exact}}) {
        const auto pi = invariant_measure(jacobi_block_sequence(p), jacobi_weight(p), 15);
        const oracle::Dense T = oracle::jacobi_truncation(e, 15);
        for (std::size_t m = 0; m <= 8; ++m)
            for (std::size_t c = 0; c < 2; ++c) {
                Real v = -pi[m](static_cast<Eigen::Index>(c));
                for (std::size_t r = 0; r < T.size(); ++r) v += pi[r / 2](static_cast<Eigen::Index>(r % 2)) * T[r][2 * m + c];
                worst = std::max(worst, std::abs(v));
            }
    }
    return {worst <= 1e-8, "max |(pi P - pi)_m| = " + fmt("%.3g", double(worst))};
}

// 7. Case-1 region at (3,2,1): scan agreement and the two bounds, under 60 s.
Outcome case1_region() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto [a, b] = default_region_axes(kP321, RegionCase::case1, 200);
    const RegionScan scan = scan_region(kP321, RegionCase::case1, a, b, 50, 0);
    const double secs = seconds_since(t0);
    const Real s21 = case1_s21_bound(kP321);
    const Real s11 = case1_s11_bound(kP321, Real(1) / 12);
    const bool s21_ok = std::abs(s21 - Real(1) / 12) <= 1e-12;
    const bool s11_ok = std::abs(s11 - Real(115) / 96) <= 1e-12;
    const bool ok = scan.agreement() >= 0.99 && s21_ok && s11_ok && secs < 60;
    return {ok, "agreement " + fmt("%.4f", double(scan.agreement())) + ", s21 bound " + fmt("%.15g", double(s21)) +
                    ", s11 bound " + fmt("%.15g", double(s11)) + " (expected 115/96 = " + fmt("%.15g", 115.0 / 96) +
                    "), " + fmt("%.1f", secs) + " s"};
}

// 8. Case-2a region at (1,2,2).
Outcome case2a_region() {
    const auto [a, b] = default_region_axes(kP122, RegionCase::case2a, 200);
    const RegionScan scan = scan_region(kP122, RegionCase::case2a, a, b, 50, 0);
    return {scan.agreement() >= 0.99, "agreement " + fmt("%.4f", double(scan.agreement())) + " over " +
                                          std::to_string(scan.compared) + " cells"};
}

// 9. Second-order equation for the Darboux polynomials.
Outcome ode_remark() {
    std::vector<Real> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(Real(0.05) + Real(0.9) * i / 19);
    Real residual = 0, lambda_gap = 0;
    for (std::size_t n = 0; n <= 5; ++n) {
        const OdeCheck q = ode_check(kP321, Real(0.25), 1, n, xs);
        const OdeCheck h = ode_check(kP321, Real(0.5), 1, n, xs);
        residual = std::max({residual, q.residual, h.residual});
        lambda_gap = std::max(lambda_gap, max_diff(q.lambda, h.lambda));
    }
    return {residual <= 1e-8 && lambda_gap <= 1e-9,
            "max residual " + fmt("%.3g", double(residual)) + ", Lambda gap " + fmt("%.3g", double(lambda_gap))};
}

// 10. Urn kernels against factor and chain rows, reproducible, under 10 s.
Outcome urn_correspondence() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    Real worst = 0;
    for (const auto& p : {kP321, kP122}) {
        const BlockSequence U = paper_upper_factor(p);
        const BlockSequence L = paper_lower_factor(p);
        const BlockSequence P = jacobi_block_sequence(p);
        const BlockSequence Pt = darboux_from_ul(U, L, 12).transformed;
        const std::pair<Experiment, const BlockSequence*> cases[] = {{Experiment::exp1, &U},
                                                                     {Experiment::exp2, &L},
                                                                     {Experiment::composed_P, &P},
                                                                     {Experiment::composed_Ptilde, &Pt}};
        for (const auto& [e, seq] : cases)
            for (std::size_t n = 0; n <= 8; ++n) {
                const EmpiricalKernel k = empirical_kernel({p, e}, n, 100000, 7, 0);
                const KernelTestReport r = kernel_vs_matrix(k, flattened_row(*seq, n), 3);
                ok = ok && r.passed;
                for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.z));
            }
    }
    // Same seed, different thread counts: identical bytes.
    auto csv = [](const std::string& threads) {
        std::ostringstream out, err;
        run_cli({"urn", "--alpha", "3", "--beta", "2", "--k", "1", "--experiment", "composed_Ptilde", "--start-max",
                 "8", "--trials", "100000", "--seed", "7", "--threads", threads},
                out, err);
        return out.str();
    };
    const bool reproducible = csv("1") == csv("3");
    const double secs = seconds_since(t0);
    return {ok && reproducible && secs < 10, "max |z| " + fmt("%.3f", double(worst)) + ", reproducible " +
                                                 (reproducible ? "yes" : "no") + ", " + fmt("%.2f", secs) + " s"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"factorization round trip", round_trip},
        {"closed-form factor reproduction", factor_reproduction},
        {"Darboux stochasticity", darboux_stochasticity},
        {"spectral identities", spectral_identities},
        {"Karlin-McGregor", karlin_mcgregor},
        {"invariant measure", invariant_measure_check},
        {"case-1 region", case1_region},
        {"case-2a region", case2a_region},
        {"ODE remark", ode_remark},
        {"urn correspondence", urn_correspondence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
