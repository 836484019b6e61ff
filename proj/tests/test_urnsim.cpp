#include "support.hpp"

#include "qbd/darboux.hpp"
#include "qbd/jacobi.hpp"
#include "qbd/urnsim.hpp"

#include <doctest.h>

using namespace qbd;
using namespace testing;

namespace {

Real total(const std::map<std::size_t, Real>& m) {
    Real s = 0;
    for (const auto& [t, p] : m) s += p;
    return s;
}

Real prob(const std::map<std::size_t, Real>& m, std::size_t target) {
    const auto it = m.find(target);
    return it == m.end() ? Real(0) : it->second;
}

}  // namespace

TEST_SUITE("urnsim") {

TEST_CASE("experiment names") {
    for (Experiment e : {Experiment::exp1, Experiment::exp2, Experiment::composed_P, Experiment::composed_Ptilde})
        CHECK(experiment_from_string(to_string(e)) == e);
    CHECK_THROWS_AS(experiment_from_string("exp3"), ParameterError);
}

TEST_CASE("experiment 1 probabilities") {
    const auto odd = experiment1_distribution(kP321, 1);
    CHECK(std::abs(prob(odd, 3) - Real(1) / 2) < 1e-18);
    const auto even = experiment1_distribution(kP321, 0);
    CHECK(std::abs(prob(even, 0) - Real(18) / 35) < 1e-18);
    for (std::size_t n = 0; n <= 12; ++n) {
        const auto d = experiment1_distribution(kP321, n);
        CHECK(std::abs(total(d) - 1) < 1e-18);
        for (const auto& [t, p] : d) {
            CHECK(t >= n);
            CHECK(t <= n + 2);
            CHECK(p >= 0);
        }
    }
}

TEST_CASE("experiment 2 probabilities") {
    const auto zero = experiment2_distribution(kP321, 0);
    CHECK(zero.size() == 1u);
    CHECK(prob(zero, 0) == 1);
    CHECK(std::abs(prob(experiment2_distribution(kP321, 2), 0) - Real(1) / 8) < 1e-18);
    CHECK(std::abs(prob(experiment2_distribution(kP321, 1), 0) - Real(1) / 6) < 1e-18);
    for (std::size_t n = 0; n <= 12; ++n) {
        const auto d = experiment2_distribution(kP122, n);
        CHECK(std::abs(total(d) - 1) < 1e-18);
        for (const auto& [t, p] : d) CHECK(t <= n);
    }
}

TEST_CASE("single experiments match the explicit factors") {
    for (const auto& p : {kP321, kP122}) {
        const BlockSequence U = paper_upper_factor(p);
        const BlockSequence L = paper_lower_factor(p);
        for (std::size_t n = 0; n <= 10; ++n) {
            const auto e1 = experiment1_distribution(p, n);
            const auto u = flattened_row(U, n);
            const auto e2 = experiment2_distribution(p, n);
            const auto l = flattened_row(L, n);
            for (std::size_t t = 0; t <= n + 2; ++t) {
                CHECK(std::abs(prob(e1, t) - prob(u, t)) < 1e-15);
                CHECK(std::abs(prob(e2, t) - prob(l, t)) < 1e-15);
            }
        }
    }
}

TEST_CASE("composed experiments match P and its Darboux transform") {
    for (const auto& p : {kP321, kP122}) {
        const BlockSequence P = jacobi_block_sequence(p);
        const BlockSequence Pt = darboux_from_ul(paper_upper_factor(p), paper_lower_factor(p), 10).transformed;
        for (std::size_t n = 0; n <= 8; ++n) {
            const auto c = one_step_distribution({p, Experiment::composed_P}, n);
            const auto ct = one_step_distribution({p, Experiment::composed_Ptilde}, n);
            const auto r = flattened_row(P, n);
            const auto rt = flattened_row(Pt, n);
            CHECK(std::abs(total(c) - 1) < 1e-15);
            for (std::size_t t = 0; t <= n + 4; ++t) {
                CHECK(std::abs(prob(c, t) - prob(r, t)) < 1e-15);
                CHECK(std::abs(prob(ct, t) - prob(rt, t)) < 1e-15);
            }
        }
    }
}

TEST_CASE("sampled steps stay in reach") {
    SplitMix64 rng(11);
    const UrnChainSpec composed{kP321, Experiment::composed_P};
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = static_cast<std::size_t>(i % 9);
        const std::size_t t1 = experiment1_step(composed, n, rng);
        const std::size_t t2 = experiment2_step(composed, n, rng);
        CHECK(t1 >= n);
        CHECK(t1 <= n + 2);
        CHECK(t2 <= n);
        CHECK(t2 + 2 >= n);
        const std::size_t t = chain_step(composed, n, rng);
        CHECK(t + 2 >= n);
        CHECK(t <= n + 2);
    }
}

TEST_CASE("SplitMix64 reference outputs") {
    // First outputs for seed 1234567 from the published reference generator.
    SplitMix64 g(1234567);
    CHECK(g() == 6457827717110365317ULL);
    CHECK(g() == 3203168211198807973ULL);
    SplitMix64 u(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(trial_seed(7, 0) != trial_seed(7, 1));
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
}

TEST_CASE("empirical kernels") {
    const UrnChainSpec spec{kP321, Experiment::composed_P};
    const EmpiricalKernel one = empirical_kernel(spec, 0, 1, 7, 1);
    std::uint64_t sum = 0;
    for (const auto& [t, c] : one.counts) sum += c;
    CHECK(sum == 1u);
    CHECK(one.trials == 1u);

    const EmpiricalKernel a = empirical_kernel(spec, 3, 20000, 7, 1);
    const EmpiricalKernel b = empirical_kernel(spec, 3, 20000, 7, 4);
    CHECK(a.counts == b.counts);
    const EmpiricalKernel c = empirical_kernel(spec, 3, 20000, 8, 1);
    CHECK(a.counts != c.counts);

    const EmpiricalKernel zero = empirical_kernel({kP321, Experiment::exp2}, 0, 500, 7, 1);
    CHECK(zero.counts.size() == 1u);
    CHECK(zero.counts.at(0) == 500u);
}

TEST_CASE("kernel test against reference rows") {
    const UrnChainSpec spec{kP321, Experiment::exp1};
    const std::uint64_t trials = 100000;
    const EmpiricalKernel k = empirical_kernel(spec, 1, trials, 7, 0);
    const auto ref = flattened_row(paper_upper_factor(kP321), 1);
    const KernelTestReport ok = kernel_vs_matrix(k, ref, 3);
    CHECK(ok.passed);
    CHECK(ok.rows.size() == ref.size());

    // Shift mass between the two targets by ten standard errors.
    auto bad = ref;
    const Real p = bad.at(3);
    const Real shift = 10 * std::sqrt(p * (1 - p) / trials);
    bad.at(3) += shift;
    bad.at(1) -= shift;
    CHECK_FALSE(kernel_vs_matrix(k, bad, 3).passed);

    auto unnormalised = ref;
    unnormalised.at(3) += Real(1e-6);
    CHECK_THROWS_AS(kernel_vs_matrix(k, unnormalised, 3), ParameterError);

    std::map<std::size_t, Real> missing{{1, 1}};
    CHECK_THROWS_AS(kernel_vs_matrix(k, missing, 3), ParameterError);
}

TEST_CASE("flattened rows") {
    const auto row = flattened_row(jacobi_block_sequence(kP321), 0);
    const auto t = oracle::blocks(kP321Exact, 0);
    CHECK(std::abs(prob(row, 0) - t.B[0][0].value()) < 1e-18);
    CHECK(std::abs(prob(row, 1) - t.B[0][1].value()) < 1e-18);
    CHECK(std::abs(prob(row, 2) - t.A[0][0].value()) < 1e-18);
    CHECK(std::abs(total(row) - 1) < 1e-17);
}

TEST_CASE("urn parameters must be integers") {
    CHECK_THROWS_AS(experiment1_distribution(JacobiParams{3.5L, 2, 1, 2}, 0), ParameterError);
    CHECK_THROWS_AS(empirical_kernel({kP321, Experiment::exp1}, 0, 0, 7, 1), ParameterError);
}

}
