#include "qbd/urnsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace qbd {

namespace {

struct Urn {
    Real blue;
    Real red;

    Real p_blue() const { return blue / (blue + red); }
    Real p_red() const { return red / (blue + red); }
};

// Two-stage draw: urn A, then urn B after a blue ball or urn R after a red one.
struct TwoStage {
    Real both_blue, both_red, mixed;
};

TwoStage two_stage(const Urn& a, const Urn& b, const Urn& r) {
    const Real bb = a.p_blue() * b.p_blue();
    const Real rr = a.p_red() * r.p_red();
    return {bb, rr, a.p_blue() * b.p_red() + a.p_red() * r.p_blue()};
}

void add(std::map<std::size_t, Real>& dist, std::size_t target, Real p) {
    if (p > 0) dist[target] += p;
}

std::size_t sample(const std::map<std::size_t, Real>& dist, SplitMix64& rng) {
    const double u = rng.uniform();
    double acc = 0;
    for (const auto& [target, p] : dist) {
        acc += static_cast<double>(p);
        if (u < acc) return target;
    }
    return dist.rbegin()->first;
}

}  // namespace

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::exp1: return "exp1";
        case Experiment::exp2: return "exp2";
        case Experiment::composed_P: return "composed_P";
        case Experiment::composed_Ptilde: return "composed_Ptilde";
    }
    return "?";
}

Experiment experiment_from_string(std::string_view name) {
    if (name == "exp1") return Experiment::exp1;
    if (name == "exp2") return Experiment::exp2;
    if (name == "composed_P") return Experiment::composed_P;
    if (name == "composed_Ptilde") return Experiment::composed_Ptilde;
    throw ParameterError("unknown experiment '" + std::string(name) + "'");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
    return SplitMix64(base_seed + trial * 0x9E3779B97F4A7C15ULL)();
}

std::map<std::size_t, Real> experiment1_distribution(const JacobiParams& p, std::size_t n) {
    validate_urn(p);
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real m = static_cast<Real>(n / 2);
    std::map<std::size_t, Real> dist;
    if (n % 2 == 1) {
        const Urn A{m + b + 2, m + a + 1};
        add(dist, n + 2, A.p_blue());
        add(dist, n, A.p_red());
    } else {
        const TwoStage t = two_stage(Urn{m + a, b - k + 1}, Urn{m + a + b - k + 2, m + k}, Urn{m + k, 1});
        add(dist, n, t.both_blue);
        add(dist, n + 1, t.both_red);
        add(dist, n + 2, t.mixed);
    }
    return dist;
}

std::map<std::size_t, Real> experiment2_distribution(const JacobiParams& p, std::size_t n) {
    validate_urn(p);
    const Real a = p.alpha, b = p.beta, k = p.k;
    const Real m = static_cast<Real>(n / 2);
    std::map<std::size_t, Real> dist;
    if (n == 0) {
        dist[0] = 1;
    } else if (n % 2 == 0) {
        const Urn A{m, m + a + b + 1};
        add(dist, n - 2, A.p_blue());
        add(dist, n, A.p_red());
    } else {
        const TwoStage t = two_stage(Urn{m + a + b - k + 1, 1}, Urn{m + a + b + 2, m}, Urn{m, k});
        add(dist, n, t.both_blue);
        add(dist, n - 1, t.both_red);
        if (n >= 2) add(dist, n - 2, t.mixed);
    }
    return dist;
}

std::map<std::size_t, Real> one_step_distribution(const UrnChainSpec& spec, std::size_t n) {
    const auto& p = spec.params;
    auto compose = [&](auto first, auto second) {
        std::map<std::size_t, Real> out;
        for (const auto& [mid, p1] : first(p, n))
            for (const auto& [target, p2] : second(p, mid)) out[target] += p1 * p2;
        return out;
    };
    switch (spec.experiment) {
        case Experiment::exp1: return experiment1_distribution(p, n);
        case Experiment::exp2: return experiment2_distribution(p, n);
        case Experiment::composed_P: return compose(experiment1_distribution, experiment2_distribution);
        case Experiment::composed_Ptilde: return compose(experiment2_distribution, experiment1_distribution);
    }
    throw ParameterError("unknown experiment");
}

std::size_t experiment1_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng) {
    return sample(experiment1_distribution(spec.params, n), rng);
}

std::size_t experiment2_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng) {
    return sample(experiment2_distribution(spec.params, n), rng);
}

std::size_t chain_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng) {
    switch (spec.experiment) {
        case Experiment::exp1: return experiment1_step(spec, n, rng);
        case Experiment::exp2: return experiment2_step(spec, n, rng);
        case Experiment::composed_P: return experiment2_step(spec, experiment1_step(spec, n, rng), rng);
        case Experiment::composed_Ptilde: return experiment1_step(spec, experiment2_step(spec, n, rng), rng);
    }
    throw ParameterError("unknown experiment");
}

EmpiricalKernel empirical_kernel(const UrnChainSpec& spec, std::size_t start, std::uint64_t trials,
                                 std::uint64_t base_seed, unsigned threads) {
    validate_urn(spec.params);
    if (trials < 1) throw ParameterError("trials must be at least 1");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

    // The step distributions only depend on the state, so they are tabulated
    // once for every state reachable in two steps.
    const std::size_t top = start + 4;
    std::vector<std::map<std::size_t, Real>> d1(top + 1), d2(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        d1[n] = experiment1_distribution(spec.params, n);
        d2[n] = experiment2_distribution(spec.params, n);
    }
    auto step = [&](std::size_t n, SplitMix64& rng) {
        switch (spec.experiment) {
            case Experiment::exp1: return sample(d1[n], rng);
            case Experiment::exp2: return sample(d2[n], rng);
            case Experiment::composed_P: return sample(d2[sample(d1[n], rng)], rng);
            case Experiment::composed_Ptilde: return sample(d1[sample(d2[n], rng)], rng);
        }
        return n;
    };

    std::vector<std::map<std::size_t, std::uint64_t>> partial(threads);
    auto work = [&](unsigned t) {
        for (std::uint64_t trial = t; trial < trials; trial += threads) {
            SplitMix64 rng(trial_seed(base_seed, trial));
            ++partial[t][step(start, rng)];
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();

    EmpiricalKernel k;
    k.start = start;
    k.trials = trials;
    for (const auto& part : partial)
        for (const auto& [target, c] : part) k.counts[target] += c;
    return k;
}

std::map<std::size_t, Real> flattened_row(const BlockSequence& seq, std::size_t n) {
    if (seq.dim() != 2) throw DimensionError("flattened rows need d = 2");
    const std::size_t level = n / 2;
    const auto phase = static_cast<Eigen::Index>(n % 2);
    const LevelBlocks lb = seq.level(level);
    std::map<std::size_t, Real> row;
    auto put = [&](const Block& blk, std::size_t to_level) {
        for (Eigen::Index j = 0; j < 2; ++j)
            if (blk(phase, j) != 0) row[2 * to_level + static_cast<std::size_t>(j)] += blk(phase, j);
    };
    if (lb.sub) put(*lb.sub, level - 1);
    put(lb.diag, level);
    if (lb.super) put(*lb.super, level + 1);
    return row;
}

KernelTestReport kernel_vs_matrix(const EmpiricalKernel& kernel, const std::map<std::size_t, Real>& reference,
                                  Real z_max) {
    Real total = 0;
    for (const auto& [target, p] : reference) total += p;
    if (std::abs(total - 1) > 1e-10L) {
        std::ostringstream os;
        os << "reference probabilities sum to " << static_cast<double>(total) << ", not 1";
        throw ParameterError(os.str());
    }
    for (const auto& [target, c] : kernel.counts) {
        if (c > 0 && reference.find(target) == reference.end())
            throw ParameterError("target " + std::to_string(target) + " was visited but has no reference entry");
    }

    KernelTestReport report;
    report.start = kernel.start;
    for (const auto& [target, p] : reference) {
        KernelTestRow row;
        row.target = target;
        const auto it = kernel.counts.find(target);
        row.count = it == kernel.counts.end() ? 0 : it->second;
        row.trials = kernel.trials;
        row.empirical = static_cast<Real>(row.count) / static_cast<Real>(kernel.trials);
        row.reference = p;
        const Real se = std::sqrt(p * (1 - p) / static_cast<Real>(kernel.trials));
        if (se > 0) {
            row.z = (row.empirical - p) / se;
        } else {
            row.z = row.empirical == p ? 0 : std::numeric_limits<Real>::infinity();
        }
        row.pass = std::abs(row.z) <= z_max;
        report.passed = report.passed && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace qbd
