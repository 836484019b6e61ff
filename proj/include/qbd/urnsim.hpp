#pragma once

#include "qbd/blockmat.hpp"
#include "qbd/jacobi_params.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string_view>
#include <vector>

namespace qbd {

enum class Experiment {
    exp1,             // P_U, pure birth
    exp2,             // P_L, pure death, 0 absorbing
    composed_P,       // exp1 then exp2
    composed_Ptilde,  // exp2 then exp1
};

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);

struct UrnChainSpec {
    JacobiParams params;
    Experiment experiment = Experiment::composed_P;
};

/// SplitMix64 (Steele, Lea, Flood 2014). Used both to derive per-trial seeds
/// and as the per-trial generator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Seed of trial t: the first SplitMix64 output of base_seed + (t + 1) * golden gamma.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial);

/// Exact one-step distribution (target state -> probability) of a single
/// experiment from state n, derived from the urn compositions. Raises
/// ParameterError for non-integer parameters.
std::map<std::size_t, Real> experiment1_distribution(const JacobiParams& p, std::size_t n);
std::map<std::size_t, Real> experiment2_distribution(const JacobiParams& p, std::size_t n);

/// One step of the chain selected by spec; composed experiments are convolved.
std::map<std::size_t, Real> one_step_distribution(const UrnChainSpec& spec, std::size_t n);

std::size_t experiment1_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng);
std::size_t experiment2_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng);
/// One step of spec.experiment (two draws for composed experiments).
std::size_t chain_step(const UrnChainSpec& spec, std::size_t n, SplitMix64& rng);

struct EmpiricalKernel {
    std::size_t start = 0;
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t trials = 0;
};

/// Runs `trials` independent steps from `start`. Trial t draws from
/// SplitMix64(trial_seed(base_seed, t)); counts do not depend on `threads`
/// (0 picks the hardware concurrency).
EmpiricalKernel empirical_kernel(const UrnChainSpec& spec, std::size_t start, std::uint64_t trials,
                                 std::uint64_t base_seed, unsigned threads = 0);

/// Row of state n of the flattened scalar matrix (state 2m + phase <-> level m,
/// phase 0/1) for a tridiagonal or bidiagonal d = 2 block sequence.
std::map<std::size_t, Real> flattened_row(const BlockSequence& seq, std::size_t n);

struct KernelTestRow {
    std::size_t target = 0;
    std::uint64_t count = 0;
    std::uint64_t trials = 0;
    Real empirical = 0;
    Real reference = 0;
    Real z = 0;
    bool pass = false;
};

struct KernelTestReport {
    std::size_t start = 0;
    std::vector<KernelTestRow> rows;
    bool passed = true;
};

/// Per-target z = (empirical - reference) / sqrt(reference (1 - reference) / trials);
/// a target passes when |z| <= z_max. Targets with reference 0 or 1 pass only
/// when matched exactly. Raises ParameterError when the reference does not sum
/// to 1 within 1e-10 or when a visited target has no reference entry.
KernelTestReport kernel_vs_matrix(const EmpiricalKernel& kernel, const std::map<std::size_t, Real>& reference,
                                  Real z_max);

}  // namespace qbd
