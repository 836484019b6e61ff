#pragma once

#include "qbd/factorization.hpp"
#include "qbd/jacobi.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbd {

/// d = 2 alpha_0 families. The two coordinates are (s21, s11) for case 1,
/// (s11, s12) for 2(a), (s11, s21) for 2(b), (s21, s22) for 2(c) and
/// (s12, s22) for 2(d).
enum class RegionCase { case1, case2a, case2b, case2c, case2d };

std::string_view to_string(RegionCase c);
RegionCase region_case_from_string(std::string_view name);

Block region_alpha0(const JacobiParams& p, RegionCase which, Real s_a, Real s_b);

struct RegionQuery {
    RegionCase which = RegionCase::case1;
    Real s_a = 0;
    Real s_b = 0;
    std::size_t n_check = 50;
};

struct RegionResult {
    bool stochastic_ok = false;
    std::optional<bool> m_psd;            // case 1 only
    std::optional<bool> analytic_inside;  // cases 1 and 2(a) only
    Real min_entry = 0;                   // most negative factor entry seen, 0 if none
    std::string reason;                   // set when the pipeline failed
};

/// Factor entries below -kRegionEntryTol count as negative.
inline constexpr Real kRegionEntryTol = 1e-12L;
inline constexpr Real kRegionRowSumTol = 1e-9L;

/// Holds the monic reduction and moments for one parameter triple so that
/// many alpha_0 choices can be checked cheaply. Thread-safe for concurrent
/// evaluate() calls.
class RegionEvaluator {
public:
    RegionEvaluator(const JacobiParams& p, std::size_t n_check);

    /// Runs the UL pipeline with the lower-triangular tau strategy and checks
    /// every entry of X_n, Y_n (n <= n_check) and R_n, S_n (n <= n_check + 1).
    RegionResult evaluate(RegionCase which, Real s_a, Real s_b) const;

    const JacobiParams& params() const noexcept { return p_; }
    std::size_t n_check() const noexcept { return n_check_; }

private:
    JacobiParams p_;
    std::size_t n_check_;
    MonicData monic_;
    std::optional<MomentPair> moments_;
};

RegionResult region_membership(const JacobiParams& p, const RegionQuery& q);

/// Cell-centred grid axis: the i-th point is lo + (i + 1/2) (hi - lo) / count.
struct GridAxis {
    Real lo = 0;
    Real hi = 1;
    std::size_t count = 1;

    Real at(std::size_t i) const { return lo + (static_cast<Real>(i) + Real(0.5)) * (hi - lo) / count; }
};

struct RegionScan {
    RegionCase which = RegionCase::case1;
    GridAxis a, b;
    std::vector<RegionResult> cells;  // cell (i, j) at i * b.count + j
    std::vector<bool> boundary;       // analytic label differs from a neighbour

    std::size_t compared = 0;  // cells with an analytic label, boundary excluded
    std::size_t agreed = 0;

    Real agreement() const { return compared == 0 ? Real(0) : static_cast<Real>(agreed) / compared; }
    const RegionResult& cell(std::size_t i, std::size_t j) const { return cells[i * b.count + j]; }
};

/// Axes that cover the analytic region with some margin.
std::pair<GridAxis, GridAxis> default_region_axes(const JacobiParams& p, RegionCase which, std::size_t count);

/// Evaluates every grid point, in parallel when threads != 1 (0 picks the
/// hardware concurrency). Results do not depend on the thread count.
RegionScan scan_region(const JacobiParams& p, RegionCase which, const GridAxis& a, const GridAxis& b,
                       std::size_t n_check, unsigned threads = 0);

}  // namespace qbd
