#pragma once

#include "qbd/jacobi_params.hpp"

#include <string>
#include <vector>

namespace qbd {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    Real value = 0;      // measured error (or agreement) that was compared
    Real tolerance = 0;
    std::string detail;  // set when the check could not run
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Cross-module invariant suite for the Jacobi example: factorisation
/// residual, factor and Darboux stochasticity, closed-form factor reproduction,
/// orthogonality, Karlin-McGregor against matrix powers, invariant measure,
/// LU alpha shift and the ODE check. Parameters are validated first
/// (ParameterError); later failures are recorded in the report.
VerifyReport verify_all(const JacobiParams& p);

/// Max |P^n_ij (quadrature) - (truncated P)^n_ij| over i, j <= max_level, n <= max_steps.
Real kmcg_vs_power_error(const JacobiParams& p, std::size_t max_level, std::size_t max_steps,
                         std::size_t truncation);

/// Max |(pi P - pi)_m| over blocks m < blocks, using the truncation of P.
Real invariant_measure_error(const JacobiParams& p, std::size_t blocks, std::size_t truncation);

}  // namespace qbd
