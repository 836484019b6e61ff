#pragma once

#include "qbd/types.hpp"

namespace qbd {

/// Parameters of the matrix-valued Jacobi example: alpha, beta > -1,
/// 0 < k < beta + 1, block size d >= 1.
struct JacobiParams {
    Real alpha = 0;
    Real beta = 0;
    Real k = 0;
    int d = 1;
};

/// Throws ParameterError when the parameter ranges are violated.
void validate(const JacobiParams& p);

/// Additionally requires nonnegative integers with 1 <= k <= beta and d = 2.
void validate_urn(const JacobiParams& p);

/// Same parameters with alpha shifted by delta. No range check is applied to
/// the result; shifted chains are only used as algebraic helpers.
JacobiParams shift_alpha(const JacobiParams& p, Real delta);

}  // namespace qbd
