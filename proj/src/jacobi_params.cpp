#include "qbd/jacobi_params.hpp"

#include <cmath>
#include <sstream>

namespace qbd {

namespace {

bool is_integer(Real v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

void validate(const JacobiParams& p) {
    std::ostringstream os;
    if (p.d < 1) {
        os << "d must be positive, got " << p.d;
    } else if (!std::isfinite(p.alpha) || p.alpha <= -1) {
        os << "alpha must exceed -1, got " << static_cast<double>(p.alpha);
    } else if (!std::isfinite(p.beta) || p.beta <= -1) {
        os << "beta must exceed -1, got " << static_cast<double>(p.beta);
    } else if (!std::isfinite(p.k) || p.k <= 0 || p.k >= p.beta + 1) {
        os << "k must lie in (0, beta + 1), got " << static_cast<double>(p.k);
    }
    if (!os.str().empty()) throw ParameterError(os.str());
}

void validate_urn(const JacobiParams& p) {
    validate(p);
    if (p.d != 2) throw ParameterError("urn models need d = 2");
    if (!is_integer(p.alpha) || !is_integer(p.beta) || !is_integer(p.k) || p.alpha < 0 || p.beta < 0)
        throw ParameterError("urn models need nonnegative integer alpha, beta, k");
    if (p.k < 1 || p.k > p.beta) throw ParameterError("urn models need 1 <= k <= beta");
}

JacobiParams shift_alpha(const JacobiParams& p, Real delta) {
    JacobiParams q = p;
    q.alpha += delta;
    return q;
}

}  // namespace qbd
