#pragma once

#include "qbd/blockmat.hpp"

#include <cstddef>
#include <string_view>

namespace qbd {

enum class DarbouxSource {
    from_ul,  // P~ = P_L P_U
    from_lu,  // P^ = P~_U P~_L
};

std::string_view to_string(DarbouxSource s);

struct DarbouxResult {
    BlockSequence transformed;
    DarbouxSource source;
};

/// P~ = P_L P_U: A~_n = S_n X_n, B~_n = R_n X_{n-1} + S_n Y_n, C~_n = R_n Y_{n-1}.
DarbouxResult darboux_from_ul(const BlockSequence& upper, const BlockSequence& lower, std::size_t levels);

/// P^ = P~_U P~_L: A^_n = X~_n S~_{n+1}, B^_n = X~_n R~_{n+1} + Y~_n S~_n, C^_n = Y~_n R~_n.
/// Needs level `levels` of the lower factor.
DarbouxResult darboux_from_lu(const BlockSequence& upper, const BlockSequence& lower, std::size_t levels);

}  // namespace qbd
