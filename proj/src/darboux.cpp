#include "qbd/darboux.hpp"

namespace qbd {

std::string_view to_string(DarbouxSource s) { return s == DarbouxSource::from_ul ? "from_ul" : "from_lu"; }

DarbouxResult darboux_from_ul(const BlockSequence& upper, const BlockSequence& lower, std::size_t levels) {
    if (upper.band() != Band::upper_bidiagonal || lower.band() != Band::lower_bidiagonal)
        throw DimensionError("darboux_from_ul needs an (upper, lower) factor pair");
    return {multiply_banded(lower, upper, levels), DarbouxSource::from_ul};
}

DarbouxResult darboux_from_lu(const BlockSequence& upper, const BlockSequence& lower, std::size_t levels) {
    if (upper.band() != Band::upper_bidiagonal || lower.band() != Band::lower_bidiagonal)
        throw DimensionError("darboux_from_lu needs an (upper, lower) factor pair");
    return {multiply_banded(upper, lower, levels), DarbouxSource::from_lu};
}

}  // namespace qbd
