#pragma once

#include "qbd/types.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace qbd {

enum class Band { tridiagonal, upper_bidiagonal, lower_bidiagonal };

std::string_view to_string(Band band);
Band band_from_string(std::string_view name);

/// Blocks of one block row of a banded semi-infinite matrix.
///
/// tridiagonal: sub = C_n, diag = B_n, super = A_n
/// upper:       diag = Y_n, super = X_n
/// lower:       sub = R_n, diag = S_n
///
/// The sub-diagonal block is absent at level 0.
struct LevelBlocks {
    std::optional<Block> sub;
    Block diag;
    std::optional<Block> super;
};

/// Level-indexed sequence of d x d blocks describing a block tridiagonal or
/// block bidiagonal semi-infinite matrix. Blocks come from a generator that
/// must be a pure function of the level; stored sequences are generators over
/// an immutable shared vector.
class BlockSequence {
public:
    using Generator = std::function<LevelBlocks(std::size_t)>;

    BlockSequence(int d, Band band, Generator generator,
                  std::optional<std::size_t> level_count = std::nullopt);

    static BlockSequence stored(int d, Band band, std::vector<LevelBlocks> levels);

    int dim() const noexcept { return d_; }
    Band band() const noexcept { return band_; }

    /// Number of levels the sequence can provide; nullopt when unbounded.
    std::optional<std::size_t> level_count() const noexcept { return level_count_; }

    /// Blocks of level n, checked for shape, band structure and finiteness.
    /// Throws GeneratorError naming n on any failure.
    LevelBlocks level(std::size_t n) const;

    /// Shorthands for the individual blocks of level n.
    Block sub(std::size_t n) const;
    Block diag(std::size_t n) const;
    Block super(std::size_t n) const;

    /// Evaluates and stores levels 0..count-1.
    BlockSequence materialize(std::size_t count) const;

private:
    int d_;
    Band band_;
    Generator generator_;
    std::optional<std::size_t> level_count_;
};

/// Leading principal (N d) x (N d) section of the semi-infinite matrix.
Block truncate_dense(const BlockSequence& seq, std::size_t levels);

/// Product of an (upper, lower) or (lower, upper) bidiagonal pair, returned as a
/// stored tridiagonal sequence with `levels` levels.
///
/// upper * lower: A_n = X_n S_{n+1},  B_n = X_n R_{n+1} + Y_n S_n,  C_n = Y_n R_n
/// lower * upper: A_n = S_n X_n,      B_n = R_n X_{n-1} + S_n Y_n,  C_n = R_n Y_{n-1}
///
/// An upper * lower product needs level `levels` of the right factor.
BlockSequence multiply_banded(const BlockSequence& left, const BlockSequence& right,
                              std::size_t levels);

struct StochasticityReport {
    /// Most negative scalar entry seen, or 0 when every entry is nonnegative.
    Real max_negative_entry = 0;
    Real max_row_sum_deviation = 0;
    std::optional<std::size_t> offending_level;
    bool passed = true;
};

/// Checks entries >= -tol and |row sum - 1| <= tol over levels 0..levels-1.
/// Row sums span every block of the level (C_n + B_n + A_n, Y_n + X_n, R_n + S_n).
StochasticityReport validate_stochastic(const BlockSequence& seq, std::size_t levels, Real tol);

/// Reciprocal 1-norm condition number; 0 for exactly singular input.
Real reciprocal_condition(const Block& m);

inline constexpr Real kSingularRcond = 1e-13L;

/// Inverse of a small square block. Throws SingularMatrixError when the
/// reciprocal condition number drops below kSingularRcond.
Block small_inverse(const Block& m, std::optional<std::size_t> level = std::nullopt,
                    std::string_view which = "matrix");

}  // namespace qbd
