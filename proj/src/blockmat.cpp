#include "qbd/blockmat.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

namespace qbd {

std::string_view to_string(Band band) {
    switch (band) {
        case Band::tridiagonal: return "tridiagonal";
        case Band::upper_bidiagonal: return "upper";
        case Band::lower_bidiagonal: return "lower";
    }
    return "unknown";
}

Band band_from_string(std::string_view name) {
    if (name == "tridiagonal") return Band::tridiagonal;
    if (name == "upper") return Band::upper_bidiagonal;
    if (name == "lower") return Band::lower_bidiagonal;
    throw ParameterError("unknown band '" + std::string(name) + "'");
}

BlockSequence::BlockSequence(int d, Band band, Generator generator,
                             std::optional<std::size_t> level_count)
    : d_(d), band_(band), generator_(std::move(generator)), level_count_(level_count) {
    if (d < 1) throw ParameterError("block dimension must be positive");
    if (!generator_) throw ParameterError("block sequence needs a generator");
}

BlockSequence BlockSequence::stored(int d, Band band, std::vector<LevelBlocks> levels) {
    auto data = std::make_shared<const std::vector<LevelBlocks>>(std::move(levels));
    const std::size_t count = data->size();
    return BlockSequence(
        d, band, [data](std::size_t n) { return (*data)[n]; }, count);
}

namespace {

void check_block(const Block& b, int d, std::size_t n, const char* name) {
    if (b.rows() != d || b.cols() != d) {
        std::ostringstream os;
        os << "level " << n << ": block " << name << " is " << b.rows() << "x" << b.cols()
           << ", expected " << d << "x" << d;
        throw GeneratorError(os.str(), n);
    }
    if (!b.allFinite()) {
        std::ostringstream os;
        os << "level " << n << ": block " << name << " has non-finite entries";
        throw GeneratorError(os.str(), n);
    }
}

}  // namespace

LevelBlocks BlockSequence::level(std::size_t n) const {
    if (level_count_ && n >= *level_count_) {
        std::ostringstream os;
        os << "level " << n << " requested but the sequence stores only " << *level_count_
           << " levels";
        throw GeneratorError(os.str(), n);
    }
    LevelBlocks blocks;
    try {
        blocks = generator_(n);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "level " << n << ": generator failed: " << e.what();
        throw GeneratorError(os.str(), n);
    }

    const bool has_sub = band_ != Band::upper_bidiagonal;
    const bool has_super = band_ != Band::lower_bidiagonal;
    check_block(blocks.diag, d_, n, "diag");
    if (has_super) {
        if (!blocks.super) throw GeneratorError("level " + std::to_string(n) + ": missing super-diagonal block", n);
        check_block(*blocks.super, d_, n, "super");
    } else {
        blocks.super.reset();
    }
    if (has_sub && n > 0) {
        if (!blocks.sub) throw GeneratorError("level " + std::to_string(n) + ": missing sub-diagonal block", n);
        check_block(*blocks.sub, d_, n, "sub");
    } else {
        blocks.sub.reset();
    }
    return blocks;
}

Block BlockSequence::sub(std::size_t n) const {
    LevelBlocks lb = level(n);
    if (!lb.sub.has_value()) throw GeneratorError("level " + std::to_string(n) + " has no sub-diagonal block", n);
    return lb.sub.value();
}

Block BlockSequence::diag(std::size_t n) const { return level(n).diag; }

Block BlockSequence::super(std::size_t n) const {
    LevelBlocks lb = level(n);
    if (!lb.super.has_value()) throw GeneratorError("level " + std::to_string(n) + " has no super-diagonal block", n);
    return lb.super.value();
}

BlockSequence BlockSequence::materialize(std::size_t count) const {
    std::vector<LevelBlocks> levels;
    levels.reserve(count);
    for (std::size_t n = 0; n < count; ++n) levels.push_back(level(n));
    return stored(d_, band_, std::move(levels));
}

Block truncate_dense(const BlockSequence& seq, std::size_t levels) {
    if (levels < 1) throw ParameterError("truncation needs at least one level");
    const Eigen::Index d = seq.dim();
    const auto size = static_cast<Eigen::Index>(levels) * d;
    Block out = Block::Zero(size, size);
    for (std::size_t n = 0; n < levels; ++n) {
        const LevelBlocks b = seq.level(n);
        const Eigen::Index row = static_cast<Eigen::Index>(n) * d;
        out.block(row, row, d, d) = b.diag;
        if (b.sub) out.block(row, row - d, d, d) = *b.sub;
        if (b.super && n + 1 < levels) out.block(row, row + d, d, d) = *b.super;
    }
    return out;
}

BlockSequence multiply_banded(const BlockSequence& left, const BlockSequence& right,
                              std::size_t levels) {
    if (left.dim() != right.dim()) {
        throw DimensionError("block dimensions differ: " + std::to_string(left.dim()) + " vs " +
                             std::to_string(right.dim()));
    }
    const int d = left.dim();
    std::vector<LevelBlocks> out;
    out.reserve(levels);

    if (left.band() == Band::upper_bidiagonal && right.band() == Band::lower_bidiagonal) {
        for (std::size_t n = 0; n < levels; ++n) {
            const LevelBlocks u = left.level(n);
            const LevelBlocks l = right.level(n);
            const LevelBlocks l_next = right.level(n + 1);
            LevelBlocks t;
            t.super = (*u.super) * l_next.diag;
            t.diag = (*u.super) * (*l_next.sub) + u.diag * l.diag;
            if (n > 0) t.sub = u.diag * (*l.sub);
            out.push_back(std::move(t));
        }
    } else if (left.band() == Band::lower_bidiagonal && right.band() == Band::upper_bidiagonal) {
        std::optional<LevelBlocks> u_prev;
        for (std::size_t n = 0; n < levels; ++n) {
            const LevelBlocks l = left.level(n);
            const LevelBlocks u = right.level(n);
            LevelBlocks t;
            t.super = l.diag * (*u.super);
            t.diag = l.diag * u.diag;
            if (n > 0) {
                t.diag += (*l.sub) * (*u_prev->super);
                t.sub = (*l.sub) * u_prev->diag;
            }
            out.push_back(std::move(t));
            u_prev = u;
        }
    } else {
        throw DimensionError(std::string("cannot multiply ") + std::string(to_string(left.band())) +
                             " by " + std::string(to_string(right.band())) +
                             "; expected an (upper, lower) or (lower, upper) pair");
    }
    return BlockSequence::stored(d, Band::tridiagonal, std::move(out));
}

StochasticityReport validate_stochastic(const BlockSequence& seq, std::size_t levels, Real tol) {
    if (levels < 1) throw ParameterError("validation needs at least one level");
    if (!(tol > 0)) throw ParameterError("tolerance must be positive");
    StochasticityReport report;
    const Eigen::Index d = seq.dim();
    for (std::size_t n = 0; n < levels; ++n) {
        const LevelBlocks b = seq.level(n);
        Vector sums = b.diag.rowwise().sum();
        Real min_entry = b.diag.minCoeff();
        if (b.sub) {
            sums += b.sub->rowwise().sum();
            min_entry = std::min(min_entry, b.sub->minCoeff());
        }
        if (b.super) {
            sums += b.super->rowwise().sum();
            min_entry = std::min(min_entry, b.super->minCoeff());
        }
        const Real deviation = (sums - ones(d)).cwiseAbs().maxCoeff();
        report.max_negative_entry = std::min(report.max_negative_entry, min_entry);
        report.max_row_sum_deviation = std::max(report.max_row_sum_deviation, deviation);
        if (!report.offending_level && (min_entry < -tol || deviation > tol)) {
            report.offending_level = n;
        }
    }
    report.passed = !report.offending_level.has_value();
    return report;
}

Real reciprocal_condition(const Block& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("condition number needs a square block");
    Eigen::FullPivLU<Block> lu(m);
    lu.setThreshold(0);
    if (lu.rank() < m.rows()) return 0;
    const Real norm = m.cwiseAbs().colwise().sum().maxCoeff();
    const Real inv_norm = lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
    if (norm == 0 || !std::isfinite(inv_norm)) return 0;
    return 1 / (norm * inv_norm);
}

Block small_inverse(const Block& m, std::optional<std::size_t> level, std::string_view which) {
    const Real rcond = reciprocal_condition(m);
    if (rcond < kSingularRcond) {
        std::ostringstream os;
        os << which << " is singular (reciprocal condition " << static_cast<double>(rcond) << ")";
        if (level) os << " at level " << *level;
        throw SingularMatrixError(os.str(), level, std::string(which));
    }
    return m.fullPivLu().inverse();
}

}  // namespace qbd
