#pragma once

#include "oracles.hpp"
#include "qbd/blockmat.hpp"
#include "qbd/jacobi_params.hpp"

#include <functional>
#include <random>

namespace testing {

using qbd::Band;
using qbd::Block;
using qbd::BlockSequence;
using qbd::LevelBlocks;
using qbd::Real;

inline Block m2(Real a, Real b, Real c, Real d) {
    Block m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Block s1(Real v) { return Block::Constant(1, 1, v); }

inline Block to_block(const oracle::FMat& f) {
    return m2(f[0][0].value(), f[0][1].value(), f[1][0].value(), f[1][1].value());
}

inline Real max_diff(const Block& a, const Block& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline const qbd::JacobiParams kP321{3, 2, 1, 2};
inline const qbd::JacobiParams kP122{1, 2, 2, 2};
inline const oracle::Params kP321Exact{3, 2, 1};
inline const oracle::Params kP122Exact{1, 2, 2};

/// Scalar tridiagonal sequence from per-level (c, b, a).
inline BlockSequence scalar_tridiagonal(std::function<Real(std::size_t)> a, std::function<Real(std::size_t)> b,
                                        std::function<Real(std::size_t)> c) {
    return BlockSequence(1, Band::tridiagonal, [=](std::size_t n) {
        LevelBlocks l;
        if (n > 0) l.sub = s1(c(n));
        l.diag = s1(b(n));
        l.super = s1(a(n));
        return l;
    });
}

inline BlockSequence constant_scalar(Real a, Real b, Real c) {
    return scalar_tridiagonal([=](std::size_t) { return a; }, [=](std::size_t) { return b; },
                              [=](std::size_t) { return c; });
}

/// Random row-stochastic upper (Y, X) or lower (R, S) d x d sequence.
inline BlockSequence random_bidiagonal(Band band, int d, std::size_t levels, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<LevelBlocks> out;
    for (std::size_t n = 0; n < levels; ++n) {
        Block first(d, d), second(d, d);
        for (int i = 0; i < d; ++i) {
            Real total = 0;
            for (int j = 0; j < d; ++j) total += (first(i, j) = u(rng)) + (second(i, j) = u(rng));
            if (band == Band::lower_bidiagonal && n == 0) {
                total = 0;
                for (int j = 0; j < d; ++j) total += first(i, j);
            }
            first.row(i) /= total;
            second.row(i) /= total;
        }
        LevelBlocks l;
        if (band == Band::upper_bidiagonal) {
            l.diag = first;
            l.super = second;
        } else {
            l.diag = first;
            if (n > 0) l.sub = second;
        }
        out.push_back(l);
    }
    return BlockSequence::stored(d, band, std::move(out));
}

}  // namespace testing
