#pragma once

#include "qbd/blockmat.hpp"
#include "qbd/jacobi.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qbd {

/// Gauss rule for int_0^1 f(x) x^a (1-x)^b dx.
struct QuadratureRule {
    Real a = 0;
    Real b = 0;
    std::vector<Real> nodes;
    std::vector<Real> weights;
    int exactness_degree = -1;  // 2m - 1
};

/// int_0^1 x^(a+j) (1-x)^b dx.
Real jacobi_moment(Real a, Real b, int j);

/// m-node Gauss-Jacobi rule on (0, 1) by Golub-Welsch. Every monomial up to
/// degree 2m-1 is checked against jacobi_moment to 1e-12 relative before the
/// rule is returned; failure raises ExactnessError.
QuadratureRule gauss_jacobi_rule(Real a, Real b, std::size_t m);

/// Polynomial with d x d matrix coefficients in the monomial basis.
class MatrixPolynomial {
public:
    explicit MatrixPolynomial(int d = 1);
    MatrixPolynomial(int d, std::vector<Block> coeffs);

    static MatrixPolynomial identity(int d);

    int dim() const noexcept { return d_; }
    /// -1 for the zero polynomial.
    int degree() const;
    const std::vector<Block>& coeffs() const noexcept { return c_; }
    Block coeff(std::size_t j) const;

    Block operator()(Real x) const;
    MatrixPolynomial derivative() const;
    /// x^k P(x).
    MatrixPolynomial shifted(std::size_t k) const;

    MatrixPolynomial& operator+=(const MatrixPolynomial& o);
    MatrixPolynomial& operator-=(const MatrixPolynomial& o);
    friend MatrixPolynomial operator+(MatrixPolynomial l, const MatrixPolynomial& r) { return l += r; }
    friend MatrixPolynomial operator-(MatrixPolynomial l, const MatrixPolynomial& r) { return l -= r; }
    /// M P(x) and P(x) M.
    friend MatrixPolynomial operator*(const Block& m, const MatrixPolynomial& p);
    friend MatrixPolynomial operator*(const MatrixPolynomial& p, const Block& m);
    friend MatrixPolynomial operator*(const MatrixPolynomial& l, const MatrixPolynomial& r);

private:
    int d_;
    std::vector<Block> c_;
};

enum class MatrixPart { identity, jacobi };

/// x^a (1-x)^b part(x) dx on [lo, hi] plus an optional point mass at 0.
struct WeightSpec {
    int d = 1;
    Real a = 0;
    Real b = 0;
    MatrixPart part = MatrixPart::identity;
    std::optional<JacobiParams> params;  // required for MatrixPart::jacobi
    std::optional<Block> atom0;
    Real support_lo = 0;
    Real support_hi = 1;

    Block matrix_part(Real x) const;
    int matrix_degree() const;
};

/// Spectral weight of the example: exponents (alpha, beta), Jacobi matrix part.
WeightSpec jacobi_weight(const JacobiParams& p);

/// (F, G)_W = int F W G^T + F(0) M G(0)^T. The node count is chosen from
/// the degrees involved.
Block inner_product(const MatrixPolynomial& F, const MatrixPolynomial& G, const WeightSpec& W);

/// Same with a caller-supplied rule; raises ExactnessError when the rule is
/// not exact for deg F + deg G + deg part, ParameterError when its exponents
/// differ from the weight's.
Block inner_product(const MatrixPolynomial& F, const MatrixPolynomial& G, const WeightSpec& W,
                    const QuadratureRule& rule);

/// Q_0 = I, Q_{n+1} = A_n^{-1}(x Q_n - B_n Q_n - C_n Q_{n-1}); returns Q_0..Q_N.
std::vector<MatrixPolynomial> polynomial_sequence(const BlockSequence& P, std::size_t N);

/// Monic polynomials of a monic Jacobi matrix given by its diagonal and
/// subdiagonal blocks: x P_n = P_{n+1} + D_n P_n + E_n P_{n-1}; returns P_0..P_N.
std::vector<MatrixPolynomial> monic_polynomial_sequence(const std::vector<Block>& diag,
                                                        const std::vector<Block>& sub,
                                                        std::size_t N);

/// P^n_{ij} = (x^n Q_i, Q_j)_W (Q_j, Q_j)_W^{-1}.
Block kmcg_entry(const BlockSequence& P, const WeightSpec& W, std::size_t steps, std::size_t i,
                 std::size_t j);

/// pi_n = (Pi_n e)^T with Pi_n = (Q_n, Q_n)_W^{-1}, n = 0..m-1.
std::vector<Vector> invariant_measure(const BlockSequence& P, const WeightSpec& W, std::size_t m);

/// mu_0 = (I, I)_W and mu_{-1} = int W(x)/x dx by quadrature. The atom is
/// ignored for mu_{-1}; requires a > 0.
MomentPair weight_moments(const WeightSpec& W);

/// W(x)/x + M delta_0 with M = alpha0^{-1} mu_0 - mu_{-1}. Raises
/// ParameterError when a <= 0.
WeightSpec geronimus_transform(const WeightSpec& W, const Block& alpha0, const MomentPair& moments);
WeightSpec geronimus_transform(const WeightSpec& W, const Block& alpha0);

/// x W(x); any atom at 0 is annihilated.
WeightSpec christoffel_transform(const WeightSpec& W);

}  // namespace qbd
