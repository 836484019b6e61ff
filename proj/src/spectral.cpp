#include "qbd/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbd {

namespace {

constexpr Real kRuleExactnessTol = 1e-12L;

}  // namespace

Real jacobi_moment(Real a, Real b, int j) {
    return std::exp(std::lgamma(a + j + 1) + std::lgamma(b + 1) - std::lgamma(a + b + j + 2));
}

QuadratureRule gauss_jacobi_rule(Real a, Real b, std::size_t m) {
    if (!(a > -1) || !(b > -1)) throw ParameterError("Gauss-Jacobi exponents must exceed -1");
    if (m < 1) throw ParameterError("Gauss-Jacobi rule needs at least one node");

    // Monic Jacobi recurrence on [-1, 1] for (1-t)^b (1+t)^a, then x = (1+t)/2.
    const Real ja = b, jb = a, s = ja + jb;
    const auto n_nodes = static_cast<Eigen::Index>(m);
    Block T = Block::Zero(n_nodes, n_nodes);
    for (Eigen::Index n = 0; n < n_nodes; ++n) {
        const Real nn = static_cast<Real>(n);
        const Real den = (2 * nn + s) * (2 * nn + s + 2);
        T(n, n) = n == 0 ? (jb - ja) / (s + 2) : (jb * jb - ja * ja) / den;
        if (n + 1 < n_nodes) {
            const Real k = nn + 1;
            const Real q = 2 * k + s;
            // (k + s) / (q - 1) is 1 at k = 1 and is taken in that form to avoid 0/0 when s = -1.
            const Real ratio = k == 1 ? 1 : (k + s) / (q - 1);
            const Real bk = 4 * k * (k + ja) * (k + jb) * ratio / (q * q * (q + 1));
            T(n, n + 1) = T(n + 1, n) = std::sqrt(bk);
        }
    }
    Eigen::SelfAdjointEigenSolver<Block> es(T);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Golub-Welsch eigen-solve did not converge for m=" << m << ", a=" << static_cast<double>(a)
           << ", b=" << static_cast<double>(b);
        throw ConvergenceError(os.str());
    }
    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.exactness_degree = static_cast<int>(2 * m - 1);
    const Real total = jacobi_moment(a, b, 0);
    for (Eigen::Index n = 0; n < n_nodes; ++n) {
        const Real v0 = es.eigenvectors()(0, n);
        rule.nodes.push_back((1 + es.eigenvalues()(n)) / 2);
        rule.weights.push_back(total * v0 * v0);
    }

    for (std::size_t n = 0; n < m; ++n) {
        if (!(rule.nodes[n] > 0 && rule.nodes[n] < 1) || !(rule.weights[n] > 0)) {
            throw ConvergenceError("Gauss-Jacobi rule produced a node outside (0,1) or a nonpositive weight");
        }
    }
    for (int j = 0; j <= rule.exactness_degree; ++j) {
        Real q = 0;
        for (std::size_t n = 0; n < m; ++n) q += rule.weights[n] * std::pow(rule.nodes[n], j);
        const Real exact = jacobi_moment(a, b, j);
        if (!(std::abs(q - exact) <= kRuleExactnessTol * exact)) {
            std::ostringstream os;
            os << "Gauss-Jacobi rule with " << m << " nodes misses the degree-" << j << " moment by "
               << static_cast<double>(std::abs(q - exact) / exact) << " (relative)";
            throw ExactnessError(os.str());
        }
    }
    return rule;
}

MatrixPolynomial::MatrixPolynomial(int d) : d_(d) {}

MatrixPolynomial::MatrixPolynomial(int d, std::vector<Block> coeffs) : d_(d), c_(std::move(coeffs)) {
    for (const Block& c : c_)
        if (c.rows() != d || c.cols() != d) throw DimensionError("matrix polynomial coefficient has the wrong size");
}

MatrixPolynomial MatrixPolynomial::identity(int d) { return MatrixPolynomial(d, {Block::Identity(d, d)}); }

int MatrixPolynomial::degree() const {
    for (std::size_t j = c_.size(); j-- > 0;)
        if (!c_[j].isZero(0)) return static_cast<int>(j);
    return -1;
}

Block MatrixPolynomial::coeff(std::size_t j) const { return j < c_.size() ? c_[j] : Block(Block::Zero(d_, d_)); }

Block MatrixPolynomial::operator()(Real x) const {
    Block acc = Block::Zero(d_, d_);
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * x + c_[j];
    return acc;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
    std::vector<Block> out;
    for (std::size_t j = 1; j < c_.size(); ++j) out.push_back(static_cast<Real>(j) * c_[j]);
    return MatrixPolynomial(d_, std::move(out));
}

MatrixPolynomial MatrixPolynomial::shifted(std::size_t k) const {
    std::vector<Block> out(k, Block::Zero(d_, d_));
    out.insert(out.end(), c_.begin(), c_.end());
    return MatrixPolynomial(d_, std::move(out));
}

MatrixPolynomial& MatrixPolynomial::operator+=(const MatrixPolynomial& o) {
    if (o.d_ != d_) throw DimensionError("matrix polynomial sizes differ");
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Block::Zero(d_, d_));
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

MatrixPolynomial& MatrixPolynomial::operator-=(const MatrixPolynomial& o) {
    if (o.d_ != d_) throw DimensionError("matrix polynomial sizes differ");
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Block::Zero(d_, d_));
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

MatrixPolynomial operator*(const Block& m, const MatrixPolynomial& p) {
    std::vector<Block> out;
    for (const Block& c : p.c_) out.push_back(m * c);
    return MatrixPolynomial(p.d_, std::move(out));
}

MatrixPolynomial operator*(const MatrixPolynomial& p, const Block& m) {
    std::vector<Block> out;
    for (const Block& c : p.c_) out.push_back(c * m);
    return MatrixPolynomial(p.d_, std::move(out));
}

MatrixPolynomial operator*(const MatrixPolynomial& l, const MatrixPolynomial& r) {
    if (l.d_ != r.d_) throw DimensionError("matrix polynomial sizes differ");
    if (l.c_.empty() || r.c_.empty()) return MatrixPolynomial(l.d_);
    std::vector<Block> out(l.c_.size() + r.c_.size() - 1, Block::Zero(l.d_, l.d_));
    for (std::size_t i = 0; i < l.c_.size(); ++i)
        for (std::size_t j = 0; j < r.c_.size(); ++j) out[i + j] += l.c_[i] * r.c_[j];
    return MatrixPolynomial(l.d_, std::move(out));
}

Block WeightSpec::matrix_part(Real x) const {
    if (part == MatrixPart::identity) return Block::Identity(d, d);
    if (!params) throw ParameterError("Jacobi matrix part needs parameters");
    return weight_matrix_part(*params, x);
}

int WeightSpec::matrix_degree() const {
    if (part == MatrixPart::identity) return 0;
    if (!params) throw ParameterError("Jacobi matrix part needs parameters");
    return weight_matrix_degree(*params);
}

WeightSpec jacobi_weight(const JacobiParams& p) {
    validate(p);
    WeightSpec w;
    w.d = p.d;
    w.a = p.alpha;
    w.b = p.beta;
    w.part = MatrixPart::jacobi;
    w.params = p;
    return w;
}

Block inner_product(const MatrixPolynomial& F, const MatrixPolynomial& G, const WeightSpec& W,
                    const QuadratureRule& rule) {
    if (F.dim() != W.d || G.dim() != W.d) throw DimensionError("polynomial and weight sizes differ");
    if (rule.a != W.a || rule.b != W.b) throw ParameterError("quadrature exponents do not match the weight");
    if (W.support_lo != 0 || W.support_hi != 1) throw ParameterError("only the support [0,1] is implemented");
    const int need = std::max(F.degree(), 0) + std::max(G.degree(), 0) + W.matrix_degree();
    if (rule.exactness_degree < need) {
        std::ostringstream os;
        os << "quadrature exact to degree " << rule.exactness_degree << ", integrand needs " << need;
        throw ExactnessError(os.str());
    }
    Block acc = Block::Zero(W.d, W.d);
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const Real x = rule.nodes[n];
        acc += rule.weights[n] * F(x) * W.matrix_part(x) * G(x).transpose();
    }
    if (W.atom0) acc += F(0) * (*W.atom0) * G(0).transpose();
    return acc;
}

Block inner_product(const MatrixPolynomial& F, const MatrixPolynomial& G, const WeightSpec& W) {
    const int need = std::max(F.degree(), 0) + std::max(G.degree(), 0) + W.matrix_degree();
    const auto m = static_cast<std::size_t>(need / 2 + 1);
    return inner_product(F, G, W, gauss_jacobi_rule(W.a, W.b, m));
}

std::vector<MatrixPolynomial> polynomial_sequence(const BlockSequence& P, std::size_t N) {
    if (P.band() != Band::tridiagonal) throw DimensionError("polynomial_sequence needs a tridiagonal sequence");
    const int d = P.dim();
    std::vector<MatrixPolynomial> Q{MatrixPolynomial::identity(d)};
    for (std::size_t n = 0; n < N; ++n) {
        const LevelBlocks b = P.level(n);
        MatrixPolynomial next = Q[n].shifted(1) - b.diag * Q[n];
        if (n > 0) next -= (*b.sub) * Q[n - 1];
        Q.push_back(small_inverse(*b.super, n, "A_" + std::to_string(n)) * next);
    }
    return Q;
}

std::vector<MatrixPolynomial> monic_polynomial_sequence(const std::vector<Block>& diag,
                                                        const std::vector<Block>& sub, std::size_t N) {
    if (diag.size() < N || sub.size() < N) throw ParameterError("monic recurrence coefficients are too short");
    if (diag.empty()) throw ParameterError("monic recurrence needs at least one level");
    const int d = static_cast<int>(diag[0].rows());
    std::vector<MatrixPolynomial> P{MatrixPolynomial::identity(d)};
    for (std::size_t n = 0; n < N; ++n) {
        MatrixPolynomial next = P[n].shifted(1) - diag[n] * P[n];
        if (n > 0) next -= sub[n] * P[n - 1];
        P.push_back(std::move(next));
    }
    return P;
}

Block kmcg_entry(const BlockSequence& P, const WeightSpec& W, std::size_t steps, std::size_t i, std::size_t j) {
    const auto Q = polynomial_sequence(P, std::max(i, j));
    const Block norm = inner_product(Q[j], Q[j], W);
    return inner_product(Q[i].shifted(steps), Q[j], W) * small_inverse(norm, j, "(Q_j, Q_j)");
}

std::vector<Vector> invariant_measure(const BlockSequence& P, const WeightSpec& W, std::size_t m) {
    if (m < 1) throw ParameterError("invariant_measure needs at least one level");
    const auto Q = polynomial_sequence(P, m - 1);
    std::vector<Vector> pi;
    for (std::size_t n = 0; n < m; ++n) {
        const Block norm = inner_product(Q[n], Q[n], W);
        pi.push_back(small_inverse(norm, n, "(Q_n, Q_n)") * ones(W.d));
    }
    return pi;
}

MomentPair weight_moments(const WeightSpec& W) {
    if (!(W.a > 0)) throw ParameterError("mu_{-1} diverges unless the exponent a > 0");
    const MatrixPolynomial I = MatrixPolynomial::identity(W.d);
    WeightSpec divided = W;
    divided.a -= 1;
    divided.atom0.reset();
    return {inner_product(I, I, W), inner_product(I, I, divided)};
}

WeightSpec geronimus_transform(const WeightSpec& W, const Block& alpha0, const MomentPair& moments) {
    if (!(W.a > 0)) throw ParameterError("Geronimus transform needs a > 0 so that mu_{-1} exists");
    WeightSpec out = W;
    out.a -= 1;
    out.atom0 = small_inverse(alpha0, std::nullopt, "alpha_0") * moments.mu0 - moments.mu_minus1;
    return out;
}

WeightSpec geronimus_transform(const WeightSpec& W, const Block& alpha0) {
    return geronimus_transform(W, alpha0, weight_moments(W));
}

WeightSpec christoffel_transform(const WeightSpec& W) {
    WeightSpec out = W;
    out.a += 1;
    out.atom0.reset();
    return out;
}

}  // namespace qbd
