#pragma once

// Matrix-model helpers shared by pairlab and curvlab. Internal to the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ricb/pairlab.hpp"

namespace ricb::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Constraint = std::function<CMat(const CMat&)>;
inline const std::complex<double> I(0.0, 1.0);

inline constexpr int max_dim_g = 120;
inline constexpr double rank_cutoff = 1e-8;

// Isometric real coordinates of an ambient matrix for a given per-entry weight.
struct Ambient {
    int n = 0;
    MatrixXd weight;  // sqrt of the block scale on diagonal blocks, 1 elsewhere

    VectorXd vec(const CMat& x) const
    {
        VectorXd v(2 * n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                v(2 * (i * n + j)) = weight(i, j) * x(i, j).real();
                v(2 * (i * n + j) + 1) = weight(i, j) * x(i, j).imag();
            }
        return v;
    }

    CMat unvec(const VectorXd& v) const
    {
        CMat x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                x(i, j) = std::complex<double>(v(2 * (i * n + j)), v(2 * (i * n + j) + 1)) / weight(i, j);
        return x;
    }
};

inline Ambient make_ambient(const std::vector<int>& blocks, const std::vector<double>& scale)
{
    Ambient a;
    a.n = std::accumulate(blocks.begin(), blocks.end(), 0);
    a.weight = MatrixXd::Ones(a.n, a.n);
    int off = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        a.weight.block(off, off, blocks[b], blocks[b]).setConstant(std::sqrt(scale[b]));
        off += blocks[b];
    }
    return a;
}

inline MatrixXd null_space(const MatrixXd& m, double rel = rank_cutoff)
{
    if (m.rows() == 0) return MatrixXd::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double top = s.size() ? s(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > rel * std::max(top, 1.0)) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

// Orthonormal basis of the span of `spanning` in the weighted product.
inline std::vector<CMat> orthonormal_span(const Ambient& amb, const std::vector<CMat>& spanning)
{
    if (spanning.empty()) return {};
    MatrixXd m(2 * amb.n * amb.n, spanning.size());
    for (std::size_t k = 0; k < spanning.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = amb.vec(spanning[k]);
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    std::vector<CMat> out;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * std::max(s(0), 1.0)) out.push_back(amb.unvec(svd.matrixU().col(i)));
    return out;
}

inline std::vector<CMat> combine(const std::vector<CMat>& basis, const MatrixXd& coeffs)
{
    std::vector<CMat> out;
    for (int c = 0; c < coeffs.cols(); ++c) {
        CMat x = CMat::Zero(basis[0].rows(), basis[0].cols());
        for (std::size_t k = 0; k < basis.size(); ++k) x += coeffs(static_cast<Eigen::Index>(k), c) * basis[k];
        out.push_back(x);
    }
    return out;
}

// Elements of span(basis) satisfying f(X) = 0. Orthonormal if basis is.
inline std::vector<CMat> restrict_to(const std::vector<CMat>& basis, const Constraint& f)
{
    if (basis.empty()) return {};
    std::vector<VectorXd> cols;
    for (const auto& b : basis) {
        CMat y = f(b);
        VectorXd v(2 * y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            v(2 * i) = y.data()[i].real();
            v(2 * i + 1) = y.data()[i].imag();
        }
        cols.push_back(v);
    }
    MatrixXd m(cols[0].size(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
    return combine(basis, null_space(m, 1e-10));
}

// Orthogonal complement of span(h) inside span(g); both orthonormal.
inline std::vector<CMat> complement(const Ambient& amb, const std::vector<CMat>& g, const std::vector<CMat>& h)
{
    MatrixXd c(h.size(), g.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = amb.vec(h[i]).dot(amb.vec(g[j]));
    return combine(g, null_space(c, 1e-10));
}

inline std::vector<CMat> ambient_u(const Ambient& amb, const std::vector<int>& blocks)
{
    std::vector<CMat> span;
    int off = 0;
    for (int n : blocks) {
        for (int i = off; i < off + n; ++i) {
            CMat d = CMat::Zero(amb.n, amb.n);
            d(i, i) = I;
            span.push_back(d);
            for (int j = i + 1; j < off + n; ++j) {
                CMat a = CMat::Zero(amb.n, amb.n), s = CMat::Zero(amb.n, amb.n);
                a(i, j) = 1.0;
                a(j, i) = -1.0;
                s(i, j) = I;
                s(j, i) = I;
                span.push_back(a);
                span.push_back(s);
            }
        }
        off += n;
    }
    return orthonormal_span(amb, span);
}

inline CMat symplectic_form(int n)
{
    CMat j = CMat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -CMat::Identity(n, n);
    j.bottomLeftCorner(n, n) = CMat::Identity(n, n);
    return j;
}

// Constraint helpers acting on one diagonal block [off, off + size).
inline Constraint trace_zero(int off, int size)
{
    return [=](const CMat& x) { return CMat::Constant(1, 1, x.block(off, off, size, size).trace()); };
}

inline Constraint real_entries()
{
    return [](const CMat& x) { return CMat(x.imag().cast<std::complex<double>>()); };
}

inline Constraint symplectic(int off, int n)
{
    CMat j = symplectic_form(n);
    return [=](const CMat& x) {
        CMat b = x.block(off, off, 2 * n, 2 * n);
        return CMat(b.transpose() * j + j * b);
    };
}

inline Constraint commutes_with(const CMat& j)
{
    return [=](const CMat& x) { return CMat(x * j - j * x); };
}

// Entries linking the index set `in` to its complement.
inline Constraint block_diagonal(const std::vector<bool>& in)
{
    return [=](const CMat& x) {
        CMat y = CMat::Zero(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j)
                if (in[static_cast<std::size_t>(i)] != in[static_cast<std::size_t>(j)]) y(i, j) = x(i, j);
        return y;
    };
}

// Differences between consecutive equal-size diagonal blocks.
inline Constraint diagonal_copies(int size, int copies)
{
    return [=](const CMat& x) {
        CMat y = CMat::Zero(size, size * (copies - 1));
        for (int c = 0; c + 1 < copies; ++c)
            y.block(0, c * size, size, size) = x.block(c * size, c * size, size, size) - x.block((c + 1) * size, (c + 1) * size, size, size);
        return y;
    };
}

inline std::vector<CMat> impose(std::vector<CMat> basis, const std::vector<Constraint>& cs)
{
    for (const auto& c : cs) basis = restrict_to(basis, c);
    return basis;
}

inline std::string str(int n) { return std::to_string(n); }

inline int need(const std::vector<int>& params, std::size_t count, const std::string& kind)
{
    if (params.size() != count) throw PairError(kind + " expects " + std::to_string(count) + " parameter(s)");
    return count ? params[0] : 0;
}


}  // namespace ricb::detail
