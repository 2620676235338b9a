#include "ricb/pairlab.hpp"

#include "matrix_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace ricb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace detail;

}  // namespace

double SymmetricPairRealization::inner(const CMat& x, const CMat& y) const { return vec(x).dot(vec(y)); }

VectorXd SymmetricPairRealization::vec(const CMat& x) const
{
    Ambient amb{matrix_size, weight};
    return amb.vec(x);
}

VectorXd SymmetricPairRealization::coords_h(const CMat& x) const
{
    if (dim_h() == 0) return VectorXd(0);
    return h_vec.transpose() * vec(x);
}

VectorXd SymmetricPairRealization::coords_p(const CMat& x) const { return p_vec.transpose() * vec(x); }

CMat SymmetricPairRealization::from_p(const VectorXd& c) const
{
    CMat x = CMat::Zero(matrix_size, matrix_size);
    for (int i = 0; i < dim_p(); ++i) x += c(i) * p_basis[i];
    return x;
}

CMat SymmetricPairRealization::from_h(const VectorXd& c) const
{
    CMat x = CMat::Zero(matrix_size, matrix_size);
    for (int i = 0; i < dim_h(); ++i) x += c(i) * h_basis[i];
    return x;
}

CMat bracket(const CMat& a, const CMat& b) { return a * b - b * a; }

std::vector<std::string> supported_pair_kinds()
{
    return {"real_grassmannian", "complex_grassmannian", "quaternionic_grassmannian", "su_so", "su_sp", "sp_u", "so_u",
            "group_su", "group_so", "group_sp", "triple_diagonal"};
}

SymmetricPairRealization realize_pair(const std::string& kind, const std::vector<int>& params, const std::vector<double>& scales)
{
    SymmetricPairRealization r;
    r.kind = kind;
    r.params = params;
    std::vector<Constraint> g_cons, h_cons;

    auto set_blocks = [&](std::vector<int> blocks) {
        r.blocks = std::move(blocks);
        r.matrix_size = std::accumulate(r.blocks.begin(), r.blocks.end(), 0);
    };

    if (kind == "real_grassmannian" || kind == "complex_grassmannian" || kind == "quaternionic_grassmannian") {
        need(params, 2, kind);
        int p = params[0], q = params[1];
        if (p < 1 || q < 1) throw PairError("Grassmannian needs p, q >= 1");
        int n = p + q;
        std::vector<bool> in;
        if (kind == "real_grassmannian") {
            if (n < 3) throw PairError("real Grassmannian needs p + q >= 3");
            set_blocks({n});
            g_cons = {real_entries()};
            r.label = "Gr+_" + str(p) + "(R^" + str(n) + ")";
            r.space_spec = "Gr+(" + str(p) + "," + str(n) + ")";
            for (int i = 0; i < n; ++i) in.push_back(i < p);
        } else if (kind == "complex_grassmannian") {
            set_blocks({n});
            g_cons = {trace_zero(0, n)};
            r.label = "Gr_" + str(p) + "(C^" + str(n) + ")";
            r.space_spec = "GrC(" + str(p) + "," + str(n) + ")";
            for (int i = 0; i < n; ++i) in.push_back(i < p);
        } else {
            set_blocks({2 * n});
            g_cons = {symplectic(0, n)};
            r.label = "Gr_" + str(p) + "(H^" + str(n) + ")";
            r.space_spec = "GrH(" + str(p) + "," + str(n) + ")";
            for (int i = 0; i < 2 * n; ++i) in.push_back(i % n < p);
        }
        h_cons = {block_diagonal(in)};
    } else if (kind == "su_so") {
        int n = need(params, 1, kind);
        if (n < 2) throw PairError("SU(n)/SO(n) needs n >= 2");
        set_blocks({n});
        g_cons = {trace_zero(0, n)};
        h_cons = {real_entries()};
        r.label = r.space_spec = "SU(" + str(n) + ")/SO(" + str(n) + ")";
    } else if (kind == "su_sp") {
        int n = need(params, 1, kind);
        if (n < 2) throw PairError("SU(2n)/Sp(n) needs n >= 2");
        set_blocks({2 * n});
        g_cons = {trace_zero(0, 2 * n)};
        h_cons = {symplectic(0, n)};
        r.label = r.space_spec = "SU(" + str(2 * n) + ")/Sp(" + str(n) + ")";
    } else if (kind == "sp_u") {
        int n = need(params, 1, kind);
        if (n < 1) throw PairError("Sp(n)/U(n) needs n >= 1");
        set_blocks({2 * n});
        g_cons = {symplectic(0, n)};
        h_cons = {real_entries()};
        r.label = r.space_spec = "Sp(" + str(n) + ")/U(" + str(n) + ")";
    } else if (kind == "so_u") {
        int n = need(params, 1, kind);
        if (n < 2) throw PairError("SO(2n)/U(n) needs n >= 2");
        set_blocks({2 * n});
        g_cons = {real_entries()};
        h_cons = {commutes_with(symplectic_form(n))};
        r.label = r.space_spec = "SO(" + str(2 * n) + ")/U(" + str(n) + ")";
    } else if (kind == "group_su" || kind == "group_so" || kind == "group_sp") {
        int n = need(params, 1, kind);
        int size = n;
        if (kind == "group_su") {
            if (n < 2) throw PairError("SU(n) needs n >= 2");
            r.label = "SU(" + str(n) + ")";
        } else if (kind == "group_so") {
            if (n < 3) throw PairError("SO(n) needs n >= 3");
            r.label = "SO(" + str(n) + ")";
        } else {
            if (n < 1) throw PairError("Sp(n) needs n >= 1");
            size = 2 * n;
            r.label = "Sp(" + str(n) + ")";
        }
        r.space_spec = r.label;
        set_blocks({size, size});
        for (int b = 0; b < 2; ++b) {
            if (kind == "group_su") g_cons.push_back(trace_zero(b * size, size));
            if (kind == "group_sp") g_cons.push_back(symplectic(b * size, n));
        }
        if (kind == "group_so") g_cons.push_back(real_entries());
        h_cons = {diagonal_copies(size, 2)};
    } else if (kind == "triple_diagonal") {
        need(params, 0, kind);
        set_blocks({2, 2, 2});
        for (int b = 0; b < 3; ++b) g_cons.push_back(trace_zero(2 * b, 2));
        h_cons = {diagonal_copies(2, 3)};
        r.label = "SU(2)^3/diag SU(2)";
        r.symmetric = false;
    } else {
        throw PairError("unsupported pair kind \"" + kind + "\"");
    }

    if (scales.empty()) {
        r.block_scale.assign(r.blocks.size(), 1.0);
    } else {
        if (scales.size() != r.blocks.size()) throw PairError("expected one scale per simple block");
        for (double s : scales)
            if (!(s > 0)) throw PairError("scales must be positive");
        r.block_scale = scales;
        // The metric complement of the diagonal is no longer the -1 eigenspace of the swap.
        if (std::adjacent_find(scales.begin(), scales.end(), std::not_equal_to<>()) != scales.end()) r.symmetric = false;
    }

    Ambient amb = make_ambient(r.blocks, r.block_scale);
    auto g = impose(ambient_u(amb, r.blocks), g_cons);
    if (static_cast<int>(g.size()) > max_dim_g) throw PairError("dimension cap exceeded");
    r.h_basis = impose(g, h_cons);
    r.p_basis = complement(amb, g, r.h_basis);
    r.weight = amb.weight;
    r.h_vec.resize(2 * amb.n * amb.n, r.dim_h());
    r.p_vec.resize(2 * amb.n * amb.n, r.dim_p());
    for (int i = 0; i < r.dim_h(); ++i) r.h_vec.col(i) = amb.vec(r.h_basis[i]);
    for (int i = 0; i < r.dim_p(); ++i) r.p_vec.col(i) = amb.vec(r.p_basis[i]);
    return r;
}

InvariantErrors check_invariants(const SymmetricPairRealization& pair, std::uint64_t seed, int samples)
{
    InvariantErrors e;
    std::mt19937_64 rng(seed);
    std::vector<CMat> g = pair.h_basis;
    g.insert(g.end(), pair.p_basis.begin(), pair.p_basis.end());
    auto pick = [&](const std::vector<CMat>& v) -> const CMat& {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    auto residual = [&](const CMat& z) {
        VectorXd v = pair.vec(z);
        VectorXd rest = v - pair.p_vec * (pair.p_vec.transpose() * v);
        if (pair.dim_h() > 0) rest -= pair.h_vec * (pair.h_vec.transpose() * v);
        return rest.norm();
    };
    for (int s = 0; s < samples; ++s) {
        const CMat& x = pick(g);
        const CMat& y = pick(g);
        const CMat& z = pick(g);
        e.g_closed = std::max(e.g_closed, residual(bracket(x, y)));
        e.ad_invariance = std::max(e.ad_invariance, std::abs(pair.inner(bracket(z, x), y) + pair.inner(x, bracket(z, y))));
        CMat jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        e.jacobi = std::max(e.jacobi, jac.norm());
        if (pair.dim_h() > 0) {
            e.h_closed = std::max(e.h_closed, pair.coords_p(bracket(pick(pair.h_basis), pick(pair.h_basis))).norm());
            e.hp_in_p = std::max(e.hp_in_p, pair.coords_h(bracket(pick(pair.h_basis), pick(pair.p_basis))).norm());
        }
        e.pp_in_h = std::max(e.pp_in_h, pair.coords_p(bracket(pick(pair.p_basis), pick(pair.p_basis))).norm());
    }
    return e;
}

namespace {

MatrixXd bracket_map(const SymmetricPairRealization& pair, const CMat& x, const std::vector<CMat>& domain)
{
    MatrixXd m(2 * pair.matrix_size * pair.matrix_size, domain.size());
    for (std::size_t k = 0; k < domain.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = pair.vec(bracket(x, domain[k]));
    return m;
}

int kernel_dim(const VectorXd& s, Eigen::Index cols, double rel)
{
    double top = s.size() ? s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel * top) ++rank;
    return static_cast<int>(cols) - rank;
}

void check_in_p(const SymmetricPairRealization& pair, const CMat& x)
{
    double n = std::sqrt(pair.inner(x, x));
    if (n < 1e-12) throw PairError("x is zero");
    if (pair.dim_h() > 0 && pair.coords_h(x).norm() > 1e-8 * n) throw PairError("x is not in p");
}

VectorXd random_unit(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> gauss;
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    return v / v.norm();
}

}  // namespace

CentralizerReport centralizer_dim(const SymmetricPairRealization& pair, const CMat& x)
{
    check_in_p(pair, x);
    MatrixXd m = bracket_map(pair, x, pair.p_basis);
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullV);
    const VectorXd& s = svd.singularValues();
    CentralizerReport rep;
    rep.x = x;
    if (s.size() == 0 || s(0) < 1e-12) {
        rep.dim_zp = pair.dim_p();
        rep.kernel = MatrixXd::Identity(pair.dim_p(), pair.dim_p());
        return rep;
    }
    rep.dim_zp = kernel_dim(s, m.cols(), rank_cutoff);
    rep.stable = kernel_dim(s, m.cols(), 1e-7) == rep.dim_zp && kernel_dim(s, m.cols(), 1e-9) == rep.dim_zp;
    rep.kernel = svd.matrixV().rightCols(rep.dim_zp);
    return rep;
}

int centralizer_dim_g(const SymmetricPairRealization& pair, const CMat& x)
{
    std::vector<CMat> g = pair.h_basis;
    g.insert(g.end(), pair.p_basis.begin(), pair.p_basis.end());
    MatrixXd m = bracket_map(pair, x, g);
    Eigen::JacobiSVD<MatrixXd> svd(m);
    const VectorXd& s = svd.singularValues();
    if (s.size() == 0 || s(0) < 1e-12) return pair.dim_g();
    return kernel_dim(s, m.cols(), rank_cutoff);
}

MatrixXd maximal_abelian(const SymmetricPairRealization& pair, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const int dp = pair.dim_p();
    MatrixXd a = random_unit(rng, dp);
    for (;;) {
        MatrixXd stacked(0, dp);
        for (int i = 0; i < a.cols(); ++i) {
            MatrixXd m = bracket_map(pair, pair.from_p(a.col(i)), pair.p_basis);
            MatrixXd grown(stacked.rows() + m.rows(), dp);
            grown << stacked, m;
            stacked = std::move(grown);
        }
        MatrixXd z = null_space(stacked);
        // Remove the part already in a.
        MatrixXd rest = z - a * (a.transpose() * z);
        Eigen::JacobiSVD<MatrixXd> svd(rest, Eigen::ComputeThinU);
        int extra = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-6) ++extra;
        if (extra == 0) return a;
        VectorXd next = svd.matrixU().leftCols(extra) * random_unit(rng, extra);
        next -= a * (a.transpose() * next);
        MatrixXd grown(dp, a.cols() + 1);
        grown << a, next / next.norm();
        a = std::move(grown);
    }
}

std::vector<RestrictedRoot> restricted_roots(const SymmetricPairRealization& pair, const MatrixXd& a, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const int r = static_cast<int>(a.cols());
    std::vector<CMat> hs;
    for (int i = 0; i < r; ++i) hs.push_back(pair.from_p(a.col(i)));
    VectorXd c = random_unit(rng, r);
    CMat h = CMat::Zero(pair.matrix_size, pair.matrix_size);
    for (int i = 0; i < r; ++i) h += c(i) * hs[i];

    const int dp = pair.dim_p();
    MatrixXd l(dp, dp);
    for (int k = 0; k < dp; ++k) l.col(k) = pair.coords_p(bracket(h, bracket(h, pair.p_basis[k])));
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (l + l.transpose()));
    const VectorXd& mu = eig.eigenvalues();  // ascending, <= 0
    double scale = std::max(std::abs(mu(0)), 1e-300);

    std::vector<RestrictedRoot> roots;
    int zero = 0;
    int i = 0;
    while (i < dp) {
        int j = i + 1;
        while (j < dp && std::abs(mu(j) - mu(i)) <= 1e-7 * scale) ++j;
        if (std::abs(mu(i)) <= 1e-9 * scale) {
            zero += j - i;
        } else {
            CMat v = pair.from_p(eig.eigenvectors().col(i));
            double ah = std::sqrt(-mu(i));
            RestrictedRoot root;
            root.alpha.resize(r);
            for (int k = 0; k < r; ++k) root.alpha(k) = -pair.inner(bracket(hs[k], bracket(h, v)), v) / ah;
            root.multiplicity = j - i;
            roots.push_back(root);
        }
        i = j;
    }
    if (zero != r) throw PairError("a is not maximal abelian in p (zero eigenspace has dimension " + std::to_string(zero) + ")");
    return roots;
}

BruteForceResult brute_force_b(const SymmetricPairRealization& pair, std::uint64_t seed, int random_samples, int max_rank)
{
    BruteForceResult res;
    std::mt19937_64 rng(seed);
    auto consider = [&](const CMat& x, const std::string& label) {
        auto rep = centralizer_dim(pair, x);
        rep.face_label = label;
        ++res.candidates;
        if (!rep.stable) ++res.unstable;
        if (res.candidates == 1 || rep.dim_zp > res.witness.dim_zp) res.witness = std::move(rep);
    };

    MatrixXd a = maximal_abelian(pair, seed);
    res.rank = static_cast<int>(a.cols());
    if (pair.symmetric) {
        const int r = res.rank;
        if (r > max_rank) throw PairError("rank " + std::to_string(r) + " exceeds the enumeration budget");
        auto roots = restricted_roots(pair, a, seed + 1);
        // Distinct hyperplanes; alpha and 2 alpha cut out the same one.
        std::vector<VectorXd> normals;
        for (const auto& rt : roots) {
            VectorXd n = rt.alpha / rt.alpha.norm();
            bool seen = std::any_of(normals.begin(), normals.end(), [&](const VectorXd& m) { return std::abs(m.dot(n)) > 1 - 1e-8; });
            if (!seen) normals.push_back(n);
        }
        std::vector<VectorXd> lines;
        auto add_line = [&](VectorXd dir) {
            dir /= dir.norm();
            for (const auto& l : lines)
                if (std::abs(l.dot(dir)) > 1 - 1e-9) return;
            lines.push_back(dir);
        };
        if (r == 1) {
            add_line(VectorXd::Ones(1));
        } else {
            // Every (r-1)-subset of independent hyperplanes meets in a line.
            const int h = static_cast<int>(normals.size());
            std::vector<int> idx(r - 1);
            std::iota(idx.begin(), idx.end(), 0);
            while (h >= r - 1) {
                MatrixXd m(r - 1, r);
                for (int k = 0; k < r - 1; ++k) m.row(k) = normals[idx[k]].transpose();
                MatrixXd n = null_space(m, 1e-8);
                if (n.cols() == 1) add_line(n.col(0));
                int k = r - 2;
                while (k >= 0 && idx[k] == h - (r - 1) + k) --k;
                if (k < 0) break;
                ++idx[k];
                for (int t = k + 1; t < r - 1; ++t) idx[t] = idx[t - 1] + 1;
            }
        }
        for (const auto& dir : lines) {
            int vanish = 0;
            for (const auto& n : normals)
                if (std::abs(n.dot(dir)) < 1e-8) ++vanish;
            consider(pair.from_p(a * dir), "hyperplanes " + std::to_string(vanish) + "/" + std::to_string(normals.size()));
        }
    } else {
        // Small-integer points i*diag(c) of the ambient diagonal, projected to p. In these
        // coordinates root hyperplanes are coincidences c_i = c_j, so the patterns reach them.
        const int t = pair.matrix_size;
        long long total = 1;
        for (int i = 0; i < t && total <= 20000; ++i) total *= 3;
        std::uniform_int_distribution<int> coord(-1, 1);
        auto try_pattern = [&](const std::vector<int>& pat) {
            CMat z = CMat::Zero(t, t);
            for (int i = 0; i < t; ++i) z(i, i) = std::complex<double>(0, pat[i]);
            VectorXd c = pair.coords_p(z);
            if (c.norm() < 1e-9) return;
            std::string label = "diag(";
            for (int i = 0; i < t; ++i) label += (i ? "," : "") + std::to_string(pat[i]);
            consider(pair.from_p(c / c.norm()), label + ")");
        };
        std::vector<int> pat(t);
        if (total <= 20000) {
            for (long long code = 1; code < total; ++code) {
                long long v = code;
                for (int i = 0; i < t; ++i, v /= 3) pat[i] = static_cast<int>(v % 3) - 1;
                try_pattern(pat);
            }
        } else {
            for (int s = 0; s < 20000; ++s) {
                for (int i = 0; i < t; ++i) pat[i] = coord(rng);
                try_pattern(pat);
            }
        }
    }
    for (int s = 0; s < random_samples; ++s) consider(pair.from_p(random_unit(rng, pair.dim_p())), "random");
    res.b = res.witness.dim_zp;
    return res;
}

double normal_sec(const SymmetricPairRealization& pair, const CMat& x, const CMat& y)
{
    check_in_p(pair, x);
    check_in_p(pair, y);
    if (std::abs(pair.inner(x, x) - 1) > 1e-10 || std::abs(pair.inner(y, y) - 1) > 1e-10 || std::abs(pair.inner(x, y)) > 1e-10)
        throw PairError("x and y must be orthonormal");
    CMat z = bracket(x, y);
    return 0.25 * pair.coords_p(z).squaredNorm() + pair.coords_h(z).squaredNorm();
}

}  // namespace ricb
