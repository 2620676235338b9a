#include "ricb/curvlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <regex>
#include <thread>

#include <json.hpp>

#include "matrix_model.hpp"

namespace ricb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

using namespace detail;

constexpr double ortho_tol = 1e-10;
constexpr double fat_threshold = 1e-6;
constexpr int shard_count = 16;

// Structure constants of an orthonormal family of matrices (vecs are its isometric coordinates).
LieAlgebra from_matrices(const std::vector<CMat>& basis, const MatrixXd& vecs, const Ambient& amb)
{
    LieAlgebra g;
    g.dim = static_cast<int>(basis.size());
    g.ad.assign(g.dim, MatrixXd::Zero(g.dim, g.dim));
    for (int i = 0; i < g.dim; ++i)
        for (int j = i + 1; j < g.dim; ++j) {
            VectorXd c = vecs.transpose() * amb.vec(bracket(basis[i], basis[j]));
            g.ad[i].col(j) = c;
            g.ad[j].col(i) = -c;
        }
    return g;
}

MatrixXd vec_columns(const Ambient& amb, const std::vector<CMat>& basis)
{
    MatrixXd v(2 * amb.n * amb.n, basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = amb.vec(basis[i]);
    return v;
}

// Orthonormal basis of the complement of span(sub) in span(space); columns orthonormal in R^n.
MatrixXd complement_in(const MatrixXd& space, const MatrixXd& sub)
{
    if (sub.cols() == 0) return space;
    MatrixXd c = sub.transpose() * space;
    MatrixXd coeff = null_space(c, 1e-10);
    MatrixXd out = space * coeff;
    Eigen::HouseholderQR<MatrixXd> qr(out);
    return qr.householderQ() * MatrixXd::Identity(out.rows(), out.cols());
}

TripleModel assemble(const std::string& name, const std::string& label, const SymmetricPairRealization& pair,
                     const std::vector<CMat>& h)
{
    Ambient amb{pair.matrix_size, pair.weight};
    std::vector<CMat> g = pair.h_basis;
    g.insert(g.end(), pair.p_basis.begin(), pair.p_basis.end());
    MatrixXd gv = vec_columns(amb, g);

    TripleModel t;
    t.name = name;
    t.label = label;
    t.g = from_matrices(g, gv, amb);
    int dg = t.g.dim, dk = pair.dim_h();
    t.k = MatrixXd::Identity(dg, dg).leftCols(dk);
    t.p = MatrixXd::Identity(dg, dg).rightCols(dg - dk);
    t.h = h.empty() ? MatrixXd(dg, 0) : MatrixXd(gv.transpose() * vec_columns(amb, h));
    t.m = complement_in(t.k, t.h);
    t.symmetric = pair.symmetric;
    return t;
}

Constraint entry_zero(int i, int j)
{
    return [=](const CMat& x) { return CMat::Constant(1, 1, x(i, j)); };
}

// q x_00 = p x_11: the circle (z^p, z^q) in the top 2x2 block.
Constraint circle_ratio(long long p, long long q)
{
    return [=](const CMat& x) { return CMat::Constant(1, 1, static_cast<double>(q) * x(0, 0) - static_cast<double>(p) * x(1, 1)); };
}

// sp(2) + u(1) on the 4-block starting at `off`: B^T J + J B must be a multiple of J.
Constraint sp2_u1(int off)
{
    CMat j = symplectic_form(2);
    return [=](const CMat& x) {
        CMat b = x.block(off, off, 4, 4);
        CMat r = b.transpose() * j + j * b;
        std::complex<double> c = (j.adjoint() * r).trace() / (j.adjoint() * j).trace();
        return CMat(r - c * j);
    };
}

// Left multiplications by the imaginary octonion units on R^8 = span(1, e1..e7).
std::vector<Eigen::Matrix<double, 8, 8>> octonion_left_mult()
{
    static const int triples[7][3] = {{1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 7}, {5, 6, 1}, {6, 7, 2}, {7, 1, 3}};
    int prod[8][8];
    int sign[8][8];
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            prod[a][b] = 0;
            sign[a][b] = 0;
        }
    for (int a = 0; a < 8; ++a) {
        prod[0][a] = prod[a][0] = a;
        sign[0][a] = sign[a][0] = 1;
    }
    for (int a = 1; a < 8; ++a) {
        prod[a][a] = 0;
        sign[a][a] = -1;
    }
    for (const auto& t : triples)
        for (int r = 0; r < 3; ++r) {
            int a = t[r], b = t[(r + 1) % 3], c = t[(r + 2) % 3];
            prod[a][b] = c;
            sign[a][b] = 1;
            prod[b][a] = c;
            sign[b][a] = -1;
        }
    std::vector<Eigen::Matrix<double, 8, 8>> l;
    for (int i = 1; i < 8; ++i) {
        Eigen::Matrix<double, 8, 8> m = Eigen::Matrix<double, 8, 8>::Zero();
        for (int j = 0; j < 8; ++j) m(prod[i][j], j) = sign[i][j];
        l.push_back(m);
    }
    return l;
}

// spin(7) in so(8) on the block starting at `off`: the residual after projecting onto span [L_i, L_j].
Constraint spin7(int off)
{
    auto l = octonion_left_mult();
    std::vector<MatrixXd> span;
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j) span.push_back(l[i] * l[j] - l[j] * l[i]);
    MatrixXd cols(64, span.size());
    for (std::size_t s = 0; s < span.size(); ++s) cols.col(static_cast<Eigen::Index>(s)) = Eigen::Map<const VectorXd>(span[s].data(), 64);
    Eigen::HouseholderQR<MatrixXd> qr(cols);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(64, static_cast<Eigen::Index>(span.size()));
    return [=](const CMat& x) {
        MatrixXd b = x.block(off, off, 8, 8).real();
        VectorXd v = Eigen::Map<const VectorXd>(b.data(), 64);
        VectorXd r = v - q * (q.transpose() * v);
        return CMat(r.cast<std::complex<double>>());
    };
}

int parse_int(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CurvatureError("bad integer in " + what + ": \"" + s + "\"");
    }
}

std::vector<int> parse_params(const std::string& s, const std::string& what)
{
    std::vector<int> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        out.push_back(parse_int(s.substr(start, comma - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void check_positive(double v, const char* what)
{
    if (!(v > 0) || !std::isfinite(v)) throw CurvatureError(std::string(what) + " must be finite and positive");
}

void check_dim(const CurvatureModel& model, const VectorXd& x)
{
    if (x.size() != model.dim()) throw CurvatureError("vector has dimension " + std::to_string(x.size()) + ", model has " + std::to_string(model.dim()));
}

void check_orthonormal(const CurvatureModel& model, const VectorXd& x, const VectorXd& y)
{
    check_dim(model, x);
    check_dim(model, y);
    double dev = std::max({std::abs(model.inner(x, x) - 1), std::abs(model.inner(y, y) - 1), std::abs(model.inner(x, y))});
    if (dev > ortho_tol) throw CurvatureError("vectors are not orthonormal for the model metric");
}

VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

// Thin Q with positive diagonal R, so nearby inputs give nearby frames.
MatrixXd orthonormalize(const MatrixXd& a)
{
    Eigen::HouseholderQR<MatrixXd> qr(a);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(a.rows(), a.cols());
    MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < a.cols(); ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

int numeric_rank(const MatrixXd& m, double tol = 1e-8)
{
    if (m.cols() == 0 || m.rows() == 0) return 0;
    Eigen::JacobiSVD<MatrixXd> svd(m);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return r;
}

template <class F>
void parallel_for(int count, int jobs, F f)
{
    jobs = std::clamp(jobs, 1, count > 0 ? count : 1);
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

MatrixXd LieAlgebra::ad_of(const VectorXd& x) const
{
    MatrixXd a = MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        if (x(i) != 0.0) a += x(i) * ad[i];
    return a;
}

VectorXd LieAlgebra::bracket(const VectorXd& x, const VectorXd& y) const
{
    VectorXd out = VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i)
        if (x(i) != 0.0) out += x(i) * (ad[i] * y);
    return out;
}

LieAlgebra lie_algebra(const SymmetricPairRealization& pair)
{
    Ambient amb{pair.matrix_size, pair.weight};
    std::vector<CMat> g = pair.h_basis;
    g.insert(g.end(), pair.p_basis.begin(), pair.p_basis.end());
    return from_matrices(g, vec_columns(amb, g), amb);
}

LieAlgebra su_algebra(int n)
{
    if (n < 2) throw CurvatureError("su(n) needs n >= 2");
    return lie_algebra(realize_pair("complex_grassmannian", {1, n - 1}));
}

LieAlgebra abelian_algebra(int dim)
{
    LieAlgebra g;
    g.dim = dim;
    g.ad.assign(dim, MatrixXd::Zero(dim, dim));
    return g;
}

MatrixXd TripleModel::hperp() const
{
    MatrixXd out(g.dim, m.cols() + p.cols());
    out << m, p;
    return out;
}

TripleModel triple_from_pair(const SymmetricPairRealization& pair)
{
    return assemble(pair.kind, pair.label, pair, pair.h_basis);
}

TripleModel triple_by_name(const std::string& raw)
{
    std::string name = raw;
    std::smatch mt;
    static const std::regex w_alias(R"(W\((\d+);(-?\d+),(-?\d+)\))");
    if (std::regex_match(raw, mt, w_alias)) {
        int d = parse_int(mt[1], raw);
        if ((d + 1) % 4 != 0) throw CurvatureError("W(d;p,q) needs d = 4n - 1");
        name = "aloff_wallach:" + std::to_string((d + 1) / 4) + "," + mt[2].str() + "," + mt[3].str();
    }
    auto colon = name.find(':');
    std::string kind = name.substr(0, colon);
    std::vector<int> params = colon == std::string::npos ? std::vector<int>{} : parse_params(name.substr(colon + 1), raw);

    if (kind == "aloff_wallach" || kind == "ptcp" || kind == "hflag") {
        int n = need(params, kind == "aloff_wallach" ? 3 : 1, kind);
        if (n < 2) throw CurvatureError(kind + " needs n >= 2");
        if (kind == "hflag") {
            auto pair = realize_pair("quaternionic_grassmannian", {2, n - 1});
            std::vector<bool> first(2 * (n + 1));
            for (int i = 0; i < 2 * (n + 1); ++i) first[i] = i % (n + 1) == 0;
            auto h = impose(pair.h_basis, {block_diagonal(first)});
            return assemble(name, "Sp(1)Sp(1)Sp(" + str(n - 1) + ") < Sp(2)Sp(" + str(n - 1) + ") < Sp(" + str(n + 1) + ")", pair, h);
        }
        auto pair = realize_pair("complex_grassmannian", {2, n - 1});
        std::vector<Constraint> cs{entry_zero(0, 1)};
        std::string label;
        if (kind == "aloff_wallach") {
            long long p = params[1], q = params[2];
            if (p * q <= 0 || std::gcd(p, q) != 1) throw CurvatureError("aloff_wallach needs coprime p, q with pq > 0");
            cs.push_back(circle_ratio(p, q));
            label = "S(U(1)^{" + str(params[1]) + "," + str(params[2]) + "}U(" + str(n - 1) + "))";
        } else {
            label = "S(U(1)U(1)U(" + str(n - 1) + "))";
        }
        return assemble(name, label + " < S(U(2)U(" + str(n - 1) + ")) < SU(" + str(n + 1) + ")", pair, impose(pair.h_basis, cs));
    }
    if (kind == "su6") {
        need(params, 0, kind);
        auto pair = realize_pair("complex_grassmannian", {2, 4});
        return assemble(name, "S(U(2)Sp(2)) < S(U(2)U(4)) < SU(6)", pair, impose(pair.h_basis, {sp2_u1(2)}));
    }
    if (kind == "so10") {
        need(params, 0, kind);
        auto pair = realize_pair("real_grassmannian", {2, 8});
        return assemble(name, "SO(2)Spin(7) < SO(2)SO(8) < SO(10)", pair, impose(pair.h_basis, {spin7(2)}));
    }
    if (kind == "torus") {
        need(params, 0, kind);
        TripleModel t;
        t.name = name;
        t.label = "{e} < S^1 < T^2";
        t.g = abelian_algebra(2);
        t.k = MatrixXd::Identity(2, 2).leftCols(1);
        t.h = MatrixXd(2, 0);
        t.m = t.k;
        t.p = MatrixXd::Identity(2, 2).rightCols(1);
        t.symmetric = true;
        return t;
    }
    throw CurvatureError("unknown triple \"" + raw + "\"");
}

std::vector<std::string> first_set_triples(int max_n)
{
    std::vector<std::string> out;
    for (int n = 2; n <= max_n; ++n) {
        out.push_back("aloff_wallach:" + str(n) + ",1,1");
        out.push_back("aloff_wallach:" + str(n) + ",1,2");
        out.push_back("ptcp:" + str(n));
        out.push_back("hflag:" + str(n));
    }
    out.push_back("su6");
    out.push_back("so10");
    return out;
}

std::string to_string(MetricMode mode)
{
    switch (mode) {
    case MetricMode::group_t: return "group_t";
    case MetricMode::quotient_qt: return "quotient_qt";
    case MetricMode::diagonal_glambda: return "diagonal_glambda";
    case MetricMode::product: return "product";
    }
    return "?";
}

GroupDeformation::GroupDeformation(std::shared_ptr<const TripleModel> triple, double t) : triple_(std::move(triple)), t_(t)
{
    check_positive(t, "t");
    pk_ = triple_->k * triple_->k.transpose();
    gram_ = MatrixXd::Identity(dim(), dim()) - pk_ / (1 + t_);
}

std::string GroupDeformation::name() const { return "group_t[" + triple_->label + "]"; }

Lift GroupDeformation::lift(const VectorXd& x) const
{
    VectorXd xk = pk_ * x;
    return {-xk / (1 + t_), t_ * xk / (1 + t_) + (x - xk)};
}

double GroupDeformation::curv(const VectorXd& x, const VectorXd& y) const
{
    const auto& g = triple_->g;
    Lift lx = lift(x), ly = lift(y);
    VectorXd u = g.bracket(lx.a, ly.a), v = g.bracket(lx.b, ly.b);
    VectorXd z = (t_ * u + pk_ * v) / (1 + t_);
    return 0.25 * (t_ * u.squaredNorm() + v.squaredNorm()) + 0.75 * (1 + t_) * z.squaredNorm();
}

QuotientDeformation::QuotientDeformation(std::shared_ptr<const TripleModel> triple, double t) : triple_(std::move(triple)), t_(t)
{
    check_positive(t, "t");
    basis_ = triple_->hperp();
    const auto& tr = *triple_;
    MatrixXd pk = tr.k * tr.k.transpose();
    gram_ = basis_.transpose() * (MatrixXd::Identity(tr.g.dim, tr.g.dim) - pk / (1 + t_)) * basis_;
    // Vertical directions (z, z) for z in k and (0, w) for w in h, stacked as k (+) g coordinates.
    int n = tr.g.dim, dk = static_cast<int>(tr.k.cols()), dh = static_cast<int>(tr.h.cols());
    vert_ = MatrixXd::Zero(2 * n, dk + dh);
    vert_.topLeftCorner(n, dk) = tr.k;
    vert_.bottomLeftCorner(n, dk) = tr.k;
    vert_.bottomRightCorner(n, dh) = tr.h;
    VectorXd w(2 * n);
    w << VectorXd::Constant(n, t_), VectorXd::Ones(n);
    vert_gram_.compute(vert_.transpose() * w.asDiagonal() * vert_);
}

std::string QuotientDeformation::name() const { return "quotient_qt[" + triple_->label + "]"; }

double QuotientDeformation::curv(const VectorXd& x, const VectorXd& y) const
{
    const auto& g = triple_->g;
    int n = g.dim;
    VectorXd gx = basis_ * x, gy = basis_ * y;
    MatrixXd pk = triple_->k * triple_->k.transpose();
    auto lift = [&](const VectorXd& v) {
        VectorXd vk = pk * v;
        return Lift{-vk / (1 + t_), t_ * vk / (1 + t_) + (v - vk)};
    };
    Lift lx = lift(gx), ly = lift(gy);
    VectorXd u = g.bracket(lx.a, ly.a), v = g.bracket(lx.b, ly.b);
    VectorXd r = t_ * (vert_.topRows(n).transpose() * u) + vert_.bottomRows(n).transpose() * v;
    double vertical = r.dot(vert_gram_.solve(r));
    return 0.25 * (t_ * u.squaredNorm() + v.squaredNorm()) + 0.75 * vertical;
}

ProductGroupMetric::ProductGroupMetric(LieAlgebra g, std::string label) : g_(std::move(g)), label_(std::move(label))
{
    gram_ = MatrixXd::Identity(dim(), dim());
}

double ProductGroupMetric::curv(const VectorXd& x, const VectorXd& y) const
{
    int d = g_.dim;
    return 0.25 * (g_.bracket(x.head(d), y.head(d)).squaredNorm() + g_.bracket(x.tail(d), y.tail(d)).squaredNorm());
}

DiagonalCheeger::DiagonalCheeger(LieAlgebra g, double lambda, std::string label)
    : g_(std::move(g)), lambda_(lambda), label_(std::move(label))
{
    check_positive(lambda, "lambda");
    int n = dim();
    gram_.resize(n, n);
    std::vector<Lift3> lifts;
    for (int i = 0; i < n; ++i) lifts.push_back(lift(VectorXd::Unit(n, i)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gram_(i, j) = lambda_ * lifts[i].a.dot(lifts[j].a) + lifts[i].b1.dot(lifts[j].b1) + lifts[i].b2.dot(lifts[j].b2);
}

std::string DiagonalCheeger::name() const { return "diagonal_glambda[" + label_ + " x " + label_ + "]"; }

DiagonalCheeger::Lift3 DiagonalCheeger::lift(const VectorXd& v) const
{
    int d = g_.dim;
    VectorXd a = -(v.head(d) + v.tail(d)) / (lambda_ + 2);
    return {a, v.head(d) + a, v.tail(d) + a};
}

VectorXd DiagonalCheeger::kappa(const VectorXd& v) const
{
    int d = g_.dim;
    VectorXd k(d);
    for (int i = 0; i < d; ++i) {
        VectorXd z = VectorXd::Unit(d, i);
        VectorXd zstar(2 * d);
        zstar << z, z;
        k(i) = -v.dot(zstar);
    }
    return k;
}

VectorXd DiagonalCheeger::orbit_projection(const VectorXd& v) const
{
    int d = g_.dim;
    VectorXd s = (v.head(d) + v.tail(d)) / 2;
    VectorXd out(2 * d);
    out << s, s;
    return out;
}

double DiagonalCheeger::curv(const VectorXd& x, const VectorXd& y) const
{
    Lift3 lx = lift(x), ly = lift(y);
    VectorXd u = g_.bracket(lx.a, ly.a), w1 = g_.bracket(lx.b1, ly.b1), w2 = g_.bracket(lx.b2, ly.b2);
    VectorXd z = (lambda_ * u + w1 + w2) / (lambda_ + 2);
    return 0.25 * (lambda_ * u.squaredNorm() + w1.squaredNorm() + w2.squaredNorm()) + 0.75 * (lambda_ + 2) * z.squaredNorm();
}

double sec_deformed_group(const GroupDeformation& model, const VectorXd& x, const VectorXd& y)
{
    check_orthonormal(model, x, y);
    return model.curv(x, y);
}

double sec_qt(const QuotientDeformation& model, const VectorXd& x, const VectorXd& y)
{
    check_orthonormal(model, x, y);
    return model.curv(x, y);
}

double diagonal_cheeger_curv(const CurvatureModel& model, const VectorXd& u, const VectorXd& v)
{
    if (model.mode() != MetricMode::diagonal_glambda) throw CurvatureError("model is not a diagonal Cheeger deformation");
    check_orthonormal(model, u, v);
    return model.curv(u, v);
}

std::string FlagSample::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = "ricb.flag";
    j["version"] = 1;
    j["model"] = model;
    j["mode"] = to_string(mode);
    j["k"] = k;
    j["value"] = value;
    j["planes"] = planes;
    j["origin"] = origin;
    j["x"] = std::vector<double>(x.data(), x.data() + x.size());
    auto frame_json = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < frame.cols(); ++c) {
        VectorXd col = frame.col(c);
        frame_json.push_back(std::vector<double>(col.data(), col.data() + col.size()));
    }
    j["frame"] = frame_json;
    return j.dump();
}

FlagSample evaluate_flag(const CurvatureModel& model, const VectorXd& x, const MatrixXd& frame)
{
    check_dim(model, x);
    if (frame.rows() != model.dim()) throw CurvatureError("frame has the wrong dimension");
    MatrixXd all(model.dim(), frame.cols() + 1);
    all << x, frame;
    MatrixXd gram = all.transpose() * model.gram() * all;
    if ((gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > ortho_tol)
        throw CurvatureError("flag is not orthonormal for the model metric");
    FlagSample s;
    s.model = model.name();
    s.mode = model.mode();
    s.k = static_cast<int>(frame.cols());
    s.x = x;
    s.frame = frame;
    for (Eigen::Index i = 0; i < frame.cols(); ++i) s.planes.push_back(model.curv(x, frame.col(i)));
    s.value = std::accumulate(s.planes.begin(), s.planes.end(), 0.0);
    return s;
}

FlagSample split_flag(const CurvatureModel& model, int k)
{
    if (model.mode() != MetricMode::product) throw CurvatureError("split flags are defined for product metrics");
    int d = model.dim() / 2;
    if (k < 1 || k > d) throw CurvatureError("split flag needs 1 <= k <= dim of the second factor");
    MatrixXd frame = MatrixXd::Zero(2 * d, k);
    for (int i = 0; i < k; ++i) frame(d + i, i) = 1;
    auto s = evaluate_flag(model, VectorXd::Unit(2 * d, 0), frame);
    s.origin = "split";
    return s;
}

FlagSample ric_k_min(const CurvatureModel& model, int k, const SamplerConfig& config, const std::vector<FlagSample>& starts)
{
    int n = model.dim();
    if (k < 1 || k >= n) throw CurvatureError("k must satisfy 1 <= k < " + std::to_string(n));
    if (config.samples < 0 || config.restarts < 0 || config.iterations < 0 || !(config.fd_step > 0))
        throw CurvatureError("sampler budgets must be non-negative");
    if (config.samples == 0 && starts.empty()) throw CurvatureError("empty sampling budget");

    // Orthonormal coordinates y = L^T x, where gram = L L^T.
    Eigen::LLT<MatrixXd> llt(model.gram());
    MatrixXd lt = llt.matrixU();
    MatrixXd to_model = lt.inverse();  // x = L^{-T} y
    auto value = [&](const MatrixXd& y) {
        VectorXd x = to_model * y.col(0);
        double s = 0;
        for (int i = 1; i <= k; ++i) s += model.curv(x, to_model * y.col(i));
        return s;
    };

    struct Candidate {
        double value;
        int shard;
        int index;
        MatrixXd y;
        std::string origin;
    };
    auto better = [](const Candidate& a, const Candidate& b) {
        return std::tie(a.value, a.shard, a.index) < std::tie(b.value, b.shard, b.index);
    };

    int keep = std::max(config.restarts, 1);
    std::vector<std::vector<Candidate>> shards(shard_count);
    parallel_for(shard_count, config.jobs, [&](int s) {
        std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(s));
        int count = config.samples / shard_count + (s < config.samples % shard_count ? 1 : 0);
        auto& best = shards[s];
        for (int i = 0; i < count; ++i) {
            MatrixXd a(n, k + 1);
            for (int c = 0; c <= k; ++c) a.col(c) = gaussian(rng, n);
            MatrixXd y = orthonormalize(a);
            Candidate cand{value(y), s, i, y, "random"};
            if (static_cast<int>(best.size()) < keep || better(cand, best.back())) {
                best.insert(std::upper_bound(best.begin(), best.end(), cand, better), cand);
                if (static_cast<int>(best.size()) > keep) best.pop_back();
            }
        }
    });

    std::vector<Candidate> pool;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto& st = starts[i];
        if (st.k != k || st.x.size() != n) throw CurvatureError("start flag does not match the model");
        MatrixXd x(n, k + 1);
        x << st.x, st.frame;
        MatrixXd y = lt * x;
        pool.push_back({value(y), -1, static_cast<int>(i), y, "start"});
    }
    for (auto& s : shards) pool.insert(pool.end(), s.begin(), s.end());
    std::sort(pool.begin(), pool.end(), better);

    int descents = std::min<int>(config.restarts, static_cast<int>(pool.size()));
    std::vector<Candidate> descended(descents);
    parallel_for(descents, config.jobs, [&](int r) {
        Candidate c = pool[r];
        double step = 0.1;
        const double h = config.fd_step;
        for (int it = 0; it < config.iterations; ++it) {
            MatrixXd grad(n, k + 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= k; ++j) {
                    MatrixXd yp = c.y, ym = c.y;
                    yp(i, j) += h;
                    ym(i, j) -= h;
                    grad(i, j) = (value(yp) - value(ym)) / (2 * h);
                }
            MatrixXd sym = c.y.transpose() * grad;
            MatrixXd dir = grad - c.y * (sym + sym.transpose()) / 2;
            double norm = dir.norm();
            if (norm < 1e-14) break;
            bool moved = false;
            while (step > 1e-14) {
                MatrixXd y = orthonormalize(c.y - (step / norm) * dir);
                double v = value(y);
                if (v < c.value) {
                    c.y = y;
                    c.value = v;
                    c.origin = "descent";
                    step = std::min(step * 2, 1.0);
                    moved = true;
                    break;
                }
                step /= 2;
            }
            if (!moved) break;
        }
        descended[r] = c;
    });
    pool.insert(pool.end(), descended.begin(), descended.end());
    const Candidate& best = *std::min_element(pool.begin(), pool.end(), better);

    MatrixXd x = to_model * best.y;
    // Re-orthonormalize in the model metric to absorb the round trip through L.
    MatrixXd g = x.transpose() * model.gram() * x;
    Eigen::LLT<MatrixXd> fix(g);
    x = x * MatrixXd(fix.matrixU()).inverse();
    FlagSample out = evaluate_flag(model, x.col(0), x.rightCols(k));
    out.origin = best.origin;
    return out;
}

FatnessReport fatness_margin(const TripleModel& triple, int starts, std::uint64_t seed)
{
    if (starts <= 0) throw CurvatureError("fatness needs a positive optimizer budget");
    FatnessReport rep;
    rep.triple = triple.label;
    rep.dim_m = triple.dim_m();
    rep.dim_p = triple.dim_p();
    rep.starts = starts;
    if (rep.dim_m == 0) {
        rep.degenerate = true;
        rep.fat = true;
        rep.margin = std::numeric_limits<double>::infinity();
        return rep;
    }
    // B_j = ad(m_j) restricted to p, so ad(x)|p = sum_j c_j B_j.
    std::vector<MatrixXd> b;
    for (int j = 0; j < rep.dim_m; ++j) b.push_back(triple.g.ad_of(triple.m.col(j)) * triple.p);
    auto sigma_min = [&](const VectorXd& c) {
        MatrixXd a = MatrixXd::Zero(triple.g.dim, rep.dim_p);
        for (int j = 0; j < rep.dim_m; ++j) a += c(j) * b[j];
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.transpose() * a, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(es.eigenvalues()(0), 0.0));
    };

    std::mt19937_64 rng(seed);
    rep.margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        VectorXd c = gaussian(rng, rep.dim_m).normalized();
        double f = sigma_min(c), step = 0.1;
        for (int it = 0; it < 100 && rep.dim_m > 1; ++it) {
            VectorXd grad(rep.dim_m);
            for (int j = 0; j < rep.dim_m; ++j) {
                VectorXd e = VectorXd::Unit(rep.dim_m, j) * 1e-6;
                grad(j) = (sigma_min((c + e).normalized()) - sigma_min((c - e).normalized())) / 2e-6;
            }
            grad -= grad.dot(c) * c;
            double norm = grad.norm();
            if (norm < 1e-12) break;
            bool moved = false;
            while (step > 1e-12) {
                VectorXd next = (c - (step / norm) * grad).normalized();
                double v = sigma_min(next);
                if (v < f) {
                    c = next;
                    f = v;
                    step = std::min(step * 2, 1.0);
                    moved = true;
                    break;
                }
                step /= 2;
            }
            if (!moved) break;
        }
        if (f < rep.margin) {
            rep.margin = f;
            rep.witness = c;
        }
    }
    rep.fat = rep.margin > fat_threshold;
    return rep;
}

FlagAudit flag_projection_audit(const FlagSample& flag, int k, int dim_m2, double zero_tol)
{
    if (flag.mode != MetricMode::product && flag.mode != MetricMode::diagonal_glambda)
        throw CurvatureError("projection audit needs a flag on a product of two factors");
    if (std::abs(flag.value) > zero_tol) throw CurvatureError("flag value is not zero");
    if (flag.x.size() % 2 != 0) throw CurvatureError("flag does not split into two factors");
    Eigen::Index d = flag.x.size() / 2;
    MatrixXd v(flag.x.size(), flag.frame.cols() + 1);
    v << flag.x, flag.frame;

    FlagAudit a;
    a.k = k;
    a.dim_m2 = dim_m2;
    a.dim_flag = numeric_rank(v);
    a.p1_line = numeric_rank(flag.x.head(d));
    a.p2_line = numeric_rank(flag.x.tail(d));
    a.p1_flag = numeric_rank(v.topRows(d));
    a.p2_flag = numeric_rank(v.bottomRows(d));
    a.diag_line = numeric_rank(flag.x.head(d) + flag.x.tail(d));
    a.diag_flag = numeric_rank(v.topRows(d) + v.bottomRows(d));

    auto fail = [&](const std::string& why) {
        a.ok = false;
        a.failures.push_back(why);
    };
    if (flag.mode == MetricMode::product) {
        if (a.p1_line != 1 && a.p2_line != 1) fail("neither factor projection of the line is 1-dimensional");
        if (a.p1_line == 1 && a.p1_flag > k) fail("first factor projection of the flag exceeds k");
        if (a.p2_line == 1 && a.p2_flag > std::min(k, dim_m2)) fail("second factor projection of the flag exceeds min(k, dim M2)");
    } else if (a.dim_flag > std::min(2 * k, k + dim_m2)) {
        fail("flag dimension exceeds min(2k, k + dim M2)");
    }
    return a;
}

EschenburgReport eschenburg_check(const GroupDeformation& model, int random_pairs, int constructed_pairs, std::uint64_t seed,
                                  double tol)
{
    const auto& tr = model.triple();
    const auto& g = tr.g;
    if (random_pairs < 0 || constructed_pairs < 0) throw CurvatureError("sample counts must be non-negative");
    MatrixXd pk = tr.k * tr.k.transpose();
    std::mt19937_64 rng(seed);
    EschenburgReport rep;
    rep.min_curv = std::numeric_limits<double>::infinity();

    auto orthonormal_pair = [&](VectorXd x, VectorXd y) {
        x /= std::sqrt(model.inner(x, x));
        y -= model.inner(x, y) * x;
        y /= std::sqrt(model.inner(y, y));
        return std::pair{x, y};
    };
    auto record = [&](const VectorXd& x, const VectorXd& y) {
        double c = sec_deformed_group(model, x, y);
        VectorXd xk = pk * x, yk = pk * y;
        double br = std::max({g.bracket(x, y).squaredNorm(), g.bracket(xk, yk).squaredNorm(), g.bracket(x - xk, y - yk).squaredNorm()});
        bool zero = c <= tol, commuting = br <= tol;
        ++rep.samples;
        rep.zero_planes += zero;
        rep.commuting += commuting;
        rep.mismatches += zero != commuting;
        rep.min_curv = std::min(rep.min_curv, c);
        if (zero) rep.max_zero_bracket = std::max(rep.max_zero_bracket, br);
    };

    for (int s = 0; s < random_pairs; ++s) {
        auto [x, y] = orthonormal_pair(gaussian(rng, g.dim), gaussian(rng, g.dim));
        record(x, y);
    }
    if (constructed_pairs == 0) return rep;

    // Maximal abelian subspace of p, grown greedily from a random element.
    MatrixXd a = tr.p * gaussian(rng, tr.dim_p()).normalized();
    while (true) {
        MatrixXd stack(g.dim * a.cols(), tr.dim_p());
        for (Eigen::Index i = 0; i < a.cols(); ++i) stack.middleRows(i * g.dim, g.dim) = g.ad_of(a.col(i)) * tr.p;
        MatrixXd z = tr.p * null_space(stack);
        if (z.cols() <= a.cols()) break;
        VectorXd next = z * gaussian(rng, z.cols());
        next -= a * (a.transpose() * next);
        MatrixXd grown(g.dim, a.cols() + 1);
        grown << a, next.normalized();
        a = grown;
    }

    for (int s = 0; s < constructed_pairs; ++s) {
        VectorXd x, y;
        if (s % 2 == 0 && a.cols() >= 2) {
            x = a * gaussian(rng, a.cols());
            y = a * gaussian(rng, a.cols());
        } else {
            // Z in k and Y in its centralizer in p: every combination of Y and Z commutes in all three senses.
            VectorXd zk = tr.k * gaussian(rng, tr.k.cols());
            MatrixXd cent = tr.p * null_space(g.ad_of(zk) * tr.p);
            if (cent.cols() == 0) {
                if (a.cols() < 2) continue;
                x = a * gaussian(rng, a.cols());
                y = a * gaussian(rng, a.cols());
            } else {
                VectorXd yp = cent * gaussian(rng, cent.cols());
                std::normal_distribution<double> nd;
                x = nd(rng) * yp + nd(rng) * zk;
                y = nd(rng) * yp + nd(rng) * zk;
            }
        }
        auto [ox, oy] = orthonormal_pair(x, y);
        record(ox, oy);
    }
    return rep;
}

}  // namespace ricb
