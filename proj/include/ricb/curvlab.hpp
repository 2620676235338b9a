#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ricb/pairlab.hpp"

namespace ricb {

class CurvatureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Real Lie algebra in an orthonormal basis of an Ad-invariant inner product.
struct LieAlgebra {
    int dim = 0;
    std::vector<Eigen::MatrixXd> ad;  // ad[i](k, j) = <[e_i, e_j], e_k>

    Eigen::MatrixXd ad_of(const Eigen::VectorXd& x) const;
    Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

// Structure constants of the span of an orthonormal family of matrices.
LieAlgebra lie_algebra(const SymmetricPairRealization& pair);
LieAlgebra su_algebra(int n);
LieAlgebra abelian_algebra(int dim);

// Nested triple h < k < g, all subspaces given by orthonormal columns in g coordinates.
struct TripleModel {
    std::string name;
    std::string label;
    LieAlgebra g;
    Eigen::MatrixXd k, h;
    Eigen::MatrixXd m;  // h^perp in k
    Eigen::MatrixXd p;  // k^perp
    bool symmetric = false;  // [p, p] in k

    int dim_m() const { return static_cast<int>(m.cols()); }
    int dim_p() const { return static_cast<int>(p.cols()); }
    Eigen::MatrixXd hperp() const;  // [m | p]
};

// G > K = H from a symmetric pair realization (K is the isotropy algebra of the pair).
TripleModel triple_from_pair(const SymmetricPairRealization& pair);

// Named triples: "aloff_wallach:n,p,q", "ptcp:n", "hflag:n", "su6", "so10", "torus", and the alias "W(d;p,q)".
TripleModel triple_by_name(const std::string& name);
std::vector<std::string> first_set_triples(int max_n = 4);

enum class MetricMode { group_t, quotient_qt, diagonal_glambda, product };
std::string to_string(MetricMode mode);

// Left-invariant or homogeneous metric evaluated at the base point, in fixed tangent coordinates.
class CurvatureModel {
public:
    virtual ~CurvatureModel() = default;
    virtual MetricMode mode() const = 0;
    virtual std::string name() const = 0;
    virtual int dim() const = 0;
    virtual const Eigen::MatrixXd& gram() const = 0;
    // R(x, y, y, x), bilinear in each slot pair and not normalized.
    virtual double curv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const = 0;

    double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return x.dot(gram() * y); }
};

struct Lift {
    Eigen::VectorXd a;  // k component, metric t Q
    Eigen::VectorXd b;  // g component, metric Q
};

// <,>_t on G: Cheeger deformation along K. Coordinates are those of g.
class GroupDeformation : public CurvatureModel {
public:
    GroupDeformation(std::shared_ptr<const TripleModel> triple, double t);
    MetricMode mode() const override { return MetricMode::group_t; }
    std::string name() const override;
    int dim() const override { return triple_->g.dim; }
    const Eigen::MatrixXd& gram() const override { return gram_; }
    double curv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const override;

    Lift lift(const Eigen::VectorXd& x) const;
    double t() const { return t_; }
    const TripleModel& triple() const { return *triple_; }

private:
    std::shared_ptr<const TripleModel> triple_;
    double t_;
    Eigen::MatrixXd gram_, pk_;
};

// q_t on G/H, the quotient of <,>_t. Coordinates are those of the columns of triple.hperp().
class QuotientDeformation : public CurvatureModel {
public:
    QuotientDeformation(std::shared_ptr<const TripleModel> triple, double t);
    MetricMode mode() const override { return MetricMode::quotient_qt; }
    std::string name() const override;
    int dim() const override { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& gram() const override { return gram_; }
    double curv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const override;

    // The same tangent vector as an element of g (it lies in h^perp).
    Eigen::VectorXd to_g(const Eigen::VectorXd& x) const { return basis_ * x; }
    double t() const { return t_; }
    const TripleModel& triple() const { return *triple_; }

private:
    std::shared_ptr<const TripleModel> triple_;
    double t_;
    Eigen::MatrixXd basis_, gram_, vert_;  // vert_: basis of {(z, z + w)} in k (+) g coordinates
    Eigen::LLT<Eigen::MatrixXd> vert_gram_;
};

// Bi-invariant product metric Q + Q on G x G. Coordinates (v1, v2).
class ProductGroupMetric : public CurvatureModel {
public:
    explicit ProductGroupMetric(LieAlgebra g, std::string label = "G");
    MetricMode mode() const override { return MetricMode::product; }
    std::string name() const override { return label_ + " x " + label_; }
    int dim() const override { return 2 * g_.dim; }
    const Eigen::MatrixXd& gram() const override { return gram_; }
    double curv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const override;
    const LieAlgebra& algebra() const { return g_; }

private:
    LieAlgebra g_;
    std::string label_;
    Eigen::MatrixXd gram_;
};

// Cheeger deformation g_lambda of (G x G, Q + Q) along the diagonal right action, with lambda Q on
// the deforming factor. Coordinates (v1, v2) at the identity.
class DiagonalCheeger : public CurvatureModel {
public:
    DiagonalCheeger(LieAlgebra g, double lambda, std::string label = "G");
    MetricMode mode() const override { return MetricMode::diagonal_glambda; }
    std::string name() const override;
    int dim() const override { return 2 * g_.dim; }
    const Eigen::MatrixXd& gram() const override { return gram_; }
    double curv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const override;

    struct Lift3 {
        Eigen::VectorXd a, b1, b2;
    };
    Lift3 lift(const Eigen::VectorXd& v) const;
    // <kappa(v), z> = -(Q + Q)(v, z*) with z* = (z, z).
    Eigen::VectorXd kappa(const Eigen::VectorXd& v) const;
    // Orthogonal projection onto the orbit {(z, z)} for the product metric.
    Eigen::VectorXd orbit_projection(const Eigen::VectorXd& v) const;
    double lambda() const { return lambda_; }
    const LieAlgebra& algebra() const { return g_; }

private:
    LieAlgebra g_;
    double lambda_;
    std::string label_;
    Eigen::MatrixXd gram_;
};

// Checked evaluations: the inputs must be orthonormal for the model metric (Gram deviation <= 1e-10).
double sec_deformed_group(const GroupDeformation& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double sec_qt(const QuotientDeformation& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double diagonal_cheeger_curv(const CurvatureModel& model, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct FlagSample {
    std::string model;
    MetricMode mode = MetricMode::product;
    int k = 0;
    Eigen::VectorXd x;
    Eigen::MatrixXd frame;  // k columns
    double value = 0;
    std::vector<double> planes;
    std::string origin;  // "random", "descent", "start", "split"

    std::string to_json() const;
};

// x and frame orthonormal for the model metric; throws otherwise.
FlagSample evaluate_flag(const CurvatureModel& model, const Eigen::VectorXd& x, const Eigen::MatrixXd& frame);

// x = (e_1, 0), frame (0, e_1), ..., (0, e_k) for product-shaped models of dimension 2 dim g.
FlagSample split_flag(const CurvatureModel& model, int k);

struct SamplerConfig {
    int samples = 1000;
    int restarts = 10;
    std::uint64_t seed = 1;
    int jobs = 1;
    int iterations = 200;
    double fd_step = 1e-5;
};

// Minimal Ric_k flag over random orthonormal flags plus projected descent from the best ones.
// Independent of `jobs`: work is split into a fixed number of seeded shards.
FlagSample ric_k_min(const CurvatureModel& model, int k, const SamplerConfig& config,
                     const std::vector<FlagSample>& starts = {});

struct FatnessReport {
    std::string triple;
    int dim_m = 0;
    int dim_p = 0;
    double margin = 0;
    bool fat = false;
    bool degenerate = false;  // m = 0
    Eigen::VectorXd witness;  // m coordinates of the minimizer
    int starts = 0;
};

// min over unit x in m of sigma_min(ad(x): p -> g); fat iff margin > 1e-6.
FatnessReport fatness_margin(const TripleModel& triple, int starts = 100, std::uint64_t seed = 1);

struct FlagAudit {
    int dim_flag = 0;
    int p1_line = 0, p2_line = 0, p1_flag = 0, p2_flag = 0;
    int diag_line = 0, diag_flag = 0;
    int k = 0;
    int dim_m2 = 0;
    bool ok = true;
    std::vector<std::string> failures;
};

// Projection dimensions of a zero flag on G x G and the bounds on them for factors with Ric_k > 0.
FlagAudit flag_projection_audit(const FlagSample& flag, int k, int dim_m2, double zero_tol = 1e-10);

struct EschenburgReport {
    int samples = 0;
    int zero_planes = 0;
    int commuting = 0;
    int mismatches = 0;
    double min_curv = 0;
    double max_zero_bracket = 0;  // largest bracket norm^2 among zero planes
};

// Zero curvature of <,>_t versus [x,y] = [x_k,y_k] = [x_p,y_p] = 0 on random and constructed commuting pairs.
EschenburgReport eschenburg_check(const GroupDeformation& model, int random_pairs, int constructed_pairs,
                                  std::uint64_t seed = 1, double tol = 1e-9);

}  // namespace ricb
