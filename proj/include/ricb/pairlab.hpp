#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ricb {

using CMat = Eigen::MatrixXcd;

class PairError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// g = h + p inside u(N), possibly block diagonal. The inner product is
// <X, Y> = sum over blocks of s_b * (-Re tr(X_b Y_b)), i.e. -tr(XY) rescaled on each block.
struct SymmetricPairRealization {
    std::string kind;
    std::vector<int> params;
    std::string label;       // e.g. "SU(3)/SO(3)"
    std::string space_spec;  // alias understood by the space-spec parser, empty if none
    bool symmetric = true;
    int matrix_size = 0;
    std::vector<int> blocks;         // block sizes along the diagonal
    std::vector<double> block_scale; // s_b
    std::vector<CMat> h_basis;       // orthonormal
    std::vector<CMat> p_basis;       // orthonormal, orthogonal to h
    Eigen::MatrixXd weight;          // sqrt(s_b) on diagonal blocks, 1 elsewhere
    Eigen::MatrixXd h_vec, p_vec;    // vec() of the bases, one column each

    int dim_g() const { return static_cast<int>(h_basis.size() + p_basis.size()); }
    int dim_h() const { return static_cast<int>(h_basis.size()); }
    int dim_p() const { return static_cast<int>(p_basis.size()); }

    double inner(const CMat& x, const CMat& y) const;
    Eigen::VectorXd vec(const CMat& x) const;  // isometric real coordinates in the ambient
    Eigen::VectorXd coords_h(const CMat& x) const;
    Eigen::VectorXd coords_p(const CMat& x) const;
    CMat from_p(const Eigen::VectorXd& c) const;
    CMat from_h(const Eigen::VectorXd& c) const;
};

CMat bracket(const CMat& a, const CMat& b);

// kind: real_grassmannian {p,q}, complex_grassmannian {p,q}, quaternionic_grassmannian {p,q},
// su_so {n}, su_sp {n} (SU(2n)/Sp(n)), sp_u {n}, so_u {n} (SO(2n)/U(n)),
// group_su {n}, group_so {n}, group_sp {n} ((G x G)/diag G), triple_diagonal {} ((SU(2)^3)/diag SU(2)).
// scales rescales the inner product on the simple ideals of the block models (group and triple cases).
SymmetricPairRealization realize_pair(const std::string& kind, const std::vector<int>& params,
                                      const std::vector<double>& scales = {});

std::vector<std::string> supported_pair_kinds();

struct InvariantErrors {
    double g_closed = 0;       // distance of [g,g] from g
    double h_closed = 0;       // |[h,h]_p|
    double hp_in_p = 0;        // |[h,p]_h|
    double pp_in_h = 0;        // |[p,p]_p|, only required to vanish for symmetric pairs
    double ad_invariance = 0;  // |<[z,x],y> + <x,[z,y]>|
    double jacobi = 0;
};

InvariantErrors check_invariants(const SymmetricPairRealization& pair, std::uint64_t seed = 7, int samples = 400);

struct CentralizerReport {
    CMat x;
    int dim_zp = 0;
    bool stable = true;  // same kernel dimension at relative cutoffs 1e-7, 1e-8, 1e-9
    std::string face_label;
    Eigen::MatrixXd kernel;  // p coordinates, one column per kernel vector
};

// dim of {y in p : [x, y] = 0}, full bracket in g.
CentralizerReport centralizer_dim(const SymmetricPairRealization& pair, const CMat& x);
// dim of {y in g : [x, y] = 0}
int centralizer_dim_g(const SymmetricPairRealization& pair, const CMat& x);

// Greedy maximal abelian subspace of p from a seeded random start, as p coordinates (columns).
Eigen::MatrixXd maximal_abelian(const SymmetricPairRealization& pair, std::uint64_t seed = 1);

struct RestrictedRoot {
    Eigen::VectorXd alpha;  // values on the basis of a
    int multiplicity = 0;
};

// Restricted roots (one of each +-pair) of a symmetric pair on a, from the eigenspaces of ad(H)^2 on p.
std::vector<RestrictedRoot> restricted_roots(const SymmetricPairRealization& pair, const Eigen::MatrixXd& a,
                                             std::uint64_t seed = 3);

struct BruteForceResult {
    int b = 0;
    int rank = 0;
    CentralizerReport witness;
    int candidates = 0;
    int unstable = 0;
};

// Maximum of dim Z_p(x). Structured candidates: lines cut out by restricted-root hyperplanes in a
// (symmetric pairs) or p-projections of points i*diag(c), c in {-1,0,1}^N (other pairs),
// plus `random_samples` random unit vectors of p.
BruteForceResult brute_force_b(const SymmetricPairRealization& pair, std::uint64_t seed = 1, int random_samples = 1000,
                               int max_rank = 4);

// 1/4 |[x,y]_p|^2 + |[x,y]_h|^2 for orthonormal x, y in p.
double normal_sec(const SymmetricPairRealization& pair, const CMat& x, const CMat& y);

}  // namespace ricb
