#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ricb/expr.hpp"
#include "ricb/rootsys.hpp"

namespace ricb {

using Env = std::map<std::string, long long>;

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value chosen by the first piece whose condition holds; a piece without condition always applies.
struct Piece {
    std::optional<Expr> when;
    Expr value;
};

struct PiecewiseTemplate {
    std::optional<Expr> when;
    std::string value;  // text template with {expression} holes
};

struct Param {
    std::string var;
    Expr min;
    std::optional<Expr> max;
};

struct IrreducibleRow {
    std::string id;
    Family family;
    Expr rank;
    std::string mults;  // per-node pattern, e.g. "2,...,2,2*n[1]"
    std::string name;   // template
    std::vector<Param> params;
    Expr dim;
    std::vector<Piece> b;
    std::vector<Piece> kmax;
    std::optional<Expr> factor_dim;  // dimension of the factor left by deleting node k
    std::optional<Expr> factor_dim_when;
    std::vector<Expr> factor_dims;   // explicit per-node list for fixed rows
};

struct LowBRow {
    std::string name;
    std::string space;
    int dim = 0;
    int b = 0;
};

struct RankTwoRow {
    int g = 0;
    std::vector<Expr> mults;
    std::string name;
    std::vector<PiecewiseTemplate> space;
    std::vector<Param> params;
    Expr dim;
    Expr b;
};

struct MainRow {
    std::string id;
    Expr d;
    std::string T;
    Expr k;
    Expr k3;
    std::string spaces;
    std::vector<std::string> factors;
};

struct FatBundleRow {
    int set = 0;
    std::string triple;
    std::string total;
    Expr dim;
    std::string base;
    std::vector<Param> params;
    std::vector<Piece> k;
    bool sphere_bundle = false;
};

struct NamedSpace {
    std::string name;
    std::string space;  // datum spec
};

// Reference sets used when checking the structural observations about b.
struct ObservationSets {
    std::vector<NamedSpace> minimal_b;                   // b = 2 rank - 1 beyond rank one
    std::vector<NamedSpace> not_dim_minus_3;             // irreducibles with b > dim - 3
    std::vector<NamedSpace> half_dim_rank2_exceptions;   // rank <= 2 with b > dim/2
    std::vector<NamedSpace> half_dim_higher_rank;        // rank >= 3 with b <= dim/2
    std::vector<NamedSpace> third_dim_rank1_exceptions;  // rank one with b > dim/3
    std::vector<NamedSpace> third_dim_higher_rank;       // rank >= 2 with b <= dim/3
};

class Catalog {
public:
    int version = 0;
    std::vector<IrreducibleRow> irreducible;
    std::vector<LowBRow> low_b;
    std::vector<RankTwoRow> rank_two;
    std::vector<MainRow> main;
    std::vector<FatBundleRow> fat_bundles;
    ObservationSets observations;

    static Catalog from_json(const std::string& text);
    static Catalog load_file(const std::string& path);
    // The catalog compiled into the library.
    static const Catalog& embedded();
};

// Evaluates a piecewise list; throws if no piece applies.
long long eval_pieces(const std::vector<Piece>& pieces, const Env& env);
std::string eval_template_pieces(const std::vector<PiecewiseTemplate>& pieces, const Env& env);

// All parameter assignments with every variable bounded by `bound` unless the row sets its own maximum.
std::vector<Env> enumerate_params(const std::vector<Param>& params, long long bound, const Env& base = {});

// Builds a datum from a per-node pattern such as "1,...,1,n" or "4,...,4,4*n[3]".
RootDatum datum_from_pattern(Family family, int rank, const std::string& pattern, const Env& env);

}  // namespace ricb
