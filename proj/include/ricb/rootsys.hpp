#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ricb {

enum class Family { A, B, C, D, BC, E6, E7, E8, F4, G2 };

// Weyl-orbit classes of roots. For BC the divisible roots 2e_i form the long class,
// e_i the short class and e_i +- e_j the medium class.
enum class Orbit { single, short_, long_, medium };

class RootError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string family_name(Family f);
std::optional<Family> parse_family(const std::string& s);
std::string orbit_name(Orbit o);
std::optional<Orbit> parse_orbit(const std::string& s);

// Fixed rank of an exceptional family, 0 for classical families.
int fixed_rank(Family f);
bool rank_valid(Family f, int rank);

struct Root {
    std::vector<int> coeff;  // coordinates over the simple roots
    Orbit orbit;

    int height() const;
    bool operator==(const Root&) const = default;
};

class RootDatum {
public:
    Family family;
    int rank = 0;
    std::vector<Root> positive;
    std::map<Orbit, int> mult;

    // Twice the inner products of simple roots, scaled to integers.
    std::vector<std::vector<int>> gram() const;
    // a_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)
    std::vector<std::vector<int>> cartan() const;

    int multiplicity(const Root& r) const { return mult.at(r.orbit); }
    // Orbit of the i-th simple root (0-based).
    Orbit simple_orbit(int i) const;
    // Multiplicity of each simple root, plus the divisible multiplicity for BC.
    std::vector<int> node_multiplicities() const;
    std::optional<int> divisible_multiplicity() const;
    // Orbit classes present in this family/rank.
    std::vector<Orbit> orbits() const;

    bool operator==(const RootDatum&) const = default;
};

RootDatum build_root_datum(Family family, int rank, const std::map<Orbit, int>& mult);

// Builds a datum from per-node multiplicities. `divisible` is required for BC and
// rejected otherwise. Nodes in one Weyl orbit must carry equal values.
RootDatum build_from_nodes(Family family, int rank, const std::vector<int>& node_mult,
                           std::optional<int> divisible = std::nullopt);

// Positive roots from the Cartan matrix by the root-string algorithm; orbit labels by length.
std::vector<Root> roots_from_cartan(const std::vector<std::vector<int>>& gram);

// Gram matrix (twice inner products, integer scaled) of the simple roots.
std::vector<std::vector<int>> family_gram(Family family, int rank);

struct Component {
    RootDatum datum;
    std::vector<int> nodes;  // parent node (0-based) of each component simple root
};

struct SubDatum {
    int removed_index = 0;  // 1-based
    std::vector<Component> components;
};

// Dynkin components of the simple roots with node k (1-based) removed.
SubDatum delete_node(const RootDatum& datum, int k);

int dimension(const RootDatum& datum);

// Sum of multiplicities of positive roots whose k-th coordinate (1-based) vanishes.
int filtered_multiplicity(const RootDatum& datum, int k);

struct BValue {
    int b = 0;
    std::vector<int> argmax;  // 1-based, ascending
};

BValue b_value(const RootDatum& datum);
// Same quantity through delete_node: sum of component dimensions plus a one-dimensional torus.
BValue b_value_by_components(const RootDatum& datum);

// Short human type label, e.g. "C3" or "A1+A2".
std::string type_label(const RootDatum& datum);
std::string type_label(const SubDatum& sub);

// Canonical text form "FAMILY RANK [m1,...,mr]" as used by the space-spec grammar, e.g. "BC2[6,8[1]]".
std::string datum_spec(const RootDatum& datum);

}  // namespace ricb
