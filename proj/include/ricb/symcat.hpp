#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ricb/catalog.hpp"
#include "ricb/report.hpp"
#include "ricb/rootsys.hpp"
#include "ricb/spacespec.hpp"

namespace ricb {

struct SymmetricSpaceDescriptor {
    std::string name;
    std::string row_id;  // catalog row, empty for raw data
    Env params;
    RootDatum datum;
    int dim = 0;
    int rank = 0;
};

// A de Rham factor. Symmetric factors carry their datum and an exact b; other
// homogeneous factors (Aloff-Wallach, Witte-type) carry bounds only.
struct Factor {
    std::string name;
    int dim = 0;
    int b_lo = 0;
    int b_hi = 0;
    std::optional<SymmetricSpaceDescriptor> symmetric;
    std::string note;

    bool exact() const { return b_lo == b_hi; }
};

struct ProductSpace {
    std::vector<Factor> factors;
    int dim() const;
    int rank() const;  // sum of factor ranks; only meaningful when all factors are symmetric
};

struct BBounds {
    int lo = 0;
    int hi = 0;
    bool exact() const { return lo == hi; }
};

SymmetricSpaceDescriptor describe(const RootDatum& datum, std::string name = {});
int b_of_space(const SymmetricSpaceDescriptor& space);
// max_j (b_j + dim - dim_j), applied to lower and upper bounds separately.
BBounds b_of_product(const ProductSpace& product);

// Isomorphism-invariant key of an irreducible datum. Collapses C2 ~ B2 and D3 ~ A3.
std::string canonical_key(const RootDatum& datum);

// All irreducible rows instantiated with rank <= max_rank and other parameters <= max_param.
class SpaceCatalog {
public:
    explicit SpaceCatalog(const Catalog& catalog, int max_rank = 12, int max_param = 12);

    const Catalog& source() const { return *catalog_; }
    const std::vector<SymmetricSpaceDescriptor>& instances() const { return instances_; }
    // One representative per canonical key, in key order.
    std::vector<const SymmetricSpaceDescriptor*> distinct() const;
    // Every instance with the given key.
    std::vector<const SymmetricSpaceDescriptor*> with_key(const std::string& key) const;
    // Instances of fixed-rank rows looked up by normalized name ("E6/F4", "g2/so(4)").
    const SymmetricSpaceDescriptor* find_named(const std::string& name) const;

private:
    const Catalog* catalog_;
    std::vector<SymmetricSpaceDescriptor> instances_;
    std::multimap<std::string, std::size_t> by_key_;
};

// Resolves a parsed space spec to its de Rham factors. Throws SpaceSpecError on unknown names.
ProductSpace resolve(const SpaceSpec& spec, const Catalog& catalog = Catalog::embedded());
BBounds b_of_spec(const std::string& text, const Catalog& catalog = Catalog::embedded());

struct WitteB {
    int lower = 0;
    int upper = 0;
    std::optional<int> exact;
};

// Bounds for M^{p,q}_{k,l}: sandwiched between CP^p x CP^q and S^{2p+1} x S^{2q+1}.
WitteB witte_b(int p, int q, long long k, long long l);

// Ric_l > 0 on a diagonal Cheeger deformation of M1 x M2 for l >= min(2k, k + dim M2).
int diagonal_cheeger_k(int k1, int k2, int dim2);

struct DimensionWitness {
    std::string family;  // main table row id
    std::string spaces;
    std::string type;    // homotopy or homeomorphism
    int n = 0;
    int d = 0;
    int k = 0;
};

// k(n) for a main table row, derived from b of the relevant Grassmannians and the product rule.
int main_family_k(const std::string& id, int n, const Catalog& catalog = Catalog::embedded());
int main_family_dim(const std::string& id, int n, const Catalog& catalog = Catalog::embedded());
std::vector<DimensionWitness> dimension_witnesses(int d, const Catalog& catalog = Catalog::embedded());

// b(G/H) <= (b(G) + dim G/H - dim H) / 2
bool prop_inequality_check(int b_group, int b_quotient, int dim_quotient, int dim_isotropy);

Report verify_tables(const SpaceCatalog& spaces);
Report verify_observations(const SpaceCatalog& spaces);
Report verify_fat_bundles(const Catalog& catalog, int max_n = 12);
Report verify_main_table(const Catalog& catalog, int max_n = 50, int max_dim = 200);

}  // namespace ricb
