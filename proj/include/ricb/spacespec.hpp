#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricb/rootsys.hpp"

namespace ricb {

class SpaceSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parsed form of the space-spec grammar (see docs/space-spec.md):
//   spec    := product | datum | alias
//   product := "product" "(" spec { "," spec } ")"
//   datum   := FAMILY RANK "[" mult { "," mult } "]"      e.g. A2[1,1], BC2[6,8[1]]
//   alias   := any other text, e.g. SU3/SO3, Gr+(2,7), W(7;1,1), S^5
// Aliases are kept verbatim here and resolved by the catalog layer.
struct SpaceSpec {
    enum class Kind { datum, alias, product };
    Kind kind = Kind::alias;

    Family family = Family::A;
    int rank = 0;
    std::vector<int> nodes;
    std::optional<int> divisible;

    std::string alias;
    std::vector<SpaceSpec> factors;

    bool operator==(const SpaceSpec&) const = default;
};

SpaceSpec parse_space(const std::string& text);
std::string print_space(const SpaceSpec& spec);

SpaceSpec datum_space(Family family, int rank, std::vector<int> nodes, std::optional<int> divisible = {});
SpaceSpec alias_space(std::string name);
SpaceSpec product_space(std::vector<SpaceSpec> factors);

}  // namespace ricb
