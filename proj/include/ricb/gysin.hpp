#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ricb {

using BigInt = boost::multiprecision::cpp_int;

class TopologyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(int rows, int cols);
    IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntegerMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    BigInt& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    const BigInt& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

    // Fraction-free Gaussian elimination (Bareiss).
    BigInt determinant() const;
    std::string to_string() const;

    bool operator==(const IntegerMatrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<BigInt> entries_;
};

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);

// Matrix of cup product with the Euler class from H^{2n-2} to H^{2n} of P_C T CP^n.
// First column (p+q, q, ..., q), diagonal p below the corner, superdiagonal -q.
IntegerMatrix euler_matrix(int n, long long p, long long q);
// Same stencil without the coprimality and size checks.
IntegerMatrix euler_stencil(int n, long long p, long long q);

// |p^n + p^{n-1} q + ... + q^n|
BigInt tau(int n, long long p, long long q);

struct SmithForm {
    std::vector<BigInt> diagonal;  // nonnegative, d_1 | d_2 | ...
    IntegerMatrix left;
    IntegerMatrix right;           // left * M * right = diag
};

SmithForm smith_normal_form(const IntegerMatrix& m);

struct Group {
    int rank = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1, divisibility chain

    BigInt torsion_order() const;
    std::string to_string() const;
    bool operator==(const Group&) const = default;
};

// Finitely generated abelian group from a list of cyclic orders (0 means Z).
Group make_group(const std::vector<BigInt>& cyclic);

struct GradedGroups {
    std::map<int, Group> degree;

    const Group& at(int d) const;
    std::string to_json() const;  // {"H0": {"rank":1,"torsion":[]}, ...}
};

struct AloffWallachCohomology {
    int n = 0;
    long long p = 0;
    long long q = 0;
    GradedGroups groups;  // degrees 0..2n
    bool nonpositive = false;  // pq <= 0: outside the hypotheses of the degree computation
};

// H^j(W^{4n-1}_{p,q}) for j <= 2n from the Gysin sequence of the circle bundle over
// P_C T CP^n. With allow_nonpositive the pq <= 0 case is computed and flagged, otherwise it throws.
AloffWallachCohomology aloff_wallach_cohomology(int n, long long p, long long q, bool allow_nonpositive = false);

// Cohomology through max_degree of a supported factor: "W(d;p,q)", "GrC(2,m)", "PTCP^n", "CP^n", "S^n".
GradedGroups factor_cohomology(const std::string& spec, int max_degree);

// Degree `deg` of a product by the Kunneth formula including Tor terms.
Group kunneth(const std::vector<GradedGroups>& factors, int deg);

struct KunnethResult {
    int n = 0;
    Group group;
    Group tor_part;  // contribution of Tor terms; zero in every supported case
};

// H^{2n} of a product containing W^{4n-1}_{p,q}; n is read from the Aloff-Wallach factor.
KunnethResult kunneth_h2n(const std::vector<std::string>& factors);

struct TauEntry {
    long long p = 0;
    long long q = 0;
    BigInt tau;
};

struct TauEnumeration {
    int n = 0;
    int bound = 0;
    std::vector<TauEntry> entries;                           // (p, q) in lexicographic order
    std::map<BigInt, std::vector<std::pair<long long, long long>>> by_tau;

    std::size_t distinct() const { return by_tau.size(); }
};

// Coprime p, q >= 1 with p + q <= bound.
TauEnumeration distinct_tau_enumeration(int n, int bound);

}  // namespace ricb
