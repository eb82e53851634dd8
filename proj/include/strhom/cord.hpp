#pragma once

// Cord algebras with coefficients in Q, specialized at lambda = mu = 1: the
// free algebra on homotopy classes of cords modulo constant cords and the
// skein relation [g1 g2] - [g1 m g2] - [g1][g2]. Built-in presentations are
// instantiated by hand from the complement groups Z, Z^2 and F_2.
//
// Slices use the hop filtration: a cord's weight is the number of times it
// passes from one link component to another, and a word's weight is the sum.
// Skein relations never raise it, so the associated graded is well defined.

#include "strhom/free_algebra.hpp"
#include "strhom/free_dga.hpp"

#include <json.hpp>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace strhom::cord {

struct UnknownBuiltin : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedPresentation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CordGenerator {
    std::string id;
    int source = 0, target = 0;  // link components
    int weight = 0;              // component hops
    int size = 0;                // meridian letters in the normal form
};

struct CordPresentation {
    std::string name;
    int kmax = 0;
    int validity_bound = 0;  // largest wmax the truncation supports
    std::vector<CordGenerator> generators;
    std::vector<Letter> constants;   // constant cords, set to zero
    std::vector<Element> relations;  // skein instances, each equal to zero

    int weight(const Word& w) const;
    // Largest word weight among the terms; -1 for zero.
    int top_weight(const Element& e) const;
    std::string element_to_string(const Element& e) const;
};

// unknot: A_k = m^k, |k| <= kmax. hopf_link: self cords X_k, Y_k indexed by
// the own meridian (the longitude is the other meridian and is absorbed at
// the endpoints), one cross cord each way (P: 0 -> 1, N: 1 -> 0). unlink2:
// one cord per ordered component pair and reduced word in F_2 of length
// <= kmax, with skein instances at letter boundaries.
CordPresentation builtin_presentation(const std::string& name, int kmax);

struct QuotientOptions {
    // Skein instances are processed in a shuffled order when nonzero.
    unsigned shuffle_seed = 0;
};

// Dimension of gr_w of the quotient for w = 0..wmax. Generators that appear
// linearly as the largest term of a relation are eliminated first (weight
// never increases); the residual two-sided ideal is then spanned slice by
// slice with leading terms taken at the top weight.
std::vector<std::size_t> quotient_dims_by_wordcount(const CordPresentation& pres, int wmax,
                                                    const QuotientOptions& opts = {});

struct ComparisonRow {
    int w = 0;
    std::size_t cord_dim = 0, h0_dim = 0;
    bool match = false;
};
struct Comparison {
    bool match = false;
    std::vector<ComparisonRow> rows;
};

Comparison compare_with_h0(const CordPresentation& pres, const dga::Dga& dga, const dga::LengthWindow& window,
                           int wmax);
void write_csv(std::ostream& os, const Comparison& c);

// Dims for kmax and kmax + 2 agree for w <= wmax.
bool truncation_stable(const std::string& name, int kmax, int wmax);

nlohmann::json to_json(const CordPresentation& pres);
CordPresentation presentation_from_json(const nlohmann::json& j);

}  // namespace strhom::cord
