#pragma once

// Free graded noncommutative algebras over Q with a length-filtered
// differential, the built-in Hopf link and two-component unlink algebras, and
// their homology restricted to a length window.

#include "strhom/exactlin.hpp"
#include "strhom/free_algebra.hpp"
#include "strhom/length.hpp"

#include <map>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace strhom::dga {

struct UnknownGenerator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GradingViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Generator {
    std::string id;
    int degree = 0;
    Length length;    // > 0
    int weight = 1;   // word-count weight, >= 1
    std::optional<std::pair<int, int>> tags;
};

// Words of length exactly `bound` (within `tolerance`) make the window invalid.
struct LengthWindow {
    Rational bound;
    static constexpr double tolerance = 1e-9;
};

class Dga {
public:
    // Structural checks only (ids unique, letters in range, length > 0).
    // Degree and D^2 conditions are reported by check_invariants and
    // d_squared_zero_check so that malformed algebras can still be inspected.
    Dga(std::string name, std::vector<Generator> gens, std::vector<Element> diff,
        std::optional<std::vector<Element>> partial = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t size() const { return gens_.size(); }
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& generator(Letter g) const { return gens_.at(g); }
    Letter index_of(std::string_view id) const;
    Element gen(std::string_view id) const { return Element::letter(index_of(id)); }

    const Element& diff(Letter g) const { return diff_.at(g); }
    const std::vector<Element>& diff_table() const { return diff_; }
    // The part of the differential that is kept by forget_F, when recorded.
    bool has_partial() const { return partial_.has_value(); }
    const std::vector<Element>& partial_table() const;

    int degree(const Word& w) const;
    Length length(const Word& w) const;
    int weight(const Word& w) const;
    bool nonnegatively_graded() const;

    std::string word_to_string(const Word& w) const;
    std::string element_to_string(const Element& e) const;

    // Same algebra with generators listed in the order perm[0], perm[1], ...
    Dga permuted(const std::vector<Letter>& perm) const;

private:
    std::string name_;
    std::vector<Generator> gens_;
    std::vector<Element> diff_;
    std::optional<std::vector<Element>> partial_;
    std::unordered_map<std::string, Letter> index_;
};

Element mul(const Element& x, const Element& y);
// Leibniz extension: on g1...gk, sum_i (-1)^{|g1...g(i-1)|} g1...D(gi)...gk.
Element differential(const Dga& dga, const Element& x);
Element differential_of_word(const Dga& dga, const Word& w);

struct InvariantReport {
    bool ok = true;
    std::string generator;  // first offender
    std::string message;
};
// Degree drop by one and length filtration on every generator.
InvariantReport check_invariants(const Dga& dga);

struct DSquaredReport {
    bool ok = true;
    std::string witness;
    Element residue;
};
DSquaredReport d_squared_zero_check(const Dga& dga);

Dga build_hopf(int d);
Dga build_unlink(int d, const Rational& z2star);
Dga forget_F(const Dga& dga);

// Words of degree in [min_degree, max_degree] with length < bound, keyed by
// degree, each list in monomial order (degree, length, weight, ids).
// Throws InvalidWindow when an enumerated word sits on the bound.
std::map<int, std::vector<Word>> word_bases(const Dga& dga, int min_degree, int max_degree,
                                            const LengthWindow& window);
std::vector<Word> word_basis(const Dga& dga, int degree, const LengthWindow& window);

// Matrix of D from `source` words to `target` words (rows = target).
exactlin::SparseMatrix differential_matrix(const Dga& dga, const std::vector<Word>& source,
                                           const std::vector<Word>& target);

std::size_t homology_dim(const Dga& dga, int degree, const LengthWindow& window);
// Homology dims for every degree in [min_degree, max_degree] from one enumeration.
std::map<int, std::size_t> homology_dims(const Dga& dga, int min_degree, int max_degree,
                                         const LengthWindow& window);

// Slices of A_0 / D(A_1) by word-count weight, w = 0..wmax. The weight
// filtration is used, so inhomogeneous relations are counted by their top
// weight term.
std::vector<std::size_t> h0_dims_by_wordcount(const Dga& dga, const LengthWindow& window, int wmax);

nlohmann::json to_json(const Dga& dga);
Dga dga_from_json(const nlohmann::json& j);

}  // namespace strhom::dga
