#pragma once

// Words and rational linear combinations of words in a free associative
// algebra. Letters are indices into a caller-owned generator table.

#include "strhom/exactlin.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

namespace strhom {

using exactlin::Rational;
using Letter = std::uint32_t;
using Word = std::vector<Letter>;  // empty word = unit

// Finite sum of words; stored terms never have coefficient zero.
class Element {
public:
    using Terms = std::map<Word, Rational>;

    Element() = default;
    static Element unit() { return word({}); }
    static Element word(Word w, const Rational& coeff = 1);
    static Element letter(Letter g) { return word({g}); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coeff(const Word& w) const;

    void add_term(const Word& w, const Rational& c);
    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element operator+(const Element& o) const { return Element(*this) += o; }
    Element operator-(const Element& o) const { return Element(*this) -= o; }
    Element operator*(const Element& o) const;  // concatenation product
    Element scaled(const Rational& k) const;

    bool operator==(const Element& o) const = default;

private:
    Terms terms_;
};

Word concat(const Word& a, const Word& b);

}  // namespace strhom
