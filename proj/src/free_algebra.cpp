#include "strhom/free_algebra.hpp"

namespace strhom {

Element Element::word(Word w, const Rational& coeff) {
    Element e;
    e.add_term(w, coeff);
    return e;
}

Rational Element::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Element::add_term(const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

Element& Element::operator+=(const Element& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

Element Element::operator*(const Element& o) const {
    Element out;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) out.add_term(concat(w1, w2), c1 * c2);
    return out;
}

Element Element::scaled(const Rational& k) const {
    Element out;
    if (k == 0) return out;
    out.terms_ = terms_;
    for (auto& [w, c] : out.terms_) c *= k;
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word w;
    w.reserve(a.size() + b.size());
    w.insert(w.end(), a.begin(), a.end());
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

}  // namespace strhom
