#pragma once

// Exact lengths of the form a + b*sqrt(n) with a, b rational and n a
// positive non-square integer. Sums are only defined when both operands
// share the radicand (or one of them is rational).

#include "strhom/exactlin.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace strhom {

using exactlin::Rational;

class Length {
public:
    Length() = default;
    Length(const Rational& q) : a_(q) {}  // NOLINT(google-explicit-constructor)
    Length(int q) : a_(q) {}              // NOLINT(google-explicit-constructor)
    // coeff * sqrt(radicand); a perfect-square radicand collapses to a rational.
    static Length surd(const Rational& coeff, const mpz_class& radicand);

    // Accepts "3", "p/q", "2.5", "sqrt(13)", "1/2*sqrt(5)", "1+2*sqrt(3)".
    static Length parse(std::string_view text);

    const Rational& rational_part() const { return a_; }
    const Rational& surd_coeff() const { return b_; }
    const mpz_class& radicand() const { return n_; }
    bool is_rational() const { return b_ == 0; }

    double to_double() const;
    std::string to_string() const;

    Length operator+(const Length& o) const;
    Length operator-(const Length& o) const;
    Length& operator+=(const Length& o) { return *this = *this + o; }
    Length operator*(const Rational& k) const;

    int sign() const;
    bool operator==(const Length& o) const { return (*this - o).sign() == 0; }
    std::strong_ordering operator<=>(const Length& o) const {
        int s = (*this - o).sign();
        return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    Rational a_ = 0;
    Rational b_ = 0;
    mpz_class n_ = 0;  // meaningful only when b_ != 0
};

}  // namespace strhom
