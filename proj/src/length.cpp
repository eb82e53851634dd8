#include "strhom/length.hpp"

#include <cmath>
#include <stdexcept>

namespace strhom {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

// Parses "sqrt(n)", "k*sqrt(n)" or a plain rational.
Length parse_term(std::string_view t) {
    t = trim(t);
    auto pos = t.find("sqrt(");
    if (pos == std::string_view::npos) return Length(exactlin::parse_rational(t));
    if (t.back() != ')') throw std::invalid_argument("malformed surd '" + std::string(t) + "'");
    std::string_view inner = t.substr(pos + 5, t.size() - pos - 6);
    Rational rad = exactlin::parse_rational(inner);
    if (rad.get_den() != 1 || rad <= 0) throw std::invalid_argument("radicand must be a positive integer");
    Rational coeff = 1;
    std::string_view prefix = trim(t.substr(0, pos));
    if (!prefix.empty()) {
        if (prefix.back() != '*') throw std::invalid_argument("malformed surd '" + std::string(t) + "'");
        prefix.remove_suffix(1);
        coeff = exactlin::parse_rational(prefix);
    }
    return Length::surd(coeff, rad.get_num());
}

}  // namespace

Length Length::surd(const Rational& coeff, const mpz_class& radicand) {
    if (radicand <= 0) throw std::invalid_argument("radicand must be positive");
    Length out;
    if (coeff == 0) return out;
    if (mpz_perfect_square_p(radicand.get_mpz_t())) {
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
        out.a_ = coeff * Rational(root);
        return out;
    }
    out.b_ = coeff;
    out.n_ = radicand;
    return out;
}

Length Length::parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty length");
    // Split on a '+' that is not the leading sign and not inside an exponent.
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '+' && s[i - 1] != 'e' && s[i - 1] != 'E') return parse_term(s.substr(0, i)) + parse_term(s.substr(i + 1));
    }
    return parse_term(s);
}

double Length::to_double() const {
    return a_.get_d() + b_.get_d() * std::sqrt(n_.get_d());
}

std::string Length::to_string() const {
    if (b_ == 0) return a_.get_str();
    std::string surd = (b_ == 1 ? std::string() : b_.get_str() + "*") + "sqrt(" + n_.get_str() + ")";
    if (a_ == 0) return surd;
    return a_.get_str() + "+" + surd;
}

Length Length::operator+(const Length& o) const {
    Length out;
    out.a_ = a_ + o.a_;
    if (b_ != 0 && o.b_ != 0) {
        if (n_ != o.n_) throw std::domain_error("lengths with different radicands cannot be added");
        out.b_ = b_ + o.b_;
        out.n_ = n_;
    } else if (b_ != 0) {
        out.b_ = b_;
        out.n_ = n_;
    } else {
        out.b_ = o.b_;
        out.n_ = o.n_;
    }
    if (out.b_ == 0) out.n_ = 0;
    return out;
}

Length Length::operator-(const Length& o) const { return *this + o * Rational(-1); }

Length Length::operator*(const Rational& k) const {
    Length out;
    out.a_ = a_ * k;
    out.b_ = b_ * k;
    out.n_ = out.b_ == 0 ? mpz_class(0) : n_;
    return out;
}

int Length::sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // a and b*sqrt(n) have opposite signs: compare a^2 with b^2 n.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * Rational(n_);
    int c = cmp(lhs, rhs);
    return c > 0 ? sa : sb;  // c == 0 impossible for non-square n
}

}  // namespace strhom
