#include "strhom/free_dga.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace strhom;
using namespace strhom::dga;

namespace {

LengthWindow window(const char* a) { return LengthWindow{exactlin::parse_rational(a)}; }

Word w(const Dga& dga, std::initializer_list<const char*> ids) {
    Word out;
    for (const char* id : ids) out.push_back(dga.index_of(id));
    return out;
}

// Subalgebra on the chord-type generators only, with zero differential.
Dga chord_part(const Dga& hopf) {
    std::vector<Generator> gens;
    for (const auto& g : hopf.generators())
        if (g.id.rfind("c", 0) == 0) gens.push_back(g);
    std::vector<Element> diff(gens.size());
    return Dga("chords-only", gens, diff);
}

Element random_element(std::mt19937& rng, const Dga& dga, int letters, int terms_wanted, int degree) {
    // Random homogeneous element: draw words and keep those of the wanted degree.
    std::uniform_int_distribution<Letter> g(0, static_cast<Letter>(dga.size() - 1));
    std::uniform_int_distribution<int> c(-3, 3);
    Element e;
    for (int attempt = 0; attempt < 4000 && static_cast<int>(e.size()) < terms_wanted; ++attempt) {
        Word word;
        int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(letters));
        for (int i = 0; i < n; ++i) word.push_back(g(rng));
        if (dga.degree(word) == degree) e.add_term(word, c(rng));
    }
    return e;
}

}  // namespace

TEST_CASE("free algebra product") {
    Dga h = build_hopf(2);
    Element a0 = h.gen("c0_01"), a1 = h.gen("c0_10");
    CHECK(mul(Element::unit(), a0) == a0);
    CHECK(mul(a0, Element::unit()) == a0);
    CHECK(mul(a0, a1) == Element::word(w(h, {"c0_01", "c0_10"})));
    Element expected = Element::word(w(h, {"c0_01", "c0_01"})) + Element::word(w(h, {"c0_10", "c0_01"}));
    CHECK(mul(a0 + a1, a0) == expected);
}

TEST_CASE("differential examples") {
    for (int d = 2; d <= 5; ++d) {
        Dga h = build_hopf(d);
        CHECK(differential(h, h.gen("d1_00")) == h.gen("e1_00"));
    }
    Dga h = build_hopf(2);
    CHECK(differential(h, h.gen("c1_00")) == h.gen("e1_00") + Element::word(w(h, {"c0_01", "c0_10"})));
    CHECK(differential(h, Element::word(w(h, {"c0_01", "c0_10"}))).is_zero());

    Dga h3 = build_hopf(3);
    // Odd d flips both signs of F on c1_00.
    CHECK(differential(h3, h3.gen("c1_00")) ==
          (h3.gen("e1_00") + Element::word(w(h3, {"c0_01", "c0_10"}))).scaled(-1));
    CHECK(differential(h3, h3.gen("c1_11")) ==
          Element::word(w(h3, {"c0_10", "c0_01"})) - h3.gen("e1_11"));
    CHECK(differential(h3, h3.gen("c2_00")) == h3.gen("e2_00").scaled(-1) -
                                                   Element::word(w(h3, {"cb1_01", "c0_10"})) +
                                                   Element::word(w(h3, {"c1_01", "c0_10"})));
    CHECK_THROWS_AS(h.gen("nope"), UnknownGenerator);
}

TEST_CASE("Leibniz sign uses the degree of the prefix") {
    Dga h = build_hopf(3);  // |c0| = 1, |d1| = 3
    Word word = w(h, {"c0_01", "d1_11"});
    Element expected = Element::word(w(h, {"c0_01", "e1_11"})).scaled(-1);
    CHECK(differential_of_word(h, word) == expected);
}

TEST_CASE("d_squared_zero_check") {
    CHECK(d_squared_zero_check(build_hopf(2)).ok);
    CHECK(d_squared_zero_check(build_unlink(3, 3)).ok);

    Dga h = build_hopf(2);
    auto diff = h.diff_table();
    diff[h.index_of("d1_00")] = h.gen("c1_00");
    Dga broken("broken", h.generators(), diff);
    auto report = d_squared_zero_check(broken);
    CHECK_FALSE(report.ok);
    CHECK(report.witness == "d1_00");
    CHECK(report.residue == differential(h, h.gen("c1_00")));
    // |c1_00| = |d1_00|, so the corrupted entry also fails the degree rule.
    CHECK_FALSE(check_invariants(broken).ok);
}

TEST_CASE("invariant check flags degree and length violations") {
    Dga h = build_hopf(2);
    auto diff = h.diff_table();
    diff[h.index_of("c0_01")] = h.gen("e1_00");
    auto r = check_invariants(Dga("bad-degree", h.generators(), diff));
    CHECK_FALSE(r.ok);
    CHECK(r.generator == "c0_01");

    diff = h.diff_table();
    diff[h.index_of("c1_01")] = h.gen("e1_00");  // length 2 > 1
    r = check_invariants(Dga("bad-length", h.generators(), diff));
    CHECK_FALSE(r.ok);
    CHECK(r.generator == "c1_01");
}

TEST_CASE("build_hopf tables") {
    Dga h = build_hopf(2);
    CHECK(h.size() == 24);
    auto deg = [&](const char* id) { return h.generator(h.index_of(id)).degree; };
    CHECK(deg("c0_01") == 0);
    CHECK(deg("c1_00") == 1);
    CHECK(deg("c2_00") == 2);
    CHECK(deg("e1_00") == 0);
    CHECK(deg("e2_01") == 1);
    CHECK(deg("d1_11") == 1);
    CHECK(deg("d2_10") == 2);

    Dga h3 = build_hopf(3);
    auto deg3 = [&](const char* id) { return h3.generator(h3.index_of(id)).degree; };
    CHECK(deg3("c0_10") == 1);
    CHECK(deg3("e1_00") == 2);
    CHECK(deg3("c2_01") == 5);

    for (int d = 2; d <= 5; ++d) {
        Dga hd = build_hopf(d);
        CHECK(hd.generator(hd.index_of("c2_00")).length == Length(2));
        CHECK(hd.generator(hd.index_of("c2_01")).length == Length(3));
        CHECK(hd.generator(hd.index_of("c1_10")).length == Length(1));
        CHECK(hd.generator(hd.index_of("d2_10")).length == Length(3));
        CHECK(hd.generator(hd.index_of("e2_11")).length == Length(2));
        CHECK(hd.generator(hd.index_of("d1_00")).weight == 2);
        CHECK(hd.generator(hd.index_of("cb1_01")).weight == 1);
    }
    CHECK_THROWS_AS(build_hopf(1), ParameterOutOfRange);
}

TEST_CASE("build_unlink tables") {
    Dga u = build_unlink(2, 3);
    CHECK(u.size() == 12);
    Dga u3 = build_unlink(3, 3);
    for (const char* id : {"c2_00", "c2_02", "c2_20", "c2_22"}) CHECK(u3.generator(u3.index_of(id)).degree == 5);
    CHECK(u.generator(u.index_of("c0_02")).length == Length(3));
    CHECK(u.generator(u.index_of("c1_20")).length == Length(3));
    CHECK(u.generator(u.index_of("cb1_02")).length == Length::surd(1, 13));
    CHECK(u.generator(u.index_of("c2_20")).length == Length::surd(1, 13));
    CHECK(u.generator(u.index_of("c1_22")).length == Length(2));
    // z = 5/2: sqrt(25/4 + 4) = sqrt(41)/2.
    Dga uh = build_unlink(2, Rational(5, 2));
    CHECK(uh.generator(uh.index_of("cb1_02")).length == Length::surd(Rational(1, 2), 41));
    CHECK(d_squared_zero_check(u).ok);
    CHECK_THROWS_AS(build_unlink(2, 2), ParameterOutOfRange);
    CHECK_THROWS_AS(build_unlink(2, 1), ParameterOutOfRange);
}

TEST_CASE("forget_F keeps only the stabilization part") {
    Dga f = forget_F(build_hopf(2));
    CHECK(differential(f, f.gen("c1_00")).is_zero());
    CHECK(differential(f, f.gen("d2_01")) == f.gen("e2_01"));
    CHECK(d_squared_zero_check(f).ok);
    CHECK_THROWS_AS(forget_F(build_unlink(2, 3)), NotApplicable);
}

TEST_CASE("word_basis examples") {
    Dga h = build_hopf(2);
    auto basis = word_basis(h, 0, window("2.5"));
    std::vector<Word> expected = {
        {},
        w(h, {"c0_01"}),
        w(h, {"c0_10"}),
        w(h, {"c0_01", "c0_01"}),
        w(h, {"c0_01", "c0_10"}),
        w(h, {"c0_10", "c0_01"}),
        w(h, {"c0_10", "c0_10"}),
        w(h, {"e1_00"}),
        w(h, {"e1_11"}),
    };
    CHECK(basis == expected);  // order: length, then weight, then ids
    CHECK(word_basis(h, -1, window("2.5")).empty());
    CHECK(word_basis(build_unlink(2, 3), 0, window("1.5")) == std::vector<Word>{Word{}});
}

TEST_CASE("window on a realizable length is rejected") {
    Dga h = build_hopf(2);
    CHECK_THROWS_AS(word_basis(h, 0, window("4")), InvalidWindow);
    CHECK_THROWS_AS(homology_dim(h, 0, window("2")), InvalidWindow);
    Dga u = build_unlink(2, 3);
    // sqrt(13) + 3 is a word length in degree 1 (cb1_02 * c0_20).
    CHECK_NOTHROW(word_basis(u, 1, window("6.6")));
}

TEST_CASE("homology dimensions") {
    Dga h = build_hopf(2);
    // Classes 1, a0^k, a1^k with k <= 4.
    CHECK(homology_dim(h, 0, window("4.5")) == 9);
    CHECK(homology_dim(h, 0, window("3.5")) == 7);
    CHECK(homology_dim(build_hopf(3), 2, window("8.5")) == 2);
    CHECK(homology_dim(build_unlink(3, 3), 2, window("8.5")) == 4);
}

TEST_CASE("degree-zero homology by word count") {
    CHECK(h0_dims_by_wordcount(build_hopf(2), window("6.5"), 4) == std::vector<std::size_t>{1, 2, 2, 2, 2});
    CHECK(h0_dims_by_wordcount(build_unlink(2, 3), window("20.5"), 4) ==
          std::vector<std::size_t>{1, 2, 4, 8, 16});
    CHECK(h0_dims_by_wordcount(build_hopf(3), window("7.5"), 2) == std::vector<std::size_t>{1, 0, 0});

    std::vector<Generator> gens = {{"x", -1, 1, 1, std::nullopt}};
    Dga negative("neg", gens, std::vector<Element>(1));
    CHECK_THROWS_AS(h0_dims_by_wordcount(negative, window("2.5"), 2), GradingViolation);
}

TEST_CASE("degree-zero homology against the monomial oracle") {
    // R<a0,a1>/(a0 a1, a1 a0) has basis 1, a0^k, a1^k; all lengths equal k.
    Dga h = build_hopf(2);
    for (const char* a : {"1.5", "2.5", "3.5", "5.5"}) {
        auto bound = exactlin::parse_rational(a);
        std::size_t expected = 1;
        for (int k = 1; k < bound; ++k) expected += 2;
        CHECK(homology_dim(h, 0, window(a)) == expected);
    }
}

TEST_CASE("Leibniz rule on random homogeneous elements") {
    std::mt19937 rng(3);
    for (int d : {2, 3}) {
        Dga h = build_hopf(d);
        for (int trial = 0; trial < 40; ++trial) {
            int dx = static_cast<int>(rng() % 4) * (d - 2) + static_cast<int>(rng() % 2) * (2 * d - 3);
            int dy = static_cast<int>(rng() % 3) * (d - 2) + static_cast<int>(rng() % 2) * (2 * d - 4);
            Element x = random_element(rng, h, 3, 3, dx);
            Element y = random_element(rng, h, 3, 3, dy);
            Element lhs = differential(h, mul(x, y));
            Element rhs = mul(differential(h, x), y) + mul(x, differential(h, y)).scaled(dx % 2 == 0 ? 1 : -1);
            CHECK(lhs == rhs);
            Element dxe = differential(h, x);
            for (const auto& [word, c] : dxe.terms()) CHECK(h.degree(word) == dx - 1);
            CHECK(differential(h, differential(h, x)).is_zero());
        }
    }
}

TEST_CASE("differentials respect the length filtration") {
    for (int d = 2; d <= 5; ++d) {
        Dga h = build_hopf(d);
        for (Letter g = 0; g < h.size(); ++g)
            for (const auto& [word, c] : h.diff(g).terms()) CHECK(h.length(word) <= h.generator(g).length);
        CHECK(check_invariants(h).ok);
    }
}

TEST_CASE("Euler characteristic of the window equals that of its homology") {
    for (const char* a : {"2.5", "3.5"}) {
        Dga h = build_hopf(2);
        auto bases = word_bases(h, 0, 30, window(a));
        auto hom = homology_dims(h, 0, 30, window(a));
        long chi_chain = 0, chi_hom = 0;
        for (int p = 0; p <= 30; ++p) {
            long sign = p % 2 == 0 ? 1 : -1;
            chi_chain += sign * static_cast<long>(bases[p].size());
            chi_hom += sign * static_cast<long>(hom[p]);
        }
        CHECK(bases[30].empty());
        CHECK(chi_chain == chi_hom);
    }
}

TEST_CASE("homology does not depend on the generator order") {
    Dga h = build_hopf(2);
    std::vector<Letter> perm(h.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(99);
    std::shuffle(perm.begin(), perm.end(), rng);
    Dga shuffled = h.permuted(perm);
    std::reverse(perm.begin(), perm.end());
    Dga reversed = h.permuted(perm);
    auto ref = homology_dims(h, 0, 4, window("3.5"));
    CHECK(homology_dims(shuffled, 0, 4, window("3.5")) == ref);
    CHECK(homology_dims(reversed, 0, 4, window("3.5")) == ref);
    CHECK(h0_dims_by_wordcount(shuffled, window("6.5"), 4) == std::vector<std::size_t>{1, 2, 2, 2, 2});
}

TEST_CASE("stabilization: forgetting F leaves the chord-word count") {
    for (int d : {2, 3}) {
        for (const char* a : {"3.5", "4.5"}) {
            Dga f = forget_F(build_hopf(d));
            Dga c = chord_part(build_hopf(d));
            int top = 4 * (3 * d - 4);
            auto hom = homology_dims(f, 0, top, window(a));
            auto words = word_bases(c, 0, top, window(a));
            for (int p = 0; p <= top; ++p) CHECK(hom[p] == words[p].size());
        }
    }
}

TEST_CASE("json round trip") {
    Dga h = build_hopf(2);
    Dga back = dga_from_json(to_json(h));
    CHECK(back.size() == h.size());
    for (Letter g = 0; g < h.size(); ++g) {
        CHECK(back.generator(g).id == h.generator(g).id);
        CHECK(back.generator(g).length == h.generator(g).length);
        CHECK(back.diff(g) == h.diff(g));
    }
    CHECK(back.has_partial());
    Dga u = build_unlink(2, 3);
    Dga ub = dga_from_json(to_json(u));
    CHECK(ub.generator(ub.index_of("c2_02")).length == Length::surd(1, 13));

    auto j = nlohmann::json::parse(R"({"generators":[{"id":"x","degree":0,"length":"2"}],
                                       "diff":{"y":[{"coeff":"1","word":["x"]}]}})");
    CHECK_THROWS_AS(dga_from_json(j), UnknownGenerator);
}

TEST_CASE("surd lengths compare exactly") {
    Length s13 = Length::surd(1, 13);
    CHECK(s13 > Length(Rational(36, 10)));
    CHECK(s13 < Length(Rational(3606, 1000)));
    CHECK(Length::parse("sqrt(13)") == s13);
    CHECK(Length::parse("1/2*sqrt(41)") == Length::surd(Rational(1, 2), 41));
    CHECK(Length::parse("sqrt(16)") == Length(4));
    CHECK(Length::parse("3+sqrt(13)") == Length(3) + s13);
    CHECK((s13 + s13 - s13 * 2).sign() == 0);
    CHECK_THROWS(s13 + Length::surd(1, 2));
}
