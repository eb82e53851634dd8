#include "strhom/free_dga.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace strhom::dga {

using exactlin::SparseMatrix;
using exactlin::SparseVec;

Dga::Dga(std::string name, std::vector<Generator> gens, std::vector<Element> diff,
         std::optional<std::vector<Element>> partial)
    : name_(std::move(name)), gens_(std::move(gens)), diff_(std::move(diff)), partial_(std::move(partial)) {
    if (diff_.size() != gens_.size()) throw std::invalid_argument("differential table size mismatch");
    if (partial_ && partial_->size() != gens_.size()) throw std::invalid_argument("partial table size mismatch");
    for (Letter i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (g.id.empty()) throw std::invalid_argument("empty generator id");
        if (!index_.emplace(g.id, i).second) throw std::invalid_argument("duplicate generator id '" + g.id + "'");
        if (g.length.sign() <= 0) throw std::invalid_argument("generator '" + g.id + "' needs positive length");
        if (g.weight < 1) throw std::invalid_argument("generator '" + g.id + "' needs weight >= 1");
    }
    auto check_letters = [&](const std::vector<Element>& table) {
        for (const auto& e : table)
            for (const auto& [w, c] : e.terms())
                for (Letter l : w)
                    if (l >= gens_.size()) throw UnknownGenerator("letter index out of range");
    };
    check_letters(diff_);
    if (partial_) check_letters(*partial_);
}

Letter Dga::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw UnknownGenerator("unknown generator '" + std::string(id) + "'");
    return it->second;
}

const std::vector<Element>& Dga::partial_table() const {
    if (!partial_) throw NotApplicable("algebra '" + name_ + "' has no recorded differential split");
    return *partial_;
}

int Dga::degree(const Word& w) const {
    int deg = 0;
    for (Letter l : w) deg += gens_.at(l).degree;
    return deg;
}

Length Dga::length(const Word& w) const {
    Length len;
    for (Letter l : w) len += gens_.at(l).length;
    return len;
}

int Dga::weight(const Word& w) const {
    int wt = 0;
    for (Letter l : w) wt += gens_.at(l).weight;
    return wt;
}

bool Dga::nonnegatively_graded() const {
    return std::all_of(gens_.begin(), gens_.end(), [](const Generator& g) { return g.degree >= 0; });
}

std::string Dga::word_to_string(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += '*';
        s += gens_.at(w[i]).id;
    }
    return s;
}

std::string Dga::element_to_string(const Element& e) const {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : e.terms()) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << '-';
        first = false;
        Rational a = abs(c);
        if (a != 1) os << a.get_str() << '*';
        os << word_to_string(w);
    }
    return os.str();
}

Dga Dga::permuted(const std::vector<Letter>& perm) const {
    if (perm.size() != gens_.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<Letter> new_index(gens_.size(), static_cast<Letter>(-1));
    for (Letter k = 0; k < perm.size(); ++k) new_index.at(perm[k]) = k;
    if (std::count(new_index.begin(), new_index.end(), static_cast<Letter>(-1)) != 0)
        throw std::invalid_argument("not a permutation");
    auto remap = [&](const Element& e) {
        Element out;
        for (const auto& [w, c] : e.terms()) {
            Word nw;
            for (Letter l : w) nw.push_back(new_index[l]);
            out.add_term(nw, c);
        }
        return out;
    };
    std::vector<Generator> gens;
    std::vector<Element> diff;
    std::optional<std::vector<Element>> partial;
    if (partial_) partial.emplace();
    for (Letter old : perm) {
        gens.push_back(gens_[old]);
        diff.push_back(remap(diff_[old]));
        if (partial_) partial->push_back(remap((*partial_)[old]));
    }
    return Dga(name_, std::move(gens), std::move(diff), std::move(partial));
}

// ---------------------------------------------------------------------------

Element mul(const Element& x, const Element& y) { return x * y; }

Element differential_of_word(const Dga& dga, const Word& w) {
    Element out;
    int prefix_degree = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Element& dg = dga.diff(w[i]);
        if (!dg.is_zero()) {
            Rational sign = (prefix_degree % 2 == 0) ? 1 : -1;
            for (const auto& [mid, c] : dg.terms()) {
                Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                nw.insert(nw.end(), mid.begin(), mid.end());
                nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
                out.add_term(nw, sign * c);
            }
        }
        prefix_degree += dga.generator(w[i]).degree;
    }
    return out;
}

Element differential(const Dga& dga, const Element& x) {
    Element out;
    for (const auto& [w, c] : x.terms()) out += differential_of_word(dga, w).scaled(c);
    return out;
}

InvariantReport check_invariants(const Dga& dga) {
    auto check_table = [&](const std::vector<Element>& table, const char* what) -> InvariantReport {
        for (Letter g = 0; g < dga.size(); ++g) {
            const auto& gen = dga.generator(g);
            for (const auto& [w, c] : table[g].terms()) {
                if (dga.degree(w) != gen.degree - 1) {
                    return {false, gen.id,
                            std::string(what) + " of " + gen.id + " has term " + dga.word_to_string(w) +
                                " of degree " + std::to_string(dga.degree(w)) + ", expected " +
                                std::to_string(gen.degree - 1)};
                }
                if (dga.length(w) > gen.length) {
                    return {false, gen.id,
                            std::string(what) + " of " + gen.id + " has term " + dga.word_to_string(w) +
                                " longer than the generator"};
                }
            }
        }
        return {};
    };
    if (auto r = check_table(dga.diff_table(), "differential"); !r.ok) return r;
    if (dga.has_partial()) return check_table(dga.partial_table(), "partial differential");
    return {};
}

DSquaredReport d_squared_zero_check(const Dga& dga) {
    for (Letter g = 0; g < dga.size(); ++g) {
        Element dd = differential(dga, dga.diff(g));
        if (!dd.is_zero()) return {false, dga.generator(g).id, dd};
    }
    return {};
}

// ---------------------------------------------------------------------------

namespace {

Generator make_gen(std::string id, int degree, Length len, int weight, int i, int j) {
    return Generator{std::move(id), degree, std::move(len), weight, std::make_pair(i, j)};
}

std::string ij(int i, int j) { return std::to_string(i) + std::to_string(j); }

void verify_or_throw(const Dga& dga) {
    if (auto r = check_invariants(dga); !r.ok) throw InvariantViolation(dga.name() + ": " + r.message);
    if (auto r = d_squared_zero_check(dga); !r.ok)
        throw InvariantViolation(dga.name() + ": D^2 nonzero on " + r.witness);
}

// Generator table of the chord-type generators c0, c1, cb1, c2 on components
// {p, q}; lengths supplied per shape.
void add_chord_generators(std::vector<Generator>& gens, int d, int p, int q, const Length& l_c0,
                          const Length& l_c1_self, const Length& l_c1_cross, const Length& l_cb1_cross,
                          const Length& l_c2_self, const Length& l_c2_cross) {
    gens.push_back(make_gen("c0_" + ij(p, q), d - 2, l_c0, 1, p, q));
    gens.push_back(make_gen("c0_" + ij(q, p), d - 2, l_c0, 1, q, p));
    gens.push_back(make_gen("c1_" + ij(p, p), 2 * d - 3, l_c1_self, 1, p, p));
    gens.push_back(make_gen("c1_" + ij(q, q), 2 * d - 3, l_c1_self, 1, q, q));
    gens.push_back(make_gen("c1_" + ij(p, q), 2 * d - 3, l_c1_cross, 1, p, q));
    gens.push_back(make_gen("c1_" + ij(q, p), 2 * d - 3, l_c1_cross, 1, q, p));
    gens.push_back(make_gen("cb1_" + ij(p, q), 2 * d - 3, l_cb1_cross, 1, p, q));
    gens.push_back(make_gen("cb1_" + ij(q, p), 2 * d - 3, l_cb1_cross, 1, q, p));
    gens.push_back(make_gen("c2_" + ij(p, p), 3 * d - 4, l_c2_self, 1, p, p));
    gens.push_back(make_gen("c2_" + ij(p, q), 3 * d - 4, l_c2_cross, 1, p, q));
    gens.push_back(make_gen("c2_" + ij(q, p), 3 * d - 4, l_c2_cross, 1, q, p));
    gens.push_back(make_gen("c2_" + ij(q, q), 3 * d - 4, l_c2_self, 1, q, q));
}

}  // namespace

Dga build_hopf(int d) {
    if (d < 2) throw ParameterOutOfRange("build_hopf needs d >= 2, got " + std::to_string(d));
    std::vector<Generator> gens;
    add_chord_generators(gens, d, 0, 1, 1, 2, 1, 1, 2, 3);
    for (int i = 0; i < 2; ++i) gens.push_back(make_gen("d1_" + ij(i, i), 2 * d - 3, 2, 2, i, i));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gens.push_back(make_gen("d2_" + ij(i, j), 3 * d - 4, i == j ? 2 : 3, 2, i, j));
    for (int i = 0; i < 2; ++i) gens.push_back(make_gen("e1_" + ij(i, i), 2 * d - 4, 2, 2, i, i));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gens.push_back(make_gen("e2_" + ij(i, j), 3 * d - 5, i == j ? 2 : 3, 2, i, j));

    std::unordered_map<std::string, Letter> idx;
    for (Letter k = 0; k < gens.size(); ++k) idx[gens[k].id] = k;
    auto w = [&](std::initializer_list<const char*> ids) {
        Word word;
        for (const char* id : ids) word.push_back(idx.at(id));
        return word;
    };
    const Rational s = (d % 2 == 0) ? 1 : -1;

    std::vector<Element> partial(gens.size());
    std::vector<Element> f(gens.size());
    for (int i = 0; i < 2; ++i) {
        partial[idx.at("d1_" + ij(i, i))] = Element::word(w({("e1_" + ij(i, i)).c_str()}));
        for (int j = 0; j < 2; ++j)
            partial[idx.at("d2_" + ij(i, j))] = Element::word(w({("e2_" + ij(i, j)).c_str()}));
    }

    Element& f_c1_00 = f[idx.at("c1_00")];
    f_c1_00.add_term(w({"e1_00"}), s);
    f_c1_00.add_term(w({"c0_01", "c0_10"}), s);

    Element& f_c1_11 = f[idx.at("c1_11")];
    f_c1_11.add_term(w({"e1_11"}), s);
    f_c1_11.add_term(w({"c0_10", "c0_01"}), 1);

    Element& f_c2_00 = f[idx.at("c2_00")];
    f_c2_00.add_term(w({"e2_00"}), -1);
    f_c2_00.add_term(w({"cb1_01", "c0_10"}), -1);
    f_c2_00.add_term(w({"c1_01", "c0_10"}), -s);

    Element& f_c2_11 = f[idx.at("c2_11")];
    f_c2_11.add_term(w({"e2_11"}), -1);
    f_c2_11.add_term(w({"cb1_10", "c0_01"}), -s);
    f_c2_11.add_term(w({"c1_10", "c0_01"}), -1);

    f[idx.at("c2_01")].add_term(w({"e2_01"}), -1);
    f[idx.at("c2_10")].add_term(w({"e2_10"}), -1);

    std::vector<Element> diff(gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k) diff[k] = partial[k] + f[k];

    Dga out("hopf(" + std::to_string(d) + ")", std::move(gens), std::move(diff), std::move(partial));
    verify_or_throw(out);
    return out;
}

Dga build_unlink(int d, const Rational& z2star) {
    if (d < 2) throw ParameterOutOfRange("build_unlink needs d >= 2, got " + std::to_string(d));
    Rational z = abs(z2star);
    if (z <= 2) throw ParameterOutOfRange("build_unlink needs |z2*| > 2, got " + z2star.get_str());
    // sqrt(z^2 + 4) with z = p/q is sqrt(p^2 + 4 q^2) / q.
    mpz_class p = z.get_num(), q = z.get_den();
    Length diag = Length::surd(Rational(1, 1) / Rational(q), p * p + 4 * q * q);
    std::vector<Generator> gens;
    add_chord_generators(gens, d, 0, 2, z, 2, z, diag, 2, diag);
    std::vector<Element> diff(gens.size());
    Dga out("unlink(" + std::to_string(d) + "," + z.get_str() + ")", std::move(gens), std::move(diff));
    verify_or_throw(out);
    return out;
}

Dga forget_F(const Dga& dga) {
    const auto& partial = dga.partial_table();
    Dga out(dga.name() + "/forget_F", dga.generators(), partial, partial);
    verify_or_throw(out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
    const Dga& dga;
    int min_degree;
    int max_degree;
    const Rational& bound;
    double bound_d;
    bool prune_degree;
    std::vector<double> len_d;
    std::map<int, std::vector<Word>> out;
    Word word;

    void visit(int deg, double len) {
        if (deg >= min_degree && deg <= max_degree) out[deg].push_back(word);
        for (Letter g = 0; g < dga.size(); ++g) {
            const auto& gen = dga.generator(g);
            int nd = deg + gen.degree;
            if (prune_degree && nd > max_degree) continue;
            double nl = len + len_d[g];
            if (nl > bound_d + 1e-6) continue;
            word.push_back(g);
            bool inside = true;
            if (nl > bound_d - 1e-6) {
                Length exact = dga.length(word);
                Length gap = exact - Length(bound);
                if (std::abs(gap.to_double()) < LengthWindow::tolerance || gap.sign() == 0) {
                    if (nd >= min_degree && nd <= max_degree) {
                        std::string msg = "window a = " + bound.get_str() + " collides with length " +
                                          exact.to_string() + " of word " + dga.word_to_string(word);
                        word.pop_back();
                        throw InvalidWindow(msg);
                    }
                    inside = false;
                } else {
                    inside = gap.sign() < 0;
                }
            }
            if (inside) visit(nd, nl);
            word.pop_back();
        }
    }
};

struct MonomialLess {
    const Dga& dga;
    bool operator()(const Word& a, const Word& b) const {
        int da = dga.degree(a), db = dga.degree(b);
        if (da != db) return da < db;
        Length la = dga.length(a), lb = dga.length(b);
        if (la != lb) return la < lb;
        int wa = dga.weight(a), wb = dga.weight(b);
        if (wa != wb) return wa < wb;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&](Letter x, Letter y) {
            return dga.generator(x).id < dga.generator(y).id;
        });
    }
};

// Rows = D(source word) expressed in target coordinates.
std::vector<SparseVec> image_rows(const Dga& dga, const std::vector<Word>& source, const std::vector<Word>& target) {
    std::map<Word, std::size_t> pos;
    for (std::size_t i = 0; i < target.size(); ++i) pos.emplace(target[i], i);
    std::vector<SparseVec> rows;
    rows.reserve(source.size());
    for (const auto& w : source) {
        Element dw = differential_of_word(dga, w);
        std::vector<std::pair<std::size_t, Rational>> entries;
        for (const auto& [t, c] : dw.terms()) {
            auto it = pos.find(t);
            if (it == pos.end())
                throw InvariantViolation("D(" + dga.word_to_string(w) + ") has term " + dga.word_to_string(t) +
                                         " outside the target basis");
            entries.emplace_back(it->second, c);
        }
        rows.push_back(exactlin::make_sparse(std::move(entries)));
    }
    return rows;
}

}  // namespace

std::map<int, std::vector<Word>> word_bases(const Dga& dga, int min_degree, int max_degree,
                                            const LengthWindow& window) {
    if (window.bound <= 0) throw InvalidWindow("window bound must be positive");
    Enumerator e{dga, min_degree, max_degree, window.bound, window.bound.get_d(), dga.nonnegatively_graded(), {}, {}, {}};
    for (const auto& g : dga.generators()) e.len_d.push_back(g.length.to_double());
    if (max_degree >= min_degree && (max_degree >= 0 || !e.prune_degree)) e.visit(0, 0.0);
    for (auto& [deg, words] : e.out) std::sort(words.begin(), words.end(), MonomialLess{dga});
    return std::move(e.out);
}

std::vector<Word> word_basis(const Dga& dga, int degree, const LengthWindow& window) {
    return word_bases(dga, degree, degree, window)[degree];
}

SparseMatrix differential_matrix(const Dga& dga, const std::vector<Word>& source, const std::vector<Word>& target) {
    return SparseMatrix::from_rows(target.size(), image_rows(dga, source, target)).transpose();
}

std::map<int, std::size_t> homology_dims(const Dga& dga, int min_degree, int max_degree, const LengthWindow& window) {
    auto bases = word_bases(dga, min_degree - 1, max_degree + 1, window);
    std::map<int, std::size_t> ranks;  // rank of D leaving degree p
    for (int p = min_degree; p <= max_degree + 1; ++p)
        ranks[p] = exactlin::rank(SparseMatrix::from_rows(bases[p - 1].size(), image_rows(dga, bases[p], bases[p - 1])));
    std::map<int, std::size_t> out;
    for (int p = min_degree; p <= max_degree; ++p) out[p] = bases[p].size() - ranks[p] - ranks[p + 1];
    return out;
}

std::size_t homology_dim(const Dga& dga, int degree, const LengthWindow& window) {
    return homology_dims(dga, degree, degree, window).at(degree);
}

std::vector<std::size_t> h0_dims_by_wordcount(const Dga& dga, const LengthWindow& window, int wmax) {
    if (!dga.nonnegatively_graded()) throw GradingViolation("algebra '" + dga.name() + "' has negative degrees");
    if (wmax < 0) throw std::invalid_argument("wmax must be nonnegative");
    auto bases = word_bases(dga, 0, 1, window);
    std::vector<Word> deg0 = bases[0];
    // Highest weight first, so the leading term of an echelon row is its top
    // weight component.
    std::stable_sort(deg0.begin(), deg0.end(),
                     [&](const Word& a, const Word& b) { return dga.weight(a) > dga.weight(b); });
    auto rows = image_rows(dga, bases[1], deg0);
    std::stable_sort(rows.begin(), rows.end(), [](const SparseVec& a, const SparseVec& b) { return a.size() < b.size(); });
    exactlin::Echelon ech(deg0.size());
    for (auto& r : rows) ech.insert(std::move(r));

    std::vector<std::size_t> words_by_w(static_cast<std::size_t>(wmax) + 1, 0), pivots_by_w(words_by_w.size(), 0);
    for (const auto& w : deg0)
        if (int wt = dga.weight(w); wt <= wmax) ++words_by_w[static_cast<std::size_t>(wt)];
    for (std::size_t col : ech.pivot_columns())
        if (int wt = dga.weight(deg0[col]); wt <= wmax) ++pivots_by_w[static_cast<std::size_t>(wt)];
    std::vector<std::size_t> out(words_by_w.size());
    for (std::size_t w = 0; w < out.size(); ++w) out[w] = words_by_w[w] - pivots_by_w[w];
    return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json table_to_json(const Dga& dga, const std::vector<Element>& table) {
    nlohmann::json j = nlohmann::json::object();
    for (Letter g = 0; g < dga.size(); ++g) {
        if (table[g].is_zero()) continue;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [w, c] : table[g].terms()) {
            nlohmann::json ids = nlohmann::json::array();
            for (Letter l : w) ids.push_back(dga.generator(l).id);
            terms.push_back({{"coeff", c.get_str()}, {"word", ids}});
        }
        j[dga.generator(g).id] = terms;
    }
    return j;
}

std::vector<Element> table_from_json(const nlohmann::json& j, const std::unordered_map<std::string, Letter>& idx,
                                     std::size_t n) {
    std::vector<Element> table(n);
    for (const auto& [id, terms] : j.items()) {
        auto it = idx.find(id);
        if (it == idx.end()) throw UnknownGenerator("differential given for unknown generator '" + id + "'");
        for (const auto& t : terms) {
            Word w;
            for (const auto& l : t.at("word")) {
                auto jt = idx.find(l.get<std::string>());
                if (jt == idx.end()) throw UnknownGenerator("unknown generator '" + l.get<std::string>() + "' in word");
                w.push_back(jt->second);
            }
            const auto& c = t.at("coeff");
            Rational coeff = c.is_string() ? exactlin::parse_rational(c.get<std::string>())
                                           : exactlin::parse_rational(c.dump());
            table[it->second].add_term(w, coeff);
        }
    }
    return table;
}

}  // namespace

nlohmann::json to_json(const Dga& dga) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : dga.generators()) {
        nlohmann::json jg = {{"id", g.id}, {"degree", g.degree}, {"length", g.length.to_string()}, {"weight", g.weight}};
        if (g.tags) jg["tags"] = {g.tags->first, g.tags->second};
        gens.push_back(jg);
    }
    nlohmann::json j = {{"name", dga.name()}, {"generators", gens}, {"diff", table_to_json(dga, dga.diff_table())}};
    if (dga.has_partial()) j["partial"] = table_to_json(dga, dga.partial_table());
    return j;
}

Dga dga_from_json(const nlohmann::json& j) {
    std::vector<Generator> gens;
    std::unordered_map<std::string, Letter> idx;
    for (const auto& jg : j.at("generators")) {
        Generator g;
        g.id = jg.at("id").get<std::string>();
        g.degree = jg.at("degree").get<int>();
        const auto& len = jg.at("length");
        g.length = len.is_string() ? Length::parse(len.get<std::string>()) : Length::parse(len.dump());
        g.weight = jg.value("weight", 1);
        if (jg.contains("tags")) g.tags = std::make_pair(jg["tags"].at(0).get<int>(), jg["tags"].at(1).get<int>());
        idx.emplace(g.id, static_cast<Letter>(gens.size()));
        gens.push_back(std::move(g));
    }
    auto diff = table_from_json(j.value("diff", nlohmann::json::object()), idx, gens.size());
    std::optional<std::vector<Element>> partial;
    if (j.contains("partial")) partial = table_from_json(j["partial"], idx, gens.size());
    return Dga(j.value("name", std::string("custom")), std::move(gens), std::move(diff), std::move(partial));
}

}  // namespace strhom::dga
