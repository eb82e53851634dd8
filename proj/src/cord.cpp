#include "strhom/cord.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace strhom::cord {

int CordPresentation::weight(const Word& w) const {
    int total = 0;
    for (Letter l : w) total += generators.at(l).weight;
    return total;
}

int CordPresentation::top_weight(const Element& e) const {
    int top = -1;
    for (const auto& [w, c] : e.terms()) top = std::max(top, weight(w));
    return top;
}

std::string CordPresentation::element_to_string(const Element& e) const {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : e.terms()) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rational a = abs(c);
        if (a != 1 || w.empty()) os << exactlin::to_string(a) << (w.empty() ? "" : "*");
        for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "*" : "") << generators.at(w[i]).id;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// Collects skein instances, dropping duplicates and zero relations.
struct RelationSet {
    std::vector<Element> list;
    std::set<std::string> seen;

    void add(const CordPresentation& pres, Element e) {
        if (e.is_zero()) return;
        // Normalize the sign so that r and -r coincide.
        if (e.terms().begin()->second < 0) e = e.scaled(-1);
        std::string key = pres.element_to_string(e);
        if (seen.insert(key).second) list.push_back(std::move(e));
    }
};

Element skein(Letter whole, Letter meridian_pushed, Letter left, Letter right) {
    Element r = Element::letter(whole);
    r -= Element::letter(meridian_pushed);
    r -= Element::word({left, right});
    return r;
}

CordPresentation unknot(int kmax) {
    CordPresentation p;
    p.name = "unknot";
    auto idx = [&](int k) { return static_cast<Letter>(k + kmax); };
    for (int k = -kmax; k <= kmax; ++k) p.generators.push_back({"A" + std::to_string(k), 0, 0, 0, std::abs(k)});
    p.constants = {idx(0)};
    RelationSet rs;
    // Cord m^(j+k) split at a point of K into m^j and m^k.
    for (int j = -kmax; j <= kmax; ++j)
        for (int k = -kmax; k <= kmax; ++k)
            if (std::abs(j + k) <= kmax && std::abs(j + k + 1) <= kmax)
                rs.add(p, skein(idx(j + k), idx(j + k + 1), idx(j), idx(k)));
    p.relations = std::move(rs.list);
    return p;
}

CordPresentation hopf_link(int kmax) {
    // pi_1 = Z^2 = <m0, m1>; the longitude of each component is the other
    // meridian, so a cord i -> i is determined by its m_i exponent and a
    // cross cord is unique.
    CordPresentation p;
    p.name = "hopf_link";
    const int span = 2 * kmax + 1;
    auto x = [&](int k) { return static_cast<Letter>(k + kmax); };
    auto y = [&](int k) { return static_cast<Letter>(span + k + kmax); };
    const Letter P = static_cast<Letter>(2 * span), N = P + 1;
    for (int k = -kmax; k <= kmax; ++k) p.generators.push_back({"X" + std::to_string(k), 0, 0, 0, std::abs(k)});
    for (int k = -kmax; k <= kmax; ++k) p.generators.push_back({"Y" + std::to_string(k), 1, 1, 0, std::abs(k)});
    p.generators.push_back({"P", 0, 1, 1, 0});
    p.generators.push_back({"N", 1, 0, 1, 0});
    p.constants = {x(0), y(0)};

    // Class of a cord a -> b with group element (e0, e1); nullopt if it falls
    // outside the truncation.
    auto cls = [&](int a, int b, int e0, int e1) -> std::optional<Letter> {
        if (a != b) return a == 0 ? P : N;
        int e = a == 0 ? e0 : e1;
        if (std::abs(e) > kmax) return std::nullopt;
        return a == 0 ? x(e) : y(e);
    };
    RelationSet rs;
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int b = 0; b < 2; ++b)
                for (int g0 = -kmax; g0 <= kmax; ++g0)
                    for (int g1 = -kmax; g1 <= kmax; ++g1)
                        for (int h0 = -kmax; h0 <= kmax; ++h0)
                            for (int h1 = -kmax; h1 <= kmax; ++h1) {
                                auto whole = cls(a, b, g0 + h0, g1 + h1);
                                auto pushed = cls(a, b, g0 + h0 + (c == 0), g1 + h1 + (c == 1));
                                auto left = cls(a, c, g0, g1);
                                auto right = cls(c, b, h0, h1);
                                if (whole && pushed && left && right) rs.add(p, skein(*whole, *pushed, *left, *right));
                            }
    p.relations = std::move(rs.list);
    return p;
}

// F_2 letters: +1 = m0, -1 = m0^-1, +2 = m1, -2 = m1^-1.
using GroupWord = std::vector<int>;

GroupWord reduce(GroupWord w) {
    GroupWord out;
    for (int l : w) {
        if (!out.empty() && out.back() == -l) out.pop_back();
        else out.push_back(l);
    }
    return out;
}

int component_of(int letter) { return std::abs(letter) - 1; }

std::string word_name(const GroupWord& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) s += l == 1 ? 'a' : l == -1 ? 'A' : l == 2 ? 'b' : 'B';
    return s;
}

CordPresentation unlink2(int kmax) {
    CordPresentation p;
    p.name = "unlink2";
    std::vector<GroupWord> words = {{}};
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (static_cast<int>(words[i].size()) == kmax) continue;
        for (int l : {1, -1, 2, -2}) {
            if (!words[i].empty() && words[i].back() == -l) continue;
            GroupWord w = words[i];
            w.push_back(l);
            words.push_back(std::move(w));
        }
    }
    std::map<std::tuple<int, int, GroupWord>, Letter> index;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (const auto& w : words) {
                // Hops along the component sequence a, letters..., b.
                int hops = 0, prev = a;
                for (int l : w) {
                    hops += component_of(l) != prev;
                    prev = component_of(l);
                }
                hops += b != prev;
                index[{a, b, w}] = static_cast<Letter>(p.generators.size());
                p.generators.push_back({"Z" + std::to_string(a) + std::to_string(b) + "_" + word_name(w), a, b, hops,
                                        static_cast<int>(w.size())});
            }
    for (int a = 0; a < 2; ++a) p.constants.push_back(index.at({a, a, GroupWord{}}));

    auto find = [&](int a, int b, const GroupWord& w) -> std::optional<Letter> {
        auto it = index.find({a, b, w});
        if (it == index.end()) return std::nullopt;
        return it->second;
    };
    RelationSet rs;
    for (const auto& w : words)
        for (std::size_t cut = 0; cut <= w.size(); ++cut) {
            GroupWord g(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut));
            GroupWord h(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end());
            for (int c = 0; c < 2; ++c) {
                GroupWord pushed = g;
                pushed.push_back(c + 1);
                pushed.insert(pushed.end(), h.begin(), h.end());
                pushed = reduce(std::move(pushed));
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        auto whole = find(a, b, w), push = find(a, b, pushed), left = find(a, c, g), right = find(c, b, h);
                        if (whole && push && left && right) rs.add(p, skein(*whole, *push, *left, *right));
                    }
            }
        }
    p.relations = std::move(rs.list);
    return p;
}

}  // namespace

CordPresentation builtin_presentation(const std::string& name, int kmax) {
    if (kmax < 2) throw std::invalid_argument("kmax must be >= 2");
    CordPresentation p;
    if (name == "unknot") p = unknot(kmax);
    else if (name == "hopf_link") p = hopf_link(kmax);
    else if (name == "unlink2") p = unlink2(kmax);
    else throw UnknownBuiltin("unknown cord presentation '" + name + "'");
    p.kmax = kmax;
    // A cord of weight w needs at least w - 1 meridian letters.
    p.validity_bound = kmax + 1;
    return p;
}

// ---------------------------------------------------------------------------

namespace {

class Eliminator {
public:
    explicit Eliminator(const CordPresentation& pres) : pres_(pres), elim_(pres.generators.size()) {
        std::vector<std::size_t> order(pres.generators.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            const auto &a = pres.generators[i], &b = pres.generators[j];
            return std::tie(a.weight, a.size, a.id) < std::tie(b.weight, b.size, b.id);
        });
        rank_.resize(order.size());
        for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
    }

    bool eliminated(Letter g) const { return elim_[g].has_value(); }

    Element substitute(const Element& e) {
        Element out;
        for (const auto& [w, c] : e.terms()) {
            Element prod = Element::unit();
            for (Letter l : w) prod = prod * resolve(l);
            out += prod.scaled(c);
        }
        return out;
    }

    // Eliminates the largest generator of r if it occurs only as a lone
    // linear term. r must already be substituted.
    bool try_eliminate(const Element& r) {
        std::optional<Letter> top;
        for (const auto& [w, c] : r.terms())
            for (Letter l : w)
                if (!top || rank_[l] > rank_[*top]) top = l;
        if (!top) return false;
        const Letter g = *top;
        std::size_t occurrences = 0;
        for (const auto& [w, c] : r.terms())
            if (std::find(w.begin(), w.end(), g) != w.end()) ++occurrences;
        Rational c = r.coeff({g});
        if (occurrences != 1 || c == 0) return false;
        Element rest = r - Element::word({g}, c);
        if (pres_.top_weight(rest) > pres_.generators[g].weight) return false;
        elim_[g] = rest.scaled(-1 / c);
        return true;
    }

private:
    Element resolve(Letter l) {
        if (!elim_[l]) return Element::letter(l);
        bool stale = false;
        for (const auto& [w, c] : elim_[l]->terms())
            for (Letter x : w) stale = stale || elim_[x].has_value();
        if (stale) elim_[l] = substitute(*elim_[l]);
        return *elim_[l];
    }

    const CordPresentation& pres_;
    std::vector<std::optional<Element>> elim_;
    std::vector<std::size_t> rank_;
};

}  // namespace

std::vector<std::size_t> quotient_dims_by_wordcount(const CordPresentation& pres, int wmax, const QuotientOptions& opts) {
    if (wmax < 0) throw std::invalid_argument("wmax must be nonnegative");
    if (wmax > pres.validity_bound)
        throw BoundExceeded("wmax " + std::to_string(wmax) + " exceeds the validity bound " +
                            std::to_string(pres.validity_bound) + " of '" + pres.name + "' (raise kmax)");

    // Relations above wmax cannot reach the requested slices: elimination
    // never raises weight and leading terms are taken at the top weight.
    std::vector<Element> active;
    for (Letter c : pres.constants) active.push_back(Element::letter(c));
    std::vector<Element> skeins;
    for (const auto& r : pres.relations)
        if (pres.top_weight(r) <= wmax) skeins.push_back(r);
    if (opts.shuffle_seed != 0) {
        std::mt19937 rng(opts.shuffle_seed);
        std::shuffle(skeins.begin(), skeins.end(), rng);
    }
    active.insert(active.end(), skeins.begin(), skeins.end());

    Eliminator el(pres);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<Element> next;
        for (const auto& r : active) {
            Element s = el.substitute(r);
            if (s.is_zero()) continue;
            if (el.try_eliminate(s)) changed = true;
            else next.push_back(std::move(s));
        }
        active = std::move(next);
    }

    std::vector<Letter> remaining;
    for (Letter g = 0; g < pres.generators.size(); ++g) {
        if (el.eliminated(g) || pres.generators[g].weight > wmax) continue;
        if (pres.generators[g].weight == 0)
            throw UnsupportedPresentation("generator " + pres.generators[g].id +
                                          " has weight 0 and survives elimination; slices would be infinite");
        remaining.push_back(g);
    }

    // Words in the surviving generators, highest weight first.
    std::vector<Word> words;
    std::function<void(Word&, int)> grow = [&](Word& w, int wt) {
        words.push_back(w);
        for (Letter g : remaining) {
            int gw = pres.generators[g].weight;
            if (wt + gw > wmax) continue;
            w.push_back(g);
            grow(w, wt + gw);
            w.pop_back();
        }
    };
    Word empty;
    grow(empty, 0);
    std::stable_sort(words.begin(), words.end(),
                     [&](const Word& a, const Word& b) { return pres.weight(a) > pres.weight(b); });
    std::map<Word, std::size_t> column;
    for (std::size_t i = 0; i < words.size(); ++i) column.emplace(words[i], i);

    exactlin::Echelon ech(words.size());
    for (const auto& r : active) {
        const int t = pres.top_weight(r);
        for (const auto& u : words) {
            if (pres.weight(u) + t > wmax) continue;
            for (const auto& v : words) {
                if (pres.weight(u) + t + pres.weight(v) > wmax) continue;
                std::vector<std::pair<std::size_t, Rational>> entries;
                for (const auto& [w, c] : r.terms()) entries.emplace_back(column.at(concat(concat(u, w), v)), c);
                ech.insert(exactlin::make_sparse(std::move(entries)));
            }
        }
    }

    std::vector<std::size_t> dims(static_cast<std::size_t>(wmax) + 1, 0);
    for (const auto& w : words) ++dims[static_cast<std::size_t>(pres.weight(w))];
    for (std::size_t col : ech.pivot_columns()) --dims[static_cast<std::size_t>(pres.weight(words[col]))];
    return dims;
}

Comparison compare_with_h0(const CordPresentation& pres, const dga::Dga& dga, const dga::LengthWindow& window,
                           int wmax) {
    auto cord_dims = quotient_dims_by_wordcount(pres, wmax);
    auto h0 = dga::h0_dims_by_wordcount(dga, window, wmax);
    Comparison out;
    out.match = true;
    for (int w = 0; w <= wmax; ++w) {
        ComparisonRow row{w, cord_dims[static_cast<std::size_t>(w)], h0[static_cast<std::size_t>(w)], false};
        row.match = row.cord_dim == row.h0_dim;
        out.match = out.match && row.match;
        out.rows.push_back(row);
    }
    return out;
}

void write_csv(std::ostream& os, const Comparison& c) {
    os << "w,cord_dim,h0_dim,match\n";
    for (const auto& r : c.rows) os << r.w << ',' << r.cord_dim << ',' << r.h0_dim << ',' << (r.match ? "true" : "false") << '\n';
}

bool truncation_stable(const std::string& name, int kmax, int wmax) {
    return quotient_dims_by_wordcount(builtin_presentation(name, kmax), wmax) ==
           quotient_dims_by_wordcount(builtin_presentation(name, kmax + 2), wmax);
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json element_json(const CordPresentation& p, const Element& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [w, c] : e.terms()) {
        nlohmann::json ids = nlohmann::json::array();
        for (Letter l : w) ids.push_back(p.generators.at(l).id);
        terms.push_back({{"coeff", exactlin::to_string(c)}, {"word", ids}});
    }
    return terms;
}

}  // namespace

nlohmann::json to_json(const CordPresentation& pres) {
    nlohmann::json j;
    j["name"] = pres.name;
    j["kmax"] = pres.kmax;
    j["validity_bound"] = pres.validity_bound;
    j["generators"] = nlohmann::json::array();
    for (const auto& g : pres.generators)
        j["generators"].push_back(
            {{"id", g.id}, {"source", g.source}, {"target", g.target}, {"weight", g.weight}, {"size", g.size}});
    j["constants"] = nlohmann::json::array();
    for (Letter c : pres.constants) j["constants"].push_back(pres.generators.at(c).id);
    j["relations"] = nlohmann::json::array();
    for (const auto& r : pres.relations) j["relations"].push_back(element_json(pres, r));
    return j;
}

CordPresentation presentation_from_json(const nlohmann::json& j) {
    CordPresentation p;
    p.name = j.at("name").get<std::string>();
    p.kmax = j.value("kmax", 0);
    p.validity_bound = j.at("validity_bound").get<int>();
    std::map<std::string, Letter> idx;
    for (const auto& g : j.at("generators")) {
        CordGenerator cg{g.at("id").get<std::string>(), g.value("source", 0), g.value("target", 0),
                         g.at("weight").get<int>(), g.value("size", 0)};
        if (cg.weight < 0) throw std::invalid_argument("cord weights must be nonnegative");
        if (!idx.emplace(cg.id, static_cast<Letter>(p.generators.size())).second)
            throw std::invalid_argument("duplicate cord generator '" + cg.id + "'");
        p.generators.push_back(std::move(cg));
    }
    auto lookup = [&](const std::string& id) {
        auto it = idx.find(id);
        if (it == idx.end()) throw std::invalid_argument("unknown cord generator '" + id + "'");
        return it->second;
    };
    for (const auto& c : j.at("constants")) p.constants.push_back(lookup(c.get<std::string>()));
    for (const auto& r : j.at("relations")) {
        Element e;
        for (const auto& t : r) {
            Word w;
            for (const auto& id : t.at("word")) w.push_back(lookup(id.get<std::string>()));
            const auto& c = t.at("coeff");
            e.add_term(w, exactlin::parse_rational(c.is_string() ? c.get<std::string>() : c.dump()));
        }
        p.relations.push_back(std::move(e));
    }
    return p;
}

}  // namespace strhom::cord
