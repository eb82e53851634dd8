#include "strhom/exactlin.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace strhom::exactlin {

namespace {

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

[[noreturn]] void bad_rational(std::string_view text) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad_rational(text);

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6) bad_rational(text);
        exponent = std::stol(std::string(exp_part));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }

    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) bad_rational(text);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) bad_rational(text);
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) bad_rational(text);
        digits = std::string(s);
    }

    Rational q{mpz_class(digits, 10)};
    if (exponent > 0) q *= pow10(static_cast<unsigned long>(exponent));
    if (exponent < 0) q /= pow10(static_cast<unsigned long>(-exponent));
    if (negative) q = -q;
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
    if (a == 0 || x.empty()) return;
    SparseVec out;
    out.reserve(y.size() + x.size());
    auto iy = y.begin();
    auto ix = x.begin();
    while (iy != y.end() || ix != x.end()) {
        if (ix == x.end() || (iy != y.end() && iy->first < ix->first)) {
            out.push_back(std::move(*iy++));
        } else if (iy == y.end() || ix->first < iy->first) {
            out.emplace_back(ix->first, a * ix->second);
            ++ix;
        } else {
            Rational v = iy->second + a * ix->second;
            if (v != 0) out.emplace_back(iy->first, std::move(v));
            ++iy;
            ++ix;
        }
    }
    y = std::move(out);
}

void scale(SparseVec& v, const Rational& a) {
    if (a == 0) {
        v.clear();
        return;
    }
    for (auto& [i, x] : v) x *= a;
}

Rational coefficient(const SparseVec& v, std::size_t index) {
    auto it = std::lower_bound(v.begin(), v.end(), index,
                               [](const auto& e, std::size_t i) { return e.first < i; });
    if (it != v.end() && it->first == index) return it->second;
    return 0;
}

SparseVec make_sparse(std::vector<std::pair<std::size_t, Rational>> entries) {
    std::map<std::size_t, Rational> acc;
    for (auto& [i, x] : entries) acc[i] += x;
    SparseVec out;
    for (auto& [i, x] : acc)
        if (x != 0) out.emplace_back(i, x);
    return out;
}

// ---------------------------------------------------------------------------

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    SparseMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged dense matrix");
        for (std::size_t c = 0; c < cols; ++c)
            if (rows[r][c] != 0) m.rows_[r].emplace_back(c, rows[r][c]);
    }
    return m;
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols, std::vector<SparseVec> rows) {
    SparseMatrix m;
    m.cols_ = cols;
    for (auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].first >= cols) throw std::out_of_range("sparse row index out of range");
            if (row[k].second == 0) throw std::invalid_argument("explicit zero in sparse row");
            if (k > 0 && row[k - 1].first >= row[k].first) throw std::invalid_argument("unsorted sparse row");
        }
    }
    m.rows_ = std::move(rows);
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].emplace_back(i, Rational(1));
    return m;
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

Rational SparseMatrix::get(std::size_t r, std::size_t c) const {
    if (r >= rows() || c >= cols_) throw std::out_of_range("matrix index out of range");
    return coefficient(rows_[r], c);
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v) {
    if (r >= rows() || c >= cols_) throw std::out_of_range("matrix index out of range");
    if (v == 0) return;
    axpy(rows_[r], 1, SparseVec{{c, v}});
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rational& v) {
    add(r, c, v - get(r, c));
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto& [c, x] : rows_[r]) t.rows_[c].emplace_back(r, x);
    return t;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
    SparseVec out;
    for (std::size_t r = 0; r < rows(); ++r) {
        Rational acc = 0;
        auto ia = rows_[r].begin();
        auto ib = x.begin();
        while (ia != rows_[r].end() && ib != x.end()) {
            if (ia->first < ib->first) ++ia;
            else if (ib->first < ia->first) ++ib;
            else acc += (ia++)->second * (ib++)->second;
        }
        if (acc != 0) out.emplace_back(r, acc);
    }
    return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows()) throw std::invalid_argument("matrix shape mismatch");
    SparseMatrix out(rows(), other.cols());
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto& [k, x] : rows_[r]) axpy(out.rows_[r], x, other.rows_[k]);
    return out;
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
    std::vector<std::vector<Rational>> d(rows(), std::vector<Rational>(cols_, 0));
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto& [c, x] : rows_[r]) d[r][c] = x;
    return d;
}

// ---------------------------------------------------------------------------

SparseVec Echelon::reduce_leading(SparseVec v) const {
    while (!v.empty()) {
        auto it = pivots_.find(v.front().first);
        if (it == pivots_.end()) break;
        Rational a = -v.front().second;
        axpy(v, a, it->second);
    }
    return v;
}

SparseVec Echelon::reduce_full(SparseVec v) const {
    // Pivot rows only have entries right of their pivot, so a left-to-right
    // sweep never reintroduces an entry that was already cleared.
    std::size_t pos = 0;
    while (pos < v.size()) {
        auto it = pivots_.find(v[pos].first);
        if (it == pivots_.end()) {
            ++pos;
            continue;
        }
        Rational a = -v[pos].second;
        axpy(v, a, it->second);
    }
    return v;
}

bool Echelon::insert(SparseVec v) {
    v = reduce_leading(std::move(v));
    if (v.empty()) return false;
    Rational lead = v.front().second;
    if (lead != 1) scale(v, 1 / lead);
    std::size_t col = v.front().first;
    pivots_.emplace(col, std::move(v));
    return true;
}

std::vector<std::size_t> Echelon::pivot_columns() const {
    std::vector<std::size_t> cols;
    cols.reserve(pivots_.size());
    for (const auto& [c, row] : pivots_) cols.push_back(c);
    std::sort(cols.begin(), cols.end());
    return cols;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<std::vector<SparseVec>, std::vector<std::size_t>> rref_rows(std::size_t cols,
                                                                      const std::vector<SparseVec>& rows) {
    // Gauss-Jordan in row order; pivot_rows stays fully reduced after every step.
    std::map<std::size_t, SparseVec> pivot_rows;
    for (const auto& row : rows) {
        if (!row.empty() && row.back().first >= cols) throw std::out_of_range("row index out of range");
        SparseVec v = row;
        for (auto& [pc, prow] : pivot_rows) {
            Rational a = coefficient(v, pc);
            if (a != 0) axpy(v, -a, prow);
        }
        if (v.empty()) continue;
        Rational lead = v.front().second;
        scale(v, 1 / lead);
        std::size_t pc = v.front().first;
        // Clear the new pivot column from earlier rows to keep full reduction.
        for (auto& [qc, qrow] : pivot_rows) {
            Rational a = coefficient(qrow, pc);
            if (a != 0) axpy(qrow, -a, v);
        }
        pivot_rows.emplace(pc, std::move(v));
    }
    std::vector<SparseVec> out;
    std::vector<std::size_t> pivots;
    for (auto& [pc, prow] : pivot_rows) {
        pivots.push_back(pc);
        out.push_back(std::move(prow));
    }
    return {std::move(out), std::move(pivots)};
}

}  // namespace

RrefResult rref(const SparseMatrix& m) {
    auto [rows, pivots] = rref_rows(m.cols(), m.row_data());
    return {SparseMatrix::from_rows(m.cols(), std::move(rows)), std::move(pivots)};
}

std::size_t rank(const SparseMatrix& m) {
    // Rank is additive over connected components of the row/column incidence
    // graph; eliminating each block separately keeps fill-in local.
    const std::size_t n_rows = m.rows();
    const std::size_t n_cols = m.cols();
    std::vector<std::size_t> parent(n_cols);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t r = 0; r < n_rows; ++r) {
        const auto& row = m.row(r);
        for (std::size_t k = 1; k < row.size(); ++k) {
            std::size_t a = find(row[0].first), b = find(row[k].first);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::size_t, std::vector<const SparseVec*>> blocks;
    for (std::size_t r = 0; r < n_rows; ++r)
        if (!m.row(r).empty()) blocks[find(m.row(r).front().first)].push_back(&m.row(r));

    std::size_t total = 0;
    for (auto& [root, rows] : blocks) {
        if (rows.size() == 1) {
            ++total;
            continue;
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](const SparseVec* a, const SparseVec* b) { return a->size() < b->size(); });
        Echelon ech(n_cols);
        for (const SparseVec* row : rows) ech.insert(*row);
        total += ech.rank();
    }
    return total;
}

// ---------------------------------------------------------------------------

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<SparseVec>& vectors) {
    for (const auto& v : vectors)
        if (!v.empty() && v.back().first >= ambient_dim) throw std::out_of_range("vector outside ambient space");
    Subspace s(ambient_dim);
    auto [rows, pivots] = rref_rows(ambient_dim, vectors);
    s.basis_ = std::move(rows);
    s.pivots_ = std::move(pivots);
    return s;
}

Subspace Subspace::whole(std::size_t ambient_dim) {
    Subspace s(ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) {
        s.basis_.push_back(SparseVec{{i, Rational(1)}});
        s.pivots_.push_back(i);
    }
    return s;
}

bool Subspace::contains(const SparseVec& v) const {
    if (!v.empty() && v.back().first >= ambient_) return false;
    SparseVec residual = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        Rational a = coefficient(v, pivots_[i]);
        if (a != 0) axpy(residual, -a, basis_[i]);
    }
    return residual.empty();
}

Subspace kernel_basis(const SparseMatrix& m) {
    auto [reduced, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;

    // Column view of the reduced rows: free column f -> (row, value).
    std::vector<std::vector<std::pair<std::size_t, Rational>>> by_col(m.cols());
    for (std::size_t i = 0; i < reduced.rows(); ++i)
        for (const auto& [c, x] : reduced.row(i))
            if (!is_pivot[c]) by_col[c].emplace_back(i, x);

    std::vector<SparseVec> vecs;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::pair<std::size_t, Rational>> entries{{f, Rational(1)}};
        for (const auto& [i, x] : by_col[f]) entries.emplace_back(pivots[i], -x);
        vecs.push_back(make_sparse(std::move(entries)));
    }
    return Subspace::span(m.cols(), vecs);
}

std::size_t quotient_dim(const Subspace& v, const Subspace& w) {
    if (v.ambient_dim() != w.ambient_dim()) throw ContainmentViolation("subspaces live in different ambient spaces");
    for (std::size_t i = 0; i < w.basis().size(); ++i)
        if (!v.contains(w.basis()[i]))
            throw ContainmentViolation("basis vector " + std::to_string(i) + " of w is not in v");
    return v.dim() - w.dim();
}

}  // namespace strhom::exactlin
