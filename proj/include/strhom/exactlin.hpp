#pragma once

// Exact rational sparse linear algebra: row-reduced echelon forms, ranks,
// kernels and subspace quotients over Q.

#include <cstddef>
#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace strhom::exactlin {

// mpq_class keeps values canonical (gcd 1, positive denominator, zero = 0/1)
// as long as every constructor path goes through canonicalize().
using Rational = mpq_class;

// Accepts "7", "-3/4", "2.125", "-0.5", "1e-3".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Sorted by index, no stored zeros.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

// y += a * x
void axpy(SparseVec& y, const Rational& a, const SparseVec& x);
void scale(SparseVec& v, const Rational& a);
Rational coefficient(const SparseVec& v, std::size_t index);
SparseVec make_sparse(std::vector<std::pair<std::size_t, Rational>> entries);

class ContainmentViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);
    static SparseMatrix from_rows(std::size_t cols, std::vector<SparseVec> rows);
    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;

    Rational get(std::size_t r, std::size_t c) const;
    // Adds to the entry; an entry that cancels to zero is removed.
    void add(std::size_t r, std::size_t c, const Rational& v);
    void set(std::size_t r, std::size_t c, const Rational& v);

    const SparseVec& row(std::size_t r) const { return rows_.at(r); }
    const std::vector<SparseVec>& row_data() const { return rows_; }

    SparseMatrix transpose() const;
    SparseVec apply(const SparseVec& x) const;  // M * x
    SparseMatrix operator*(const SparseMatrix& other) const;
    std::vector<std::vector<Rational>> to_dense() const;

    bool operator==(const SparseMatrix& other) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<SparseVec> rows_;
};

struct RrefResult {
    SparseMatrix reduced;             // nonzero rows only
    std::vector<std::size_t> pivots;  // pivot column of each row
};

RrefResult rref(const SparseMatrix& m);
std::size_t rank(const SparseMatrix& m);

// Incremental row echelon form (not reduced). Rows are kept keyed by their
// leading column; inserting reduces the leading entry repeatedly.
class Echelon {
public:
    explicit Echelon(std::size_t ambient_dim) : dim_(ambient_dim) {}

    // True when v was independent of the rows already present.
    bool insert(SparseVec v);
    // Reduces v until its leading entry is not a pivot column (or v is zero).
    SparseVec reduce_leading(SparseVec v) const;
    // Full reduction against every pivot; zero iff v lies in the row span.
    SparseVec reduce_full(SparseVec v) const;
    bool contains(const SparseVec& v) const { return reduce_full(v).empty(); }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t ambient_dim() const { return dim_; }
    std::vector<std::size_t> pivot_columns() const;

private:
    std::size_t dim_;
    std::unordered_map<std::size_t, SparseVec> pivots_;  // leading entry normalized to 1
};

class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    // Basis of span(vectors), brought to RREF.
    static Subspace span(std::size_t ambient_dim, const std::vector<SparseVec>& vectors);
    static Subspace whole(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<SparseVec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    bool contains(const SparseVec& v) const;

private:
    std::size_t ambient_;
    std::vector<SparseVec> basis_;
    std::vector<std::size_t> pivots_;
};

// {v : m v = 0}
Subspace kernel_basis(const SparseMatrix& m);

// dim v - dim w; throws ContainmentViolation unless w is inside v.
std::size_t quotient_dim(const Subspace& v, const Subspace& w);

}  // namespace strhom::exactlin
