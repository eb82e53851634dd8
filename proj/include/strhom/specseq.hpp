#pragma once

// Spectral sequences of finite filtered chain complexes. Page dimensions come
// from ranks of boundary blocks; no page is ever materialized as vectors.

#include "strhom/exactlin.hpp"
#include "strhom/free_dga.hpp"

#include <map>
#include <json.hpp>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace strhom::specseq {

using exactlin::Rational;
using exactlin::SparseMatrix;
using exactlin::SparseVec;

struct Cell {
    std::string id;
    int degree = 0;
    int filtration = 0;
};

struct InvalidComplex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FilteredComplex {
public:
    // boundary(i, j) = coefficient of cell i in the boundary of cell j.
    // Throws InvalidComplex unless the boundary has degree -1, never raises
    // filtration, and squares to zero.
    FilteredComplex(std::vector<Cell> cells, const SparseMatrix& boundary);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    // Boundary of cell j as a sparse vector over cell indices.
    const SparseVec& boundary_of(std::size_t j) const { return columns_.at(j); }
    SparseMatrix boundary() const;

    int min_filtration() const { return fmin_; }
    int max_filtration() const { return fmax_; }
    int min_degree() const { return dmin_; }
    int max_degree() const { return dmax_; }

    // Direct homology of the total complex.
    std::size_t homology_dim(int degree) const;
    // Homology of the associated graded piece F_p / F_{p-1} in the given degree.
    std::size_t graded_homology_dim(int p, int degree) const;

private:
    std::vector<Cell> cells_;
    std::vector<SparseVec> columns_;
    int fmin_ = 0, fmax_ = 0, dmin_ = 0, dmax_ = 0;
};

FilteredComplex from_dga(const dga::Dga& dga, const dga::LengthWindow& window);

// dims[(p, q)] = dim E^r_{p,q} with total degree p + q. Zero entries omitted.
struct PageTable {
    int r = 1;
    bool infinity = false;
    std::map<std::pair<int, int>, std::size_t> dims;

    std::size_t at(int p, int q) const;
    // Sum of dims over the column p.
    std::size_t column_total(int p) const;
    bool operator==(const PageTable& o) const { return dims == o.dims; }
};

PageTable page(const FilteredComplex& fc, int r);
// First r past which pages no longer change (filtration width + 1).
int stable_page_index(const FilteredComplex& fc);
PageTable infinity_page(const FilteredComplex& fc);
bool convergence_check(const FilteredComplex& fc);

// True when f (rows = cells of b, cols = cells of a) is a filtered chain map
// inducing an isomorphism on every E^1_{p,q}.
bool is_e1_isomorphism(const FilteredComplex& a, const FilteredComplex& b, const SparseMatrix& f);

void write_csv(std::ostream& os, const std::vector<PageTable>& pages);
nlohmann::json to_json(const FilteredComplex& fc);
FilteredComplex complex_from_json(const nlohmann::json& j);

}  // namespace strhom::specseq
