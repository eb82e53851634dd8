#include "strhom/specseq.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <tuple>
#include <unordered_map>

namespace strhom::specseq {

FilteredComplex::FilteredComplex(std::vector<Cell> cells, const SparseMatrix& boundary) : cells_(std::move(cells)) {
    const std::size_t n = cells_.size();
    if (boundary.rows() != n || boundary.cols() != n) throw InvalidComplex("boundary matrix must be square over the cells");
    SparseMatrix t = boundary.transpose();
    columns_ = t.row_data();
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [i, c] : columns_[j]) {
            if (cells_[i].degree != cells_[j].degree - 1)
                throw InvalidComplex("boundary of " + cells_[j].id + " hits " + cells_[i].id + " in the wrong degree");
            if (cells_[i].filtration > cells_[j].filtration)
                throw InvalidComplex("boundary of " + cells_[j].id + " raises filtration");
        }
    }
    SparseMatrix sq = boundary * boundary;
    if (sq.nnz() != 0) throw InvalidComplex("boundary does not square to zero");
    if (n > 0) {
        fmin_ = dmin_ = INT_MAX;
        fmax_ = dmax_ = INT_MIN;
        for (const auto& c : cells_) {
            fmin_ = std::min(fmin_, c.filtration);
            fmax_ = std::max(fmax_, c.filtration);
            dmin_ = std::min(dmin_, c.degree);
            dmax_ = std::max(dmax_, c.degree);
        }
    }
}

SparseMatrix FilteredComplex::boundary() const {
    return SparseMatrix::from_rows(cells_.size(), columns_).transpose();
}

namespace {

// Rank of the boundary restricted to source cells accepted by `src` and
// target cells accepted by `tgt`.
template <class SrcPred, class TgtPred>
std::size_t block_rank(const FilteredComplex& fc, SrcPred src, TgtPred tgt) {
    std::vector<SparseVec> rows;
    for (std::size_t j = 0; j < fc.size(); ++j) {
        if (!src(fc.cells()[j])) continue;
        SparseVec v;
        for (const auto& [i, c] : fc.boundary_of(j))
            if (tgt(fc.cells()[i])) v.emplace_back(i, c);
        if (!v.empty()) rows.push_back(std::move(v));
    }
    return exactlin::rank(SparseMatrix::from_rows(fc.size(), std::move(rows)));
}

std::size_t count_cells(const FilteredComplex& fc, int degree, int pmax) {
    return static_cast<std::size_t>(std::count_if(fc.cells().begin(), fc.cells().end(), [&](const Cell& c) {
        return c.degree == degree && c.filtration <= pmax;
    }));
}

// dim Z^r_{p} in degree n, {x in F_p C_n : dx in F_{p-r}}, memoized.
class CycleDims {
public:
    explicit CycleDims(const FilteredComplex& fc) : fc_(fc) {}

    std::size_t z(int r, int p, int n) {
        if (fc_.size() == 0 || p < fc_.min_filtration()) return 0;
        int threshold = p - r;
        p = std::min(p, fc_.max_filtration());
        threshold = std::clamp(threshold, fc_.min_filtration() - 1, p);
        auto key = std::make_tuple(threshold, p, n);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::size_t rk = block_rank(
            fc_, [&](const Cell& c) { return c.degree == n && c.filtration <= p; },
            [&](const Cell& c) { return c.filtration > threshold; });
        std::size_t out = count_cells(fc_, n, p) - rk;
        memo_.emplace(key, out);
        return out;
    }

    // dim of d(Z^r_p) where Z^r_p lives in degree n.
    std::size_t boundary_of_z(int r, int p, int n) { return z(r, p, n) - z(INT_MAX / 2, p, n); }

private:
    const FilteredComplex& fc_;
    std::map<std::tuple<int, int, int>, std::size_t> memo_;
};

PageTable compute_page(const FilteredComplex& fc, int r) {
    PageTable out;
    out.r = r;
    if (fc.size() == 0) return out;
    CycleDims cd(fc);
    for (int n = fc.min_degree(); n <= fc.max_degree(); ++n) {
        for (int p = fc.min_filtration(); p <= fc.max_filtration(); ++p) {
            // E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}); the two
            // summands meet in d Z^r_{p+r-1}.
            long dim = static_cast<long>(cd.z(r, p, n)) - static_cast<long>(cd.z(r - 1, p - 1, n)) -
                       static_cast<long>(cd.boundary_of_z(r - 1, p + r - 1, n + 1)) +
                       static_cast<long>(cd.boundary_of_z(r, p + r - 1, n + 1));
            if (dim < 0) throw std::logic_error("negative page dimension");
            if (dim > 0) out.dims[{p, n - p}] = static_cast<std::size_t>(dim);
        }
    }
    return out;
}

}  // namespace

std::size_t FilteredComplex::homology_dim(int degree) const {
    auto all = [](const Cell&) { return true; };
    std::size_t out_rank = block_rank(*this, [&](const Cell& c) { return c.degree == degree; }, all);
    std::size_t in_rank = block_rank(*this, [&](const Cell& c) { return c.degree == degree + 1; }, all);
    return count_cells(*this, degree, INT_MAX) - out_rank - in_rank;
}

std::size_t FilteredComplex::graded_homology_dim(int p, int degree) const {
    auto at_level = [p](const Cell& c) { return c.filtration == p; };
    std::size_t out_rank =
        block_rank(*this, [&](const Cell& c) { return c.degree == degree && c.filtration == p; }, at_level);
    std::size_t in_rank =
        block_rank(*this, [&](const Cell& c) { return c.degree == degree + 1 && c.filtration == p; }, at_level);
    auto n = static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [&](const Cell& c) {
        return c.degree == degree && c.filtration == p;
    }));
    return n - out_rank - in_rank;
}

FilteredComplex from_dga(const dga::Dga& dga, const dga::LengthWindow& window) {
    if (!dga.nonnegatively_graded())
        throw dga::GradingViolation("filtered complex needs a nonnegatively graded algebra");
    auto bases = dga::word_bases(dga, 0, INT_MAX / 2, window);
    std::vector<Cell> cells;
    std::map<Word, std::size_t> pos;
    for (const auto& [deg, words] : bases) {
        for (const auto& w : words) {
            pos.emplace(w, cells.size());
            cells.push_back({dga.word_to_string(w), deg, -dga.weight(w)});
        }
    }
    const std::size_t n = cells.size();
    std::vector<SparseVec> columns(n);
    for (const auto& [w, j] : pos) {
        Element dw = dga::differential_of_word(dga, w);
        std::vector<std::pair<std::size_t, Rational>> entries;
        for (const auto& [t, c] : dw.terms()) {
            auto it = pos.find(t);
            if (it == pos.end())
                throw dga::InvariantViolation("differential leaves the window at " + dga.word_to_string(w));
            entries.emplace_back(it->second, c);
        }
        columns[j] = exactlin::make_sparse(std::move(entries));
    }
    SparseMatrix boundary = SparseMatrix::from_rows(n, std::move(columns)).transpose();
    return FilteredComplex(std::move(cells), boundary);
}

std::size_t PageTable::at(int p, int q) const {
    auto it = dims.find({p, q});
    return it == dims.end() ? 0 : it->second;
}

std::size_t PageTable::column_total(int p) const {
    std::size_t total = 0;
    for (const auto& [pq, d] : dims)
        if (pq.first == p) total += d;
    return total;
}

PageTable page(const FilteredComplex& fc, int r) {
    if (r < 1) throw std::invalid_argument("page index must be >= 1");
    return compute_page(fc, r);
}

int stable_page_index(const FilteredComplex& fc) {
    if (fc.size() == 0) return 1;
    return fc.max_filtration() - fc.min_filtration() + 1;
}

PageTable infinity_page(const FilteredComplex& fc) {
    PageTable out = compute_page(fc, stable_page_index(fc));
    out.infinity = true;
    return out;
}

bool convergence_check(const FilteredComplex& fc) {
    if (fc.size() == 0) return true;
    PageTable inf = infinity_page(fc);
    for (int n = fc.min_degree(); n <= fc.max_degree(); ++n) {
        std::size_t total = 0;
        for (const auto& [pq, d] : inf.dims)
            if (pq.first + pq.second == n) total += d;
        if (total != fc.homology_dim(n)) return false;
    }
    return true;
}

bool is_e1_isomorphism(const FilteredComplex& a, const FilteredComplex& b, const SparseMatrix& f) {
    if (f.rows() != b.size() || f.cols() != a.size()) throw std::invalid_argument("map shape mismatch");
    // Chain map and filtration preserving.
    if (!(b.boundary() * f == f * a.boundary())) return false;
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (const auto& [j, c] : f.row(i))
            if (b.cells()[i].filtration > a.cells()[j].filtration) return false;

    SparseMatrix ft = f.transpose();  // row j = image of cell j of a
    std::set<std::pair<int, int>> levels;
    for (const auto& c : a.cells()) levels.insert({c.filtration, c.degree});
    for (const auto& c : b.cells()) levels.insert({c.filtration, c.degree});

    for (const auto& [p, n] : levels) {
        std::size_t ha = a.graded_homology_dim(p, n);
        std::size_t hb = b.graded_homology_dim(p, n);
        if (ha != hb) return false;
        if (ha == 0) continue;
        // Cycles of gr_p a in degree n, as vectors over the cells of a.
        std::vector<std::size_t> src;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a.cells()[j].filtration == p && a.cells()[j].degree == n) src.push_back(j);
        SparseMatrix block(a.size(), src.size());
        for (std::size_t k = 0; k < src.size(); ++k)
            for (const auto& [i, c] : a.boundary_of(src[k]))
                if (a.cells()[i].filtration == p) block.add(i, k, c);
        auto cycles = exactlin::kernel_basis(block);
        // Boundaries of gr_p b in degree n.
        std::vector<SparseVec> span;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b.cells()[j].filtration != p || b.cells()[j].degree != n + 1) continue;
            SparseVec v;
            for (const auto& [i, c] : b.boundary_of(j))
                if (b.cells()[i].filtration == p) v.emplace_back(i, c);
            if (!v.empty()) span.push_back(v);
        }
        std::size_t boundaries = exactlin::Subspace::span(b.size(), span).dim();
        for (const auto& z : cycles.basis()) {
            SparseVec image;
            for (const auto& [k, c] : z) {
                SparseVec col = ft.row(src[k]);
                SparseVec graded;
                for (const auto& [i, x] : col)
                    if (b.cells()[i].filtration == p) graded.emplace_back(i, x);
                exactlin::axpy(image, c, graded);
            }
            span.push_back(image);
        }
        std::size_t with_images = exactlin::Subspace::span(b.size(), span).dim();
        if (with_images - boundaries != ha) return false;
    }
    return true;
}

void write_csv(std::ostream& os, const std::vector<PageTable>& pages) {
    os << "r,p,q,dim\n";
    for (const auto& pg : pages)
        for (const auto& [pq, d] : pg.dims)
            os << (pg.infinity ? std::string("inf") : std::to_string(pg.r)) << ',' << pq.first << ',' << pq.second << ','
               << d << '\n';
}

nlohmann::json to_json(const FilteredComplex& fc) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : fc.cells()) cells.push_back({{"id", c.id}, {"degree", c.degree}, {"filtration", c.filtration}});
    nlohmann::json bd = nlohmann::json::array();
    for (std::size_t j = 0; j < fc.size(); ++j)
        for (const auto& [i, c] : fc.boundary_of(j))
            bd.push_back({{"from", fc.cells()[j].id}, {"to", fc.cells()[i].id}, {"coeff", c.get_str()}});
    return {{"cells", cells}, {"boundary", bd}};
}

FilteredComplex complex_from_json(const nlohmann::json& j) {
    std::vector<Cell> cells;
    std::unordered_map<std::string, std::size_t> idx;
    for (const auto& jc : j.at("cells")) {
        Cell c{jc.at("id").get<std::string>(), jc.at("degree").get<int>(), jc.at("filtration").get<int>()};
        if (!idx.emplace(c.id, cells.size()).second) throw InvalidComplex("duplicate cell id '" + c.id + "'");
        cells.push_back(std::move(c));
    }
    auto lookup = [&](const nlohmann::json& ref) -> std::size_t {
        if (ref.is_number_integer()) {
            auto k = ref.get<std::size_t>();
            if (k >= cells.size()) throw InvalidComplex("cell index out of range");
            return k;
        }
        auto it = idx.find(ref.get<std::string>());
        if (it == idx.end()) throw InvalidComplex("unknown cell '" + ref.get<std::string>() + "'");
        return it->second;
    };
    SparseMatrix boundary(cells.size(), cells.size());
    for (const auto& e : j.value("boundary", nlohmann::json::array())) {
        const auto& c = e.at("coeff");
        Rational coeff = c.is_string() ? exactlin::parse_rational(c.get<std::string>()) : exactlin::parse_rational(c.dump());
        boundary.add(lookup(e.at("to")), lookup(e.at("from")), coeff);
    }
    return FilteredComplex(std::move(cells), boundary);
}

}  // namespace strhom::specseq
