#include "dmflag/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace dmflag {

SparseMat::SparseMat(uint64_t characteristic, size_t rows, size_t cols)
    : p_(characteristic), rows_(rows), cols_(cols) {}

void SparseMat::add(size_t r, size_t c, Scalar v) {
    if (r >= rows_ || c >= cols_) throw ShapeMismatch("sparse entry range");
    if (v.is_zero()) return;
    entries_.push_back({static_cast<uint32_t>(r), static_cast<uint32_t>(c),
                        std::move(v)});
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

using SparseRow = std::vector<std::pair<uint32_t, Scalar>>;  // sorted by col

// row -= factor * pivot_row (both sorted); returns the merged row.
SparseRow row_axpy(const SparseRow& row, const Scalar& factor,
                   const SparseRow& pivot_row) {
    SparseRow out;
    out.reserve(row.size() + pivot_row.size());
    size_t i = 0, j = 0;
    while (i < row.size() && j < pivot_row.size()) {
        if (row[i].first < pivot_row[j].first) {
            out.push_back(row[i++]);
        } else if (row[i].first > pivot_row[j].first) {
            out.emplace_back(pivot_row[j].first,
                             -(factor * pivot_row[j].second));
            ++j;
        } else {
            Scalar v = row[i].second - factor * pivot_row[j].second;
            if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
            ++i, ++j;
        }
    }
    for (; i < row.size(); ++i) out.push_back(row[i]);
    for (; j < pivot_row.size(); ++j)
        out.emplace_back(pivot_row[j].first, -(factor * pivot_row[j].second));
    return out;
}

// Gaussian elimination with Markowitz-flavoured pivoting on one component.
// Rows are given as sorted sparse vectors; returns the rank.
size_t eliminate(std::vector<SparseRow> rows, size_t ncols) {
    std::vector<int> col_count(ncols, 0);
    std::vector<std::vector<int>> col_rows(ncols);
    std::vector<bool> dead(rows.size(), false);
    for (size_t r = 0; r < rows.size(); ++r)
        for (auto& [c, v] : rows[r]) {
            col_count[c]++;
            col_rows[c].push_back(static_cast<int>(r));
        }
    std::vector<bool> col_done(ncols, false);
    size_t rank = 0;
    for (;;) {
        // Pick the live column with the fewest entries.
        int best_col = -1;
        int best_count = INT32_MAX;
        for (size_t c = 0; c < ncols; ++c) {
            if (col_done[c] || col_count[c] == 0) continue;
            if (col_count[c] < best_count) {
                best_count = col_count[c];
                best_col = static_cast<int>(c);
                if (best_count == 1) break;
            }
        }
        if (best_col < 0) break;
        const uint32_t pc = static_cast<uint32_t>(best_col);

        // Within it, prefer short rows with a unit pivot value.
        int best_row = -1;
        size_t best_score = SIZE_MAX;
        auto& cand = col_rows[pc];
        size_t w = 0;
        for (size_t k = 0; k < cand.size(); ++k) {
            int r = cand[k];
            if (dead[r]) continue;
            auto it = std::lower_bound(
                rows[r].begin(), rows[r].end(), pc,
                [](const auto& e, uint32_t c) { return e.first < c; });
            if (it == rows[r].end() || it->first != pc) continue;
            cand[w++] = r;
            size_t score = rows[r].size() * 2 + (it->second.is_unit_int() ? 0 : 1);
            if (score < best_score) {
                best_score = score;
                best_row = r;
            }
        }
        cand.resize(w);
        if (best_row < 0) {
            col_count[pc] = 0;
            continue;  // stale counts only
        }

        // Eliminate the pivot column from every other live row.
        SparseRow pivot_row = std::move(rows[best_row]);
        auto pit = std::lower_bound(
            pivot_row.begin(), pivot_row.end(), pc,
            [](const auto& e, uint32_t c) { return e.first < c; });
        Scalar pivot_val = pit->second;
        for (int r : cand) {
            if (r == best_row || dead[r]) continue;
            auto it = std::lower_bound(
                rows[r].begin(), rows[r].end(), pc,
                [](const auto& e, uint32_t c) { return e.first < c; });
            if (it == rows[r].end() || it->first != pc) continue;
            Scalar factor = it->second / pivot_val;
            SparseRow merged = row_axpy(rows[r], factor, pivot_row);
            for (auto& [c, v] : rows[r]) col_count[c]--;
            for (auto& [c, v] : merged) {
                col_count[c]++;
                col_rows[c].push_back(r);
            }
            rows[r] = std::move(merged);
        }
        for (auto& [c, v] : pivot_row) col_count[c]--;
        dead[best_row] = true;
        col_done[pc] = true;
        ++rank;
    }
    return rank;
}

}  // namespace

size_t SparseMat::rank() const {
    if (entries_.empty()) return 0;
    // Merge duplicate coordinates.
    std::vector<Entry> es = entries_;
    std::sort(es.begin(), es.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    for (auto& e : es) {
        if (!merged.empty() && merged.back().row == e.row &&
            merged.back().col == e.col)
            merged.back().val += e.val;
        else
            merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Entry& e) { return e.val.is_zero(); }),
                 merged.end());
    if (merged.empty()) return 0;

    // Split into connected components over the row/column bipartite graph.
    UnionFind uf(rows_ + cols_);
    for (auto& e : merged) uf.unite(e.row, rows_ + e.col);
    std::unordered_map<int, std::vector<const Entry*>> comps;
    for (auto& e : merged) comps[uf.find(e.row)].push_back(&e);

    size_t total = 0;
    for (auto& [root, part] : comps) {
        // Local renumbering of this component's rows and columns.
        std::unordered_map<uint32_t, uint32_t> rmap, cmap;
        for (auto* e : part) {
            rmap.emplace(e->row, static_cast<uint32_t>(rmap.size()));
            cmap.emplace(e->col, static_cast<uint32_t>(cmap.size()));
        }
        std::vector<SparseRow> rows(rmap.size());
        for (auto* e : part)
            rows[rmap[e->row]].emplace_back(cmap[e->col], e->val);
        for (auto& r : rows)
            std::sort(r.begin(), r.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        total += eliminate(std::move(rows), cmap.size());
    }
    return total;
}

std::optional<std::vector<Scalar>> SparseMat::solve(
    const std::vector<Scalar>& b) const {
    if (b.size() != rows_) throw ShapeMismatch("solve() rhs length");
    // Group the entries by row and feed them as equations in the unknowns
    // (the columns) to an incremental reduced system.
    std::vector<std::unordered_map<int, Scalar>> eq(rows_);
    for (const auto& e : entries_) {
        auto [it, fresh] = eq[e.row].emplace(static_cast<int>(e.col), e.val);
        if (!fresh) it->second += e.val;
    }
    IncrementalSystem sys(p_);
    for (size_t r = 0; r < rows_; ++r) {
        for (auto it = eq[r].begin(); it != eq[r].end();)
            it = it->second.is_zero() ? eq[r].erase(it) : std::next(it);
        if (!sys.add_equation(std::move(eq[r]), b[r])) return std::nullopt;
    }
    std::vector<Scalar> x;
    x.reserve(cols_);
    for (size_t c = 0; c < cols_; ++c) x.push_back(sys.value(static_cast<int>(c)));
    return x;
}

void IncrementalSystem::reduce(std::unordered_map<int, Scalar>& row,
                               Scalar& rhs) const {
    // Repeatedly cancel any coefficient sitting on an existing pivot.
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = row.begin(); it != row.end();) {
            if (it->second.is_zero()) {
                it = row.erase(it);
                continue;
            }
            auto p = pivots_.find(it->first);
            if (p == pivots_.end()) {
                ++it;
                continue;
            }
            Scalar f = it->second;
            for (const auto& [c, v] : p->second.coeffs) {
                auto [jt, fresh] = row.emplace(c, Scalar::zero(p_));
                jt->second -= f * v;
            }
            rhs -= f * p->second.rhs;
            it = row.begin();
            changed = true;
        }
    }
}

bool IncrementalSystem::add_equation(std::unordered_map<int, Scalar> row,
                                     Scalar rhs) {
    for (auto it = row.begin(); it != row.end();)
        it = it->second.is_zero() ? row.erase(it) : std::next(it);
    reduce(row, rhs);
    if (row.empty()) return rhs.is_zero();
    // Normalize on a fresh pivot and back-substitute into existing rows.
    auto pick = row.begin();
    for (auto it = row.begin(); it != row.end(); ++it)
        if (it->first < pick->first) pick = it;
    int pcol = pick->first;
    Scalar inv = pick->second.inverse();
    Row nr;
    nr.rhs = rhs * inv;
    for (auto& [c, v] : row)
        if (c != pcol) nr.coeffs.emplace(c, v * inv);
    nr.coeffs.emplace(pcol, Scalar::one(p_));
    for (auto& [piv, prow] : pivots_) {
        auto hit = prow.coeffs.find(pcol);
        if (hit == prow.coeffs.end()) continue;
        Scalar f = hit->second;
        prow.coeffs.erase(hit);
        for (const auto& [c, v] : nr.coeffs) {
            if (c == pcol) continue;
            auto [jt, fresh] = prow.coeffs.emplace(c, Scalar::zero(p_));
            jt->second -= f * v;
            if (jt->second.is_zero()) prow.coeffs.erase(jt);
        }
        prow.rhs -= f * nr.rhs;
    }
    pivots_.emplace(pcol, std::move(nr));
    return true;
}

Scalar IncrementalSystem::value(int unknown) const {
    auto it = pivots_.find(unknown);
    if (it == pivots_.end()) return Scalar::zero(p_);  // free unknown
    // Canonical solution: free unknowns are 0, so the pivot value is rhs.
    return it->second.rhs;
}

}  // namespace dmflag
