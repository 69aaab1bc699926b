#pragma once

#include "contor/fpgroup.hpp"

#include <deque>
#include <limits>
#include <numeric>
#include <vector>

namespace contor {

struct EnumerationLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coset table of a subgroup: rows are cosets, columns alternate generator and
// inverse (col 2g for generator g+1, col 2g+1 for its inverse). Closed means
// every entry is defined and every relator traces each row to itself.
struct CosetTable {
    int ngens = 0;
    std::vector<std::vector<int>> row;
    bool closed = false;

    std::size_t index() const { return row.size(); }

    static int col_of(int letter) {
        return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
    }
    static int inv_col(int col) { return col ^ 1; }

    int step(int coset, int letter) const {
        return row[static_cast<std::size_t>(coset)][static_cast<std::size_t>(col_of(letter))];
    }

    int trace(int coset, const Word& w) const {
        int c = coset;
        for (int l : w.letters) {
            c = step(c, l);
            if (c < 0) return -1;
        }
        return c;
    }

    bool mutually_inverse_columns() const {
        for (std::size_t i = 0; i < row.size(); ++i)
            for (std::size_t x = 0; x < row[i].size(); ++x) {
                int j = row[i][x];
                if (j < 0) continue;
                if (row[static_cast<std::size_t>(j)][inv_col(static_cast<int>(x))] !=
                    static_cast<int>(i))
                    return false;
            }
        return true;
    }

    bool validate(const Presentation& p) const {
        if (!closed) return false;
        if (!mutually_inverse_columns()) return false;
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (const auto& r : p.relators)
                if (trace(static_cast<int>(i), r) != static_cast<int>(i)) return false;
            for (const auto& e : row[i])
                if (e < 0) return false;
        }
        return true;
    }
};

namespace detail {

// HLT coset enumeration state with standard coincidence processing.
class Enumerator {
public:
    Enumerator(const Presentation& p, std::size_t cap) : pres_(p), cap_(cap) {
        cols_ = 2 * static_cast<std::size_t>(p.ngens());
        new_coset();
    }

    void scan_subgroup_generators(const std::vector<Word>& gens) {
        for (const Word& w : gens) scan_and_fill(0, w.freely_reduced());
    }

    void run() {
        // repeat until a full pass neither defines, merges, nor leaves holes;
        // definitions are capped and merges strictly reduce live cosets, so
        // this terminates
        while (true) {
            std::size_t defs = definitions_, mrg = merges_;
            for (std::size_t i = 0; i < table_.size(); ++i) {
                if (dead(i)) continue;
                for (const Word& r : pres_.relators) {
                    scan_and_fill(static_cast<int>(i), r);
                    if (dead(i)) break;
                }
                if (dead(i)) continue;
                for (std::size_t x = 0; x < cols_; ++x)
                    if (table_[i][x] < 0) define(static_cast<int>(i), static_cast<int>(x));
            }
            bool holes = false;
            for (std::size_t i = 0; i < table_.size() && !holes; ++i) {
                if (dead(i)) continue;
                for (std::size_t x = 0; x < cols_; ++x)
                    if (table_[i][x] < 0) holes = true;
            }
            if (!holes && defs == definitions_ && mrg == merges_) break;
        }
    }

    CosetTable result() const {
        // compact live cosets and standardize by breadth-first order
        std::vector<int> live;
        for (std::size_t i = 0; i < table_.size(); ++i)
            if (!dead(i)) live.push_back(static_cast<int>(i));
        std::vector<int> order(table_.size(), -1);
        std::vector<int> bfs;
        bfs.push_back(0);
        order[0] = 0;
        for (std::size_t q = 0; q < bfs.size(); ++q) {
            int c = bfs[static_cast<std::size_t>(q)];
            for (std::size_t x = 0; x < cols_; ++x) {
                int d = table_[static_cast<std::size_t>(c)][x];
                if (d >= 0 && order[static_cast<std::size_t>(d)] < 0) {
                    order[static_cast<std::size_t>(d)] = static_cast<int>(bfs.size());
                    bfs.push_back(d);
                }
            }
        }
        CosetTable out;
        out.ngens = pres_.ngens();
        out.row.assign(bfs.size(), std::vector<int>(cols_, -1));
        bool complete = bfs.size() == live.size();
        for (std::size_t i = 0; i < bfs.size(); ++i)
            for (std::size_t x = 0; x < cols_; ++x) {
                int d = table_[static_cast<std::size_t>(bfs[i])][x];
                out.row[i][x] = d < 0 ? -1 : order[static_cast<std::size_t>(d)];
                if (d < 0) complete = false;
            }
        out.closed = complete;
        return out;
    }

    std::size_t live_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < table_.size(); ++i)
            if (!dead(i)) ++n;
        return n;
    }

private:
    bool dead(std::size_t i) const { return rep_[i] != static_cast<int>(i); }

    int rep(int c) {
        int r = c;
        while (rep_[static_cast<std::size_t>(r)] != r) r = rep_[static_cast<std::size_t>(r)];
        while (rep_[static_cast<std::size_t>(c)] != r) {
            int next = rep_[static_cast<std::size_t>(c)];
            rep_[static_cast<std::size_t>(c)] = r;
            c = next;
        }
        return r;
    }

    int new_coset() {
        if (table_.size() >= cap_) {
            lookahead();
            if (live_count() >= cap_)
                throw EnumerationLimit(
                    "coset limit exceeded; enumeration inconclusive (the group may be infinite)");
            compact_storage();
            if (table_.size() >= cap_)
                throw EnumerationLimit(
                    "coset limit exceeded; enumeration inconclusive (the group may be infinite)");
        }
        table_.emplace_back(cols_, -1);
        rep_.push_back(static_cast<int>(table_.size()) - 1);
        return static_cast<int>(table_.size()) - 1;
    }

    void set_entry(int a, int x, int b) {
        table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] = b;
        table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(CosetTable::inv_col(x))] = a;
    }

    int define(int a, int x) {
        int n = new_coset();
        set_entry(a, x, n);
        return n;
    }

    void merge(int a, int b, std::deque<int>& q) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        rep_[static_cast<std::size_t>(b)] = a;
        q.push_back(b);
    }

    void coincidence(int a, int b) {
        std::deque<int> q;
        merge(a, b, q);
        while (!q.empty()) {
            int e = q.front();
            q.pop_front();
            for (std::size_t x = 0; x < cols_; ++x) {
                int f = table_[static_cast<std::size_t>(e)][x];
                if (f < 0) continue;
                int ix = CosetTable::inv_col(static_cast<int>(x));
                if (table_[static_cast<std::size_t>(f)][static_cast<std::size_t>(ix)] == e)
                    table_[static_cast<std::size_t>(f)][static_cast<std::size_t>(ix)] = -1;
                int e1 = rep(e), f1 = rep(f);
                int ex = table_[static_cast<std::size_t>(e1)][x];
                int fx = table_[static_cast<std::size_t>(f1)][static_cast<std::size_t>(ix)];
                if (ex >= 0)
                    merge(ex, f1, q);
                else if (fx >= 0)
                    merge(fx, e1, q);
                else
                    set_entry(e1, static_cast<int>(x), f1);
            }
        }
    }

    // scan relator w at coset i, filling gaps by definitions (HLT style)
    void scan_and_fill(int i, const Word& w) {
        if (w.empty()) return;
        while (true) {
            int f = rep(i);
            std::size_t fi = 0;
            while (fi < w.length()) {
                int n = table_[static_cast<std::size_t>(f)]
                              [static_cast<std::size_t>(CosetTable::col_of(w.letters[fi]))];
                if (n < 0) break;
                f = rep(n);
                ++fi;
            }
            if (fi == w.length()) {
                if (f != rep(i)) coincidence(f, rep(i));
                return;
            }
            int b = rep(i);
            std::size_t bi = w.length();
            while (bi > fi) {
                int n = table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(
                    CosetTable::inv_col(CosetTable::col_of(w.letters[bi - 1])))];
                if (n < 0) break;
                b = rep(n);
                --bi;
            }
            if (bi == fi) {
                if (f != b) coincidence(f, b);
                return;
            }
            if (bi == fi + 1) {
                set_entry(f, CosetTable::col_of(w.letters[fi]), b);
                return;
            }
            define(f, CosetTable::col_of(w.letters[fi]));
        }
    }

    // deduction-only pass over the whole table, used under cap pressure
    void lookahead() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < table_.size(); ++i) {
                if (dead(i)) continue;
                for (const Word& w : pres_.relators) {
                    int f = rep(static_cast<int>(i));
                    std::size_t fi = 0;
                    while (fi < w.length()) {
                        int n = table_[static_cast<std::size_t>(f)][static_cast<std::size_t>(
                            CosetTable::col_of(w.letters[fi]))];
                        if (n < 0) break;
                        f = rep(n);
                        ++fi;
                    }
                    if (fi == w.length()) {
                        if (f != rep(static_cast<int>(i))) {
                            coincidence(f, rep(static_cast<int>(i)));
                            changed = true;
                        }
                        continue;
                    }
                    int b = rep(static_cast<int>(i));
                    std::size_t bi = w.length();
                    while (bi > fi) {
                        int n = table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(
                            CosetTable::inv_col(CosetTable::col_of(w.letters[bi - 1])))];
                        if (n < 0) break;
                        b = rep(n);
                        --bi;
                    }
                    if (bi == fi) {
                        if (f != b) {
                            coincidence(f, b);
                            changed = true;
                        }
                    } else if (bi == fi + 1) {
                        set_entry(f, CosetTable::col_of(w.letters[fi]), b);
                        changed = true;
                    }
                }
            }
        }
    }

    // drop dead rows, remapping indices (cap relief after heavy collapses)
    void compact_storage() {
        std::vector<int> remap(table_.size(), -1);
        std::vector<std::vector<int>> fresh;
        for (std::size_t i = 0; i < table_.size(); ++i) {
            if (dead(i)) continue;
            remap[i] = static_cast<int>(fresh.size());
            fresh.push_back(std::move(table_[i]));
        }
        for (auto& r : fresh)
            for (auto& e : r)
                if (e >= 0) e = remap[static_cast<std::size_t>(rep(e))];
        table_ = std::move(fresh);
        rep_.resize(table_.size());
        std::iota(rep_.begin(), rep_.end(), 0);
    }

    const Presentation& pres_;
    std::size_t cap_;
    std::size_t cols_;
    std::vector<std::vector<int>> table_;
    std::vector<int> rep_;
};

}  // namespace detail

// HLT coset enumeration with lookahead under cap pressure. Throws
// EnumerationLimit when the coset cap is exceeded (inconclusive, the group
// may be infinite). The returned table is standardized: cosets numbered in
// breadth-first order from the subgroup coset.
inline CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup_gens,
                               std::size_t coset_cap = 1000000) {
    if (coset_cap < 1) throw std::invalid_argument("coset cap must be at least 1");
    Presentation q = p;
    q.normalize();
    for (const Word& w : subgroup_gens)
        if (w.max_generator() > q.ngens())
            throw std::invalid_argument("subgroup generator uses an unknown group generator");
    detail::Enumerator e(q, coset_cap);
    e.scan_subgroup_generators(subgroup_gens);
    e.run();
    CosetTable t = e.result();
    t.closed = t.closed && t.validate(q);
    if (!t.closed)
        throw std::logic_error("enumeration finished with an invalid table");
    return t;
}

}  // namespace contor
