#pragma once

#include "contor/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace contor {

// Closed interval with exact rational endpoints. With exact arithmetic every
// operation returns the precise range hull, so enclosures need no rounding
// slack.
struct Interval {
    Rat lo{0};
    Rat hi{0};

    Interval() = default;
    Interval(Rat a, Rat b) : lo(std::move(a)), hi(std::move(b)) {
        if (lo > hi) throw std::invalid_argument("interval with lo > hi");
    }
    static Interval point(const Rat& v) { return Interval(v, v); }

    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool is_point() const { return lo == hi; }
    Rat width() const { return hi - lo; }

    bool operator==(const Interval& o) const = default;

    friend Interval hull(const Interval& a, const Interval& b) {
        return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(a.lo + b.lo, a.hi + b.hi);
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return Interval(a.lo - b.hi, a.hi - b.lo);
    }
    friend Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                        std::max(std::max(p1, p2), std::max(p3, p4)));
    }

    // Tight integer power via monotonicity / evenness case analysis.
    Interval pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative exponent");
        if (k == 0) return point(Rat(1));
        auto ipow = [](const Rat& x, int e) {
            Rat r(1);
            for (int i = 0; i < e; ++i) r *= x;
            return r;
        };
        Rat pl = ipow(lo, k), ph = ipow(hi, k);
        if (k % 2 == 1) return Interval(pl, ph);
        if (lo >= 0) return Interval(pl, ph);
        if (hi <= 0) return Interval(ph, pl);
        return Interval(Rat(0), std::max(pl, ph));
    }

    friend std::ostream& operator<<(std::ostream& os, const Interval& iv) {
        return os << "[" << format_rational(iv.lo) << ", " << format_rational(iv.hi) << "]";
    }
};

// Axis-aligned box in R^d, d >= 1.
struct Box {
    std::vector<Interval> iv;

    Box() = default;
    explicit Box(std::vector<Interval> comps) : iv(std::move(comps)) {
        if (iv.empty()) throw std::invalid_argument("box must have dimension >= 1");
    }
    Box(std::initializer_list<Interval> comps) : Box(std::vector<Interval>(comps)) {}

    int dim() const { return static_cast<int>(iv.size()); }
    const Interval& operator[](int i) const { return iv[static_cast<std::size_t>(i)]; }
    Interval& operator[](int i) { return iv[static_cast<std::size_t>(i)]; }

    bool contains(const std::vector<Rat>& x) const {
        if (static_cast<int>(x.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (!iv[static_cast<std::size_t>(i)].contains(x[static_cast<std::size_t>(i)])) return false;
        return true;
    }
    bool contains(const Box& o) const {
        if (o.dim() != dim()) return false;
        for (int i = 0; i < dim(); ++i) if (!(*this)[i].contains(o[i])) return false;
        return true;
    }
    bool intersects(const Box& o) const {
        for (int i = 0; i < dim(); ++i) if (!(*this)[i].intersects(o[i])) return false;
        return true;
    }

    bool operator==(const Box& o) const = default;

    friend Box hull(const Box& a, const Box& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("hull of boxes with mixed dimension");
        std::vector<Interval> out;
        out.reserve(a.iv.size());
        for (int i = 0; i < a.dim(); ++i) out.push_back(hull(a[i], b[i]));
        return Box(std::move(out));
    }

    friend std::ostream& operator<<(std::ostream& os, const Box& b) {
        for (int i = 0; i < b.dim(); ++i) {
            if (i) os << " x ";
            os << b[i];
        }
        return os;
    }
};

}  // namespace contor
