#pragma once

#include "contor/matrix.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace contor {

// Dense univariate polynomial over Q, no trailing zero coefficients.
struct QPoly {
    std::vector<Rat> c;  // c[i] is the coefficient of x^i

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static QPoly constant(Rat v) { return QPoly({std::move(v)}); }
    static QPoly x_minus(const Rat& a) { return QPoly({-a, Rat(1)}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    const Rat& lead() const { return c.back(); }

    bool operator==(const QPoly& o) const = default;

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Rat> out(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] += b.c[i];
        return QPoly(std::move(out));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        std::vector<Rat> out(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] -= b.c[i];
        return QPoly(std::move(out));
    }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        std::vector<Rat> out(a.c.size() + b.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
        return QPoly(std::move(out));
    }

    // quotient and remainder with deg(r) < deg(b)
    friend std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
        if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
        QPoly q;
        q.c.assign(a.c.size(), Rat(0));
        while (!a.is_zero() && a.degree() >= b.degree()) {
            int shift = a.degree() - b.degree();
            Rat f = a.lead() / b.lead();
            q.c[static_cast<std::size_t>(shift)] += f;
            for (std::size_t i = 0; i < b.c.size(); ++i)
                a.c[static_cast<std::size_t>(shift) + i] -= f * b.c[i];
            a.trim();
        }
        q.trim();
        return {std::move(q), std::move(a)};
    }

    QPoly monic() const {
        if (is_zero()) return *this;
        QPoly out = *this;
        Rat l = lead();
        for (auto& v : out.c) v /= l;
        return out;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Rat& v = c[static_cast<std::size_t>(i)];
            if (v == 0) continue;
            if (!first) os << (v > 0 ? " + " : " - ");
            if (first && v < 0) os << "-";
            Rat a = rat_abs(v);
            if (i == 0 || a != 1) os << format_rational(a);
            if (i >= 1) {
                if (a != 1) os << "*";
                os << "x";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }
};

// Invariant factor decomposition of a matrix over Q[x] (Smith form over the
// polynomial PID, pivoting on minimal degree).
inline std::vector<QPoly> polynomial_invariant_factors(std::vector<std::vector<QPoly>> a) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    const std::size_t bound = std::min(m, n);
    std::vector<QPoly> out;
    for (std::size_t t = 0; t < bound; ++t) {
        while (true) {
            std::size_t pi = t, pj = t;
            int best = -1;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (!a[i][j].is_zero() && (best < 0 || a[i][j].degree() < best)) {
                        best = a[i][j].degree();
                        pi = i;
                        pj = j;
                    }
            if (best < 0) goto done;
            std::swap(a[pi], a[t]);
            for (std::size_t i = 0; i < m; ++i) std::swap(a[i][pj], a[i][t]);

            bool again = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t].is_zero()) continue;
                auto [q, r] = divmod(a[i][t], a[t][t]);
                for (std::size_t j = t; j < n; ++j) a[i][j] = a[i][j] - q * a[t][j];
                if (!a[i][t].is_zero()) again = true;
            }
            if (!again) {
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (a[t][j].is_zero()) continue;
                    auto [q, r] = divmod(a[t][j], a[t][t]);
                    for (std::size_t i = t; i < m; ++i) a[i][j] = a[i][j] - q * a[i][t];
                    if (!a[t][j].is_zero()) again = true;
                }
            }
            if (!again) {
                bool divides_all = true;
                for (std::size_t i = t + 1; i < m && divides_all; ++i)
                    for (std::size_t j = t + 1; j < n && divides_all; ++j) {
                        auto [q, r] = divmod(a[i][j], a[t][t]);
                        if (!r.is_zero()) {
                            for (std::size_t k = t; k < n; ++k) a[t][k] = a[t][k] + a[i][k];
                            divides_all = false;
                        }
                    }
                if (divides_all) break;
            }
        }
    }
done:
    for (std::size_t t = 0; t < bound; ++t) {
        if (a[t][t].is_zero()) break;
        out.push_back(a[t][t].monic());
    }
    return out;
}

// Monic invariant factors of xI - A of positive degree; two square rational
// matrices are similar iff these lists coincide.
inline std::vector<QPoly> rational_canonical_form(const QMat& A) {
    if (A.rows != A.cols) throw std::invalid_argument("canonical form of a non-square matrix");
    const std::size_t n = A.rows;
    std::vector<std::vector<QPoly>> xm(n, std::vector<QPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            xm[i][j] = (i == j) ? QPoly::x_minus(A.a[i][j]) : QPoly::constant(-A.a[i][j]);
    std::vector<QPoly> factors = polynomial_invariant_factors(std::move(xm));
    std::vector<QPoly> out;
    for (auto& f : factors)
        if (f.degree() >= 1) out.push_back(std::move(f));
    return out;
}

}  // namespace contor
