#pragma once

#include "contor/homology.hpp"
#include "contor/word.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace contor {

// Finitely presented group <gens | relators>.
struct Presentation {
    std::vector<std::string> gens;
    std::vector<Word> relators;

    int ngens() const { return static_cast<int>(gens.size()); }

    void check() const {
        for (const Word& r : relators)
            if (r.max_generator() > ngens())
                throw std::invalid_argument("relator uses a generator outside the presentation");
    }

    // freely and cyclically reduce relators, drop trivial ones
    void normalize() {
        check();
        std::vector<Word> out;
        for (const Word& r : relators) {
            Word w = r.cyclically_reduced();
            if (!w.empty()) out.push_back(std::move(w));
        }
        relators = std::move(out);
    }

    std::string word_str(const Word& w) const {
        if (w.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (int l : w.letters) {
            if (!first) os << " ";
            os << gens[static_cast<std::size_t>(std::abs(l) - 1)];
            if (l < 0) os << "^-1";
            first = false;
        }
        return os.str();
    }
};

namespace detail {

inline std::vector<std::string> default_generator_names(int n) {
    std::vector<std::string> names;
    if (n <= 3) {
        const char* abc[] = {"a", "b", "c"};
        for (int i = 0; i < n; ++i) names.push_back(abc[i]);
    } else {
        for (int i = 1; i <= n; ++i) names.push_back("a" + std::to_string(i));
    }
    return names;
}

inline void check_images(int n, const std::vector<Word>& images) {
    if (static_cast<int>(images.size()) != n)
        throw std::invalid_argument("need one image word per generator");
    for (const Word& w : images)
        if (w.max_generator() > n)
            throw std::invalid_argument("image word uses a generator out of range");
}

}  // namespace detail

// pi_1 of the unreduced mapping torus of a self-map of a wedge of n circles:
// generators a_1..a_n and z, relators a_i z phi(a_i)^{-1} z^{-1}.
inline Presentation pi1_unreduced_torus(int n, const std::vector<Word>& images) {
    detail::check_images(n, images);
    Presentation p;
    p.gens = detail::default_generator_names(n);
    p.gens.push_back("z");
    const int z = n + 1;
    for (int i = 1; i <= n; ++i) {
        Word r(std::vector<int>{i, z});
        r = r * images[static_cast<std::size_t>(i - 1)].inverse();
        r.letters.push_back(-z);
        p.relators.push_back(r.freely_reduced());
    }
    p.normalize();
    return p;
}

// pi_1 of the reduced mapping torus: generators a_1..a_n, relators
// a_i phi(a_i)^{-1}.
inline Presentation pi1_reduced_torus(int n, const std::vector<Word>& images) {
    detail::check_images(n, images);
    Presentation p;
    p.gens = detail::default_generator_names(n);
    for (int i = 1; i <= n; ++i) {
        Word r(std::vector<int>{i});
        r = r * images[static_cast<std::size_t>(i - 1)].inverse();
        p.relators.push_back(r.freely_reduced());
    }
    p.normalize();
    return p;
}

// Abelian invariants from the Smith form of the relator exponent matrix.
inline HomologyGroup abelianization(const Presentation& p) {
    p.check();
    SparseIntMat rel(static_cast<std::size_t>(p.ngens()), p.relators.size());
    for (std::size_t j = 0; j < p.relators.size(); ++j)
        for (int l : p.relators[j].letters)
            rel.add_to(static_cast<std::size_t>(std::abs(l) - 1), j, Int(l > 0 ? 1 : -1));
    return cokernel_group(rel);
}

// Optional Tietze pre-pass: eliminate a generator defined by a relator in
// which it occurs exactly once. Repeats until no such relator is left.
inline Presentation simplify_presentation(Presentation p) {
    p.normalize();
    while (true) {
        int victim = 0;           // 1-based generator index
        std::size_t which = 0;    // relator index
        for (std::size_t j = 0; j < p.relators.size() && victim == 0; ++j) {
            std::map<int, int> count;
            for (int l : p.relators[j].letters) count[std::abs(l)]++;
            for (const auto& [g, c] : count)
                if (c == 1) {
                    victim = g;
                    which = j;
                    break;
                }
        }
        if (victim == 0) break;

        // rotate the relator to start with the victim letter: g = rest^{-1}
        Word r = p.relators[which];
        std::size_t pos = 0;
        while (std::abs(r.letters[pos]) != victim) ++pos;
        std::vector<int> rot(r.letters.begin() + static_cast<long>(pos), r.letters.end());
        rot.insert(rot.end(), r.letters.begin(), r.letters.begin() + static_cast<long>(pos));
        if (rot[0] < 0) {
            // invert the relator and bring the positive occurrence back to the front
            std::vector<int> inv;
            for (auto it = rot.rbegin(); it != rot.rend(); ++it) inv.push_back(-*it);
            std::rotate(inv.begin(), inv.end() - 1, inv.end());
            rot = std::move(inv);
        }
        Word replacement(std::vector<int>(rot.begin() + 1, rot.end()));
        replacement = replacement.inverse();

        // substitute and renumber the remaining generators
        auto renumber = [&](int l) {
            int g = std::abs(l);
            int g2 = g > victim ? g - 1 : g;
            return l > 0 ? g2 : -g2;
        };
        Presentation next;
        for (int g = 1; g <= p.ngens(); ++g)
            if (g != victim) next.gens.push_back(p.gens[static_cast<std::size_t>(g - 1)]);
        for (std::size_t j = 0; j < p.relators.size(); ++j) {
            if (j == which) continue;
            Word out;
            for (int l : p.relators[j].letters) {
                if (std::abs(l) == victim) {
                    Word sub = l > 0 ? replacement : replacement.inverse();
                    for (int s : sub.letters) out.letters.push_back(renumber(s));
                } else {
                    out.letters.push_back(renumber(l));
                }
            }
            next.relators.push_back(out.freely_reduced());
        }
        next.normalize();
        p = std::move(next);
    }
    return p;
}

}  // namespace contor
