#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace contor {

// Group word: signed 1-based generator indices, +i for generator i, -i for
// its inverse. The empty word is the identity.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {
        for (int l : letters)
            if (l == 0) throw std::invalid_argument("word letters are nonzero signed indices");
    }

    bool empty() const { return letters.empty(); }
    std::size_t length() const { return letters.size(); }
    bool operator==(const Word& o) const = default;

    Word inverse() const {
        Word w;
        w.letters.reserve(letters.size());
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
        return w;
    }

    friend Word operator*(const Word& a, const Word& b) {
        Word w = a;
        w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
        return w;
    }

    Word freely_reduced() const {
        Word w;
        for (int l : letters) {
            if (!w.letters.empty() && w.letters.back() == -l)
                w.letters.pop_back();
            else
                w.letters.push_back(l);
        }
        return w;
    }

    Word cyclically_reduced() const {
        Word w = freely_reduced();
        while (w.letters.size() >= 2 && w.letters.front() == -w.letters.back()) {
            w.letters.erase(w.letters.begin());
            w.letters.pop_back();
        }
        return w;
    }

    int max_generator() const {
        int m = 0;
        for (int l : letters) m = std::max(m, std::abs(l));
        return m;
    }
};

}  // namespace contor
