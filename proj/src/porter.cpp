#include "threadrank/analysis.hpp"

namespace threadrank {

namespace {

// Porter (1980) with the two departures of the reference C implementation:
// "bli" -> "ble" in step 2 (instead of "abli" -> "able") and "logi" -> "log".
class PorterStemmer {
  public:
    explicit PorterStemmer(std::string_view word) : m_b(word), m_k(static_cast<int>(word.size()) - 1) {}

    std::string stem() && {
        if (m_k <= 1) {
            return std::move(m_b);
        }
        step1ab();
        if (m_k > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        m_b.resize(static_cast<std::size_t>(m_k + 1));
        return std::move(m_b);
    }

  private:
    [[nodiscard]] char at(int i) const { return m_b[static_cast<std::size_t>(i)]; }

    [[nodiscard]] bool cons(int i) const {
        switch (at(i)) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u': return false;
        case 'y': return i == 0 || !cons(i - 1);
        default: return true;
        }
    }

    // Number of VC sequences in b[0..j].
    [[nodiscard]] int measure() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > m_j) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > m_j) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > m_j) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    [[nodiscard]] bool vowel_in_stem() const {
        for (int i = 0; i <= m_j; ++i) {
            if (!cons(i)) return true;
        }
        return false;
    }

    [[nodiscard]] bool double_cons(int j) const {
        if (j < 1) return false;
        if (at(j) != at(j - 1)) return false;
        return cons(j);
    }

    // consonant-vowel-consonant ending at i, where the last consonant is not w, x or y.
    [[nodiscard]] bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = at(i);
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        auto length = static_cast<int>(s.size());
        if (s.back() != at(m_k)) return false;
        if (length > m_k + 1) return false;
        if (std::string_view(m_b).substr(static_cast<std::size_t>(m_k - length + 1), s.size()) != s) return false;
        m_j = m_k - length;
        return true;
    }

    void set_to(std::string_view s) {
        auto offset = static_cast<std::size_t>(m_j + 1);
        m_b.replace(offset, m_b.size() - offset, s);
        m_k = m_j + static_cast<int>(s.size());
    }

    void replace_if_measured(std::string_view s) {
        if (measure() > 0) set_to(s);
    }

    void step1ab() {
        if (at(m_k) == 's') {
            if (ends("sses")) {
                m_k -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (at(m_k - 1) != 's') {
                --m_k;
            }
        }
        if (ends("eed")) {
            if (measure() > 0) --m_k;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            m_k = m_j;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_cons(m_k)) {
                --m_k;
                char ch = at(m_k);
                if (ch == 'l' || ch == 's' || ch == 'z') ++m_k;
            } else if (measure() == 1 && cvc(m_k)) {
                set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) {
            m_b[static_cast<std::size_t>(m_k)] = 'i';
        }
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // Applies the first matching rule (if its stem has measure > 0).
    template <std::size_t N>
    void apply_first(Rule const (&rules)[N]) {
        for (auto const& rule : rules) {
            if (ends(rule.suffix)) {
                replace_if_measured(rule.replacement);
                return;
            }
        }
    }

    void step2() {
        switch (at(m_k - 1)) {
        case 'a': {
            static constexpr Rule rules[] = {{"ational", "ate"}, {"tional", "tion"}};
            apply_first(rules);
            break;
        }
        case 'c': {
            static constexpr Rule rules[] = {{"enci", "ence"}, {"anci", "ance"}};
            apply_first(rules);
            break;
        }
        case 'e': {
            static constexpr Rule rules[] = {{"izer", "ize"}};
            apply_first(rules);
            break;
        }
        case 'l': {
            static constexpr Rule rules[] = {
                {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
            apply_first(rules);
            break;
        }
        case 'o': {
            static constexpr Rule rules[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
            apply_first(rules);
            break;
        }
        case 's': {
            static constexpr Rule rules[] = {
                {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
            apply_first(rules);
            break;
        }
        case 't': {
            static constexpr Rule rules[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
            apply_first(rules);
            break;
        }
        case 'g': {
            static constexpr Rule rules[] = {{"logi", "log"}};
            apply_first(rules);
            break;
        }
        default: break;
        }
    }

    void step3() {
        switch (at(m_k)) {
        case 'e': {
            static constexpr Rule rules[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
            apply_first(rules);
            break;
        }
        case 'i': {
            static constexpr Rule rules[] = {{"iciti", "ic"}};
            apply_first(rules);
            break;
        }
        case 'l': {
            static constexpr Rule rules[] = {{"ical", "ic"}, {"ful", ""}};
            apply_first(rules);
            break;
        }
        case 's': {
            static constexpr Rule rules[] = {{"ness", ""}};
            apply_first(rules);
            break;
        }
        default: break;
        }
    }

    void step4() {
        bool matched = false;
        switch (at(m_k - 1)) {
        case 'a': matched = ends("al"); break;
        case 'c': matched = ends("ance") || ends("ence"); break;
        case 'e': matched = ends("er"); break;
        case 'i': matched = ends("ic"); break;
        case 'l': matched = ends("able") || ends("ible"); break;
        case 'n': matched = ends("ant") || ends("ement") || ends("ment") || ends("ent"); break;
        case 'o':
            matched = (ends("ion") && m_j >= 0 && (at(m_j) == 's' || at(m_j) == 't')) || ends("ou");
            break;
        case 's': matched = ends("ism"); break;
        case 't': matched = ends("ate") || ends("iti"); break;
        case 'u': matched = ends("ous"); break;
        case 'v': matched = ends("ive"); break;
        case 'z': matched = ends("ize"); break;
        default: break;
        }
        if (matched && measure() > 1) {
            m_k = m_j;
        }
    }

    void step5() {
        m_j = m_k;
        if (at(m_k) == 'e') {
            int a = measure();
            if (a > 1 || (a == 1 && !cvc(m_k - 1))) --m_k;
        }
        if (at(m_k) == 'l' && double_cons(m_k) && measure() > 1) {
            --m_k;
        }
    }

    std::string m_b;
    int m_k;
    int m_j = 0;
};

}  // namespace

std::string porter_stem(std::string_view token) {
    return PorterStemmer(token).stem();
}

}  // namespace threadrank
