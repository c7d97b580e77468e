#include "threadrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "threadrank/analysis.hpp"
#include "threadrank/run_file.hpp"

namespace threadrank {

namespace {

class Random {
  public:
    explicit Random(std::uint64_t seed) : m_engine(seed) {}

    /// Uniform in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(m_engine() % n); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

  private:
    std::mt19937_64 m_engine;
};

// Pronounceable words that are fixed points of the analysis chain and pairwise distinct.
std::vector<std::string> make_vocabulary(std::size_t size) {
    static constexpr std::string_view consonants = "bdfgklmnprtvz";
    static constexpr std::string_view vowels = "aeiou";
    std::vector<std::string> words;
    std::set<std::string> seen;
    for (std::size_t i = 0; words.size() < size; ++i) {
        std::string word;
        auto n = i;
        auto syllables = 2 + (i % 2);
        for (std::size_t s = 0; s < syllables; ++s) {
            word.push_back(consonants[n % consonants.size()]);
            n /= consonants.size();
            word.push_back(vowels[n % vowels.size()]);
            n /= vowels.size();
        }
        word.push_back(consonants[(i * 7 + 3) % consonants.size()]);
        if (n > 0) {
            word += std::to_string(n);
        }
        auto analyzed = analyze(word);
        if (analyzed.size() == 1 && analyzed.front() == word && seen.insert(word).second) {
            words.push_back(std::move(word));
        }
    }
    return words;
}

class ZipfSampler {
  public:
    explicit ZipfSampler(std::size_t n) {
        m_cdf.reserve(n);
        double total = 0.0;
        for (std::size_t r = 1; r <= n; ++r) {
            total += 1.0 / static_cast<double>(r);
            m_cdf.push_back(total);
        }
        for (auto& c : m_cdf) c /= total;
    }

    std::size_t sample(Random& rng) const {
        auto u = rng.unit();
        auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - m_cdf.begin()), m_cdf.size() - 1);
    }

  private:
    std::vector<double> m_cdf;
};

struct ThreadPlan {
    std::size_t topic = 0;
    std::size_t on_topic_messages = 0;
};

}  // namespace

void SynthSpec::validate() const {
    if (thread_count == 0 || query_count == 0 || topic_count == 0 || vocabulary_size == 0) {
        throw std::invalid_argument("synth: counts must be at least 1");
    }
    if (min_messages == 0 || min_messages > max_messages) {
        throw std::invalid_argument("synth: need 1 <= min_messages <= max_messages");
    }
    if (min_words == 0 || min_words > max_words) {
        throw std::invalid_argument("synth: need 1 <= min_words <= max_words");
    }
    if (!(concentration > 0.0 && concentration <= 1.0)) {
        throw std::invalid_argument("synth: concentration must be in (0, 1]");
    }
    if (!(topic_word_rate > 0.0 && topic_word_rate <= 1.0) || !(distractor_rate >= 0.0 && distractor_rate <= 1.0)) {
        throw std::invalid_argument("synth: rates must be probabilities");
    }
    if (query_terms == 0) {
        throw std::invalid_argument("synth: queries need at least one term");
    }
    // Half the vocabulary is background; each topic needs enough words for its queries.
    auto topic_words = (vocabulary_size - vocabulary_size / 2) / topic_count;
    if (vocabulary_size / 2 < 1 || topic_words < query_terms + 1) {
        throw std::invalid_argument("synth: vocabulary of " + std::to_string(vocabulary_size)
                                    + " words is too small for " + std::to_string(topic_count) + " topics");
    }
}

SynthData generate(SynthSpec const& spec) {
    spec.validate();
    Random rng(spec.seed);

    auto vocabulary = make_vocabulary(spec.vocabulary_size);
    auto const background_size = spec.vocabulary_size / 2;
    auto const topic_size = (spec.vocabulary_size - background_size) / spec.topic_count;
    auto topic_word = [&](std::size_t topic, std::size_t i) -> std::string const& {
        return vocabulary[background_size + topic * topic_size + i];
    };
    ZipfSampler background(background_size);
    ZipfSampler topical(topic_size);

    auto write_message = [&](std::size_t topic, bool on_topic, std::size_t distractor) {
        auto length = rng.between(spec.min_words, spec.max_words);
        std::vector<std::string const*> words;
        words.reserve(length + 1);
        for (std::size_t w = 0; w < length; ++w) {
            if (on_topic && rng.chance(spec.topic_word_rate)) {
                words.push_back(&topic_word(topic, topical.sample(rng)));
            } else {
                words.push_back(&vocabulary[background.sample(rng)]);
            }
        }
        if (!on_topic && rng.chance(spec.distractor_rate)) {
            words[rng.below(words.size())] = &topic_word(distractor, topical.sample(rng));
        }
        std::string text;
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (w) text.push_back(' ');
            text += *words[w];
        }
        return text;
    };

    SynthData data;
    std::vector<ThreadPlan> plans;
    auto id_width = std::to_string(spec.thread_count).size();
    auto padded = [](std::size_t v, std::size_t width) {
        auto s = std::to_string(v);
        return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
    };

    for (std::size_t t = 0; t < spec.thread_count; ++t) {
        ThreadPlan plan;
        plan.topic = rng.below(spec.topic_count);
        auto distractor = spec.topic_count > 1 ? (plan.topic + 1 + rng.below(spec.topic_count - 1)) % spec.topic_count
                                               : plan.topic;
        Thread thread;
        thread.thread_id = "t" + padded(t, id_width);
        auto messages = rng.between(spec.min_messages, spec.max_messages);
        for (std::size_t m = 0; m < messages; ++m) {
            bool on_topic = m == 0 || rng.chance(spec.concentration);
            plan.on_topic_messages += on_topic ? 1 : 0;
            thread.messages.push_back(Message{thread.thread_id, thread.thread_id + "m" + std::to_string(m),
                                              static_cast<std::uint32_t>(m),
                                              write_message(plan.topic, on_topic, distractor)});
        }
        plans.push_back(plan);
        data.threads.push_back(std::move(thread));
    }

    auto query_width = std::to_string(spec.query_count).size();
    for (std::size_t q = 0; q < spec.query_count; ++q) {
        auto topic = q % spec.topic_count;
        // Distinct topic words, favouring the frequent ones.
        std::vector<std::size_t> picked;
        while (picked.size() < std::min(spec.query_terms, topic_size)) {
            auto w = topical.sample(rng);
            if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
        }
        std::string text;
        for (std::size_t i = 0; i < picked.size(); ++i) {
            if (i) text.push_back(' ');
            text += topic_word(topic, picked[i]);
        }
        auto query = make_query("q" + padded(q, query_width), text);

        std::set<std::string> terms(query.terms.begin(), query.terms.end());
        for (std::size_t t = 0; t < data.threads.size(); ++t) {
            auto const& thread = data.threads[t];
            if (plans[t].topic == topic) {
                data.qrels.add(query.query_id, thread.thread_id, plans[t].on_topic_messages >= 2 ? 2 : 1);
                continue;
            }
            bool mentions = false;
            for (auto const& message : thread.messages) {
                for (auto const& token : analyze(message.text)) {
                    mentions = mentions || terms.count(token) > 0;
                }
            }
            if (mentions) {
                data.qrels.add(query.query_id, thread.thread_id, 0);
            }
        }
        data.queries.push_back(std::move(query));
    }

    std::ostringstream corpus, queries, qrels;
    write_corpus(corpus, data.threads);
    write_queries(queries, data.queries);
    write_qrels(qrels, data.qrels);
    data.corpus_text = corpus.str();
    data.queries_text = queries.str();
    data.qrels_text = qrels.str();
    return data;
}

void write_synth(SynthData const& data, std::filesystem::path const& dir) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "corpus.jsonl", data.corpus_text);
    write_file_atomic(dir / "queries.tsv", data.queries_text);
    write_file_atomic(dir / "qrels.txt", data.qrels_text);
}

}  // namespace threadrank
