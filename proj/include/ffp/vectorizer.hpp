#ifndef FFP_VECTORIZER_HPP
#define FFP_VECTORIZER_HPP

// Bag-of-words counts, the classic word-frequency fingerprint input, and the
// conversation file format (JSON Lines, one dialogue per line):
//
//   {"id":"d1","turns":[{"speaker":"A","text":"Hi!","label":"neutral"}, ...]}

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"

namespace ffp {

class Vocabulary {
public:
    Vocabulary() = default;

    explicit Vocabulary(const std::vector<std::string>& tokens) {
        for (const auto& t : tokens) {
            if (find(t)) {
                throw Error(ErrorKind::config, "duplicate vocabulary token '" + t + "'");
            }
            add(t);
        }
    }

    /// Index of `token`, inserting it at the end when new.
    std::size_t add(const std::string& token) {
        auto [it, inserted] = index_.emplace(token, tokens_.size());
        if (inserted) {
            tokens_.push_back(token);
        }
        return it->second;
    }

    std::optional<std::size_t> find(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }

    friend bool operator==(const Vocabulary& lhs, const Vocabulary& rhs) { return lhs.tokens_ == rhs.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Lowercased runs of ASCII letters and digits. Bytes >= 0x80 count as letters so
/// UTF-8 words stay whole.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

struct Document {
    std::string id;
    std::string label;
    std::string text;
};

struct VectorizedCorpus {
    LabeledDataset dataset;
    Vocabulary vocabulary;
    std::vector<std::string> warnings;
};

/// Token-count vectors. Without a vocabulary one is built in first-occurrence
/// order; with one, unknown tokens are dropped. Classes follow first occurrence.
inline VectorizedCorpus vectorize_text(std::span<const Document> documents,
                                       std::optional<Vocabulary> vocabulary = std::nullopt) {
    if (documents.empty()) {
        throw Error(ErrorKind::config, "cannot vectorize an empty corpus");
    }
    const bool fixed = vocabulary.has_value();
    Vocabulary vocab = fixed ? std::move(*vocabulary) : Vocabulary{};

    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(documents.size());
    std::vector<std::string> classes;
    for (const auto& doc : documents) {
        tokenized.push_back(tokenize(doc.text));
        if (!fixed) {
            for (const auto& t : tokenized.back()) {
                vocab.add(t);
            }
        }
        if (std::find(classes.begin(), classes.end(), doc.label) == classes.end()) {
            classes.push_back(doc.label);
        }
    }
    if (vocab.size() == 0) {
        throw Error(ErrorKind::config, "corpus produced an empty vocabulary");
    }

    VectorizedCorpus out{LabeledDataset(vocab.size(), classes), {}, {}};
    for (std::size_t d = 0; d < documents.size(); ++d) {
        std::vector<double> counts(vocab.size(), 0.0);
        std::size_t known = 0;
        for (const auto& t : tokenized[d]) {
            if (auto idx = vocab.find(t)) {
                counts[*idx] += 1.0;
                ++known;
            }
        }
        if (known == 0) {
            out.warnings.push_back("document '" + documents[d].id + "' has no in-vocabulary tokens");
        }
        out.dataset.add(documents[d].id, documents[d].label, FeatureVector(std::move(counts)));
    }
    out.vocabulary = std::move(vocab);
    return out;
}

struct Turn {
    std::string speaker;
    std::string text;
    std::string label;
};

struct Dialogue {
    std::string id;
    std::vector<Turn> turns;
};

inline std::vector<Dialogue> read_conversations(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open conversations '" + path + "'");
    }
    std::vector<Dialogue> dialogues;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            Dialogue d{j.at("id").get<std::string>(), {}};
            for (const auto& t : j.at("turns")) {
                d.turns.push_back({t.at("speaker").get<std::string>(), t.at("text").get<std::string>(),
                                   t.at("label").get<std::string>()});
            }
            dialogues.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return dialogues;
}

inline void write_conversations(const std::vector<Dialogue>& dialogues, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write conversations '" + path + "'");
    }
    for (const auto& d : dialogues) {
        nlohmann::json turns = nlohmann::json::array();
        for (const auto& t : d.turns) {
            turns.push_back({{"speaker", t.speaker}, {"text", t.text}, {"label", t.label}});
        }
        out << nlohmann::json{{"id", d.id}, {"turns", std::move(turns)}}.dump() << '\n';
    }
}

/// One document per turn, with id "<dialogue>:<turn index>".
inline std::vector<Document> documents_from(const std::vector<Dialogue>& dialogues) {
    std::vector<Document> docs;
    for (const auto& d : dialogues) {
        for (std::size_t t = 0; t < d.turns.size(); ++t) {
            docs.push_back({d.id + ":" + std::to_string(t), d.turns[t].label, d.turns[t].text});
        }
    }
    return docs;
}

} // namespace ffp

#endif
