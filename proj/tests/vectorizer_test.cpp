#include <gtest/gtest.h>

#include <map>
#include <random>

#include <ffp/vectorizer.hpp>

using namespace ffp;

TEST(Tokenize, LowercaseAlphanumericRuns) {
    EXPECT_EQ(tokenize("Hello, WORLD! it's 2 o'clock"),
              (std::vector<std::string>{"hello", "world", "it", "s", "2", "o", "clock"}));
    EXPECT_TRUE(tokenize(" ... ").empty());
}

TEST(VectorizeText, FreshVocabularyCounts) {
    std::vector<Document> docs = {{"d0", "x", "a b a"}};
    auto corpus = vectorize_text(docs);
    EXPECT_EQ(corpus.vocabulary.tokens(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(corpus.dataset.instances()[0].vector, FeatureVector({2, 1}));
    EXPECT_TRUE(corpus.warnings.empty());
}

TEST(VectorizeText, UnknownTokensUnderFixedVocabulary) {
    std::vector<Document> docs = {{"d0", "x", "zebra yak"}, {"d1", "y", "cat cat dog"}};
    auto corpus = vectorize_text(docs, Vocabulary({"cat", "dog"}));
    EXPECT_EQ(corpus.dataset.instances()[0].vector, FeatureVector({0, 0}));
    EXPECT_EQ(corpus.dataset.instances()[1].vector, FeatureVector({2, 1}));
    ASSERT_EQ(corpus.warnings.size(), 1u);
    EXPECT_NE(corpus.warnings[0].find("d0"), std::string::npos);
}

TEST(VectorizeText, Errors) {
    std::vector<Document> none;
    EXPECT_THROW(vectorize_text(none), Error);
    std::vector<Document> blank = {{"d0", "x", "!!!"}};
    EXPECT_THROW(vectorize_text(blank), Error);
}

TEST(VectorizeText, MatchesDictionaryCounterOnToyAuthorshipCorpus) {
    const std::vector<std::string> austen = {"it", "is", "a", "truth", "universally", "acknowledged", "that",
                                             "single", "man", "in", "possession", "of", "good", "fortune"};
    const std::vector<std::string> melville = {"call", "me", "ishmael", "some", "years", "ago", "never",
                                               "mind", "how", "long", "precisely", "having", "little", "money"};
    std::mt19937_64 rng(12);
    std::vector<Document> docs;
    for (int d = 0; d < 20; ++d) {
        const auto& words = d % 2 ? melville : austen;
        std::string text;
        for (int w = 0; w < 30; ++w) {
            text += words[rng() % words.size()];
            text += (w % 7 == 0) ? ", " : " ";
        }
        docs.push_back({"doc" + std::to_string(d), d % 2 ? "melville" : "austen", text});
    }
    auto corpus = vectorize_text(docs);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::map<std::string, int> naive;
        std::string word;
        for (char c : docs[d].text + " ") {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            } else if (!word.empty()) {
                ++naive[word];
                word.clear();
            }
        }
        const auto& v = corpus.dataset.instances()[d].vector;
        for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i) {
            const auto& token = corpus.vocabulary.tokens()[i];
            EXPECT_EQ(v[i], naive.count(token) ? naive[token] : 0) << token;
        }
    }
    EXPECT_EQ(corpus.dataset.classes(), (std::vector<std::string>{"austen", "melville"}));
}

TEST(VectorizeText, ConcatenationIsAdditive) {
    std::vector<Document> docs = {{"a", "x", "the cat sat on the mat"}, {"b", "x", "the dog ate the cat"}};
    auto corpus = vectorize_text(docs);
    std::vector<Document> joined = {{"ab", "x", docs[0].text + " " + docs[1].text}};
    auto sum = vectorize_text(joined, corpus.vocabulary);
    const auto& a = corpus.dataset.instances()[0].vector;
    const auto& b = corpus.dataset.instances()[1].vector;
    const auto& ab = sum.dataset.instances()[0].vector;
    for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i) {
        EXPECT_EQ(ab[i], a[i] + b[i]);
    }
}

TEST(Conversations, RoundTripAndDocuments) {
    std::vector<Dialogue> dialogues = {
        {"d1", {{"A", "Hi there!", "neutral"}, {"B", "You again?", "disgust"}}},
        {"d2", {{"A", "I \"love\" it", "happiness"}}},
    };
    const std::string path = ::testing::TempDir() + "ffp_conversations.jsonl";
    write_conversations(dialogues, path);
    auto back = read_conversations(path);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].turns[0].text, "I \"love\" it");
    auto docs = documents_from(back);
    ASSERT_EQ(docs.size(), 3u);
    EXPECT_EQ(docs[1].id, "d1:1");
    EXPECT_EQ(docs[1].label, "disgust");
    EXPECT_EQ(docs[2].id, "d2:0");
}
