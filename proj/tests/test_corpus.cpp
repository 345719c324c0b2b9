#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "semchange/corpus.hpp"
#include "semchange/errors.hpp"

using namespace semchange;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

} // namespace

TEST_CASE("read_tokens splits, lowercases, and preserves order") {
    const auto path = write_temp("semchange_tok1.txt", "the gay nineties\n");
    const TokenStream stream = read_tokens(path, EpochId{1890});
    CHECK(stream.tokens == std::vector<std::string>{"the", "gay", "nineties"});
    CHECK(stream.epoch.label == 1890);
}

TEST_CASE("read_tokens forces lowercase") {
    const auto path = write_temp("semchange_tok2.txt", "The THE the");
    CHECK(read_tokens(path, EpochId{0}).tokens ==
          std::vector<std::string>{"the", "the", "the"});
}

TEST_CASE("read_tokens error paths") {
    const auto empty = write_temp("semchange_tok3.txt", "");
    CHECK_THROWS_AS(read_tokens(empty, EpochId{0}), EmptyCorpus);
    CHECK_THROWS_AS(read_tokens("/nonexistent/file.txt", EpochId{0}), IoError);
    std::string invalid = "ab";
    invalid += '\xFF';
    invalid += '\xFE';
    invalid += "cd";
    const auto bad = write_temp("semchange_tok4.txt", invalid);
    CHECK_THROWS_AS(read_tokens(bad, EpochId{0}), InvalidEncoding);
}

TEST_CASE("epoch_counts is exact multiset counting") {
    TokenStream stream{EpochId{0}, {"a", "b", "a"}};
    auto counts = epoch_counts(stream);
    CHECK(counts.at("a") == 2);
    CHECK(counts.at("b") == 1);

    stream.tokens = {"x"};
    CHECK(epoch_counts(stream).at("x") == 1);

    // loop oracle
    stream.tokens.assign(1000, "w");
    std::int64_t expected = 0;
    for (const auto& t : stream.tokens)
        if (t == "w") ++expected;
    CHECK(epoch_counts(stream).at("w") == expected);

    stream.tokens.clear();
    CHECK_THROWS_AS(epoch_counts(stream), EmptyCorpus);
}

TEST_CASE("build_vocabulary intersects at threshold") {
    std::vector<CountTable> epochs = {{{"a", 100}, {"b", 5}}, {{"a", 200}, {"b", 500}}};
    const Vocabulary vocab = build_vocabulary(epochs, 100);
    CHECK(vocab.words == std::vector<std::string>{"a"});
    CHECK(vocab.counts[0] == std::vector<std::int64_t>{100, 200});
}

TEST_CASE("build_vocabulary identity case keeps everything") {
    std::vector<CountTable> epochs = {{{"a", 1}, {"b", 2}, {"c", 3}},
                                      {{"a", 1}, {"b", 2}, {"c", 3}}};
    CHECK(build_vocabulary(epochs, 1).words == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("build_vocabulary: each word failing in one epoch empties the intersection") {
    // three epochs, each word below threshold in exactly one of them
    std::vector<CountTable> epochs = {
        {{"a", 1}, {"b", 9}, {"c", 9}},
        {{"a", 9}, {"b", 1}, {"c", 9}},
        {{"a", 9}, {"b", 9}, {"c", 1}},
    };
    // enumeration oracle over the rule
    for (const std::string word : {"a", "b", "c"}) {
        bool everywhere = true;
        for (const auto& e : epochs) everywhere = everywhere && e.at(word) >= 5;
        CHECK_FALSE(everywhere);
    }
    CHECK_THROWS_AS(build_vocabulary(epochs, 5), NoCommonVocabulary);
}

TEST_CASE("vocabulary counts respect the threshold invariant") {
    std::vector<CountTable> epochs = {{{"a", 7}, {"b", 3}, {"c", 11}},
                                      {{"a", 4}, {"b", 8}, {"c", 6}},
                                      {{"a", 9}, {"b", 5}, {"c", 4}}};
    const Vocabulary vocab = build_vocabulary(epochs, 4);
    for (const auto& row : vocab.counts)
        for (auto c : row) CHECK(c >= vocab.min_count);
}

TEST_CASE("vocabulary is invariant under epoch permutation up to column order") {
    std::vector<CountTable> epochs = {{{"a", 7}, {"b", 3}}, {{"a", 4}, {"b", 8}},
                                      {{"a", 9}, {"b", 5}}};
    const Vocabulary forward = build_vocabulary(epochs, 3);
    std::vector<CountTable> reversed(epochs.rbegin(), epochs.rend());
    const Vocabulary backward = build_vocabulary(reversed, 3);
    CHECK(forward.words == backward.words);
}

TEST_CASE("build_vocabulary is idempotent on retained counts") {
    std::vector<CountTable> epochs = {{{"a", 7}, {"b", 3}, {"z", 5}},
                                      {{"a", 4}, {"b", 8}, {"z", 5}}};
    const Vocabulary vocab = build_vocabulary(epochs, 3);
    std::vector<CountTable> retained(2);
    for (std::size_t i = 0; i < vocab.words.size(); ++i)
        for (std::size_t e = 0; e < 2; ++e)
            retained[e][vocab.words[i]] = vocab.counts[i][e];
    const Vocabulary again = build_vocabulary(retained, 3);
    CHECK(again.words == vocab.words);
    CHECK(again.counts == vocab.counts);
}

TEST_CASE("allowlist restricts the vocabulary") {
    std::vector<CountTable> epochs = {{{"a", 9}, {"b", 9}}, {{"a", 9}, {"b", 9}}};
    std::unordered_set<std::string> allow{"b"};
    CHECK(build_vocabulary(epochs, 1, &allow).words == std::vector<std::string>{"b"});
}
