#include "safa/words.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace safa;
using namespace safa::testing;

TEST_CASE("digit_value of finite words") {
    auto bin = alpha({"0", "1"});
    auto tern = alpha({"0", "1", "2"});
    CHECK(digit_value(w(bin, "1011")) == Rat(11, 16));
    CHECK(digit_value(Word(bin)) == 0);
    // direct sum: 2/3 + 2/9
    CHECK(digit_value(w(tern, "22")) == Rat(2, 3) + Rat(2, 9));
    CHECK(digit_value(w(tern, "22")) == Rat(8, 9));
}

TEST_CASE("vector_value is componentwise") {
    auto bin = alpha({"0", "1"});
    auto tern = alpha({"0", "1", "2"});
    RatVec v = vector_value({w(bin, "1011"), w(bin, "11")});
    CHECK(v == RatVec{Rat(11, 16), Rat(3, 4)});
    CHECK(vector_value({Word(bin), Word(tern)}) == RatVec{Rat(0), Rat(0)});
    CHECK(vector_value({w(bin, "0"), w(tern, "22")}) == RatVec{Rat(0), Rat(8, 9)});
}

TEST_CASE("seq_value agrees with partial sums and exact limits") {
    auto bin = alpha({"0", "1"});
    UltimatelyPeriodicSeq s01 = ups(bin, "", "01");
    // partial-sum oracle: the first 30 digits bracket the limit within 2^-30
    Rat partial = digit_value(s01.prefix(30));
    CHECK(rat_abs(seq_value(s01) - partial) <= inv_pow(2, 30));
    CHECK(seq_value(s01) == Rat(1, 3));

    CHECK(seq_value(ups(bin, "", "0")) == 0);
    CHECK(seq_value(ups(bin, "1", "0")) == Rat(1, 2));
}

TEST_CASE("concatenation law") {
    Rng rng(20240901);
    auto tern = alpha({"0", "1", "2"});
    for (int iter = 0; iter < 200; ++iter) {
        Word u(tern), v(tern);
        std::size_t nu = rng.next(0, 6), nv = rng.next(0, 6);
        for (std::size_t i = 0; i < nu; ++i) u.push_back(rng.next(0, 2));
        for (std::size_t i = 0; i < nv; ++i) v.push_back(rng.next(0, 2));
        CHECK(digit_value(u + v) == digit_value(u) + inv_pow(3, u.size()) * digit_value(v));
    }
}

TEST_CASE("seq_value partial-sum bracketing") {
    Rng rng(20240902);
    auto bin = alpha({"0", "1"});
    for (int iter = 0; iter < 100; ++iter) {
        Word pre(bin), per(bin);
        std::size_t np = rng.next(0, 4);
        for (std::size_t i = 0; i < np; ++i) pre.push_back(rng.next(0, 1));
        std::size_t pp = rng.next(1, 4);
        for (std::size_t i = 0; i < pp; ++i) per.push_back(rng.next(0, 1));
        UltimatelyPeriodicSeq s(pre, per);
        Rat limit = seq_value(s);
        for (std::uint64_t n : {1, 3, 7, 12}) {
            CHECK(rat_abs(limit - digit_value(s.prefix(n))) <= inv_pow(2, n));
        }
    }
}

TEST_CASE("digit_value is injective on words of a fixed length") {
    auto bin = alpha({"0", "1"});
    for (std::size_t len : {1u, 2u, 3u, 4u, 5u}) {
        std::set<Rat> seen;
        std::vector<Symbol> odo(len, 0);
        for (;;) {
            Word word(bin, odo);
            CHECK(seen.insert(digit_value(word)).second);
            std::size_t k = len;
            while (k > 0 && odo[k - 1] == 1) odo[--k] = 0;
            if (k == 0) break;
            odo[k - 1] = 1;
        }
    }
}

TEST_CASE("value collisions only between 0^w and max^w tails") {
    auto bin = alpha({"0", "1"});
    // 0.1 000... = 0.0 111...
    UltimatelyPeriodicSeq a = ups(bin, "1", "0");
    UltimatelyPeriodicSeq b = ups(bin, "0", "1");
    CHECK(seq_value(a) == seq_value(b));
    CHECK_FALSE(a == b);
    // no collision for non-stationary tails
    CHECK(seq_value(ups(bin, "", "01")) != seq_value(ups(bin, "", "10")));
}

TEST_CASE("normalization is canonical: structural equality = sequence equality") {
    auto bin = alpha({"0", "1"});
    CHECK(ups(bin, "10", "10") == ups(bin, "", "10"));
    CHECK(ups(bin, "1", "01") == ups(bin, "", "10"));
    CHECK(ups(bin, "", "0101") == ups(bin, "", "01"));
    CHECK(ups(bin, "110", "110110") == ups(bin, "", "110"));

    Rng rng(20240903);
    for (int iter = 0; iter < 100; ++iter) {
        Word pre(bin), per(bin);
        std::size_t np = rng.next(0, 3);
        for (std::size_t i = 0; i < np; ++i) pre.push_back(rng.next(0, 1));
        std::size_t pp = rng.next(1, 3);
        for (std::size_t i = 0; i < pp; ++i) per.push_back(rng.next(0, 1));
        UltimatelyPeriodicSeq s(pre, per);
        UltimatelyPeriodicSeq t(pre + per, per);
        CHECK(s == t); // same sequence, structurally normalized
        for (std::uint64_t i = 0; i < 12; ++i) CHECK(s.at(i) == t.at(i));
    }
}

TEST_CASE("custom digit bijections") {
    // reversed digits: '1' -> 0, '0' -> 1
    auto flipped = std::make_shared<TapeAlphabet>(std::vector<std::string>{"0", "1"},
                                                  std::vector<std::uint32_t>{1, 0});
    CHECK(digit_value(Word::from_chars(flipped, "0")) == Rat(1, 2));
    CHECK(digit_value(Word::from_chars(flipped, "1")) == Rat(0));
    CHECK(flipped->symbol_of_digit(0) == 1);
}

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(TapeAlphabet({}), std::invalid_argument);
    CHECK_THROWS_AS(TapeAlphabet({"a", "a"}), std::invalid_argument);
    CHECK_THROWS_AS(TapeAlphabet({"a", "b"}, {0, 0}), std::invalid_argument);
    auto bin = alpha({"0", "1"});
    CHECK_THROWS_AS(Word::from_chars(bin, "02"), std::invalid_argument);
    CHECK_THROWS_AS(UltimatelyPeriodicSeq(Word(bin), Word(bin)), std::invalid_argument);
}
