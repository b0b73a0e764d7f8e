// Tape alphabets, finite words, eventually periodic sequences, and their
// exact radix valuations.

#pragma once

#include "safa/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace safa {

using Symbol = std::uint32_t; // index into a TapeAlphabet

/// An ordered alphabet of distinct symbol tokens together with a digit
/// bijection onto {0, ..., |A|-1}. The default bijection is declaration
/// order; a custom permutation may be supplied.
class TapeAlphabet {
public:
    explicit TapeAlphabet(std::vector<std::string> symbols);
    TapeAlphabet(std::vector<std::string> symbols, std::vector<std::uint32_t> digits);

    std::size_t size() const { return symbols_.size(); }
    const std::string& token(Symbol s) const { return symbols_.at(s); }
    const std::vector<std::string>& tokens() const { return symbols_; }

    std::uint32_t digit(Symbol s) const { return digits_.at(s); }
    /// Symbol whose digit value is d.
    Symbol symbol_of_digit(std::uint32_t d) const { return by_digit_.at(d); }

    std::optional<Symbol> find(const std::string& token) const;
    bool contains(const std::string& token) const { return find(token).has_value(); }

    bool operator==(const TapeAlphabet& other) const {
        return symbols_ == other.symbols_ && digits_ == other.digits_;
    }

private:
    std::vector<std::string> symbols_;
    std::vector<std::uint32_t> digits_;   // symbol index -> digit value
    std::vector<Symbol> by_digit_;        // digit value -> symbol index
};

using AlphabetPtr = std::shared_ptr<const TapeAlphabet>;

/// A finite word over a tape alphabet. The empty word is representable.
class Word {
public:
    Word() = default;
    explicit Word(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
    Word(AlphabetPtr alphabet, std::vector<Symbol> letters);

    /// Parse from symbol tokens.
    static Word from_tokens(const AlphabetPtr& alphabet, const std::vector<std::string>& tokens);
    /// Parse from a string, one character per symbol. Requires every token of
    /// the alphabet to be a single character.
    static Word from_chars(const AlphabetPtr& alphabet, const std::string& chars);

    const AlphabetPtr& alphabet() const { return alphabet_; }
    const std::vector<Symbol>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Symbol at(std::size_t i) const { return letters_.at(i); }

    void push_back(Symbol s);
    Word operator+(const Word& rhs) const; // concatenation, same alphabet

    bool is_prefix_of(const Word& other) const;
    Word prefix(std::size_t n) const;

    /// Human-readable rendering; single-character tokens concatenate without
    /// separators, otherwise tokens are joined by '.'.
    std::string str() const;

    bool operator==(const Word& rhs) const { return letters_ == rhs.letters_; }
    auto operator<=>(const Word& rhs) const { return letters_ <=> rhs.letters_; }

private:
    AlphabetPtr alphabet_;
    std::vector<Symbol> letters_;
};

/// An eventually periodic sequence pre . period^omega, kept in normal form:
/// the period is primitive and the preperiod is as short as possible, so
/// structural equality coincides with sequence equality.
class UltimatelyPeriodicSeq {
public:
    UltimatelyPeriodicSeq(Word preperiod, Word period);

    const Word& preperiod() const { return preperiod_; }
    const Word& period() const { return period_; }
    const AlphabetPtr& alphabet() const { return period_.alphabet(); }

    /// Symbol at position i of the infinite sequence.
    Symbol at(std::uint64_t i) const;
    /// Finite prefix of length n.
    Word prefix(std::uint64_t n) const;

    std::string str() const;

    bool operator==(const UltimatelyPeriodicSeq& rhs) const {
        return preperiod_ == rhs.preperiod_ && period_ == rhs.period_;
    }

private:
    Word preperiod_;
    Word period_;
};

/// Sum_i digit(u_i) |A|^-i, exactly. The empty word maps to 0.
Rat digit_value(const Word& u);

/// Componentwise digit_value, one word per tape.
RatVec vector_value(const std::vector<Word>& w);

/// Exact limit value of an eventually periodic sequence.
Rat seq_value(const UltimatelyPeriodicSeq& s);

} // namespace safa
