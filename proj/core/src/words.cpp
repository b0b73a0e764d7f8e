#include "safa/words.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace safa {

std::string rat_to_string(const Rat& x) {
    std::ostringstream os;
    os << numerator(x);
    if (denominator(x) != 1) os << '/' << denominator(x);
    return os.str();
}

Rat rat_from_string(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

std::string ratvec_to_string(const RatVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += rat_to_string(v[i]);
    }
    return s + ")";
}

TapeAlphabet::TapeAlphabet(std::vector<std::string> symbols)
    : TapeAlphabet(std::move(symbols), {}) {}

TapeAlphabet::TapeAlphabet(std::vector<std::string> symbols, std::vector<std::uint32_t> digits)
    : symbols_(std::move(symbols)), digits_(std::move(digits)) {
    if (symbols_.empty()) throw std::invalid_argument("alphabet must be nonempty");
    if (digits_.empty()) {
        digits_.resize(symbols_.size());
        for (std::uint32_t i = 0; i < symbols_.size(); ++i) digits_[i] = i;
    }
    if (digits_.size() != symbols_.size())
        throw std::invalid_argument("digit map size mismatch");
    by_digit_.assign(symbols_.size(), 0);
    std::vector<bool> seen(symbols_.size(), false);
    for (Symbol s = 0; s < symbols_.size(); ++s) {
        std::uint32_t d = digits_[s];
        if (d >= symbols_.size() || seen[d])
            throw std::invalid_argument("digit map is not a bijection");
        seen[d] = true;
        by_digit_[d] = s;
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        for (std::size_t j = i + 1; j < symbols_.size(); ++j)
            if (symbols_[i] == symbols_[j])
                throw std::invalid_argument("duplicate symbol token '" + symbols_[i] + "'");
}

std::optional<Symbol> TapeAlphabet::find(const std::string& token) const {
    for (Symbol s = 0; s < symbols_.size(); ++s)
        if (symbols_[s] == token) return s;
    return std::nullopt;
}

Word::Word(AlphabetPtr alphabet, std::vector<Symbol> letters)
    : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
    if (!alphabet_) throw std::invalid_argument("word without alphabet");
    for (Symbol s : letters_)
        if (s >= alphabet_->size()) throw std::invalid_argument("letter outside alphabet");
}

Word Word::from_tokens(const AlphabetPtr& alphabet, const std::vector<std::string>& tokens) {
    std::vector<Symbol> letters;
    letters.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto s = alphabet->find(t);
        if (!s) throw std::invalid_argument("unknown symbol token '" + t + "'");
        letters.push_back(*s);
    }
    return Word(alphabet, std::move(letters));
}

Word Word::from_chars(const AlphabetPtr& alphabet, const std::string& chars) {
    for (const auto& t : alphabet->tokens())
        if (t.size() != 1)
            throw std::invalid_argument("alphabet has multi-character tokens; cannot parse '" +
                                        chars + "' character-wise");
    std::vector<Symbol> letters;
    letters.reserve(chars.size());
    for (char c : chars) {
        auto s = alphabet->find(std::string(1, c));
        if (!s) throw std::invalid_argument(std::string("unknown symbol '") + c + "'");
        letters.push_back(*s);
    }
    return Word(alphabet, std::move(letters));
}

void Word::push_back(Symbol s) {
    if (!alphabet_ || s >= alphabet_->size())
        throw std::invalid_argument("letter outside alphabet");
    letters_.push_back(s);
}

Word Word::operator+(const Word& rhs) const {
    if (!alphabet_) return rhs;
    if (rhs.alphabet_ && !(*alphabet_ == *rhs.alphabet_))
        throw std::invalid_argument("concatenating words over different alphabets");
    std::vector<Symbol> letters = letters_;
    letters.insert(letters.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(alphabet_, std::move(letters));
}

bool Word::is_prefix_of(const Word& other) const {
    if (size() > other.size()) return false;
    return std::equal(letters_.begin(), letters_.end(), other.letters_.begin());
}

Word Word::prefix(std::size_t n) const {
    if (n > size()) throw std::out_of_range("prefix longer than word");
    return Word(alphabet_, std::vector<Symbol>(letters_.begin(), letters_.begin() + n));
}

std::string Word::str() const {
    if (!alphabet_) return "";
    bool single = true;
    for (const auto& t : alphabet_->tokens()) single = single && t.size() == 1;
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (!single && i) out += '.';
        out += alphabet_->token(letters_[i]);
    }
    return out;
}

namespace {

// Primitive root of p: the shortest prefix r with p = r^k.
Word primitive_root(const Word& p) {
    std::size_t n = p.size();
    for (std::size_t len = 1; len <= n; ++len) {
        if (n % len != 0) continue;
        bool ok = true;
        for (std::size_t i = len; i < n && ok; ++i)
            ok = p.at(i) == p.at(i - len);
        if (ok) return p.prefix(len);
    }
    return p;
}

} // namespace

UltimatelyPeriodicSeq::UltimatelyPeriodicSeq(Word preperiod, Word period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    if (period_.empty()) throw std::invalid_argument("period must be nonempty");
    if (preperiod_.alphabet() && !(*preperiod_.alphabet() == *period_.alphabet()))
        throw std::invalid_argument("preperiod and period over different alphabets");
    if (!preperiod_.alphabet()) preperiod_ = Word(period_.alphabet());
    period_ = primitive_root(period_);
    // Shift the period left through the preperiod while the last preperiod
    // letter matches the last period letter.
    while (!preperiod_.empty() &&
           preperiod_.letters().back() == period_.letters().back()) {
        std::vector<Symbol> rot(period_.letters());
        std::rotate(rot.rbegin(), rot.rbegin() + 1, rot.rend());
        period_ = Word(period_.alphabet(), std::move(rot));
        preperiod_ = preperiod_.prefix(preperiod_.size() - 1);
    }
    period_ = primitive_root(period_);
}

Symbol UltimatelyPeriodicSeq::at(std::uint64_t i) const {
    if (i < preperiod_.size()) return preperiod_.at(i);
    return period_.at((i - preperiod_.size()) % period_.size());
}

Word UltimatelyPeriodicSeq::prefix(std::uint64_t n) const {
    Word w(period_.alphabet());
    for (std::uint64_t i = 0; i < n; ++i) w.push_back(at(i));
    return w;
}

std::string UltimatelyPeriodicSeq::str() const {
    return preperiod_.str() + "(" + period_.str() + ")^w";
}

Rat digit_value(const Word& u) {
    if (u.empty()) return 0;
    std::uint64_t base = u.alphabet()->size();
    // Horner from the last digit: v = (d_n + (d_{n-1} + ...)/b)/b
    Rat v = 0;
    for (std::size_t i = u.size(); i-- > 0;) {
        v += u.alphabet()->digit(u.at(i));
        v /= base;
    }
    return v;
}

RatVec vector_value(const std::vector<Word>& w) {
    RatVec v;
    v.reserve(w.size());
    for (const Word& u : w) v.push_back(digit_value(u));
    return v;
}

Rat seq_value(const UltimatelyPeriodicSeq& s) {
    std::uint64_t base = s.alphabet()->size();
    Rat head = digit_value(s.preperiod());
    Rat scale = inv_pow(base, s.preperiod().size());
    Rat tail = digit_value(s.period()) / (Rat(1) - inv_pow(base, s.period().size()));
    return head + scale * tail;
}

} // namespace safa
