#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gibbslab {

/// Symbols are 0-based internally; model files and dumps use 1-based labels.
using Symbol = int;
using Word = std::vector<Symbol>;

/// 0/1 transition matrix, row = source symbol, column = destination.
using TransitionMatrix = std::vector<std::vector<int>>;

/// Upper bound on enumerated words, default 2^20; GIBBSLAB_ENUM_CAP overrides.
std::size_t enumeration_cap();

/// Throws SizeGuard when `count` exceeds the enumeration cap.
void check_enumeration_size(double count, const char* what);

/// A topologically mixing subshift of finite type. Immutable once validated.
class ShiftSpace {
public:
    /// Checks the matrix shape and entries, rejects empty rows/columns and
    /// non-primitive matrices (powers tested up to the Wielandt bound).
    static ShiftSpace validate(int alphabet_size, const TransitionMatrix& transitions);

    int alphabet_size() const noexcept { return n_; }
    int mixing_time() const noexcept { return mixing_time_; }
    const TransitionMatrix& transitions() const noexcept { return a_; }
    bool allowed(Symbol from, Symbol to) const { return a_[from][to] != 0; }

    bool admissible(std::span<const Symbol> w) const;

    /// Number of admissible words of length n (sum of the entries of A^{n-1}).
    double count_words(int n) const;

    /// All admissible words of length n in lexicographic order.
    std::vector<Word> enumerate_words(int n) const;

    /// Lexicographically smallest admissible word of length m starting at `from`
    /// whose last symbol may be followed by `to`.
    Word connecting_word(Symbol from, Symbol to, int m) const;

    /// Extends w by `horizon` symbols, each the smallest admissible successor.
    Word canonical_extension(const Word& w, int horizon) const;

    /// Admissible continuations of length k that may follow the last symbol of w
    /// (lexicographic). k = 0 yields a single empty word.
    std::vector<Word> continuations(const Word& w, int k) const;

    friend bool operator==(const ShiftSpace& a, const ShiftSpace& b) {
        return a.n_ == b.n_ && a.a_ == b.a_;
    }

private:
    ShiftSpace(int n, TransitionMatrix a, int mixing_time)
        : n_(n), a_(std::move(a)), mixing_time_(mixing_time) {}

    int n_;
    TransitionMatrix a_;
    int mixing_time_;
};

/// Higher-block presentation: symbol i of `space` stands for the word blocks[i].
struct BlockShift {
    ShiftSpace space;
    std::vector<Word> blocks;
    int block_length;

    /// Index of an admissible block, or -1.
    int index_of(std::span<const Symbol> block) const;
};

/// Recodes S into admissible ℓ-words; u→v allowed iff they overlap in ℓ−1
/// symbols (and u0·v is admissible). ℓ = 1 gives S itself.
BlockShift recode(const ShiftSpace& s, int block_length);

/// Minimal k ≥ 1 with A^k > 0 entrywise, or 0 when none exists up to `max_power`.
int primitive_exponent(const TransitionMatrix& a, int max_power);

}  // namespace gibbslab
