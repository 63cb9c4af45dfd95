#include "gibbslab/shift_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gibbslab/error.hpp"

namespace gibbslab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::RowColumnEmpty: return "RowColumnEmpty";
        case ErrorKind::NotPrimitive: return "NotPrimitive";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::NonPositive: return "NonPositive";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::NotLattice: return "NotLattice";
        case ErrorKind::SizeGuard: return "SizeGuard";
        case ErrorKind::Schema: return "Schema";
        case ErrorKind::NoPath: return "NoPath";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SolveFailure: return "SolveFailure";
        case ErrorKind::Undefined: return "Undefined";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::ZeroProbability: return "ZeroProbability";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoConvergence:
        case ErrorKind::SolveFailure:
        case ErrorKind::Undefined:
        case ErrorKind::DegenerateVariance:
        case ErrorKind::ZeroProbability:
        case ErrorKind::NoPath:
            return true;
        default:
            return false;
    }
}

std::size_t enumeration_cap() {
    constexpr std::size_t kDefault = std::size_t{1} << 20;
    if (const char* env = std::getenv("GIBBSLAB_ENUM_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefault;
}

void check_enumeration_size(double count, const char* what) {
    const auto cap = static_cast<double>(enumeration_cap());
    if (!(count <= cap)) {
        throw Error(ErrorKind::SizeGuard, std::string(what) + " needs " + std::to_string(count) +
                                              " entries, cap is " + std::to_string(cap));
    }
}

namespace {

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix bool_product(const BoolMatrix& x, const TransitionMatrix& a) {
    const std::size_t n = x.size();
    BoolMatrix out(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (x[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (a[k][j]) out[i][j] = 1;
    return out;
}

bool all_positive(const BoolMatrix& x) {
    for (const auto& row : x)
        for (char v : row)
            if (!v) return false;
    return true;
}

}  // namespace

int primitive_exponent(const TransitionMatrix& a, int max_power) {
    const std::size_t n = a.size();
    BoolMatrix p(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[i][j] = a[i][j] ? 1 : 0;
    for (int k = 1; k <= max_power; ++k) {
        if (all_positive(p)) return k;
        p = bool_product(p, a);
    }
    return 0;
}

ShiftSpace ShiftSpace::validate(int alphabet_size, const TransitionMatrix& transitions) {
    if (alphabet_size < 1) throw Error(ErrorKind::InvalidArgument, "alphabet size must be positive");
    if (static_cast<int>(transitions.size()) != alphabet_size)
        throw Error(ErrorKind::InvalidArgument, "transition matrix must have N rows");
    for (const auto& row : transitions) {
        if (static_cast<int>(row.size()) != alphabet_size)
            throw Error(ErrorKind::InvalidArgument, "transition matrix must be square");
        for (int v : row)
            if (v != 0 && v != 1) throw Error(ErrorKind::InvalidArgument, "transition entries must be 0 or 1");
    }
    for (int i = 0; i < alphabet_size; ++i) {
        bool row = false, col = false;
        for (int j = 0; j < alphabet_size; ++j) {
            row = row || transitions[i][j];
            col = col || transitions[j][i];
        }
        if (!row || !col)
            throw Error(ErrorKind::RowColumnEmpty, "symbol " + std::to_string(i + 1) + " has an empty row or column");
    }
    const int wielandt = (alphabet_size - 1) * (alphabet_size - 1) + 1;
    const int m = primitive_exponent(transitions, wielandt);
    if (m == 0) throw Error(ErrorKind::NotPrimitive, "no power up to the Wielandt bound is strictly positive");
    return ShiftSpace(alphabet_size, transitions, m);
}

bool ShiftSpace::admissible(std::span<const Symbol> w) const {
    for (Symbol s : w)
        if (s < 0 || s >= n_) return false;
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (!allowed(w[k], w[k + 1])) return false;
    return true;
}

double ShiftSpace::count_words(int n) const {
    if (n < 1) return 0.0;
    std::vector<double> v(n_, 1.0);
    for (int step = 1; step < n; ++step) {
        std::vector<double> next(n_, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (a_[i][j]) next[i] += v[j];
        v = std::move(next);
    }
    double total = 0.0;
    for (double x : v) total += x;
    return total;
}

std::vector<Word> ShiftSpace::enumerate_words(int n) const {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "word length must be >= 1");
    check_enumeration_size(std::pow(static_cast<double>(n_), n), "word enumeration");
    std::vector<Word> out;
    Word w;
    w.reserve(n);
    // depth-first, smallest symbol first
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(w.size()) == n) {
            out.push_back(w);
            return;
        }
        for (Symbol s = 0; s < n_; ++s) {
            if (!w.empty() && !allowed(w.back(), s)) continue;
            w.push_back(s);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
    return out;
}

Word ShiftSpace::connecting_word(Symbol from, Symbol to, int m) const {
    if (from < 0 || from >= n_ || to < 0 || to >= n_)
        throw Error(ErrorKind::InvalidArgument, "symbol out of range");
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "connecting length must be >= 1");
    // ok[r][s]: from symbol s, r more symbols can be appended and then `to`.
    std::vector<std::vector<char>> ok(m, std::vector<char>(n_, 0));
    for (Symbol s = 0; s < n_; ++s) ok[0][s] = allowed(s, to) ? 1 : 0;
    for (int r = 1; r < m; ++r)
        for (Symbol s = 0; s < n_; ++s)
            for (Symbol t = 0; t < n_ && !ok[r][s]; ++t)
                if (allowed(s, t) && ok[r - 1][t]) ok[r][s] = 1;
    if (!ok[m - 1][from])
        throw Error(ErrorKind::NoPath, "no admissible word of length " + std::to_string(m) + " connects " +
                                           std::to_string(from + 1) + " to " + std::to_string(to + 1));
    Word w{from};
    for (int r = m - 2; r >= 0; --r) {
        for (Symbol t = 0; t < n_; ++t) {
            if (allowed(w.back(), t) && ok[r][t]) {
                w.push_back(t);
                break;
            }
        }
    }
    return w;
}

Word ShiftSpace::canonical_extension(const Word& w, int horizon) const {
    if (!admissible(w)) throw Error(ErrorKind::InvalidArgument, "word is not admissible");
    Word out = w;
    for (int k = 0; k < horizon; ++k) {
        for (Symbol t = 0; t < n_; ++t) {
            if (out.empty() || allowed(out.back(), t)) {
                out.push_back(t);
                break;
            }
        }
    }
    return out;
}

std::vector<Word> ShiftSpace::continuations(const Word& w, int k) const {
    std::vector<Word> out;
    Word c;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(c.size()) == k) {
            out.push_back(c);
            return;
        }
        const Symbol prev = c.empty() ? (w.empty() ? -1 : w.back()) : c.back();
        for (Symbol s = 0; s < n_; ++s) {
            if (prev >= 0 && !allowed(prev, s)) continue;
            c.push_back(s);
            self(self);
            c.pop_back();
        }
    };
    rec(rec);
    return out;
}

int BlockShift::index_of(std::span<const Symbol> block) const {
    // blocks are sorted lexicographically
    auto it = std::lower_bound(blocks.begin(), blocks.end(), block,
                               [](const Word& a, std::span<const Symbol> b) {
                                   return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                               });
    if (it == blocks.end() || !std::equal(it->begin(), it->end(), block.begin(), block.end())) return -1;
    return static_cast<int>(it - blocks.begin());
}

BlockShift recode(const ShiftSpace& s, int block_length) {
    if (block_length < 1) throw Error(ErrorKind::InvalidArgument, "block length must be >= 1");
    if (block_length == 1) {
        std::vector<Word> blocks;
        for (Symbol a = 0; a < s.alphabet_size(); ++a) blocks.push_back({a});
        return BlockShift{s, std::move(blocks), 1};
    }
    std::vector<Word> blocks = s.enumerate_words(block_length);
    const auto n = static_cast<int>(blocks.size());
    TransitionMatrix a(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Word& u = blocks[i];
            const Word& v = blocks[j];
            if (std::equal(u.begin() + 1, u.end(), v.begin(), v.end() - 1) && s.allowed(u.back(), v.back()))
                a[i][j] = 1;
        }
    return BlockShift{ShiftSpace::validate(n, a), std::move(blocks), block_length};
}

}  // namespace gibbslab
