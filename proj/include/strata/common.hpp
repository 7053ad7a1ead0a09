#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

using Q = mpq_class;

// canonical a/b
inline Q frac(long a, long b) {
    Q q(a, b);
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q);
Q parse_rational(const std::string& s);

struct PointRef {
    int comp = 0;
    int idx = 0;
    auto operator<=>(const PointRef&) const = default;
};

std::string to_string(const PointRef& p);

// Exit codes are shared with the CLI.
struct StrataError : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 4; }
};
struct MalformedSignature : StrataError {
    using StrataError::StrataError;
    int exit_code() const override { return 2; }
};
struct InvalidResidueCondition : StrataError {
    using StrataError::StrataError;
    int exit_code() const override { return 2; }
};
struct ParseError : StrataError {
    using StrataError::StrataError;
    int exit_code() const override { return 2; }
};
struct IllegalGraph : StrataError {
    using StrataError::StrataError;
};
struct InternalInconsistency : StrataError {
    using StrataError::StrataError;
};
struct NotImplemented : StrataError {
    using StrataError::StrataError;
};
struct IncompatibleClutch : StrataError {
    using StrataError::StrataError;
};
struct NotABic : StrataError {
    using StrataError::StrataError;
};
struct NoSuchLevel : StrataError {
    using StrataError::StrataError;
};
struct Disconnected : StrataError {
    using StrataError::StrataError;
};
struct LegNotOnLevel : StrataError {
    using StrataError::StrataError;
};
struct RedundantCondition : StrataError {
    using StrataError::StrataError;
};
struct NotCodimOne : StrataError {
    using StrataError::StrataError;
};
struct AmbientMismatch : StrataError {
    using StrataError::StrataError;
};
struct FileCorrupt : StrataError {
    using StrataError::StrataError;
};

// rank of an integer matrix (rows of equal length), exact
int matrix_rank(std::vector<std::vector<int>> rows);

template <class T>
void hash_combine(std::size_t& seed, const T& v) {
    seed ^= std::hash<T>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) hash_combine(h, x);
        return h;
    }
};

}  // namespace strata
