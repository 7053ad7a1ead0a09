#include "doctest.h"

#include <random>

#include "strata/strata_core.hpp"

using namespace strata;

namespace {

// determinant by cofactor expansion
Q det(const std::vector<std::vector<Q>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    Q d = 0;
    for (size_t c = 0; c < n; ++c) {
        std::vector<std::vector<Q>> sub;
        for (size_t r = 1; r < n; ++r) {
            std::vector<Q> row;
            for (size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            sub.push_back(row);
        }
        Q t = m[0][c] * det(sub);
        d += (c % 2 ? -t : t);
    }
    return d;
}

// largest k with a nonzero k x k minor
int rank_by_minors(const std::vector<std::vector<int>>& a) {
    int rows = static_cast<int>(a.size()), cols = rows ? static_cast<int>(a[0].size()) : 0;
    for (int k = std::min(rows, cols); k > 0; --k) {
        std::vector<bool> rs(rows, false), cs(cols, false);
        std::fill(rs.end() - k, rs.end(), true);
        do {
            std::fill(cs.begin(), cs.end(), false);
            std::fill(cs.end() - k, cs.end(), true);
            do {
                std::vector<std::vector<Q>> m;
                for (int r = 0; r < rows; ++r) {
                    if (!rs[r]) continue;
                    std::vector<Q> row;
                    for (int c = 0; c < cols; ++c)
                        if (cs[c]) row.push_back(a[r][c]);
                    m.push_back(row);
                }
                if (det(m) != 0) return k;
            } while (std::next_permutation(cs.begin(), cs.end()));
        } while (std::next_permutation(rs.begin(), rs.end()));
    }
    return 0;
}

}  // namespace

TEST_CASE("rationals print and parse in lowest terms") {
    CHECK(to_string(frac(-2, 4)) == "-1/2");
    CHECK(to_string(frac(6, 3)) == "2");
    CHECK(parse_rational("3/6") == frac(1, 2));
    CHECK(parse_rational("-7") == Q(-7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("matrix rank agrees with nonzero minors") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> val(-2, 2), dim(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        int r = dim(rng), c = dim(rng);
        std::vector<std::vector<int>> a(r, std::vector<int>(c));
        for (auto& row : a)
            for (auto& x : row) x = val(rng);
        if (trial % 3 == 0 && r > 1) a[r - 1] = a[0];  // force dependent rows now and then
        CHECK(matrix_rank(a) == rank_by_minors(a));
    }
}

TEST_CASE("signature invariants") {
    Signature s({4});
    CHECK(s.g() == 3);
    CHECK(s.n() == 1);
    Signature m({23, 5, -13, -17});
    CHECK(m.g() == 0);
    CHECK(m.p() == 2);
    CHECK(m.z() == 2);
    CHECK(Signature({0}).g() == 1);
    CHECK_THROWS_AS(Signature({1}), MalformedSignature);
    CHECK_THROWS_AS(Signature({-1, -1}), MalformedSignature);
    CHECK_THROWS_AS(Signature(std::vector<int>{}), MalformedSignature);
}

TEST_CASE("strata are interned") {
    CHECK(make_stratum({2}) == make_stratum({2}));
    CHECK(make_stratum({1, 1}) != make_stratum({2}));
    auto a = make_stratum(std::vector<int>{3, -1, -2, -2}, {{{0, 2}}});
    auto b = make_stratum(std::vector<int>{3, -1, -2, -2}, {{{0, 2}}});
    CHECK(a == b);
}

TEST_CASE("dimensions") {
    CHECK(make_stratum({2})->dim() == 3);
    CHECK(make_stratum({4})->dim() == 5);
    CHECK(make_stratum({0, 0})->dim() == 2);
    CHECK(make_stratum(std::vector<std::vector<int>>{{0, 0}, {0}})->dim() == 4);

    // one independent residue condition drops the dimension by one; the
    // condition on every pole of a component holds by the residue theorem
    auto free = make_stratum(std::vector<int>{2, 2, -2, -2});
    auto one = make_stratum(std::vector<int>{2, 2, -2, -2}, {{{0, 2}}});
    auto all = make_stratum(std::vector<int>{2, 2, -2, -2}, {{{0, 2}, {0, 3}}});
    CHECK(one->dim() == free->dim() - 1);
    CHECK(all->dim() == free->dim());

    CHECK(make_stratum({1, -1})->is_empty());
    CHECK_FALSE(make_stratum({2})->is_empty());
}

TEST_CASE("residue conditions are validated") {
    CHECK_THROWS_AS(make_stratum(std::vector<int>{2, 2, -2, -2}, {{{0, 0}}}), InvalidResidueCondition);
    CHECK_THROWS_AS(make_stratum(std::vector<int>{2, 2, -2, -2}, {{{0, 7}}}), InvalidResidueCondition);
    CHECK_THROWS_AS(make_stratum(std::vector<int>{2, 2, -2, -2}, {{}}), InvalidResidueCondition);
    CHECK_THROWS_AS(make_stratum(std::vector<int>{1, 1, -1, -1, 0, 0}, {{{0, 2}}}), InvalidResidueCondition);
}
