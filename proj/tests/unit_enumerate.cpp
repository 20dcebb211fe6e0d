#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "chains/enumerate.hpp"

using namespace chains;

namespace {

// unique temp path that is cleaned up when the guard dies
struct temp_file {
    std::filesystem::path path;
    explicit temp_file(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove(path);
    }
    ~temp_file() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("count table matches exhaustive enumeration on the full small grid") {
    const count_table_t table = count_table(6, 6);
    for (long long a = 0; a <= 6; ++a)
        for (long long b = 0; b <= 6; ++b) {
            INFO("a=" << a << " b=" << b);
            CHECK(table.at(a, b) == brute_force_count(a, b));
        }
}

TEST_CASE("diagonal counts reproduce the published initial values") {
    const count_table_t table = count_table(10, 10);
    const long expected[] = {2, 5, 13, 32, 77, 178, 399, 877, 1882, 3959};
    for (long long n = 1; n <= 10; ++n) CHECK(table.at(n, n) == expected[n - 1]);
    CHECK(table.at(0, 0) == 1);
    CHECK(table.at(0, 7) == 1);  // only the vertical run
    CHECK(table.at(7, 0) == 1);
}

TEST_CASE("count table is independent of the knapsack pass order") {
    auto vecs = primitive_vectors_in_box(5, 5);
    std::reverse(vecs.begin(), vecs.end());
    const count_table_t reversed = count_table_with_order(5, 5, vecs);
    const count_table_t sorted = count_table(5, 5);
    for (long long a = 0; a <= 5; ++a)
        for (long long b = 0; b <= 5; ++b) CHECK(reversed.at(a, b) == sorted.at(a, b));
}

TEST_CASE("count tables nest: a cell value does not depend on the box size") {
    const count_table_t big = count_table(9, 12);
    for (auto [a, b] : {std::pair<long long, long long>{3, 5}, {9, 2}, {7, 12}, {9, 12}})
        CHECK(big.at(a, b) == count_table(a, b).at(a, b));
}

TEST_CASE("configuration enumeration visits each chain exactly once") {
    std::vector<chain_config> seen;
    enumerate_configs(3, 3, [&](const chain_config& c) { seen.push_back(c); });
    CHECK(seen.size() == 13);  // p(3,3)
    for (const chain_config& c : seen) CHECK(endpoint(c) == point{3, 3});
    for (std::size_t i = 0; i < seen.size(); ++i)
        for (std::size_t j = i + 1; j < seen.size(); ++j) CHECK(seen[i] != seen[j]);
}

TEST_CASE("polyomino counts match exhaustive enumeration") {
    const std::vector<mpz_class> pt = polyomino_counts(10);
    for (long long n = 0; n <= 10; ++n) {
        INFO("n=" << n);
        CHECK(pt[n] == brute_force_polyomino(n));
    }
    const long expected[] = {1, 1, 2, 4, 7, 13, 21, 37, 60};
    for (long long n = 0; n <= 8; ++n) CHECK(pt[n] == expected[n]);
}

TEST_CASE("polyomino counts satisfy the exact log-derivative recurrence") {
    // for F(x) = ∏ (1-x^m)^{-c~_m}:  n a_n = Σ_{j=1}^{n} (Σ_{m|j} m c~_m) a_{n-j},
    // an independent identity linking all coefficients
    const long long N = 300;
    const std::vector<mpz_class> pt = polyomino_counts(N);
    const auto phi = totient_sieve(N);
    std::vector<mpz_class> sigma(N + 1, 0);
    for (long long m = 1; m <= N; ++m) {
        const long cm = static_cast<long>((m == 1) ? 1 : phi[m]);
        for (long long j = m; j <= N; j += m) sigma[j] += static_cast<long>(m) * cm;
    }
    for (long long n = 1; n <= N; ++n) {
        mpz_class rhs = 0;
        for (long long j = 1; j <= n; ++j) rhs += sigma[j] * pt[n - j];
        CHECK(static_cast<long>(n) * pt[n] == rhs);
    }
}

TEST_CASE("cell budget bounds the table size") {
    CHECK_THROWS_AS(count_table(1100, 1100), resource_error);
    CHECK_THROWS_WITH(count_table(2000, 2000), Catch::Matchers::ContainsSubstring("1050000"));
}

TEST_CASE("count records survive a JSONL round trip") {
    temp_file tmp("chains_test_counts.jsonl");
    const count_table_t table = count_table(10, 10);
    const std::vector<mpz_class> pt = polyomino_counts(12);

    append_count_records(tmp.path.string(), {{"p", 10, 10, table.at(10, 10)}});
    append_count_records(tmp.path.string(),
                         {{"p", 4, 7, table.at(4, 7)}, {"ptilde", 12, 0, pt[12]}});

    const std::vector<count_record> recs = load_count_records(tmp.path.string());
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].kind == "p");
    CHECK(recs[0].n1 == 10);
    CHECK(recs[0].value == table.at(10, 10));
    CHECK(recs[2].kind == "ptilde");
    CHECK(recs[2].value == pt[12]);

    CHECK_NOTHROW(verify_count_records(recs));
}

TEST_CASE("count record verification recomputes and rejects corrupted values") {
    std::vector<count_record> recs{{"p", 5, 5, mpz_class(77)}, {"ptilde", 6, 0, mpz_class(21)}};
    CHECK_NOTHROW(verify_count_records(recs));

    recs[0].value = 78;
    CHECK_THROWS_WITH(verify_count_records(recs), Catch::Matchers::ContainsSubstring("p(5,5)"));

    recs[0].value = 77;
    recs[1].kind = "mystery";
    CHECK_THROWS_WITH(verify_count_records(recs), Catch::Matchers::ContainsSubstring("mystery"));
}

TEST_CASE("count table rejects negative boxes") {
    CHECK_THROWS_AS(count_table(-1, 4), std::invalid_argument);
    CHECK_THROWS_AS(polyomino_counts(-2), std::invalid_argument);
}

TEST_CASE("brute force guards reject sizes beyond their budget") {
    CHECK_THROWS_AS(brute_force_count(11, 2), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_polyomino(13), std::invalid_argument);
}
