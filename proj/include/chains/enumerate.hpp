#pragma once

// Exact counting of convex chains p(n1,n2) and polyomino paths p~(n) with
// arbitrary-precision integers, plus exponential-search oracles and an
// append-only JSONL count cache.

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "chains/lattice.hpp"

namespace chains {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// coefficient array of ∏_{v}(1 - x^{v1} y^{v2})^{-1} over the box
struct count_table_t {
    long long n1 = 0;
    long long n2 = 0;
    std::vector<mpz_class> values;  // row-major, (n1+1)·(n2+1) cells

    const mpz_class& at(long long a, long long b) const {
        return values[static_cast<std::size_t>(a) * (n2 + 1) + b];
    }
    mpz_class& at(long long a, long long b) {
        return values[static_cast<std::size_t>(a) * (n2 + 1) + b];
    }
};

inline constexpr long long count_table_cell_budget = 1'050'000;

// one in-place unbounded-knapsack pass per primitive vector; the final table
// is independent of the vector order
inline count_table_t count_table_with_order(long long n1, long long n2,
                                            const std::vector<primitive_vector>& order) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("count_table requires n1, n2 >= 0");
    if ((n1 + 1) * (n2 + 1) > count_table_cell_budget)
        throw resource_error("count_table box (" + std::to_string(n1) + "," + std::to_string(n2) +
                             ") exceeds the cell budget of " +
                             std::to_string(count_table_cell_budget));
    count_table_t t;
    t.n1 = n1;
    t.n2 = n2;
    t.values.assign(static_cast<std::size_t>(n1 + 1) * (n2 + 1), 0);
    t.at(0, 0) = 1;
    for (const auto& v : order)
        for (long long x = v.x; x <= n1; ++x)
            for (long long y = v.y; y <= n2; ++y) t.at(x, y) += t.at(x - v.x, y - v.y);
    return t;
}

inline count_table_t count_table(long long n1, long long n2) {
    return count_table_with_order(n1, n2, primitive_vectors_in_box(n1, n2));
}

// p~(n): coefficient of t^n in ∏_m (1-t^m)^{-c~_m}, c~_1 = 1, c~_m = φ(m);
// one 1D knapsack pass per unit of multiplicity
inline std::vector<mpz_class> polyomino_counts(long long N) {
    if (N < 0) throw std::invalid_argument("polyomino_counts requires N >= 0");
    std::vector<long long> phi = totient_sieve(std::max<long long>(N, 1));
    std::vector<mpz_class> p(static_cast<std::size_t>(N) + 1, 0);
    p[0] = 1;
    for (long long m = 1; m <= N; ++m) {
        long long reps = (m == 1) ? 1 : phi[m];
        for (long long r = 0; r < reps; ++r)
            for (long long t = m; t <= N; ++t) p[t] += p[t - m];
    }
    return p;
}

// depth-first enumeration of every configuration with endpoint (n1,n2),
// visiting support vectors in slope order
template <class F>
void enumerate_configs(long long n1, long long n2, F&& visit) {
    const std::vector<primitive_vector> vecs = primitive_vectors_in_box(n1, n2);
    chain_config current;
    std::function<void(std::size_t, long long, long long)> rec =
        [&](std::size_t idx, long long a, long long b) {
            if (a == 0 && b == 0) {
                visit(const_cast<const chain_config&>(current));
                return;
            }
            if (idx == vecs.size()) return;
            const primitive_vector v = vecs[idx];
            rec(idx + 1, a, b);  // multiplicity 0
            long long k = 0;
            while ((k + 1) * v.x <= a && (k + 1) * v.y <= b) {
                ++k;
                current[v] = k;
                rec(idx + 1, a - k * v.x, b - k * v.y);
            }
            if (k > 0) current.erase(v);
        };
    rec(0, n1, n2);
}

// exponential-search oracle for p(n1,n2)
inline mpz_class brute_force_count(long long n1, long long n2) {
    if (n1 > 10 || n2 > 10)
        throw std::invalid_argument("brute_force_count is limited to n1,n2 <= 10");
    const std::vector<primitive_vector> vecs = primitive_vectors_in_box(n1, n2);
    mpz_class total = 0;
    std::function<void(std::size_t, long long, long long)> rec =
        [&](std::size_t idx, long long a, long long b) {
            if (a == 0 && b == 0) {
                ++total;
                return;
            }
            if (idx == vecs.size()) return;
            const primitive_vector v = vecs[idx];
            for (long long k = 0; k * v.x <= a && k * v.y <= b; ++k)
                rec(idx + 1, a - k * v.x, b - k * v.y);
        };
    rec(0, n1, n2);
    return total;
}

// exponential-search oracle for p~(n): configurations on 𝒫 ∖ {(1,0)} with
// total weight Σ ω(v)(v1+v2) = n
inline mpz_class brute_force_polyomino(long long n) {
    if (n > 12) throw std::invalid_argument("brute_force_polyomino is limited to n <= 12");
    std::vector<primitive_vector> vecs;
    for (const auto& v : primitive_vectors_in_box(n, n))
        if (!(v.x == 1 && v.y == 0) && v.x + v.y <= n) vecs.push_back(v);
    mpz_class total = 0;
    std::function<void(std::size_t, long long)> rec = [&](std::size_t idx, long long rem) {
        if (rem == 0) {
            ++total;
            return;
        }
        if (idx == vecs.size()) return;
        const long long w = vecs[idx].x + vecs[idx].y;
        for (long long k = 0; k * w <= rem; ++k) rec(idx + 1, rem - k * w);
    };
    rec(0, n);
    return total;
}

// ---- persistent count cache: one JSON object per line, append-only ----

struct count_record {
    std::string kind;  // "p" or "ptilde"
    long long n1 = 0;
    long long n2 = 0;  // 0 for "ptilde"
    mpz_class value;
};

inline void append_count_records(const std::string& path, const std::vector<count_record>& recs) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open count cache for append: " + path);
    for (const auto& r : recs) {
        nlohmann::json j{{"kind", r.kind}, {"n1", r.n1}, {"n2", r.n2}, {"value", r.value.get_str()}};
        out << j.dump() << '\n';
    }
}

inline std::vector<count_record> load_count_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open count cache: " + path);
    std::vector<count_record> recs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        recs.push_back({j.at("kind").get<std::string>(), j.at("n1").get<long long>(),
                        j.at("n2").get<long long>(),
                        mpz_class(j.at("value").get<std::string>(), 10)});
    }
    return recs;
}

// verification mode: every reloaded record must match recomputation exactly
inline void verify_count_records(const std::vector<count_record>& recs) {
    long long max_p1 = -1, max_p2 = -1, max_pt = -1;
    for (const auto& r : recs) {
        if (r.kind == "p") {
            max_p1 = std::max(max_p1, r.n1);
            max_p2 = std::max(max_p2, r.n2);
        } else if (r.kind == "ptilde") {
            max_pt = std::max(max_pt, r.n1);
        } else {
            throw std::runtime_error("unknown cache record kind: " + r.kind);
        }
    }
    count_table_t table;
    if (max_p1 >= 0) table = count_table(max_p1, max_p2);
    std::vector<mpz_class> pt;
    if (max_pt >= 0) pt = polyomino_counts(max_pt);
    for (const auto& r : recs) {
        const mpz_class& expect = (r.kind == "p") ? table.at(r.n1, r.n2) : pt[r.n1];
        if (expect != r.value)
            throw std::runtime_error("count cache mismatch for " + r.kind + "(" +
                                     std::to_string(r.n1) + "," + std::to_string(r.n2) +
                                     "): cached " + r.value.get_str() + " recomputed " +
                                     expect.get_str());
    }
}

}  // namespace chains
