#pragma once

// Primitive vectors, slope order, totient sieve, and the bijection between
// convex chains and their step-multiplicity configurations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace chains {

// lattice direction (x,y), both nonnegative, gcd(x,y) = 1, not both zero
struct primitive_vector {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const primitive_vector&, const primitive_vector&) = default;
};

// strict slope order via exact cross-multiplication: (1,0) is minimal,
// (0,1) maximal, interior vectors ordered by y/x.  No floating point.
struct slope_less {
    bool operator()(const primitive_vector& a, const primitive_vector& b) const {
        return static_cast<__int128>(a.y) * b.x < static_cast<__int128>(b.y) * a.x;
    }
};

struct point {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const point&, const point&) = default;
};

// ω: primitive vector → multiplicity ≥ 1, finite support, kept in slope order
using chain_config = std::map<primitive_vector, long long, slope_less>;

// vertex list starting at (0,0); segment slopes strictly increase
using convex_chain = std::vector<point>;

// chain validation failure, pointing at the first offending vertex
struct chain_error : std::invalid_argument {
    std::size_t index;
    chain_error(std::size_t i, const std::string& what)
        : std::invalid_argument(what + " at vertex index " + std::to_string(i)), index(i) {}
};

inline point endpoint(const chain_config& config) {
    point e;
    for (const auto& [v, mult] : config) {
        e.x += mult * v.x;
        e.y += mult * v.y;
    }
    return e;
}

// all primitive vectors with x ≤ n1, y ≤ n2, sorted by slope
inline std::vector<primitive_vector> primitive_vectors_in_box(long long n1, long long n2) {
    std::vector<primitive_vector> out;
    for (long long x = 0; x <= n1; ++x)
        for (long long y = 0; y <= n2; ++y)
            if ((x != 0 || y != 0) && std::gcd(x, y) == 1) out.push_back({x, y});
    std::sort(out.begin(), out.end(), slope_less{});
    return out;
}

// Euler totient for 1..M by linear sieve
inline std::vector<long long> totient_sieve(long long M) {
    if (M < 0) throw std::invalid_argument("totient_sieve requires M >= 0");
    std::vector<long long> phi(static_cast<std::size_t>(M) + 1, 0);
    std::vector<long long> primes;
    if (M >= 1) phi[1] = 1;
    for (long long i = 2; i <= M; ++i) {
        if (phi[i] == 0) {  // untouched → prime
            phi[i] = i - 1;
            primes.push_back(i);
        }
        for (long long p : primes) {
            if (i * p > M) break;
            if (i % p == 0) {
                phi[i * p] = phi[i] * p;
                break;
            }
            phi[i * p] = phi[i] * (p - 1);
        }
    }
    return phi;
}

// c_m = number of primitive vectors on the diagonal x+y = m: c₁ = 2 for the
// two axis vectors, c_m = φ(m) otherwise
struct weight_table {
    std::vector<long long> c;  // index m, c[0] unused
    long long max_m() const { return static_cast<long long>(c.size()) - 1; }
};

inline weight_table line_weights(long long M) {
    weight_table w;
    w.c = totient_sieve(M);
    if (M >= 1) w.c[1] = 2;
    return w;
}

// cumulative sums of ω(v)·v in slope order; one vertex per support vector
inline convex_chain config_to_chain(const chain_config& config) {
    convex_chain out;
    out.push_back({0, 0});
    point cur{0, 0};
    for (const auto& [v, mult] : config) {
        cur.x += mult * v.x;
        cur.y += mult * v.y;
        out.push_back(cur);
    }
    return out;
}

// inverse bijection: ω(v) = gcd of each segment's step; validates convexity
inline chain_config chain_to_config(const convex_chain& chain) {
    if (chain.empty() || chain[0] != point{0, 0})
        throw chain_error(0, "chain must start at the origin");
    chain_config config;
    primitive_vector prev{0, 0};  // sentinel below every slope
    bool have_prev = false;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        long long dx = chain[i].x - chain[i - 1].x;
        long long dy = chain[i].y - chain[i - 1].y;
        if (dx < 0 || dy < 0) throw chain_error(i, "segment step must be nonnegative");
        if (dx == 0 && dy == 0) throw chain_error(i, "zero segment");
        long long g = std::gcd(dx, dy);
        primitive_vector v{dx / g, dy / g};
        if (have_prev && !slope_less{}(prev, v))
            throw chain_error(i, "segment slopes must strictly increase");
        prev = v;
        have_prev = true;
        config[v] += g;
    }
    return config;
}

}  // namespace chains
