#pragma once

// Boltzmann sampling of chain configurations: multiplicities are independent
// geometrics with success parameter tied to e^{-β(v₁+v₂)}, truncated at a
// reported total-variation cost.  Includes the conditioned (n,n) sampler,
// limit-shape deviation, and CSV/SVG chain export.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "chains/lattice.hpp"
#include "chains/partition.hpp"

namespace chains {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

// deterministic, splittable generator: (seed, stream) fully determine the
// draw sequence; split(i) derives an independent stream
struct rng_state {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::mt19937_64 engine;

    static rng_state seeded(std::uint64_t seed, std::uint64_t stream = 0) {
        rng_state r;
        r.seed = seed;
        r.stream = stream;
        std::uint64_t s = seed ^ (0x106689d45497fdb5ull * (stream + 1));
        std::seed_seq seq{detail::splitmix64(s), detail::splitmix64(s), detail::splitmix64(s),
                          detail::splitmix64(s)};
        r.engine.seed(seq);
        return r;
    }

    rng_state split(std::uint64_t i) const { return seeded(seed, stream * 0x9e3779b9ull + i + 1); }

    // uniform on (0,1), both endpoints excluded
    double uniform01() {
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
    }
};

// precomputed vector table for repeated draws at fixed β: levels m = 1..W in
// ascending order, within a level x ascending
struct boltzmann_sampler {
    double beta = 0.0;
    long long W = 0;
    std::vector<primitive_vector> vectors;
    std::vector<double> inv_beta_m;  // 1/(β(v₁+v₂)) per vector

    explicit boltzmann_sampler(double beta_, double cutoff = 46.0) : beta(beta_) {
        detail::check_beta_range(beta, 1e-3, 10.0, "boltzmann_sampler");
        if (!(cutoff >= 1.0)) throw std::invalid_argument("boltzmann_sampler: cutoff must be >= 1");
        W = static_cast<long long>(std::floor(cutoff / beta));
        if (W < 1) W = 1;
        for (long long m = 1; m <= W; ++m)
            for (long long x = 0; x <= m; ++x)
                if (std::gcd(x, m - x) == 1) {
                    vectors.push_back({x, m - x});
                    inv_beta_m.push_back(1.0 / (beta * static_cast<double>(m)));
                }
    }

    // total-variation distance to the untruncated law is at most the chance
    // any level above W fires: Σ_{m>W} c_m e^{-βm} ≤ x^{W+1}((W+1)-Wx)/(1-x)²
    double tail_tv() const {
        const double x = std::exp(-beta);
        const double w = static_cast<double>(W);
        return std::pow(x, w + 1.0) * ((w + 1.0) - w * x) / ((1.0 - x) * (1.0 - x));
    }

    chain_config draw(rng_state& rng) const {
        chain_config config;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            const double u = rng.uniform01();
            const long long k = static_cast<long long>(std::floor(-std::log(u) * inv_beta_m[i]));
            if (k > 0) config.emplace(vectors[i], k);
        }
        return config;
    }

    // draw that abandons the attempt as soon as the running endpoint leaves
    // the box [0,n]²; endpoint coordinates only grow, so no accepted draw is
    // lost and the per-attempt RNG stream stays deterministic
    std::optional<chain_config> draw_in_box(rng_state& rng, long long n) const {
        chain_config config;
        long long ex = 0, ey = 0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            const double u = rng.uniform01();
            const long long k = static_cast<long long>(std::floor(-std::log(u) * inv_beta_m[i]));
            if (k > 0) {
                ex += k * vectors[i].x;
                ey += k * vectors[i].y;
                if (ex > n || ey > n) return std::nullopt;
                config.emplace(vectors[i], k);
            }
        }
        return config;
    }
};

// convenience single draw
inline chain_config sample_config(double beta, rng_state& rng, double cutoff = 46.0) {
    return boltzmann_sampler(beta, cutoff).draw(rng);
}

struct sample_stats {
    long long samples = 0;
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0, cov_xy = 0.0;  // unbiased (divide by samples-1)
    long long hits = 0;                             // endpoints exactly at (hit_n, hit_n)
    double tail_tv = 0.0;
};

// empirical endpoint moments over repeated free draws
inline sample_stats endpoint_stats(const boltzmann_sampler& sampler, long long samples,
                                   rng_state& rng, long long hit_n = -1) {
    if (samples < 2) throw std::invalid_argument("endpoint_stats requires samples >= 2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    long long hits = 0;
    for (long long i = 0; i < samples; ++i) {
        const point e = endpoint(sampler.draw(rng));
        const double x = static_cast<double>(e.x), y = static_cast<double>(e.y);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        if (hit_n >= 0 && e.x == hit_n && e.y == hit_n) ++hits;
    }
    const double ns = static_cast<double>(samples);
    sample_stats st;
    st.samples = samples;
    st.mean_x = sx / ns;
    st.mean_y = sy / ns;
    st.var_x = (sxx - sx * sx / ns) / (ns - 1.0);
    st.var_y = (syy - sy * sy / ns) / (ns - 1.0);
    st.cov_xy = (sxy - sx * sy / ns) / (ns - 1.0);
    st.hits = hits;
    st.tail_tv = sampler.tail_tv();
    return st;
}

struct conditioned_result {
    std::optional<convex_chain> chain;
    long long n = 0;
    long long draws = 0;         // attempts consumed (including the accepted one)
    double beta = 0.0;           // calibrated temperature
    double expected_rate = 0.0;  // local-CLT acceptance estimate κ^{1/3}/(2π√3 n^{4/3})
};

// rejection-sample a chain conditioned on endpoint (n,n) at the calibrated β;
// the cutoff is raised to cover every level reachable inside the box, so an
// accepted configuration is exactly uniform over chains to (n,n)
inline conditioned_result sample_conditioned(long long n, long long max_draws, rng_state& rng) {
    if (n < 1) throw std::invalid_argument("sample_conditioned requires n >= 1");
    if (max_draws < 1) throw std::invalid_argument("sample_conditioned requires max_draws >= 1");
    const calibration_result cal = calibrate(n);
    const double cutoff = std::max(46.0, cal.beta * (2.0 * static_cast<double>(n) + 0.5));
    const boltzmann_sampler sampler(cal.beta, cutoff);
    conditioned_result r;
    r.n = n;
    r.beta = cal.beta;
    const double dn = static_cast<double>(n);
    r.expected_rate =
        std::cbrt(constants().kappa) / (2.0 * pi * std::sqrt(3.0) * std::pow(dn, 4.0 / 3.0));
    for (long long d = 1; d <= max_draws; ++d) {
        auto config = sampler.draw_in_box(rng, n);
        if (config && endpoint(*config) == point{n, n}) {
            r.chain = config_to_chain(*config);
            r.draws = d;
            return r;
        }
    }
    r.draws = max_draws;
    return r;
}

// sup-norm vertical deviation of the 1/n-rescaled chain from the limit arc
// y(x) = (1 - √(1-x))²
inline double limit_shape_deviation(const convex_chain& chain) {
    if (chain.size() < 2 || chain.back().x != chain.back().y || chain.back().x < 1)
        throw std::invalid_argument("limit_shape_deviation expects a chain ending at (n,n), n >= 1");
    const double dn = static_cast<double>(chain.back().x);
    double worst = 0.0;
    for (const point& p : chain) {
        const double x = static_cast<double>(p.x) / dn;
        const double curve = 1.0 - std::sqrt(std::max(0.0, 1.0 - x));
        worst = std::max(worst, std::abs(static_cast<double>(p.y) / dn - curve * curve));
    }
    return worst;
}

inline void chain_to_csv(const convex_chain& chain, std::ostream& out) {
    out << "x,y\n";
    for (const point& p : chain) out << p.x << ',' << p.y << '\n';
}

// standalone SVG: chain polyline over the limit arc in a 1000×1000 viewport
inline void chain_to_svg(const convex_chain& chain, std::ostream& out) {
    if (chain.size() < 2 || chain.back().x < 1 || chain.back().y < 1)
        throw std::invalid_argument("chain_to_svg expects a nondegenerate chain");
    const double sx = 1000.0 / static_cast<double>(chain.back().x);
    const double sy = 1000.0 / static_cast<double>(chain.back().y);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
           "width=\"1000\" height=\"1000\">\n"
        << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n<path d=\"";
    for (int i = 0; i <= 200; ++i) {  // limit arc, vertically flipped to SVG coords
        const double x = static_cast<double>(i) / 200.0;
        const double r = 1.0 - std::sqrt(1.0 - x);
        out << (i == 0 ? 'M' : 'L') << 1000.0 * x << ' ' << 1000.0 - 1000.0 * r * r << ' ';
    }
    out << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"2\" stroke-dasharray=\"8 6\"/>\n"
        << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"3\" points=\"";
    for (const point& p : chain)
        out << sx * static_cast<double>(p.x) << ',' << 1000.0 - sy * static_cast<double>(p.y) << ' ';
    out << "\"/>\n</svg>\n";
}

inline void write_chain_file(const convex_chain& chain, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".svg") == 0)
        chain_to_svg(chain, out);
    else
        chain_to_csv(chain, out);
}

}  // namespace chains
