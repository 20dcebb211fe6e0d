#pragma once

// Asymptotic machinery on top of the zeta layer: the critical-line zero sum,
// its printed two-term approximation, the full counting estimates for chains
// and for staircase-polyomino boundaries, and the gap table that compares
// exact logarithms against the analytic prediction.

#include <cmath>
#include <vector>

#include <gmpxx.h>

#include "chains/enumerate.hpp"
#include "chains/partition.hpp"
#include "chains/zetalib.hpp"

namespace chains {

// process-wide zero list (first 13 nontrivial zeros, ordinates ≤ 60)
inline const std::vector<zeta_zero>& default_zeros() {
    static const std::vector<zeta_zero> zeros = find_zeta_zeros(60.0);
    return zeros;
}

struct icrit_result {
    double value = 0.0;
    double last_term = 0.0;  // magnitude of the K-th conjugate pair
};

// Σ_{k≤K} 2 Re[ Γ(ρ_k) ζ(ρ_k+1) ζ(ρ_k-1) / ζ'(ρ_k) · β^{-ρ_k} ] over the
// first K zero pairs ρ_k = 1/2 + iγ_k
inline icrit_result i_crit_zero_sum(double beta, std::size_t K,
                                    const std::vector<zeta_zero>& zeros = default_zeros()) {
    detail::check_beta_range(beta, 1e-4, 2.0, "i_crit_zero_sum");
    if (K < 1 || K > zeros.size())
        throw std::invalid_argument("i_crit_zero_sum: K exceeds the available zero list");
    const double lb = std::log(beta);
    icrit_result r;
    for (std::size_t k = 0; k < K; ++k) {
        const cplx rho(0.5, zeros[k].gamma);
        const cplx w =
            gamma_complex(rho) * zeta_complex(rho + 1.0) * zeta_complex(rho - 1.0) / zeros[k].zeta_prime;
        const double term = 2.0 * (w * std::exp(-rho * lb)).real();
        r.value += term;
        if (k + 1 == K) r.last_term = std::abs(term);
    }
    return r;
}

// same sum assembled from explicit conjugate pairs, kept complex so the
// imaginary cancellation can be measured rather than assumed
inline cplx i_crit_explicit_conjugates(double beta, std::size_t K,
                                       const std::vector<zeta_zero>& zeros = default_zeros()) {
    detail::check_beta_range(beta, 1e-4, 2.0, "i_crit_explicit_conjugates");
    if (K < 1 || K > zeros.size())
        throw std::invalid_argument("i_crit_explicit_conjugates: K exceeds the available zero list");
    const double lb = std::log(beta);
    cplx total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const cplx rho(0.5, zeros[k].gamma);
        const cplx rho_bar = std::conj(rho);
        const cplx w =
            gamma_complex(rho) * zeta_complex(rho + 1.0) * zeta_complex(rho - 1.0) / zeros[k].zeta_prime;
        const cplx w_bar = gamma_complex(rho_bar) * zeta_complex(rho_bar + 1.0) *
                           zeta_complex(rho_bar - 1.0) / std::conj(zeros[k].zeta_prime);
        total += w * std::exp(-rho * lb) + w_bar * std::exp(-rho_bar * lb);
    }
    return total;
}

// printed two-term approximation of the first-pair contribution
inline double i_crit_two_term(double beta) {
    detail::check_beta_range(beta, 1e-4, 1.0, "i_crit_two_term");
    const double x = 14.1347 * std::log(beta);
    return (6.0240e-11 * std::cos(x) + 9.5848e-10 * std::sin(x)) / std::sqrt(beta);
}

struct asymptotic_estimate {
    long long n = 0;
    double beta = 0.0;
    double main_exponent = 0.0;   // leading n^{2/3} term of log p
    double icrit_term = 0.0;      // oscillatory zero-sum contribution
    double log_prefactor = 0.0;   // log of the algebraic prefactor, incl. power of n
    double log10_value = 0.0;
    double mantissa = 0.0;        // value = mantissa · 10^{exponent10}
    long long exponent10 = 0;
};

namespace detail {

inline asymptotic_estimate assemble_estimate(long long n, double beta, double main_exponent,
                                             double icrit_term, double log_prefactor) {
    asymptotic_estimate e;
    e.n = n;
    e.beta = beta;
    e.main_exponent = main_exponent;
    e.icrit_term = icrit_term;
    e.log_prefactor = log_prefactor;
    const double log_value = main_exponent + icrit_term + log_prefactor;
    e.log10_value = log_value / std::log(10.0);
    e.exponent10 = static_cast<long long>(std::floor(e.log10_value));
    e.mantissa = std::pow(10.0, e.log10_value - static_cast<double>(e.exponent10));
    return e;
}

}  // namespace detail

// p(n,n) ~ exp(3κ^{1/3}n^{2/3} + I_crit(β)) · e^{-2ζ'(-1)} κ^{-1/18} /
//          ((2π)^{7/6} √3 · n^{17/18}) at β = (κ/n)^{1/3}
inline asymptotic_estimate estimate_p(long long n, std::size_t K = 3,
                                      const std::vector<zeta_zero>& zeros = default_zeros()) {
    if (n < 1) throw std::invalid_argument("estimate_p requires n >= 1");
    const zeta_constants& zc = constants();
    const double dn = static_cast<double>(n);
    const double beta = std::cbrt(zc.kappa / dn);
    const double main = 3.0 * std::cbrt(zc.kappa) * std::pow(dn, 2.0 / 3.0);
    const double icrit = i_crit_zero_sum(beta, K, zeros).value;
    const double logpref = -2.0 * zc.zeta_prime_minus1 - (7.0 / 6.0) * std::log(2.0 * pi) -
                           0.5 * std::log(3.0) - (1.0 / 18.0) * std::log(zc.kappa) -
                           (17.0 / 18.0) * std::log(dn);
    return detail::assemble_estimate(n, beta, main, icrit, logpref);
}

// p̃(n) ~ exp(3(κ/4)^{1/3}n^{2/3} + I_crit(β)) · e^{-2ζ'(-1)} κ^{1/9} /
//         (2^{5/9} √3 π^{2/3} · n^{11/18}) at β = (2κ/n)^{1/3}
inline asymptotic_estimate estimate_polyomino(long long n, std::size_t K = 3,
                                              const std::vector<zeta_zero>& zeros = default_zeros()) {
    if (n < 1) throw std::invalid_argument("estimate_polyomino requires n >= 1");
    const zeta_constants& zc = constants();
    const double dn = static_cast<double>(n);
    const double beta = std::cbrt(2.0 * zc.kappa / dn);
    const double main = 3.0 * std::cbrt(zc.kappa / 4.0) * std::pow(dn, 2.0 / 3.0);
    const double icrit = i_crit_zero_sum(beta, K, zeros).value;
    const double logpref = (1.0 / 9.0) * std::log(zc.kappa) - (5.0 / 9.0) * std::log(2.0) -
                           2.0 * zc.zeta_prime_minus1 - 0.5 * std::log(3.0) -
                           (2.0 / 3.0) * std::log(pi) - (11.0 / 18.0) * std::log(dn);
    return detail::assemble_estimate(n, beta, main, icrit, logpref);
}

// natural log of a positive big integer via its top 53 bits plus exponent
inline double log_mpz(const mpz_class& v) {
    if (v <= 0) throw std::invalid_argument("log_mpz requires a positive value");
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

// local-limit prediction for the chance a free draw lands exactly on (n,n)
inline double local_limit_rate(long long n) {
    return std::cbrt(constants().kappa) /
           (2.0 * pi * std::sqrt(3.0) * std::pow(static_cast<double>(n), 4.0 / 3.0));
}

// exact ℙ[X = (n,n)] under the Boltzmann law: p(n,n) e^{-2βn} / Z(β,β)
inline double exact_hit_probability(long long n, double beta) {
    const count_table_t table = count_table(n, n);
    return std::exp(log_mpz(table.at(n, n)) - 2.0 * beta * static_cast<double>(n) - log_Z(beta));
}

struct rh_gap_row {
    long long n = 0;
    double gap = 0.0;       // log p(n,n) - 3κ^{1/3} n^{2/3}
    double residual = 0.0;  // gap - icrit_term - log_prefactor
};

// exact-vs-analytic gap table along the diagonal up to N
inline std::vector<rh_gap_row> rh_gap(long long N, std::size_t K = 3,
                                      const std::vector<zeta_zero>& zeros = default_zeros()) {
    if (N < 1) throw std::invalid_argument("rh_gap requires N >= 1");
    const zeta_constants& zc = constants();
    const count_table_t table = count_table(N, N);
    std::vector<rh_gap_row> rows;
    rows.reserve(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) {
        rh_gap_row row;
        row.n = n;
        const double dn = static_cast<double>(n);
        row.gap = log_mpz(table.at(n, n)) - 3.0 * std::cbrt(zc.kappa) * std::pow(dn, 2.0 / 3.0);
        const asymptotic_estimate e = estimate_p(n, K, zeros);
        row.residual = row.gap - e.icrit_term - e.log_prefactor;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace chains
