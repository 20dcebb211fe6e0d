#pragma once

// Diagonal partition-function analytics: log Z(β,β), cumulants, the
// calibration solver, the Dirichlet-series identity check, and the I_err
// contour quadrature.  All diagonal series collapse through the line weights
// c₁ = 2, c_m = φ(m).

#include <cmath>
#include <functional>
#include <stdexcept>

#include "chains/lattice.hpp"
#include "chains/zetalib.hpp"

namespace chains {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// truncation level with certified tail: m³ e^{-βm} summed beyond M stays
// below tol (covers every series order used here; c_m ≤ m)
inline long long series_cutoff(double beta, double tol) {
    double M = std::max(50.0, -std::log(tol * beta * beta) / beta);
    for (int it = 0; it < 3; ++it)
        M = std::max(50.0, (-std::log(tol * beta) + std::log(2.0) + 3.0 * std::log(M)) / beta);
    return static_cast<long long>(std::ceil(M));
}

inline void check_beta_range(double beta, double lo, double hi, const char* who) {
    if (!(beta > lo && beta <= hi))
        throw std::domain_error(std::string(who) + ": beta out of supported range");
}

// ψ(m) = Σ_{d|m} μ(d) d = ∏_{p|m} (1-p), by linear sieve
inline std::vector<long long> psi_sieve(long long M) {
    std::vector<long long> psi(static_cast<std::size_t>(M) + 1, 0);
    std::vector<long long> primes;
    std::vector<bool> comp(static_cast<std::size_t>(M) + 1, false);
    if (M >= 1) psi[1] = 1;
    for (long long i = 2; i <= M; ++i) {
        if (!comp[i]) {
            psi[i] = 1 - i;
            primes.push_back(i);
        }
        for (long long p : primes) {
            if (i * p > M) break;
            comp[i * p] = true;
            if (i % p == 0) {
                psi[i * p] = psi[i];  // radical unchanged
                break;
            }
            psi[i * p] = psi[i] * (1 - p);
        }
    }
    return psi;
}

// per-level moment sums S_{k1,k2}(m) = Σ over primitive vectors (x,y) on the
// diagonal x+y=m of x^{k1} y^{k2}, in closed form via φ and ψ
struct level_moments {
    std::vector<long long> phi, psi;
    explicit level_moments(long long M) : phi(totient_sieve(M)), psi(psi_sieve(M)) {}

    double s(int k1, int k2, long long m) const {
        if (m == 1) {  // vectors (1,0) and (0,1)
            if (k1 == 0 && k2 == 0) return 2.0;
            if (k1 == 0 || k2 == 0) return 1.0;  // one of the two contributes
            return 0.0;                          // mixed moment: x·y = 0 for both
        }
        const double dm = static_cast<double>(m);
        const double f = static_cast<double>(phi[m]);
        const double g = static_cast<double>(psi[m]);
        const int k = k1 + k2;
        if (k == 0) return f;
        if (k == 1) return dm * f / 2.0;  // Σx = Σ(m-x) by symmetry
        if (k1 == 2 || k2 == 2) return dm * dm * f / 3.0 + dm * g / 6.0;
        return dm * dm * f / 6.0 - dm * g / 6.0;  // Σ x(m-x)
    }
};

}  // namespace detail

// log Z(β,β) = Σ_m -c_m log(1-e^{-βm}), truncated with tail ≤ tol
inline double log_Z(double beta, double tol = 1e-12) {
    detail::check_beta_range(beta, 1e-4, 10.0, "log_Z");
    const long long M = detail::series_cutoff(beta, tol);
    const weight_table w = line_weights(M);
    double total = 0.0;
    for (long long m = 1; m <= M; ++m)
        total -= static_cast<double>(w.c[m]) * std::log1p(-std::exp(-beta * m));
    return total;
}

// mixed partial ∂^{k1+k2}/∂β₁^{k1}∂β₂^{k2} log Z at β₁=β₂=β, via per-level
// moment sums against g(t) = -log(1-e^{-t}) and its derivatives
inline double cumulant(int k1, int k2, double beta, double tol = 1e-12) {
    if (k1 < 0 || k2 < 0 || k1 + k2 > 2)
        throw std::invalid_argument("cumulant supports orders k1+k2 <= 2");
    detail::check_beta_range(beta, 1e-3, 10.0, "cumulant");
    const long long M = detail::series_cutoff(beta, tol);
    const detail::level_moments mom(M);
    const int k = k1 + k2;
    double total = 0.0;
    for (long long m = 1; m <= M; ++m) {
        const double t = beta * m;
        double g;
        if (k == 0) {
            g = -std::log1p(-std::exp(-t));
        } else if (k == 1) {
            g = -1.0 / std::expm1(t);  // g'(t)
        } else {
            const double q = std::exp(-t);
            g = q / ((1.0 - q) * (1.0 - q));  // g''(t)
        }
        total += mom.s(k1, k2, m) * g;
    }
    return total;
}

// E[X₁+X₂] = -(∂₁+∂₂) log Z = Σ_m c_m m e^{-βm}/(1-e^{-βm})
inline double mean_total(double beta, double tol = 1e-12) {
    detail::check_beta_range(beta, 1e-4, 10.0, "mean_total");
    const long long M = detail::series_cutoff(beta, tol);
    const weight_table w = line_weights(M);
    double total = 0.0;
    for (long long m = 1; m <= M; ++m)
        total += static_cast<double>(w.c[m]) * m / std::expm1(beta * m);
    return total;
}

// Var[X₁+X₂] = (∂₁+∂₂)² log Z
inline double variance_total(double beta) {
    return cumulant(2, 0, beta) + 2.0 * cumulant(1, 1, beta) + cumulant(0, 2, beta);
}

struct calibration_result {
    long long n = 0;
    double beta = 0.0;
    double mean_total = 0.0;
    double residual = 0.0;  // mean_total - 2n
    double variance_total = 0.0;
};

// solve E_β[X₁+X₂] = 2n: bracket by doubling, then Newton guarded by bisection
inline calibration_result calibrate(long long n) {
    if (n < 1) throw std::invalid_argument("calibrate requires n >= 1");
    const double target = 2.0 * static_cast<double>(n);
    const double tol = 0.5e-9 * std::max(1.0, target);
    const auto f = [&](double b) { return mean_total(b) - target; };

    double beta = std::cbrt(0.7307629694 / static_cast<double>(n));  // κ/β³ ≈ n seed
    beta = std::min(std::max(beta, 2e-4), 10.0);
    double lo = beta, hi = beta;
    double flo = f(beta), fhi = flo;
    while (flo < 0.0) {  // mean too small → β too large → move lo down
        hi = lo;
        fhi = flo;
        lo *= 0.5;
        if (lo <= 1e-4) throw std::domain_error("calibrate: beta left the supported range");
        flo = f(lo);
    }
    while (fhi > 0.0) {
        lo = hi;
        flo = fhi;
        hi = std::min(hi * 2.0, 10.0);
        fhi = f(hi);
        if (hi == 10.0 && fhi > 0.0) break;  // n below the β=10 mean: impossible for n ≥ 1
    }
    double fb = f(beta);
    for (int it = 0; it < 200 && std::abs(fb) > tol; ++it) {
        const double slope = -variance_total(beta);  // d/dβ mean_total
        double next = beta - fb / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // guard
        beta = next;
        fb = f(beta);
        if (fb > 0.0)
            lo = beta;
        else
            hi = beta;
    }
    calibration_result r;
    r.n = n;
    r.beta = beta;
    r.mean_total = fb + target;
    r.residual = fb;
    r.variance_total = variance_total(beta);
    return r;
}

struct dirichlet_result {
    cplx partial;
    cplx target;
    double gap_bound = 0.0;
};

// partial Σ_{m≤M} c_m m^{-s} against (ζ(s-1)+ζ(s))/ζ(s), with a certified
// tail majorant M^{2-σ}·σ/(σ-2) from c_m ≤ m
inline dirichlet_result dirichlet_check(cplx s, long long M) {
    const double sigma = s.real();
    if (!(sigma > 2.0)) throw std::domain_error("dirichlet_check requires Re s > 2");
    const weight_table w = line_weights(M);
    cplx partial = 0.0;
    for (long long m = 1; m <= M; ++m)
        partial += static_cast<double>(w.c[m]) * std::exp(-s * std::log(static_cast<double>(m)));
    dirichlet_result r;
    r.partial = partial;
    r.target = (zeta_complex(s - 1.0) + zeta_complex(s)) / zeta_complex(s);
    r.gap_bound = std::pow(static_cast<double>(M), 2.0 - sigma) * sigma / (sigma - 2.0);
    return r;
}

namespace detail {

// adaptive Simpson for complex integrands
inline cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b, double tol,
                             cplx fa, cplx fm, cplx fb, int depth, double& achieved) {
    const double m = 0.5 * (a + b);
    const cplx flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx delta = left + right - whole;
    if (depth >= 48) {
        achieved = std::max(achieved, std::abs(delta) / 15.0);
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) < 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, fa, flm, fm, depth + 1, achieved) +
           adaptive_simpson(f, m, b, 0.5 * tol, fm, frm, fb, depth + 1, achieved);
}

inline cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol,
                      double& achieved) {
    return adaptive_simpson(f, a, b, tol, f(a), f(0.5 * (a + b)), f(b), 0, achieved);
}

}  // namespace detail

struct ierr_result {
    double value = 0.0;
    double imag_residue = 0.0;   // conjugate-assembly residue of the raw integral
    double tail_estimate = 0.0;  // Gamma-decay bound for the |Im s| > 60 remainder
    double achieved_tol = 0.0;   // worst per-interval quadrature estimate
};

// (1/2πi) ∫_{Re s = -1/2} Γ(s) ζ(s+1) (ζ(s-1)+ζ(s)) / (ζ(s) β^s) ds,
// truncated at |Im s| = 60; both half-lines are evaluated independently so the
// imaginary residue genuinely tests conjugate symmetry
inline ierr_result I_err_detailed(double beta) {
    detail::check_beta_range(beta, 1e-3, 1.0, "I_err");
    const double lb = std::log(beta);
    const auto f = [&](double t) {
        const cplx s(-0.5, t);
        return gamma_complex(s) * zeta_complex(s + 1.0) * (zeta_complex(s - 1.0) + zeta_complex(s)) /
               (zeta_complex(s) * std::exp(s * lb));
    };
    const double panels[] = {0.0, 5.0, 14.0, 25.0, 40.0, 60.0};
    double achieved = 0.0;
    cplx upper = 0.0, lower = 0.0;
    for (int i = 0; i + 1 < 6; ++i) {
        upper += detail::integrate([&](double t) { return f(t); }, panels[i], panels[i + 1], 1e-13,
                                   achieved);
        lower += detail::integrate([&](double t) { return f(-t); }, panels[i], panels[i + 1], 1e-13,
                                   achieved);
    }
    const cplx raw = (upper + lower) / (2.0 * pi);
    ierr_result r;
    r.value = raw.real();
    r.imag_residue = std::abs(raw.imag());
    r.tail_estimate = std::abs(f(60.0)) / (0.5 * pi) / pi;  // ∫ e^{-π(t-60)/2} envelope
    r.achieved_tol = achieved;
    if (achieved > 1e-9)
        throw quadrature_error("I_err quadrature did not converge; achieved estimate " +
                               std::to_string(achieved));
    return r;
}

inline double I_err(double beta) { return I_err_detailed(beta).value; }

}  // namespace chains
