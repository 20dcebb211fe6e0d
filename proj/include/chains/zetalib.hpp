#pragma once

// Complex Gamma (Lanczos), Riemann zeta (accelerated eta series + functional
// equation), finite-difference zeta derivative, Hardy-function zero location
// on the critical line, and the constants κ, ζ'(-1), C.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chains {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double ln2 = std::numbers::ln2;

namespace detail {

// Lanczos g = 7, 9 coefficients
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline cplx lanczos_sum(cplx sm) {
    cplx x = lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (sm + static_cast<double>(i));
    return x;
}

}  // namespace detail

inline cplx gamma_complex(cplx s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        throw std::domain_error("gamma pole at nonpositive integer " + std::to_string(s.real()));
    if (s.real() < 0.5)  // reflection
        return pi / (std::sin(pi * s) * gamma_complex(1.0 - s));
    const cplx sm = s - 1.0;
    const cplx t = sm + detail::lanczos_g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, sm + 0.5) * std::exp(-t) * detail::lanczos_sum(sm);
}

// principal-branch log Gamma for Re s > 0 (the (sm+1/2)·log t term carries the
// large imaginary part analytically, so no 2π wrapping occurs in our domain)
inline cplx lgamma_complex(cplx s) {
    if (s.real() <= 0.0) throw std::domain_error("lgamma_complex requires Re s > 0");
    const cplx sm = s - 1.0;
    const cplx t = sm + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (sm + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(sm));
}

namespace detail {

// Borwein-accelerated alternating sums Σ (-1)^k (d_k - d_n) log^j(k+1) (k+1)^{-s}
// for j = 0..order, normalized to approximate η^{(j)}(s)
struct eta_derivs {
    cplx e0, e1, e2, e3;
};

inline eta_derivs eta_sums(cplx s, int order) {
    const int n = 44 + static_cast<int>(std::ceil(1.5 * std::abs(s.imag())));
    std::vector<double> d(static_cast<std::size_t>(n) + 1);
    double Tj = 1.0, acc = 1.0;
    d[0] = acc;
    for (int j = 1; j <= n; ++j) {
        Tj *= 4.0 * (n + j - 1.0) * (n - j + 1.0) / ((2.0 * j) * (2.0 * j - 1.0));
        acc += Tj;
        d[j] = acc;
    }
    eta_derivs out{};
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        const double lk = std::log(k + 1.0);
        const cplx w = sign * (d[k] - d[n]) * std::exp(-s * lk);
        out.e0 += w;
        if (order >= 1) out.e1 += w * (-lk);
        if (order >= 2) out.e2 += w * (lk * lk);
        if (order >= 3) out.e3 += w * (-lk * lk * lk);
        sign = -sign;
    }
    const double inv = -1.0 / d[n];
    out.e0 *= inv;
    out.e1 *= inv;
    out.e2 *= inv;
    out.e3 *= inv;
    return out;
}

// ζ(s) = η(s)/(1 - 2^{1-s}) for Re s > 0-ish; near the denominator zeros
// s₀ = 1 + 2πik/ln2 the eta function itself vanishes, handled by L'Hôpital
// with a short Taylor expansion in u = s - s₀.
inline cplx zeta_direct(cplx s) {
    const cplx den = 1.0 - std::exp((1.0 - s) * ln2);
    if (std::abs(den) > 1e-4) return eta_sums(s, 0).e0 / den;
    const long k = std::lround(s.imag() * ln2 / (2.0 * pi));
    if (k == 0) throw std::domain_error("zeta pole at s = 1");
    const cplx s0(1.0, 2.0 * pi * static_cast<double>(k) / ln2);
    const cplx u = s - s0;
    const eta_derivs e = eta_sums(s0, 3);  // η(s0) = 0 analytically
    const cplx num = e.e1 + u * (0.5 * e.e2 + u * (e.e3 / 6.0));
    const cplx ul = u * ln2;
    const cplx den_over_u = ln2 * (1.0 - ul * 0.5 + ul * ul / 6.0);
    return num / den_over_u;
}

}  // namespace detail

inline cplx zeta_complex(cplx s) {
    if (s == cplx(1.0, 0.0)) throw std::domain_error("zeta pole at s = 1");
    if (s.real() >= 0.5 || std::abs(s) < 0.25) return detail::zeta_direct(s);
    // functional equation ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
    const cplx w = 1.0 - s;
    return std::pow(cplx(2.0), s) * std::pow(cplx(pi), s - 1.0) * std::sin(0.5 * pi * s) *
           gamma_complex(w) * detail::zeta_direct(w);
}

// central finite difference with one Richardson extrapolation step
inline cplx zeta_derivative(cplx s, double h = 1e-3) {
    if (std::abs(s - cplx(1.0, 0.0)) < 2.0 * h)
        throw std::domain_error("zeta_derivative pole at s = 1");
    const cplx d1 = (zeta_complex(s + h) - zeta_complex(s - h)) / (2.0 * h);
    const cplx d2 = (zeta_complex(s + 0.5 * h) - zeta_complex(s - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// Riemann–Siegel theta and the real-valued Hardy function Z(t)
inline double hardy_theta(double t) {
    return lgamma_complex(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(pi);
}

inline double hardy_Z(double t) {
    const cplx z = std::exp(cplx(0.0, hardy_theta(t))) * zeta_complex(cplx(0.5, t));
    return z.real();
}

// nontrivial zero ρ = 1/2 + iγ with ζ'(ρ) attached
struct zeta_zero {
    double gamma = 0.0;
    cplx zeta_prime;
};

// all zeros with 0 < γ ≤ T by Hardy-function sign scan + bisection
inline std::vector<zeta_zero> find_zeta_zeros(double T) {
    if (T > 60.0) throw std::domain_error("find_zeta_zeros supports T <= 60");
    std::vector<zeta_zero> out;
    const double step = 0.05;
    double t = 1.0, prev = hardy_Z(t);
    while (t < T) {
        const double t2 = std::min(t + step, T);
        const double cur = hardy_Z(t2);
        if (prev * cur < 0.0) {
            double a = t, b = t2, fa = prev;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                if (m == a || m == b) break;
                const double fm = hardy_Z(m);
                if (fa * fm <= 0.0)
                    b = m;
                else
                    a = m, fa = fm;
            }
            zeta_zero z;
            z.gamma = 0.5 * (a + b);
            z.zeta_prime = zeta_derivative(cplx(0.5, z.gamma));
            if (std::abs(z.zeta_prime) < 1e-6)
                throw std::runtime_error("zero at gamma = " + std::to_string(z.gamma) +
                                         " looks multiple: |zeta'| < 1e-6");
            out.push_back(z);
        }
        t = t2;
        prev = cur;
    }
    return out;
}

struct zeta_constants {
    double kappa = 0.0;              // ζ(3)/ζ(2)
    double zeta_prime_minus1 = 0.0;  // ζ'(-1)
    double C = 0.0;                  // -2ζ'(-1) - (1/6) log 2π
};

inline zeta_constants constants() {
    zeta_constants k;
    k.kappa = zeta_complex(cplx(3.0)).real() / zeta_complex(cplx(2.0)).real();
    k.zeta_prime_minus1 = zeta_derivative(cplx(-1.0)).real();
    k.C = -2.0 * k.zeta_prime_minus1 - std::log(2.0 * pi) / 6.0;
    return k;
}

// ---- zero cache: one line "gamma zeta_prime_re zeta_prime_im", 12 digits ----

inline void save_zero_cache(const std::string& path, const std::vector<zeta_zero>& zeros) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open zero cache for writing: " + path);
    char buf[128];
    for (const auto& z : zeros) {
        std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", z.gamma, z.zeta_prime.real(),
                      z.zeta_prime.imag());
        out << buf;
    }
}

inline std::vector<zeta_zero> load_zero_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open zero cache: " + path);
    std::vector<zeta_zero> zeros;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double g, re, im;
        if (!(ss >> g >> re >> im)) throw std::runtime_error("malformed zero cache line: " + line);
        zeros.push_back({g, cplx(re, im)});
    }
    return zeros;
}

// recomputation must match the cache to 1e-6 on γ
inline void verify_zero_cache(const std::vector<zeta_zero>& cached, double T = 60.0) {
    const std::vector<zeta_zero> fresh = find_zeta_zeros(T);
    if (fresh.size() < cached.size())
        throw std::runtime_error("zero cache holds more zeros than recomputation found");
    for (std::size_t i = 0; i < cached.size(); ++i)
        if (std::abs(cached[i].gamma - fresh[i].gamma) > 1e-6)
            throw std::runtime_error("zero cache gamma mismatch at index " + std::to_string(i));
}

}  // namespace chains
