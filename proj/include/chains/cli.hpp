#pragma once

// Command-line front end: one subcommand per capability, all emitting a
// run_report (JSON to stdout by default, CSV via --format csv).  run_command
// is side-effect-free apart from caller-given --out/--cache paths, so tests
// drive it in-process.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chains/asympt.hpp"
#include "chains/enumerate.hpp"
#include "chains/lattice.hpp"
#include "chains/partition.hpp"
#include "chains/report.hpp"
#include "chains/sampler.hpp"
#include "chains/zetalib.hpp"

namespace chains::cli {

struct run_outcome {
    run_report report;
    int exit_code = 0;
    std::string rendered;  // what main() prints to stdout
};

namespace detail_cli {

inline std::string chain_key(const convex_chain& chain) {
    std::ostringstream ss;
    for (const point& p : chain) ss << p.x << ',' << p.y << ';';
    return ss.str();
}

inline nlohmann::json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- verify suites ----------------------------------------------------

// brute-force equivalences and structural invariants
inline std::vector<check_row> suite_oracle() {
    std::vector<check_row> rows;

    long long count_mismatch = 0;
    for (long long a = 0; a <= 6; ++a)
        for (long long b = 0; b <= 6; ++b)
            if (count_table(a, b).at(a, b) != brute_force_count(a, b)) ++count_mismatch;
    rows.push_back({"count_table_vs_brute_force_6x6", count_mismatch == 0,
                    static_cast<double>(count_mismatch), 0.0});

    const std::vector<mpz_class> pt = polyomino_counts(8);
    long long pt_mismatch = 0;
    for (long long n = 0; n <= 8; ++n)
        if (pt[n] != brute_force_polyomino(n)) ++pt_mismatch;
    rows.push_back(
        {"polyomino_vs_brute_force_n8", pt_mismatch == 0, static_cast<double>(pt_mismatch), 0.0});

    // configuration -> chain -> configuration round trip on sampled configs
    rng_state rng = rng_state::seeded(42);
    const boltzmann_sampler sampler(0.7);
    long long rt_mismatch = 0;
    for (int i = 0; i < 500; ++i) {
        const chain_config config = sampler.draw(rng);
        if (chain_to_config(config_to_chain(config)) != config) ++rt_mismatch;
    }
    rows.push_back({"config_chain_round_trip_500", rt_mismatch == 0,
                    static_cast<double>(rt_mismatch), 0.0});

    // line weights against a direct scan of primitive vectors per level
    const weight_table w = line_weights(200);
    std::vector<long long> per_level(201, 0);
    for (const primitive_vector& v : primitive_vectors_in_box(200, 200))
        if (v.x + v.y <= 200) ++per_level[v.x + v.y];
    long long lw_mismatch = 0;
    for (long long m = 1; m <= 200; ++m)
        if (per_level[m] != w.c[m]) ++lw_mismatch;
    rows.push_back(
        {"line_weights_vs_vector_scan_200", lw_mismatch == 0, static_cast<double>(lw_mismatch), 0.0});

    return rows;
}

// analytic identities: the exact log Z decomposition, the Dirichlet identity,
// the functional equation, gamma recurrences, zero quality, derivative links
inline std::vector<check_row> suite_identities() {
    std::vector<check_row> rows;
    const zeta_constants& zc = constants();

    for (double beta : {0.05, 0.1, 0.2, 0.5}) {
        const double icrit = i_crit_zero_sum(beta, default_zeros().size()).value;
        const double rhs = zc.kappa / (beta * beta) + icrit + (7.0 / 6.0) * std::log(1.0 / beta) +
                           zc.C + I_err(beta);
        const double resid = std::abs(log_Z(beta) - rhs);
        std::ostringstream name;
        name << "log_z_decomposition_beta_" << beta;
        rows.push_back({name.str(), resid <= 1e-5, resid, 1e-5});
    }

    const dirichlet_result d1 = dirichlet_check(3.0, 100000);
    const dirichlet_result d2 = dirichlet_check(3.0, 200000);
    const double gap1 = std::abs(d1.partial - d1.target);
    const double gap2 = std::abs(d2.partial - d2.target);
    rows.push_back({"dirichlet_gap_within_tail_bound", gap1 <= d1.gap_bound, gap1, d1.gap_bound});
    rows.push_back({"dirichlet_gap_halving", gap2 <= 0.6 * gap1, gap2 / gap1, 0.6});

    // functional-equation path against the direct eta evaluation inside the strip
    double fe_worst = 0.0;
    for (cplx s : {cplx(0.3, 5.0), cplx(0.1, 20.0), cplx(0.45, 33.0), cplx(0.25, 2.0), cplx(0.05, 49.0)}) {
        const cplx via_fe = zeta_complex(s);  // dispatches through the reflection path
        const cplx direct = detail::zeta_direct(s);
        fe_worst = std::max(fe_worst, std::abs(via_fe - direct) / std::abs(direct));
    }
    rows.push_back({"functional_equation_vs_direct_eta", fe_worst <= 1e-9, fe_worst, 1e-9});

    double rec_worst = 0.0, refl_worst = 0.0;
    for (double t : {0.5, 3.0, 10.0, 25.0, 40.0}) {
        const cplx s(0.5, t);
        rec_worst = std::max(rec_worst,
                             std::abs(gamma_complex(s + 1.0) / (s * gamma_complex(s)) - 1.0));
        const double lhs = std::norm(gamma_complex(s));  // |Γ(1/2+it)|²
        refl_worst = std::max(refl_worst, std::abs(lhs - pi / std::cosh(pi * t)) / lhs);
    }
    rows.push_back({"gamma_recurrence", rec_worst <= 1e-12, rec_worst, 1e-12});
    rows.push_back({"gamma_reflection_half_line", refl_worst <= 1e-12, refl_worst, 1e-12});

    double zero_worst = 0.0;
    for (const zeta_zero& z : default_zeros())
        zero_worst = std::max(zero_worst, std::abs(zeta_complex(cplx(0.5, z.gamma))));
    rows.push_back({"zero_quality_on_critical_line", zero_worst <= 1e-10, zero_worst, 1e-10});

    const double lz = log_Z(0.3);
    const double c00 = cumulant(0, 0, 0.3);
    const double c00_resid = std::abs(c00 - lz) / lz;
    rows.push_back({"cumulant00_equals_log_z", c00_resid <= 1e-9, c00_resid, 1e-9});

    const double h = 1e-5;
    const double fd_mean = (log_Z(0.5 - h) - log_Z(0.5 + h)) / (2.0 * h);
    const double mean_resid = std::abs(fd_mean - mean_total(0.5)) / fd_mean;
    rows.push_back({"mean_total_vs_log_z_slope", mean_resid <= 1e-6, mean_resid, 1e-6});

    const double h2 = 1e-4;
    const double fd_var = (log_Z(0.5 + h2) - 2.0 * log_Z(0.5) + log_Z(0.5 - h2)) / (h2 * h2);
    const double var_resid = std::abs(fd_var - variance_total(0.5)) / fd_var;
    rows.push_back({"variance_total_vs_log_z_curvature", var_resid <= 1e-5, var_resid, 1e-5});

    const double icrit_imag = std::abs(i_crit_explicit_conjugates(0.1, 3).imag());
    rows.push_back({"i_crit_conjugate_cancellation", icrit_imag <= 1e-12, icrit_imag, 1e-12});

    const ierr_result ie = I_err_detailed(0.1);
    rows.push_back({"i_err_imaginary_residue", ie.imag_residue <= 1e-10, ie.imag_residue, 1e-10});

    return rows;
}

// sampler laws under a fixed seed
inline std::vector<check_row> suite_montecarlo() {
    std::vector<check_row> rows;
    const long long draws = 20000;

    {  // geometric marginals read off full configuration draws at beta = 0.5
        rng_state rng = rng_state::seeded(20260816);
        const boltzmann_sampler sampler(0.5);
        long long hits1 = 0, hits2 = 0;
        const primitive_vector v10{1, 0}, v12{1, 2};
        for (long long i = 0; i < draws; ++i) {
            const chain_config config = sampler.draw(rng);
            auto it = config.find(v10);
            if (it != config.end() && it->second >= 1) ++hits1;
            it = config.find(v12);
            if (it != config.end() && it->second >= 2) ++hits2;
        }
        const double p1 = std::exp(-0.5), p2 = std::exp(-3.0);  // q and q² at levels 1 and 3
        const double s1 = 3.0 * std::sqrt(p1 * (1.0 - p1) / draws);
        const double s2 = 3.0 * std::sqrt(p2 * (1.0 - p2) / draws);
        const double d1 = std::abs(static_cast<double>(hits1) / draws - p1);
        const double d2 = std::abs(static_cast<double>(hits2) / draws - p2);
        rows.push_back({"geometric_marginal_level1", d1 <= s1, d1, s1});
        rows.push_back({"geometric_marginal_tail_level3", d2 <= s2, d2, s2});
    }

    {  // calibrated endpoint mean and coordinate correlation at n = 30
        const calibration_result cal = calibrate(30);
        rng_state rng = rng_state::seeded(20260816, 1);
        const boltzmann_sampler sampler(cal.beta);
        const sample_stats st = endpoint_stats(sampler, draws, rng);
        const double var_x = cumulant(2, 0, cal.beta);
        const double sigma = 3.0 * std::sqrt(var_x / draws);
        const double mean_dev = std::abs(st.mean_x - 30.0);
        rows.push_back({"calibrated_mean_x_3sigma", mean_dev <= sigma, mean_dev, sigma});
        const double corr = st.cov_xy / std::sqrt(st.var_x * st.var_y);
        const double corr_ref = cumulant(1, 1, cal.beta) / var_x;
        const double corr_dev = std::abs(corr - corr_ref);
        rows.push_back({"endpoint_correlation", corr_dev <= 0.05, corr_dev, 0.05});
    }

    {  // identical seeds reproduce identical draw sequences
        rng_state a = rng_state::seeded(7), b = rng_state::seeded(7);
        const boltzmann_sampler sampler(0.4);
        long long mism = 0;
        for (int i = 0; i < 200; ++i)
            if (sampler.draw(a) != sampler.draw(b)) ++mism;
        rows.push_back({"determinism_same_seed", mism == 0, static_cast<double>(mism), 0.0});
    }

    {  // conditioned sampler is uniform: all 13 chains to (3,3), flat frequencies
        const calibration_result cal = calibrate(3);
        const boltzmann_sampler sampler(cal.beta);  // cutoff 46 covers every level <= 6
        rng_state rng = rng_state::seeded(20260816, 2);
        std::map<std::string, long long> freq;
        const long long target = 4000;
        long long accepted = 0, attempts = 0;
        while (accepted < target && attempts < 10000000) {
            ++attempts;
            auto config = sampler.draw_in_box(rng, 3);
            if (config && endpoint(*config) == point{3, 3}) {
                ++freq[chain_key(config_to_chain(*config))];
                ++accepted;
            }
        }
        rows.push_back({"conditioned_support_13_chains", freq.size() == 13,
                        static_cast<double>(freq.size()), 13.0});
        double worst = 1.0;  // if some chain never appears, its deviation is 1/13
        if (freq.size() == 13) {
            worst = 0.0;
            for (const auto& [key, cnt] : freq)
                worst = std::max(worst,
                                 std::abs(static_cast<double>(cnt) / accepted - 1.0 / 13.0));
        }
        rows.push_back({"conditioned_uniform_frequencies", worst <= 0.025, worst, 0.025});
    }

    {  // conditioned draw is a valid chain with the requested endpoint
        rng_state rng = rng_state::seeded(20260816, 3);
        const conditioned_result res = sample_conditioned(8, 10000000, rng);
        bool ok = res.chain.has_value();
        if (ok) {
            const convex_chain& chain = *res.chain;
            ok = chain.back() == point{8, 8} &&
                 config_to_chain(chain_to_config(chain)) == chain;
        }
        rows.push_back({"conditioned_chain_valid", ok, ok ? 1.0 : 0.0, 1.0});
    }

    return rows;
}

// published-value anchors
inline std::vector<check_row> suite_paper() {
    std::vector<check_row> rows;

    const count_table_t t100 = count_table(100, 100);
    const bool anchor = t100.at(100, 100) == mpz_class("26878385993387721255010");
    rows.push_back({"p_100_exact_anchor", anchor, anchor ? 1.0 : 0.0, 1.0});

    const long diag_expect[] = {2, 5, 13, 32, 77, 178};
    long long diag_mism = 0;
    for (long long n = 1; n <= 6; ++n)
        if (t100.at(n, n) != diag_expect[n - 1]) ++diag_mism;
    rows.push_back({"p_diagonal_small_values", diag_mism == 0, static_cast<double>(diag_mism), 0.0});

    const long pt_expect[] = {1, 1, 2, 4, 7, 13, 21, 37, 60};
    const std::vector<mpz_class> pt = polyomino_counts(8);
    long long pt_mism = 0;
    for (long long n = 0; n <= 8; ++n)
        if (pt[n] != pt_expect[n]) ++pt_mism;
    rows.push_back({"polyomino_small_values", pt_mism == 0, static_cast<double>(pt_mism), 0.0});

    const asymptotic_estimate est = estimate_p(100, 2);
    const double value = est.mantissa * std::pow(10.0, static_cast<double>(est.exponent10));
    rows.push_back({"estimate_p100_band", value >= 2.2e22 && value <= 2.6e22, value, 2.6e22});
    const double ratio = std::exp(log_mpz(t100.at(100, 100)) -
                                  (est.main_exponent + est.icrit_term + est.log_prefactor));
    rows.push_back({"exact_over_estimate_p100", ratio >= 1.05 && ratio <= 1.20, ratio, 1.20});

    const std::vector<zeta_zero>& zeros = default_zeros();
    const double g1 = std::abs(zeros[0].gamma - 14.1347);
    const double g2 = std::abs(zeros[1].gamma - 21.0220);
    rows.push_back({"zero_ordinate_1", g1 <= 5e-4, g1, 5e-4});
    rows.push_back({"zero_ordinate_2", g2 <= 5e-4, g2, 5e-4});

    for (double beta : {0.01, 0.05, 0.1}) {
        const double zs = i_crit_zero_sum(beta, 1).value;
        const double tt = i_crit_two_term(beta);
        const double rel = std::abs(tt - zs) / std::abs(zs);
        std::ostringstream name;
        name << "two_term_vs_zero_sum_beta_" << beta;
        rows.push_back({name.str(), rel <= 5e-3, rel, 5e-3});
    }

    return rows;
}

}  // namespace detail_cli

inline run_outcome run_command(const std::vector<std::string>& args) {
    run_outcome out;
    run_report& rep = out.report;

    CLI::App app{"convex lattice chains: exact counting, Boltzmann sampling, zeta asymptotics"};
    app.require_subcommand(0, 1);

    struct {
        long long n = -1, n1 = -1, n2 = -1, m = 100000, samples = -1, threads = 1;
        std::uint64_t seed = 1;
        std::size_t zeros = 3;
        double beta = std::numeric_limits<double>::quiet_NaN();
        double tol = 1e-12, cutoff = 46.0, s_re = 3.0, s_im = 0.0;
        int k1 = 1, k2 = 0;
        bool deterministic = false, exact = false;
        std::string out_path, cache, format = "json", suite;
    } o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--deterministic", o.deterministic,
                      "suppress the timestamp for byte-stable reports");
        sub->add_option("--format", o.format, "report format: json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--threads", o.threads, "worker-thread cap (computation is sequential)");
    };

    CLI::App* c_count = app.add_subcommand("count", "exact number of convex chains to a box corner");
    c_count->add_option("--n", o.n, "diagonal box size: count p(n,n)");
    c_count->add_option("--n1", o.n1, "box width");
    c_count->add_option("--n2", o.n2, "box height");
    c_count->add_option("--cache", o.cache, "append-only count cache (verified when present)");
    add_common(c_count);

    CLI::App* c_poly = app.add_subcommand("polyomino-count",
                                          "exact number of digitally convex polyomino paths");
    c_poly->add_option("--n", o.n, "total path length")->required();
    c_poly->add_option("--cache", o.cache, "append-only count cache (verified when present)");
    add_common(c_poly);

    CLI::App* c_cal = app.add_subcommand("calibrate", "solve E[X1+X2] = 2n for the temperature");
    c_cal->add_option("--n", o.n, "target half-perimeter")->required();
    add_common(c_cal);

    CLI::App* c_logz = app.add_subcommand("logz", "diagonal log partition function");
    c_logz->add_option("--beta", o.beta, "temperature")->required();
    c_logz->add_option("--tol", o.tol, "series tail tolerance");
    add_common(c_logz);

    CLI::App* c_cum = app.add_subcommand("cumulant", "mixed log-Z derivative (-1)^{k1+k2} order <= 2");
    c_cum->add_option("--beta", o.beta, "temperature")->required();
    c_cum->add_option("--k1", o.k1, "order in the first coordinate")->required();
    c_cum->add_option("--k2", o.k2, "order in the second coordinate")->required();
    add_common(c_cum);

    CLI::App* c_dir = app.add_subcommand("dirichlet", "weight Dirichlet series vs zeta identity");
    c_dir->add_option("--s-re", o.s_re, "Re s (> 2)");
    c_dir->add_option("--s-im", o.s_im, "Im s");
    c_dir->add_option("--m", o.m, "truncation level M (also checked at 2M)");
    add_common(c_dir);

    CLI::App* c_ierr = app.add_subcommand("ierr", "remainder contour integral on Re s = -1/2");
    c_ierr->add_option("--beta", o.beta, "temperature")->required();
    add_common(c_ierr);

    CLI::App* c_zeros = app.add_subcommand("zeros", "nontrivial zeta zeros up to ordinate T");
    c_zeros->add_option("--n", o.n, "scan ceiling T (default 60)");
    c_zeros->add_option("--cache", o.cache, "zero cache file (verified when present, else written)");
    add_common(c_zeros);

    CLI::App* c_icrit = app.add_subcommand("icrit", "critical-line zero sum and two-term form");
    c_icrit->add_option("--beta", o.beta, "temperature")->required();
    c_icrit->add_option("--zeros", o.zeros, "number of zero pairs K");
    add_common(c_icrit);

    CLI::App* c_est = app.add_subcommand("estimate", "analytic estimate of p(n,n)");
    c_est->add_option("--n", o.n, "box size")->required();
    c_est->add_option("--zeros", o.zeros, "number of zero pairs K");
    c_est->add_flag("--exact", o.exact, "also compute the exact count and the ratio");
    add_common(c_est);

    CLI::App* c_estp = app.add_subcommand("estimate-polyomino", "analytic estimate of the path count");
    c_estp->add_option("--n", o.n, "total path length")->required();
    c_estp->add_option("--zeros", o.zeros, "number of zero pairs K");
    c_estp->add_flag("--exact", o.exact, "also compute the exact count and the ratio");
    add_common(c_estp);

    CLI::App* c_gap = app.add_subcommand("rh-gap", "exact-vs-analytic log gap table on the diagonal");
    c_gap->add_option("--n", o.n, "table ceiling N")->required();
    c_gap->add_option("--zeros", o.zeros, "number of zero pairs K");
    add_common(c_gap);

    CLI::App* c_sample = app.add_subcommand("sample", "free Boltzmann draws and endpoint statistics");
    c_sample->add_option("--beta", o.beta, "temperature (calibrated from --n when omitted)");
    c_sample->add_option("--n", o.n, "hit target: counts endpoints at (n,n), adds exact-law checks");
    c_sample->add_option("--samples", o.samples, "number of draws (default 10000)");
    c_sample->add_option("--seed", o.seed, "RNG seed");
    c_sample->add_option("--cutoff", o.cutoff, "level truncation parameter (levels up to cutoff/beta)");
    add_common(c_sample);

    CLI::App* c_cond = app.add_subcommand("sample-conditioned",
                                          "uniform random chain to (n,n) by calibrated rejection");
    c_cond->add_option("--n", o.n, "endpoint coordinate")->required();
    c_cond->add_option("--samples", o.samples, "rejection attempt budget (default 10000000)");
    c_cond->add_option("--seed", o.seed, "RNG seed");
    c_cond->add_option("--out", o.out_path, "write the chain as .csv or .svg");
    add_common(c_cond);

    CLI::App* c_shape = app.add_subcommand("limit-shape",
                                           "deviation of conditioned chains from the limit arc");
    c_shape->add_option("--n", o.n, "single size");
    c_shape->add_option("--n1", o.n1, "comparison pair: smaller size");
    c_shape->add_option("--n2", o.n2, "comparison pair: larger size");
    c_shape->add_option("--samples", o.samples, "conditioned chains per size (default 100)");
    c_shape->add_option("--seed", o.seed, "RNG seed");
    c_shape->add_option("--out", o.out_path, "write per-sample deviations as CSV");
    add_common(c_shape);

    CLI::App* c_verify = app.add_subcommand("verify", "bundled verification suites");
    c_verify->add_option("--suite", o.suite, "oracle | identities | montecarlo | paper")
        ->required()
        ->check(CLI::IsMember({"oracle", "identities", "montecarlo", "paper"}));
    add_common(c_verify);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("chains");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help and friends
            out.rendered = app.help();
            out.exit_code = 0;
        } else {
            out.rendered = std::string("error: ") + e.what() + "\n\n" + app.help();
            out.exit_code = 2;
        }
        return out;
    }
    if (app.get_subcommands().empty()) {
        out.rendered = app.help();
        out.exit_code = 2;
        return out;
    }

    rep.deterministic = o.deterministic;
    rep.command = app.get_subcommands().front()->get_name();

    try {
        if (*c_count) {
            if (o.n >= 0 && (o.n1 >= 0 || o.n2 >= 0))
                throw std::invalid_argument("count: give either --n or --n1/--n2, not both");
            long long n1 = o.n >= 0 ? o.n : o.n1;
            long long n2 = o.n >= 0 ? o.n : o.n2;
            if (n1 < 0 || n2 < 0)
                throw std::invalid_argument("count: need --n, or both --n1 and --n2");
            rep.parameters = {{"n1", n1}, {"n2", n2}};
            const count_table_t table = count_table(n1, n2);
            rep.results["n1"] = n1;
            rep.results["n2"] = n2;
            rep.results["value"] = table.at(n1, n2).get_str();
            if (!o.cache.empty()) {
                rep.parameters["cache"] = o.cache;
                if (std::filesystem::exists(o.cache)) verify_count_records(load_count_records(o.cache));
                append_count_records(o.cache, {{"p", n1, n2, table.at(n1, n2)}});
                rep.add_check("cache_verified_and_appended", true, 1.0, 1.0);
            }
        } else if (*c_poly) {
            rep.parameters = {{"n", o.n}};
            const std::vector<mpz_class> pt = polyomino_counts(o.n);
            rep.results["n"] = o.n;
            rep.results["value"] = pt[o.n].get_str();
            if (!o.cache.empty()) {
                rep.parameters["cache"] = o.cache;
                if (std::filesystem::exists(o.cache)) verify_count_records(load_count_records(o.cache));
                append_count_records(o.cache, {{"ptilde", o.n, 0, pt[o.n]}});
                rep.add_check("cache_verified_and_appended", true, 1.0, 1.0);
            }
        } else if (*c_cal) {
            rep.parameters = {{"n", o.n}};
            const calibration_result cal = calibrate(o.n);
            rep.results = {{"n", cal.n},
                           {"beta", cal.beta},
                           {"mean_total", cal.mean_total},
                           {"residual", cal.residual},
                           {"variance_total", cal.variance_total},
                           {"beta_cubed_n_over_kappa",
                            cal.beta * cal.beta * cal.beta * o.n / constants().kappa}};
            const double tol = 1e-9 * std::max(1.0, 2.0 * static_cast<double>(o.n));
            rep.add_check("calibration_residual", std::abs(cal.residual) <= tol,
                          std::abs(cal.residual), tol);
        } else if (*c_logz) {
            rep.parameters = {{"beta", o.beta}, {"tol", o.tol}};
            rep.results = {{"beta", o.beta}, {"log_z", log_Z(o.beta, o.tol)}};
        } else if (*c_cum) {
            rep.parameters = {{"beta", o.beta}, {"k1", o.k1}, {"k2", o.k2}};
            rep.results = {{"beta", o.beta},
                           {"k1", o.k1},
                           {"k2", o.k2},
                           {"value", cumulant(o.k1, o.k2, o.beta)}};
        } else if (*c_dir) {
            const cplx s(o.s_re, o.s_im);
            rep.parameters = {{"s_re", o.s_re}, {"s_im", o.s_im}, {"m", o.m}};
            const dirichlet_result d1 = dirichlet_check(s, o.m);
            const dirichlet_result d2 = dirichlet_check(s, 2 * o.m);
            const double gap1 = std::abs(d1.partial - d1.target);
            const double gap2 = std::abs(d2.partial - d2.target);
            rep.results = {{"partial", detail_cli::cplx_json(d1.partial)},
                           {"target", detail_cli::cplx_json(d1.target)},
                           {"gap", gap1},
                           {"gap_bound", d1.gap_bound},
                           {"gap_at_2m", gap2}};
            rep.add_check("gap_within_tail_bound", gap1 <= d1.gap_bound, gap1, d1.gap_bound);
            rep.add_check("gap_halving", gap2 <= 0.6 * gap1, gap2 / gap1, 0.6);
        } else if (*c_ierr) {
            rep.parameters = {{"beta", o.beta}};
            const ierr_result r = I_err_detailed(o.beta);
            rep.results = {{"value", r.value},
                           {"imag_residue", r.imag_residue},
                           {"tail_estimate", r.tail_estimate},
                           {"achieved_tol", r.achieved_tol}};
            rep.add_check("imag_residue", r.imag_residue <= 1e-10, r.imag_residue, 1e-10);
        } else if (*c_zeros) {
            const double T = o.n >= 0 ? static_cast<double>(o.n) : 60.0;
            rep.parameters = {{"t", T}};
            std::vector<zeta_zero> zeros;
            if (!o.cache.empty() && std::filesystem::exists(o.cache)) {
                rep.parameters["cache"] = o.cache;
                zeros = load_zero_cache(o.cache);
                verify_zero_cache(zeros, T);
                rep.add_check("cache_verified", true, 1.0, 1.0);
            } else {
                zeros = find_zeta_zeros(T);
                if (!o.cache.empty()) {
                    rep.parameters["cache"] = o.cache;
                    save_zero_cache(o.cache, zeros);
                }
            }
            rep.results["count"] = zeros.size();
            rep.results["zeros"] = nlohmann::json::array();
            double worst = 0.0;
            for (const zeta_zero& z : zeros) {
                rep.results["zeros"].push_back(
                    {{"gamma", z.gamma}, {"zeta_prime", detail_cli::cplx_json(z.zeta_prime)}});
                worst = std::max(worst, std::abs(zeta_complex(cplx(0.5, z.gamma))));
            }
            rep.add_check("zero_quality", worst <= 1e-10, worst, 1e-10);
        } else if (*c_icrit) {
            rep.parameters = {{"beta", o.beta}, {"zeros", o.zeros}};
            const icrit_result r = i_crit_zero_sum(o.beta, o.zeros);
            rep.results = {{"value", r.value}, {"last_term", r.last_term}};
            rep.results["imag_residue"] =
                std::abs(i_crit_explicit_conjugates(o.beta, o.zeros).imag());
            if (o.beta <= 1.0) {
                const double tt = i_crit_two_term(o.beta);
                rep.results["two_term"] = tt;
                if (o.zeros == 1) {
                    const double rel = std::abs(tt - r.value) / std::abs(r.value);
                    rep.add_check("two_term_agreement", rel <= 5e-3, rel, 5e-3);
                }
            }
        } else if (*c_est || *c_estp) {
            const bool poly = static_cast<bool>(*c_estp);
            rep.parameters = {{"n", o.n}, {"zeros", o.zeros}};
            const asymptotic_estimate e =
                poly ? estimate_polyomino(o.n, o.zeros) : estimate_p(o.n, o.zeros);
            std::ostringstream sci;
            sci.setf(std::ios::scientific);
            sci.precision(7);
            sci << e.mantissa * std::pow(10.0, static_cast<double>(e.exponent10));
            rep.results = {{"n", e.n},
                           {"beta", e.beta},
                           {"main_exponent", e.main_exponent},
                           {"icrit_term", e.icrit_term},
                           {"log_prefactor", e.log_prefactor},
                           {"log10_value", e.log10_value},
                           {"mantissa", e.mantissa},
                           {"exponent10", e.exponent10},
                           {"value", sci.str()}};
            const double comp_resid =
                std::abs(e.log10_value * std::log(10.0) -
                         (e.main_exponent + e.icrit_term + e.log_prefactor));
            const double comp_tol = 1e-12 * std::max(1.0, std::abs(e.main_exponent));
            rep.add_check("component_consistency", comp_resid <= comp_tol, comp_resid, comp_tol);
            rep.add_check("mantissa_normalized", e.mantissa >= 1.0 && e.mantissa < 10.0, e.mantissa,
                          10.0);
            if (o.exact) {
                const mpz_class exact =
                    poly ? polyomino_counts(o.n)[o.n] : count_table(o.n, o.n).at(o.n, o.n);
                rep.results["exact"] = exact.get_str();
                rep.results["exact_over_estimate"] =
                    std::exp(log_mpz(exact) -
                             (e.main_exponent + e.icrit_term + e.log_prefactor));
            }
        } else if (*c_gap) {
            rep.parameters = {{"n", o.n}, {"zeros", o.zeros}};
            const std::vector<rh_gap_row> rows = rh_gap(o.n, o.zeros);
            rep.results["rows"] = nlohmann::json::array();
            for (const rh_gap_row& r : rows)
                rep.results["rows"].push_back(
                    {{"n", r.n}, {"gap", r.gap}, {"residual", r.residual}});
        } else if (*c_sample) {
            const long long samples = o.samples >= 0 ? o.samples : 10000;
            double beta = o.beta;
            if (std::isnan(beta)) {
                if (o.n < 0)
                    throw std::invalid_argument("sample: need --beta or --n to calibrate from");
                beta = calibrate(o.n).beta;
            }
            rep.parameters = {{"beta", beta}, {"samples", samples}, {"seed", o.seed},
                              {"cutoff", o.cutoff}};
            if (o.n >= 0) rep.parameters["n"] = o.n;
            const boltzmann_sampler sampler(beta, o.cutoff);
            rep.results["beta"] = beta;
            rep.results["levels"] = sampler.W;
            rep.results["tail_tv"] = sampler.tail_tv();
            double exact_prob = -1.0;
            if (o.n >= 1) {
                exact_prob = exact_hit_probability(o.n, beta);
                rep.results["exact_hit_probability"] = exact_prob;
                rep.results["local_limit_rate"] = local_limit_rate(o.n);
                rep.results["hit_ratio_exact_over_llt"] = exact_prob / local_limit_rate(o.n);
            }
            if (samples >= 2) {
                rng_state rng = rng_state::seeded(o.seed);
                const sample_stats st = endpoint_stats(sampler, samples, rng, o.n);
                rep.results["mean"] = {{"x", st.mean_x}, {"y", st.mean_y}};
                rep.results["covariance"] = {
                    {"xx", st.var_x}, {"yy", st.var_y}, {"xy", st.cov_xy}};
                if (o.n >= 1) {
                    rep.results["hits"] = st.hits;
                    const double var_x = cumulant(2, 0, beta);
                    const double mtol = 3.0 * std::sqrt(var_x / samples);
                    const double mdev = std::abs(st.mean_x - static_cast<double>(o.n));
                    rep.add_check("mean_x_within_3_sigma", mdev <= mtol, mdev, mtol);
                    const double htol =
                        3.0 * std::sqrt(exact_prob * (1.0 - exact_prob) / samples);
                    const double hdev =
                        std::abs(static_cast<double>(st.hits) / samples - exact_prob);
                    rep.add_check("hit_frequency_within_3_sigma", hdev <= htol, hdev, htol);
                }
            }
        } else if (*c_cond) {
            const long long budget = o.samples >= 0 ? o.samples : 10000000;
            rep.parameters = {{"n", o.n}, {"max_draws", budget}, {"seed", o.seed}};
            rng_state rng = rng_state::seeded(o.seed);
            const conditioned_result res = sample_conditioned(o.n, budget, rng);
            rep.results = {{"n", res.n},
                           {"beta", res.beta},
                           {"draws", res.draws},
                           {"expected_rate", res.expected_rate},
                           {"accepted", res.chain.has_value()}};
            if (res.chain) {
                rep.results["vertices"] = res.chain->size();
                rep.results["deviation"] = limit_shape_deviation(*res.chain);
                if (!o.out_path.empty()) {
                    write_chain_file(*res.chain, o.out_path);
                    rep.parameters["out"] = o.out_path;
                }
            }
            rep.add_check("accepted", res.chain.has_value(), res.chain ? 1.0 : 0.0, 1.0);
        } else if (*c_shape) {
            const long long per_size = o.samples >= 0 ? o.samples : 100;
            const bool pair = o.n1 >= 1 && o.n2 >= 1;
            if (!pair && o.n < 1)
                throw std::invalid_argument("limit-shape: need --n, or --n1 and --n2");
            rep.parameters = {{"samples", per_size}, {"seed", o.seed}};
            std::ofstream csv;
            if (!o.out_path.empty()) {
                csv.open(o.out_path);
                if (!csv) throw std::runtime_error("cannot open output file: " + o.out_path);
                csv << "n,sample,deviation\n";
                rep.parameters["out"] = o.out_path;
            }
            const auto run_size = [&](long long n, std::uint64_t stream) {
                rng_state rng = rng_state::seeded(o.seed, stream);
                std::vector<double> devs;
                devs.reserve(static_cast<std::size_t>(per_size));
                for (long long i = 0; i < per_size; ++i) {
                    const conditioned_result res = sample_conditioned(n, 10000000, rng);
                    if (!res.chain)
                        throw std::runtime_error("limit-shape: attempt budget exhausted at n = " +
                                                 std::to_string(n));
                    devs.push_back(limit_shape_deviation(*res.chain));
                    if (csv.is_open()) csv << n << ',' << i << ',' << devs.back() << '\n';
                }
                nlohmann::json j{{"n", n},
                                 {"median", detail_cli::median(devs)},
                                 {"min", *std::min_element(devs.begin(), devs.end())},
                                 {"max", *std::max_element(devs.begin(), devs.end())}};
                return std::pair<nlohmann::json, double>(j, detail_cli::median(devs));
            };
            if (pair) {
                rep.parameters["n1"] = o.n1;
                rep.parameters["n2"] = o.n2;
                const auto [j1, med1] = run_size(o.n1, 0);
                const auto [j2, med2] = run_size(o.n2, 1);
                rep.results["sizes"] = {j1, j2};
                rep.add_check("median_decreases_with_n", med2 < med1, med2, med1);
            } else {
                rep.parameters["n"] = o.n;
                const auto [j, med] = run_size(o.n, 0);
                rep.results["sizes"] = {j};
            }
        } else if (*c_verify) {
            rep.parameters = {{"suite", o.suite}};
            if (o.suite == "oracle")
                rep.checks = detail_cli::suite_oracle();
            else if (o.suite == "identities")
                rep.checks = detail_cli::suite_identities();
            else if (o.suite == "montecarlo")
                rep.checks = detail_cli::suite_montecarlo();
            else
                rep.checks = detail_cli::suite_paper();
            rep.results = {{"suite", o.suite}, {"checks_run", rep.checks.size()}};
        }
    } catch (const resource_error& e) {
        rep.results["error"] = e.what();
        out.exit_code = 3;
        out.rendered = o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
        return out;
    } catch (const std::domain_error& e) {
        rep.results["error"] = e.what();
        out.exit_code = 2;
        out.rendered = o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
        return out;
    } catch (const std::invalid_argument& e) {
        rep.results["error"] = e.what();
        out.exit_code = 2;
        out.rendered = o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
        return out;
    } catch (const std::exception& e) {
        rep.results["error"] = e.what();
        out.exit_code = 1;
        out.rendered = o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
        return out;
    }

    out.exit_code = rep.all_pass() ? 0 : 1;
    out.rendered = o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
    return out;
}

inline int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const run_outcome out = run_command(args);
    std::fputs(out.rendered.c_str(), stdout);
    if (!out.rendered.empty() && out.rendered.back() != '\n') std::fputc('\n', stdout);
    return out.exit_code;
}

}  // namespace chains::cli
