#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperalg/expsum.hpp"
#include "hyperalg/geometry.hpp"
#include "hyperalg/mpoly.hpp"
#include "hyperalg/multiindex.hpp"
#include "hyperalg/symbol.hpp"
#include "hyperalg/util.hpp"

namespace hyperalg {

/// Everything the perturbation scheme needs: the operator symbol, the
/// multi-index data (weights k, distinguished index beta, M_A, i_A, d_A),
/// the certified geometry (Gamma_r, Lambda), the target B with exponents on
/// Gamma_r samples, and the base tuple L with exponents on Lambda samples.
struct ClaimConfig {
    Symbol phi;
    MultiIndexSet index_set;
    Arc gamma_r;
    Segment lambda;
    ExpSum target;              // B
    std::vector<ExpSum> base;   // L_1, ..., L_N
    double disk_radius = 1.0;
    SupGrid grid{};
};

struct ZeroSymbolValueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace engine_detail {

inline double weight_exponent(const MultiIndexSet& set) {
    // sum over I_N = {1..N} \ {i_A} of k_s * beta_s
    Rational acc = 0;
    for (std::size_t s = 0; s < set.weights.size(); ++s) {
        if (s == set.distinguished_coord) continue;
        acc += set.weights[s] * Rational(set.beta[s]);
    }
    return to_double(acc);
}

struct Perturbation {
    std::vector<cplx> c;        // c_j(n), one per target term
    ExpSum correction;          // R_n
    std::vector<ExpSum> tuple;  // f_1, ..., f_N
};

inline Perturbation make_perturbation(const ClaimConfig& cfg, unsigned n) {
    if (n < 1) throw std::invalid_argument("perturbation step requires n >= 1");
    if (cfg.target.is_zero()) throw std::invalid_argument("target B must be nonzero");
    const unsigned M = cfg.index_set.max_linf;
    const double w = weight_exponent(cfg.index_set);
    const double n_pow_w = std::pow(static_cast<double>(n), w);

    Perturbation out;
    std::vector<ExpSum::Term> corr_terms;
    for (const auto& term : cfg.target.terms()) {
        const cplx phi_gamma = cfg.phi.eval(term.lambda);
        if (std::abs(phi_gamma) < 1e-9)
            throw ZeroSymbolValueError("Phi vanishes at a target exponent; Gamma_r is not on level r");
        const cplx radicand = term.coeff * n_pow_w / cpow_int(phi_gamma, n);
        const cplx c = principal_root(radicand, M);
        out.c.push_back(c);
        corr_terms.push_back({term.lambda / static_cast<double>(M), c});
    }
    out.correction = ExpSum::from_terms(std::move(corr_terms));

    const std::size_t N = cfg.index_set.dimension;
    if (cfg.base.size() != N)
        throw std::invalid_argument("base tuple size must match the multi-index dimension");
    out.tuple.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (i == cfg.index_set.distinguished_coord) {
            out.tuple.push_back(cfg.base[i] + out.correction);
        } else {
            const double drift = std::pow(static_cast<double>(n),
                                          -to_double(cfg.index_set.weights[i]));
            out.tuple.push_back(cfg.base[i] + ExpSum::single(cplx(0.0, 0.0), cplx(drift, 0.0)));
        }
    }
    return out;
}

}  // namespace engine_detail

/// The perturbed tuple f(n): f_{i_A} = L_{i_A} + R_n and
/// f_i = L_i + n^{-k_i} for the remaining coordinates, with the coefficients
/// of R_n solving  c^{M_A} Phi(gamma_j)^n = b_j n^{sum k_s beta_s}
/// (principal branch of the root).
inline std::vector<ExpSum> build_perturbation(const ClaimConfig& cfg, unsigned n) {
    return engine_detail::make_perturbation(cfg, n).tuple;
}

/// c_j(n) themselves, for decay diagnostics.
inline std::vector<cplx> perturbation_coefficients(const ClaimConfig& cfg, unsigned n) {
    return engine_detail::make_perturbation(cfg, n).c;
}

/// Phi(D)^n (prod f_i^{alpha_i}).
inline ExpSum orbit_term(const ClaimConfig& cfg, const std::vector<ExpSum>& f,
                         const MultiIndex& alpha, unsigned n) {
    return apply_operator(cfg.phi, monomial_power(f, alpha), n);
}

/// The closed-form value of X_beta(0, M_A e_j, ., n): c_j^{M_A} Phi(gamma_j)^n
/// divided by the weight power.  Equal to b_j for every n by construction;
/// computing it through the same floating route as the orbit makes the
/// identity a measurable diagnostic.
inline std::vector<cplx> beta_diagnostics(const ClaimConfig& cfg, unsigned n) {
    const auto pert = engine_detail::make_perturbation(cfg, n);
    const unsigned M = cfg.index_set.max_linf;
    const double w = engine_detail::weight_exponent(cfg.index_set);
    const double n_pow_w = std::pow(static_cast<double>(n), w);
    std::vector<cplx> out;
    out.reserve(pert.c.size());
    std::size_t j = 0;
    for (const auto& term : cfg.target.terms()) {
        const cplx phi_gamma = cfg.phi.eval(term.lambda);
        out.push_back(cpow_int(pert.c[j], M) * cpow_int(phi_gamma, n) / n_pow_w);
        ++j;
    }
    return out;
}

struct OrbitRow {
    MultiIndex alpha;
    unsigned n = 0;
    double distance = 0.0;    // to B for alpha == beta, to 0 otherwise
    cplx dominant{0.0, 0.0};  // X_beta diagnostic on beta rows, largest orbit coefficient otherwise
};

struct OrbitReport {
    std::vector<unsigned> schedule;
    std::vector<OrbitRow> rows;                        // (alpha outer, n inner), deterministic
    std::vector<std::vector<cplx>> beta_diagnostics_by_n;  // aligned with schedule

    double distance(const MultiIndex& alpha, unsigned n) const {
        for (const auto& row : rows)
            if (row.alpha == alpha && row.n == n) return row.distance;
        throw std::out_of_range("orbit report has no such (alpha, n) row");
    }
};

/// Tabulates sup-distances of Phi(D)^n(f^alpha) to its limit (B for beta,
/// zero otherwise) over the given schedule, with dominant-term diagnostics.
inline OrbitReport verify_claim(const ClaimConfig& cfg, const std::vector<unsigned>& n_schedule) {
    if (n_schedule.empty()) throw std::invalid_argument("verify_claim: empty schedule");
    for (std::size_t i = 1; i < n_schedule.size(); ++i)
        if (n_schedule[i] <= n_schedule[i - 1])
            throw std::invalid_argument("verify_claim: schedule must be increasing");

    OrbitReport report;
    report.schedule = n_schedule;
    const ExpSum zero;

    std::size_t jstar = 0;
    {
        double best = -1.0;
        const auto& terms = cfg.target.terms();
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (std::abs(terms[j].coeff) > best) {
                best = std::abs(terms[j].coeff);
                jstar = j;
            }
        }
    }

    std::vector<std::vector<OrbitRow>> per_alpha(cfg.index_set.indices.size());
    for (std::size_t ni = 0; ni < n_schedule.size(); ++ni) {
        const unsigned n = n_schedule[ni];
        const std::vector<ExpSum> f = build_perturbation(cfg, n);
        report.beta_diagnostics_by_n.push_back(beta_diagnostics(cfg, n));
        for (std::size_t ai = 0; ai < cfg.index_set.indices.size(); ++ai) {
            const MultiIndex& alpha = cfg.index_set.indices[ai];
            const bool is_beta = alpha == cfg.index_set.beta;
            const ExpSum orbit = orbit_term(cfg, f, alpha, n);
            OrbitRow row;
            row.alpha = alpha;
            row.n = n;
            row.distance = sup_distance(orbit, is_beta ? cfg.target : zero, cfg.disk_radius, cfg.grid);
            if (is_beta) {
                row.dominant = report.beta_diagnostics_by_n.back()[jstar];
            } else {
                double best = -1.0;
                for (const auto& t : orbit.terms()) {
                    if (std::abs(t.coeff) > best) {
                        best = std::abs(t.coeff);
                        row.dominant = t.coeff;
                    }
                }
                if (best < 0.0) row.dominant = cplx(0.0, 0.0);
            }
            per_alpha[ai].push_back(row);
        }
    }
    for (auto& rows : per_alpha)
        for (auto& row : rows) report.rows.push_back(std::move(row));
    return report;
}

inline std::optional<cplx> snap_to_samples(const cplx& value, const std::vector<cplx>& samples,
                                           double tol = 1e-6) {
    double best = tol;
    std::optional<cplx> out;
    for (const cplx& s : samples) {
        const double d = std::abs(value - s);
        if (d <= best) {
            best = d;
            out = s;
        }
    }
    return out;
}

/// Projects every exponent of `f` onto the sample set (1e-6 snap tolerance);
/// exponents off the set are rejected.  The construction requires target
/// exponents literally on Gamma_r and base exponents literally on Lambda.
inline ExpSum snap_exponents(const ExpSum& f, const std::vector<cplx>& samples,
                             const std::string& what) {
    std::vector<ExpSum::Term> terms;
    for (const auto& t : f.terms()) {
        const auto s = snap_to_samples(t.lambda, samples);
        if (!s)
            throw std::invalid_argument(what + ": exponent not within 1e-6 of any certified sample");
        terms.push_back({*s, t.coeff});
    }
    return ExpSum::from_terms(std::move(terms));
}

struct StepResult {
    bool converged = false;
    std::vector<ExpSum> f;
    unsigned q = 0;
    double distance = 0.0;  // achieved sup distance (best seen when not converged)
    OrbitReport report;
    ClaimConfig config;     // the fully assembled configuration that was run
};

/// One hypercyclic approximation step: builds B = g / c_beta from the target,
/// assembles the claim configuration on the certified geometry, and runs the
/// doubling schedule until Phi(D)^q P(f) lands within eps of g on the sample
/// disk.  Non-convergence within n_max is reported, not thrown: the schedule
/// may simply be too short for marginal geometry.
inline StepResult hypercyclic_step(const Symbol& phi, const RationalPoly& P, const ExpSum& g,
                                   std::vector<ExpSum> base, const TheoremData& geom, double eps,
                                   double disk_radius, unsigned n_max,
                                   std::uint64_t weight_seed = 20240901, SupGrid grid = {},
                                   int density = 40, bool require_certificate = true) {
    if (P.is_zero()) throw std::invalid_argument("hypercyclic_step: zero polynomial");
    if (!(P.constant_term() == Rational(0)))
        throw std::invalid_argument("hypercyclic_step: polynomial must vanish at the origin");
    if (g.is_zero())
        throw std::invalid_argument(
            "hypercyclic_step: target must be a nonzero exponential sum (V is a neighborhood of a "
            "nonzero function)");
    if (!(eps > 0.0)) throw std::invalid_argument("hypercyclic_step: eps must be positive");

    std::vector<MultiIndex> support;
    for (const auto& [alpha, c] : P.terms()) support.push_back(alpha);

    ClaimConfig cfg;
    cfg.phi = phi;
    cfg.index_set = make_index_set(support, weight_seed);
    cfg.gamma_r = geom.gamma_r;
    cfg.lambda = geom.lambda;
    cfg.disk_radius = disk_radius;
    cfg.grid = grid;

    // the certificate must cover this polynomial's degree data
    if (require_certificate) {
        const int d_A = static_cast<int>(cfg.index_set.max_l1);
        const int M_A = static_cast<int>(cfg.index_set.max_linf);
        const MinkowskiReport cert =
            check_minkowski_conditions(phi, geom.gamma_r, geom.lambda, d_A, M_A, density);
        if (!cert.all_pass())
            throw std::invalid_argument(
                "hypercyclic_step: certified geometry does not cover (d_A, M_A) for this polynomial");
    }

    const cplx c_beta = detail::to_engine_scalar(P.coeff(cfg.index_set.beta),
                                                 static_cast<const cplx*>(nullptr));
    const ExpSum snapped_g = snap_exponents(g, cfg.gamma_r.points, "target");
    {
        std::vector<std::pair<cplx, ExpSum>> scaled{{cplx(1.0, 0.0) / c_beta, snapped_g}};
        cfg.target = ExpSum::linear_combine(scaled);
    }

    if (base.empty()) {
        // deterministic default base tuple on the certified segment
        const auto& s = cfg.lambda.samples;
        const cplx la = s[s.size() / 4];
        const cplx lb = s[(3 * s.size()) / 4];
        for (std::uint32_t i = 0; i < cfg.index_set.dimension; ++i) {
            base.push_back(ExpSum::from_terms(
                {{la, cplx(0.2, 0.0)}, {lb, cplx(0.0, 0.1)}}));
        }
    }
    cfg.base.reserve(base.size());
    for (const auto& L : base) cfg.base.push_back(snap_exponents(L, cfg.lambda.samples, "base tuple"));

    StepResult result;
    result.config = cfg;
    result.report.schedule = {};

    double best = std::numeric_limits<double>::infinity();
    std::vector<unsigned> schedule;
    for (unsigned n = 8; n <= n_max; n *= 2) schedule.push_back(n);
    if (schedule.empty()) schedule.push_back(std::max(1u, n_max));

    for (unsigned n : schedule) {
        result.report.schedule.push_back(n);
        const std::vector<ExpSum> f = build_perturbation(cfg, n);
        result.report.beta_diagnostics_by_n.push_back(beta_diagnostics(cfg, n));
        for (const MultiIndex& alpha : cfg.index_set.indices) {
            const bool is_beta = alpha == cfg.index_set.beta;
            const ExpSum orbit = orbit_term(cfg, f, alpha, n);
            OrbitRow row;
            row.alpha = alpha;
            row.n = n;
            row.distance =
                sup_distance(orbit, is_beta ? cfg.target : ExpSum{}, cfg.disk_radius, cfg.grid);
            row.dominant = is_beta ? result.report.beta_diagnostics_by_n.back().front() : cplx(0, 0);
            result.report.rows.push_back(row);
        }
        const ExpSum full_orbit = apply_operator(phi, apply_polynomial(P, f), n);
        const double dist = sup_distance(full_orbit, snapped_g, disk_radius, grid);
        if (dist < best) {
            best = dist;
            result.f = f;
            result.q = n;
            result.distance = dist;
        }
        if (dist < eps) {
            result.converged = true;
            return result;
        }
    }
    result.distance = best;
    return result;
}

/// The restriction to the real line, evaluated at the given sample points.
/// This is literally eval_point at real arguments: the restriction operator
/// commutes with the calculus at the data level.
inline std::vector<cplx> restrict_to_real(const ExpSum& f, const std::vector<double>& xs) {
    std::vector<cplx> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(eval_point(f, cplx(x, 0.0)));
    return out;
}

}  // namespace hyperalg
