#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperalg/symbol.hpp"
#include "hyperalg/util.hpp"

namespace hyperalg {

/// Sampled arc of a level set {|Phi| = level}, ordered by arclength.
struct Arc {
    std::vector<cplx> points;
    double level = 1.0;
    std::vector<double> curvatures;  // same length as points; endpoints replicate neighbors
};

/// Sampled compact segment, required to avoid the origin.
struct Segment {
    cplx a{0.0, 0.0};
    cplx b{0.0, 0.0};
    std::vector<cplx> samples;
};

enum class TraceFailure { seed_not_on_level, seed_critical_point, corrector_divergence };
enum class TraceStatus { max_points_reached, closed, hit_critical_point };

struct TraceError : std::runtime_error {
    TraceFailure kind;
    TraceError(TraceFailure k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

enum class GeometryFailure { no_convex_run, no_seed_arc, search_exhausted };

struct GeometryError : std::runtime_error {
    GeometryFailure kind;
    GeometryError(GeometryFailure k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

/// Complex derivative by central finite difference with step 1e-6.
inline cplx symbol_derivative(const Symbol& phi, const cplx& z) {
    constexpr double h = 1e-6;
    return (phi.eval(z + cplx(h, 0.0)) - phi.eval(z - cplx(h, 0.0))) / (2.0 * h);
}

namespace geo_detail {

// gradient of |Phi|^2 as a complex vector: 2 * Phi(z) * conj(Phi'(z))
inline cplx level_gradient(const Symbol& phi, const cplx& z, cplx* phi_value = nullptr) {
    const cplx w = phi.eval(z);
    if (phi_value) *phi_value = w;
    return 2.0 * w * std::conj(symbol_derivative(phi, z));
}

// Damped Newton on |Phi(z)|^2 - r^2 along the gradient direction.
inline cplx newton_to_level(const Symbol& phi, cplx z, double r, double max_step) {
    const double target_tol = 1e-11 * (1.0 + r);
    for (int iter = 0; iter < 50; ++iter) {
        cplx w;
        const cplx g = level_gradient(phi, z, &w);
        const double modulus = std::abs(w);
        if (std::abs(modulus - r) <= target_tol) return z;
        const double gn = std::abs(g);
        if (gn < 1e-14)
            throw TraceError(TraceFailure::corrector_divergence,
                             "corrector stalled at a critical point");
        const double F = modulus * modulus - r * r;
        cplx dz = -(F / (gn * gn)) * g;
        const double dn = std::abs(dz);
        if (dn > max_step) dz *= max_step / dn;
        z += dz;
    }
    throw TraceError(TraceFailure::corrector_divergence, "corrector did not converge in 50 iterations");
}

}  // namespace geo_detail

/// Circumscribed-circle curvature from three consecutive samples, signed by
/// the orientation of the triangle they span.
inline double signed_curvature(const Arc& arc, std::size_t index) {
    const auto& pts = arc.points;
    if (index < 1 || index + 1 >= pts.size())
        throw std::out_of_range("signed_curvature: index must be interior");
    const cplx u = pts[index] - pts[index - 1];
    const cplx v = pts[index + 1] - pts[index];
    const cplx w = pts[index + 1] - pts[index - 1];
    const double cross = std::imag(std::conj(u) * v);
    const double denom = std::abs(u) * std::abs(v) * std::abs(w);
    if (denom == 0.0) return 0.0;
    return 2.0 * cross / denom;
}

inline void fill_curvatures(Arc& arc) {
    const std::size_t n = arc.points.size();
    arc.curvatures.assign(n, 0.0);
    if (n < 3) return;
    for (std::size_t i = 1; i + 1 < n; ++i) arc.curvatures[i] = signed_curvature(arc, i);
    arc.curvatures[0] = arc.curvatures[1];
    arc.curvatures[n - 1] = arc.curvatures[n - 2];
}

struct TraceResult {
    Arc arc;
    TraceStatus status = TraceStatus::max_points_reached;
};

/// Predictor-corrector continuation along {|Phi(z)| = r}.  The predictor
/// steps along the unit tangent (gradient rotated by 90 degrees, orientation
/// kept consistent), the corrector is damped Newton back onto the level set.
/// Stops at max_points, on closure (return within step/2 of the refined
/// seed), or when the continuation runs into a critical point of Phi.
inline TraceResult trace_level_curve(const Symbol& phi, double r, cplx seed, double step,
                                     int max_points, int orientation = +1) {
    if (!(r > 0.0)) throw std::invalid_argument("trace_level_curve: level must be positive");
    if (!(step > 0.0)) throw std::invalid_argument("trace_level_curve: step must be positive");
    if (max_points < 2) throw std::invalid_argument("trace_level_curve: max_points must be >= 2");

    if (std::abs(std::abs(phi.eval(seed)) - r) > 0.1)
        throw TraceError(TraceFailure::seed_not_on_level, "|Phi(seed)| is not within 0.1 of r");
    if (std::abs(symbol_derivative(phi, seed)) < 1e-8)
        throw TraceError(TraceFailure::seed_critical_point, "Phi'(seed) vanishes");

    const double max_corr = 0.5 * std::max(step, 0.05 * r);
    cplx z = geo_detail::newton_to_level(phi, seed, r, max_corr);

    TraceResult out;
    out.arc.level = r;
    out.arc.points.push_back(z);
    cplx prev_tangent(0.0, 0.0);
    bool have_tangent = false;

    while (static_cast<int>(out.arc.points.size()) < max_points) {
        if (std::abs(symbol_derivative(phi, z)) < 1e-6) {
            out.status = TraceStatus::hit_critical_point;
            break;
        }
        const cplx g = geo_detail::level_gradient(phi, z);
        cplx tangent = cplx(0.0, 1.0) * (g / std::abs(g));
        if (!have_tangent) {
            tangent *= static_cast<double>(orientation);
        } else if (std::real(tangent * std::conj(prev_tangent)) < 0.0) {
            tangent = -tangent;
        }
        const cplx predicted = z + step * tangent;
        if (std::abs(symbol_derivative(phi, predicted)) < 1e-6) {
            out.status = TraceStatus::hit_critical_point;
            break;
        }
        z = geo_detail::newton_to_level(phi, predicted, r, max_corr);
        if (out.arc.points.size() >= 5 && std::abs(z - out.arc.points.front()) < step / 2.0) {
            out.status = TraceStatus::closed;
            break;
        }
        out.arc.points.push_back(z);
        prev_tangent = tangent;
        have_tangent = true;
    }
    fill_curvatures(out.arc);
    return out;
}

/// Longest contiguous run where the curvature keeps one sign and stays above
/// 0.01 times the median magnitude, returned as a new Arc (including the
/// boundary samples that support the certified interior curvatures).
inline Arc strictly_convex_subarc(const Arc& arc, std::size_t min_points) {
    const std::size_t n = arc.points.size();
    if (n < 3 || n < min_points)
        throw GeometryError(GeometryFailure::no_convex_run,
                            "arc too short for a convex run of the requested length");
    std::vector<double> kappa(n, 0.0);
    std::vector<double> mags;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        kappa[i] = signed_curvature(arc, i);
        mags.push_back(std::abs(kappa[i]));
    }
    std::sort(mags.begin(), mags.end());
    const double median = mags[mags.size() / 2];
    const double threshold = 0.01 * median;

    std::size_t best_lo = 0, best_len = 0;
    std::size_t run_lo = 0, run_len = 0;
    int run_sign = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const int sign = kappa[i] > threshold ? +1 : (kappa[i] < -threshold ? -1 : 0);
        if (sign != 0 && sign == run_sign) {
            ++run_len;
        } else if (sign != 0) {
            run_sign = sign;
            run_lo = i;
            run_len = 1;
        } else {
            run_sign = 0;
            run_len = 0;
        }
        if (run_len > best_len) {
            best_len = run_len;
            best_lo = run_lo;
        }
    }
    if (best_len == 0)
        throw GeometryError(GeometryFailure::no_convex_run, "no curvature run of constant sign");

    const std::size_t lo = best_lo - 1;            // certified interior starts at best_lo
    const std::size_t hi = best_lo + best_len;     // inclusive end point index
    const std::size_t count = hi - lo + 1;
    if (count < min_points)
        throw GeometryError(GeometryFailure::no_convex_run,
                            "longest convex run has fewer than min_points samples");
    Arc out;
    out.level = arc.level;
    out.points.assign(arc.points.begin() + static_cast<std::ptrdiff_t>(lo),
                      arc.points.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    fill_curvatures(out);
    return out;
}

inline Segment make_segment(cplx a, cplx b, int sample_count) {
    if (sample_count < 2) throw std::invalid_argument("make_segment: need at least 2 samples");
    if (std::abs(a - b) == 0.0) throw std::invalid_argument("make_segment: endpoints coincide");
    // distance from the segment to the origin must be positive
    const cplx d = b - a;
    double t = -std::real(std::conj(d) * a) / std::norm(d);
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(a + t * d) < 1e-12 * std::max(std::abs(a), std::abs(b)))
        throw std::invalid_argument("make_segment: segment passes through the origin");
    Segment s;
    s.a = a;
    s.b = b;
    s.samples.reserve(sample_count);
    for (int i = 0; i < sample_count; ++i) {
        const double u = static_cast<double>(i) / (sample_count - 1);
        s.samples.push_back(a + u * d);
    }
    return s;
}

namespace geo_detail {

inline std::vector<cplx> subsample(const std::vector<cplx>& pts, int count) {
    if (count <= 0 || pts.size() <= static_cast<std::size_t>(count)) return pts;
    std::vector<cplx> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const std::size_t idx =
            static_cast<std::size_t>(std::llround(static_cast<double>(i) * (pts.size() - 1) / (count - 1)));
        out.push_back(pts[idx]);
    }
    return out;
}

inline bool well_spaced(const std::vector<cplx>& pts, std::size_t* bad_index = nullptr) {
    if (pts.size() < 3) return true;
    std::vector<double> gaps;
    gaps.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) gaps.push_back(std::abs(pts[i + 1] - pts[i]));
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] > 4.0 * median && gaps[i] > 0.0) {
            if (bad_index) *bad_index = i + 1;
            return false;
        }
    }
    return true;
}

struct WorstSample {
    double value = -1.0;
    cplx point{0.0, 0.0};
};

inline WorstSample worst_of(const WorstSample& a, const WorstSample& b) {
    return b.value > a.value ? b : a;
}

// max |Phi| over a + b for all sample pairs
inline WorstSample scan_sum(const Symbol& phi, const std::vector<cplx>& A,
                            const std::vector<cplx>& B) {
    const std::size_t total = A.size() * B.size();
    return parallel_reduce<WorstSample>(
        total, WorstSample{},
        [&](std::size_t idx) {
            const cplx z = A[idx / B.size()] + B[idx % B.size()];
            return WorstSample{std::abs(phi.eval(z)), z};
        },
        worst_of);
}

inline WorstSample scan_points(const Symbol& phi, const std::vector<cplx>& A) {
    return parallel_reduce<WorstSample>(
        A.size(), WorstSample{},
        [&](std::size_t idx) { return WorstSample{std::abs(phi.eval(A[idx])), A[idx]}; },
        worst_of);
}

// Sample cloud of conv(arc_points ∪ {0}): t * ((1-s) p + s q) over subsampled
// pairs (p, q), s in [0,1], t in [t_lo, 1], deduplicated on a grid so that
// Minkowski products stay affordable.
inline std::vector<cplx> hull_cloud(const std::vector<cplx>& arc_points, int density,
                                    bool include_boundary) {
    const std::vector<cplx> P = subsample(arc_points, density);
    std::vector<cplx> cloud;
    double max_abs = 1e-12;
    for (const cplx& p : P) max_abs = std::max(max_abs, std::abs(p));
    const double cell = max_abs / (3.0 * density);
    std::map<std::pair<long long, long long>, bool> seen;
    const auto push = [&](const cplx& z) {
        const auto key = std::make_pair(static_cast<long long>(std::floor(z.real() / cell)),
                                        static_cast<long long>(std::floor(z.imag() / cell)));
        if (seen.emplace(key, true).second) cloud.push_back(z);
    };
    const int t_lo = include_boundary ? 0 : 1;
    const int t_hi = include_boundary ? density : density - 1;
    for (std::size_t i = 0; i < P.size(); ++i) {
        for (std::size_t j = i; j < P.size(); ++j) {
            for (int si = 0; si <= density; ++si) {
                const double s = static_cast<double>(si) / density;
                const cplx chord = (1.0 - s) * P[i] + s * P[j];
                for (int ti = t_lo; ti <= t_hi; ++ti) {
                    const double t = static_cast<double>(ti) / density;
                    push(t * chord);
                }
            }
        }
    }
    return cloud;
}

}  // namespace geo_detail

struct HullCheck {
    bool ok = false;
    cplx witness{0.0, 0.0};
    double witness_value = 0.0;
};

/// Samples conv(Gamma ∪ {0}) \ Gamma as t ((1-s) p + s q) with p, q over the
/// arc samples, s in [0,1], t in (0,1), and tests |Phi| < level at every
/// sample.  Returns the max-|Phi| witness either way.  Arcs violating the
/// spacing invariant (glued or reordered sample lists) fail the check
/// outright, with the offending point as witness.
inline HullCheck check_hull_condition(const Symbol& phi, const Arc& gamma, int density) {
    if (gamma.points.empty()) throw std::invalid_argument("check_hull_condition: empty arc");
    if (density < 2) throw std::invalid_argument("check_hull_condition: density must be >= 2");

    std::size_t bad = 0;
    if (!geo_detail::well_spaced(gamma.points, &bad)) {
        return HullCheck{false, gamma.points[bad], std::abs(phi.eval(gamma.points[bad]))};
    }

    const std::vector<cplx> P = geo_detail::subsample(gamma.points, density);
    const std::size_t pairs = P.size() * (P.size() + 1) / 2;
    const std::size_t s_count = static_cast<std::size_t>(density) + 1;
    const std::size_t t_count = static_cast<std::size_t>(density) - 1;  // t = 1/density .. (density-1)/density

    const auto sample_of = [&](std::size_t idx) {
        const std::size_t pair_idx = idx / (s_count * t_count);
        const std::size_t rem = idx % (s_count * t_count);
        const std::size_t si = rem / t_count;
        const std::size_t ti = rem % t_count;
        // unrank the (i <= j) pair
        std::size_t i = 0, offset = pair_idx;
        std::size_t row = P.size();
        while (offset >= row) {
            offset -= row;
            --row;
            ++i;
        }
        const std::size_t j = i + offset;
        const double s = static_cast<double>(si) / density;
        const double t = static_cast<double>(ti + 1) / density;
        return t * ((1.0 - s) * P[i] + s * P[j]);
    };

    const geo_detail::WorstSample worst = parallel_reduce<geo_detail::WorstSample>(
        pairs * s_count * t_count, geo_detail::WorstSample{},
        [&](std::size_t idx) {
            const cplx z = sample_of(idx);
            return geo_detail::WorstSample{std::abs(phi.eval(z)), z};
        },
        geo_detail::worst_of);

    return HullCheck{worst.value < gamma.level, worst.point, worst.value};
}

/// Relaxed origin condition: the open triangle conv{0, -eps z1, -eps z2}
/// (z1, z2 the arc endpoints) lies inside the unit-disc preimage.
inline bool check_relaxed_origin_condition(const Symbol& phi, const Arc& gamma, double eps,
                                           int density) {
    if (gamma.points.size() < 2)
        throw std::invalid_argument("check_relaxed_origin_condition: need at least 2 arc points");
    if (!(eps > 0.0)) throw std::invalid_argument("check_relaxed_origin_condition: eps must be positive");
    const cplx v1 = -eps * gamma.points.front();
    const cplx v2 = -eps * gamma.points.back();
    for (int i = 1; i < density; ++i) {
        for (int j = 1; i + j < density; ++j) {
            const cplx z = (static_cast<double>(i) / density) * v1 + (static_cast<double>(j) / density) * v2;
            if (!(std::abs(phi.eval(z)) < 1.0)) return false;
        }
    }
    return true;
}

struct ConditionCheck {
    std::string name;
    bool pass = true;
    bool vacuous = false;
    cplx witness{0.0, 0.0};
    double witness_value = 0.0;
};

struct MinkowskiReport {
    ConditionCheck lambda_sums;      // (i)   d-fold sums of Lambda
    ConditionCheck hull_plus_lambda; // (ii)  hull + i-fold sums, 1 <= i < d
    ConditionCheck scaled_arc_sums;  // (iii) i-fold sums of Gamma_r / M, 1 <= i < M
    ConditionCheck hull_condition;   // (iv)  hull condition at level r
    bool all_pass() const {
        return lambda_sums.pass && hull_plus_lambda.pass && scaled_arc_sums.pass &&
               hull_condition.pass;
    }
};

/// Sampled verification of the four geometric conditions that feed the orbit
/// estimates, for given degree data (d, M).  Segment self-sums use the exact
/// identity  sum of i copies of a segment = the i-dilated segment  (segments
/// are convex); arc self-sums are sampled by lattice products with a budget
/// cap on the per-factor sample count.
inline MinkowskiReport check_minkowski_conditions(const Symbol& phi, const Arc& gamma_r,
                                                  const Segment& lambda, int d, int M,
                                                  int density) {
    if (M < 1 || d < M) throw std::invalid_argument("check_minkowski_conditions: need 1 <= M <= d");
    if (gamma_r.points.empty()) throw std::invalid_argument("check_minkowski_conditions: empty arc");
    MinkowskiReport report;

    const auto dilated_lambda_samples = [&](int i) {
        std::vector<cplx> out;
        const int count = std::max(2, density + 1);
        out.reserve(count);
        for (int s = 0; s < count; ++s) {
            const double u = static_cast<double>(s) / (count - 1);
            out.push_back(static_cast<double>(i) * (lambda.a + u * (lambda.b - lambda.a)));
        }
        return out;
    };

    report.lambda_sums.name = "sum_{s=1..d} Lambda in Phi^{-1}(D)";
    {
        const auto worst = geo_detail::scan_points(phi, dilated_lambda_samples(d));
        report.lambda_sums.pass = worst.value < 1.0;
        report.lambda_sums.witness = worst.point;
        report.lambda_sums.witness_value = worst.value;
    }

    report.hull_plus_lambda.name = "conv(Gamma_r u {0}) + sum_{s=1..i} Lambda in Phi^{-1}(D), i < d";
    if (d <= 1) {
        report.hull_plus_lambda.vacuous = true;
    } else {
        const std::vector<cplx> hull =
            geo_detail::hull_cloud(gamma_r.points, density, /*include_boundary=*/true);
        geo_detail::WorstSample worst;
        for (int i = 1; i < d; ++i)
            worst = geo_detail::worst_of(worst, geo_detail::scan_sum(phi, hull, dilated_lambda_samples(i)));
        report.hull_plus_lambda.pass = worst.value < 1.0;
        report.hull_plus_lambda.witness = worst.point;
        report.hull_plus_lambda.witness_value = worst.value;
    }

    report.scaled_arc_sums.name = "sum_{s=1..i} Gamma_r / M in Phi^{-1}(D), i < M";
    if (M <= 1) {
        report.scaled_arc_sums.vacuous = true;
    } else {
        geo_detail::WorstSample worst;
        for (int i = 1; i < M; ++i) {
            // budget the i-fold lattice product
            const double budget = 200000.0;
            const int per_factor =
                std::max(2, std::min(density, static_cast<int>(std::pow(budget, 1.0 / i))));
            std::vector<cplx> scaled = geo_detail::subsample(gamma_r.points, per_factor);
            for (cplx& z : scaled) z /= static_cast<double>(M);
            std::vector<cplx> sums{cplx(0.0, 0.0)};
            for (int fold = 0; fold < i; ++fold) {
                std::vector<cplx> next;
                next.reserve(sums.size() * scaled.size());
                for (const cplx& acc : sums)
                    for (const cplx& z : scaled) next.push_back(acc + z);
                sums = std::move(next);
            }
            worst = geo_detail::worst_of(worst, geo_detail::scan_points(phi, sums));
        }
        report.scaled_arc_sums.pass = worst.value < 1.0;
        report.scaled_arc_sums.witness = worst.point;
        report.scaled_arc_sums.witness_value = worst.value;
    }

    report.hull_condition.name = "conv(Gamma_r u {0}) \\ Gamma_r in Phi^{-1}(r D)";
    {
        const HullCheck hc = check_hull_condition(phi, gamma_r, density);
        report.hull_condition.pass = hc.ok;
        report.hull_condition.witness = hc.witness;
        report.hull_condition.witness_value = hc.witness_value;
    }
    return report;
}

struct SearchParams {
    std::optional<cplx> seed;     // starting point for the level-1 trace; auto-detected if absent
    double step = 0.01;           // continuation step
    int max_points = 4000;
    int density = 40;             // sampling density per dimension for all subset checks
    double r0 = 1.25;             // upper end of the level bisection
    std::size_t min_convex_points = 20;
    double arc_halfwidth = 0.45;  // arclength kept on each side of the distinguished point
};

struct TheoremData {
    Segment lambda;
    double r = 1.0;
    Arc gamma_r;
    MinkowskiReport certificate;
    cplx rotation{1.0, 0.0};  // a with arg(midpoint / a) = pi/2 during the search
    Arc seed_arc;             // certified strictly convex level-1 subarc (original frame)
};

namespace geo_detail {

// First contiguous run of |Phi(t dir)| < 0.995 along t in (0, t_max]; the
// natural home for Lambda.  Symbols with |Phi(0)| = 1 (relaxed-condition
// cases) have runs that start strictly away from the origin.
inline bool admissible_ray_run(const Symbol& phi, const cplx& dir, double t_max, double& run_lo,
                               double& run_hi) {
    const int scan = 400;
    bool inside = false;
    run_lo = run_hi = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double t = t_max * i / scan;
        const bool ok = std::abs(phi.eval(t * dir)) < 0.995;
        if (ok && !inside) {
            run_lo = t;
            inside = true;
        } else if (!ok && inside) {
            run_hi = t_max * (i - 1) / scan;
            return run_hi - run_lo >= t_max / 100.0;
        }
    }
    if (!inside) return false;
    run_hi = t_max;
    return run_hi - run_lo >= t_max / 100.0;
}

inline Segment lambda_on_ray(const cplx& dir, double run_lo, double run_hi, int d, int shrink,
                             int samples) {
    const double span = (run_hi - run_lo) * std::pow(0.5, shrink) / std::max(1, d);
    const double far = run_lo + 0.7 * span;
    const double near = run_lo + 0.35 * span;
    return make_segment(far * dir, near * dir, samples);
}

inline cplx auto_seed(const Symbol& phi) {
    for (int ray = 0; ray < 16; ++ray) {
        const double theta = 2.0 * M_PI * ray / 16.0;
        const cplx dir = std::polar(1.0, theta);
        double prev_t = 0.0;
        for (int k = 1; k <= 2000; ++k) {
            const double t = 0.02 * k;
            if (std::abs(phi.eval(t * dir)) >= 0.999) {
                // bisect the crossing of |Phi| = 0.999 and polish from there
                double lo = prev_t, hi = t;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (std::abs(phi.eval(mid * dir)) >= 0.999 ? hi : lo) = mid;
                }
                const cplx cand = hi * dir;
                if (std::abs(std::abs(phi.eval(cand)) - 1.0) <= 0.1 &&
                    std::abs(symbol_derivative(phi, cand)) >= 1e-6)
                    return cand;
                break;  // crossing unusable on this ray
            }
            prev_t = t;
        }
    }
    throw GeometryError(GeometryFailure::no_seed_arc, "no usable level-1 seed on any search ray");
}

}  // namespace geo_detail

/// Arc of arclength ~2*halfwidth centred at the seed: traces in both
/// directions and glues, unless the curve closes first.
inline Arc trace_window(const Symbol& phi, double r, const cplx& seed, double step, int max_points,
                        double halfwidth) {
    const int want = std::max(8, static_cast<int>(std::ceil(halfwidth / step)) + 2);
    TraceResult fwd = trace_level_curve(phi, r, seed, step, std::min(max_points, 2 * want), +1);
    std::vector<cplx> pts;
    if (fwd.status == TraceStatus::closed) {
        // wrap-around window centred on the seed sample
        const auto& all = fwd.arc.points;
        const int n = static_cast<int>(all.size());
        const int w = std::min(want, (n - 1) / 2);
        for (int off = -w; off <= w; ++off) pts.push_back(all[((off % n) + n) % n]);
    } else {
        TraceResult bwd = trace_level_curve(phi, r, seed, step, std::min(max_points, 2 * want), -1);
        const int wf = std::min<int>(want, static_cast<int>(fwd.arc.points.size()) - 1);
        const int wb = std::min<int>(want, static_cast<int>(bwd.arc.points.size()) - 1);
        for (int i = wb; i >= 1; --i) pts.push_back(bwd.arc.points[static_cast<std::size_t>(i)]);
        for (int i = 0; i <= wf; ++i) pts.push_back(fwd.arc.points[static_cast<std::size_t>(i)]);
    }
    Arc arc;
    arc.level = r;
    arc.points = std::move(pts);
    fill_curvatures(arc);
    return arc;
}

namespace geo_detail {

inline Arc transform_arc(const Arc& arc, const cplx& factor) {
    Arc out;
    out.level = arc.level;
    out.points.reserve(arc.points.size());
    for (const cplx& z : arc.points) out.points.push_back(z * factor);
    fill_curvatures(out);
    return out;
}

}  // namespace geo_detail

/// Realizes the geometric construction for given (d, M): finds a strictly
/// convex level-1 subarc, normalizes its midpoint direction to arg pi/2 by
/// the substitution z -> a z, places the segment Lambda on the opposite ray
/// close to the origin, and bisects on the level r > 1 until the sampled
/// Minkowski conditions certify the triple (Lambda, r, Gamma_r).  The
/// returned data is expressed in the original frame and re-certified there.
inline TheoremData build_theorem_data(const Symbol& phi, int d, int M,
                                      const SearchParams& params = {}) {
    if (M < 1 || d < M) throw std::invalid_argument("build_theorem_data: need 1 <= M <= d");
    const HypothesisReport hyp = validate_hypotheses(phi);
    if (!hyp.nonconstant)
        throw GeometryError(GeometryFailure::no_seed_arc, "constant symbols have no level arcs");

    const cplx seed = params.seed ? *params.seed : geo_detail::auto_seed(phi);
    TraceResult traced = trace_level_curve(phi, 1.0, seed, params.step, params.max_points);
    Arc convex1;
    try {
        convex1 = strictly_convex_subarc(traced.arc, params.min_convex_points);
    } catch (const GeometryError&) {
        throw GeometryError(GeometryFailure::no_seed_arc,
                            "level-1 curve has no strictly convex run of the required length");
    }

    if (!hyp.origin_ok) {
        bool relaxed_ok = false;
        for (double eps : {0.1, 0.05, 0.01})
            if (check_relaxed_origin_condition(phi, convex1, eps, params.density)) {
                relaxed_ok = true;
                break;
            }
        if (!relaxed_ok)
            throw GeometryError(GeometryFailure::no_seed_arc,
                                "|Phi(0)| >= 1 and the relaxed origin condition fails");
    }

    // orientation normalization: rotate so the midpoint direction is arg pi/2
    const cplx mid = convex1.points[convex1.points.size() / 2];
    if (std::abs(mid) < 1e-12)
        throw GeometryError(GeometryFailure::no_seed_arc, "degenerate arc midpoint at the origin");
    const cplx rotation = mid / (cplx(0.0, 1.0) * std::abs(mid));  // z3 = mid / rotation is i|mid|
    const Symbol phi_rot = phi.precompose_scale(rotation);
    const cplx z3 = mid / rotation;

    // Lambda on the ray through -z3, inside the first admissible run of the
    // unit-disc preimage along that ray
    const cplx ray_dir = -z3 / std::abs(z3);
    double run_lo = 0.0, run_hi = 0.0;
    if (!geo_detail::admissible_ray_run(phi_rot, ray_dir, std::abs(z3), run_lo, run_hi))
        throw GeometryError(GeometryFailure::no_seed_arc,
                            "no room for Lambda on the ray opposite the arc");

    for (int shrink = 0; shrink < 12; ++shrink) {
        const Segment lambda_rot =
            geo_detail::lambda_on_ray(ray_dir, run_lo, run_hi, d, shrink, params.density + 1);

        double r = params.r0;
        while (r - 1.0 >= 1e-6) {
            try {
                const cplx seed_r = geo_detail::newton_to_level(phi_rot, z3, r, 0.5);
                const Arc gamma_rot = trace_window(phi_rot, r, seed_r, params.step,
                                                   params.max_points, params.arc_halfwidth);
                if (gamma_rot.points.size() >= 5) {
                    const MinkowskiReport rep =
                        check_minkowski_conditions(phi_rot, gamma_rot, lambda_rot, d, M, params.density);
                    if (rep.all_pass()) {
                        TheoremData out;
                        out.rotation = rotation;
                        out.r = r;
                        out.gamma_r = geo_detail::transform_arc(gamma_rot, rotation);
                        out.lambda = make_segment(lambda_rot.a * rotation, lambda_rot.b * rotation,
                                                  params.density + 1);
                        out.seed_arc = convex1;
                        out.certificate = check_minkowski_conditions(phi, out.gamma_r, out.lambda,
                                                                     d, M, params.density);
                        if (out.certificate.all_pass()) return out;
                    }
                }
            } catch (const TraceError&) {
                // fall through to a smaller level
            }
            r = 1.0 + (r - 1.0) / 2.0;
        }
    }
    throw GeometryError(GeometryFailure::search_exhausted,
                        "level bisection reached r - 1 < 1e-6 without certification");
}

}  // namespace hyperalg
