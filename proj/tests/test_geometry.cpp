#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hyperalg/geometry.hpp"
#include "hyperalg/symbol.hpp"

using namespace hyperalg;

namespace {

Arc circle_arc(double radius, double theta_lo, double theta_hi, int count, double level) {
    Arc arc;
    arc.level = level;
    for (int i = 0; i < count; ++i) {
        const double t = theta_lo + (theta_hi - theta_lo) * i / (count - 1);
        arc.points.push_back(std::polar(radius, t));
    }
    fill_curvatures(arc);
    return arc;
}

// the branch of {|cos z| = 1} through the origin: y = asinh(sin x)
Arc cos_level_branch(double x_lo, double x_hi, int count) {
    Arc arc;
    arc.level = 1.0;
    for (int i = 0; i < count; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (count - 1);
        arc.points.push_back({x, std::asinh(std::sin(x))});
    }
    fill_curvatures(arc);
    return arc;
}

double max_level_residual(const Symbol& phi, const Arc& arc) {
    double worst = 0.0;
    for (const cplx& z : arc.points)
        worst = std::max(worst, std::abs(std::abs(phi.eval(z)) - arc.level));
    return worst;
}

}  // namespace

TEST_CASE("tracing the unit circle") {
    const Symbol id = Symbol::identity();
    const TraceResult r = trace_level_curve(id, 1.0, {0, 1}, 0.01, 4000);
    CHECK(r.status == TraceStatus::closed);
    CHECK(max_level_residual(id, r.arc) < 1e-8);
    // spacing stays within [h/2, 2h]
    for (std::size_t i = 0; i + 1 < r.arc.points.size(); ++i) {
        const double gap = std::abs(r.arc.points[i + 1] - r.arc.points[i]);
        CHECK(gap >= 0.005);
        CHECK(gap <= 0.02);
    }
}

TEST_CASE("|z^2| = 1 is the unit circle too") {
    const Symbol sq = Symbol::polynomial({{0, 0}, {0, 0}, {1, 0}});
    const TraceResult r = trace_level_curve(sq, 1.0, {1, 0}, 0.01, 2000);
    for (const cplx& z : r.arc.points) CHECK(std::abs(std::abs(z) - 1.0) < 1e-8);
}

TEST_CASE("tracing |cos z| = 1 near the origin") {
    const Symbol c = Symbol::cosine({1, 0});
    const TraceResult r = trace_level_curve(c, 1.0, {0.1, 0.05}, 0.01, 300);
    CHECK(r.arc.points.size() >= 10);
    CHECK(max_level_residual(c, r.arc) < 1e-8);
}

TEST_CASE("trace preconditions") {
    const Symbol id = Symbol::identity();
    CHECK_THROWS_AS(trace_level_curve(id, 1.0, {3, 0}, 0.01, 100), TraceError);  // off level
    const Symbol sq = Symbol::polynomial({{0.9, 0}, {0, 0}, {1, 0}});            // z^2 + 0.9
    // |Phi(0)| = 0.9, within 0.1 of 1, but Phi'(0) = 0
    CHECK_THROWS_AS(trace_level_curve(sq, 1.0, {0, 0}, 0.01, 100), TraceError);
}

TEST_CASE("signed curvature of canonical shapes") {
    const Arc ccw = circle_arc(1.0, 0.0, M_PI, 200, 1.0);
    CHECK(std::abs(signed_curvature(ccw, 100) - 1.0) < 1e-4);

    Arc seg;
    seg.level = 1.0;
    for (int i = 0; i < 50; ++i) seg.points.push_back({0.1 * i, 0.05 * i});
    fill_curvatures(seg);
    CHECK(std::abs(signed_curvature(seg, 25)) < 1e-6);

    const Arc big = circle_arc(2.0, 0.0, M_PI, 200, 2.0);
    CHECK(std::abs(std::abs(signed_curvature(big, 100)) - 0.5) < 1e-4);

    CHECK_THROWS_AS(signed_curvature(ccw, 0), std::out_of_range);
    CHECK_THROWS_AS(signed_curvature(ccw, 199), std::out_of_range);
}

TEST_CASE("strictly_convex_subarc on a circle keeps everything") {
    const Symbol id = Symbol::identity();
    const TraceResult r = trace_level_curve(id, 1.0, {0, 1}, 0.01, 4000);
    const Arc sub = strictly_convex_subarc(r.arc, 20);
    CHECK(sub.points.size() == r.arc.points.size());
}

TEST_CASE("strictly_convex_subarc stops at curvature sign changes") {
    // peanut-shaped level set of z^2 - 1/4 just above the lemniscate level
    const Symbol pea = Symbol::polynomial({{-0.25, 0}, {0, 0}, {1, 0}});
    const double r = 0.27;
    const double y0 = std::sqrt(r - 0.25);
    const TraceResult traced = trace_level_curve(pea, r, {0, y0}, 0.01, 4000);
    REQUIRE(traced.status == TraceStatus::closed);

    bool has_positive = false, has_negative = false;
    for (std::size_t i = 1; i + 1 < traced.arc.points.size(); ++i) {
        const double k = signed_curvature(traced.arc, i);
        has_positive |= k > 1e-3;
        has_negative |= k < -1e-3;
    }
    REQUIRE(has_positive);
    REQUIRE(has_negative);

    const Arc sub = strictly_convex_subarc(traced.arc, 10);
    CHECK(sub.points.size() < traced.arc.points.size());
    // all interior curvatures of the run share a sign
    int sign = 0;
    for (std::size_t i = 1; i + 1 < sub.points.size(); ++i) {
        const double k = signed_curvature(sub, i);
        if (sign == 0) sign = k > 0 ? 1 : -1;
        CHECK(k * sign > 0.0);
    }

    Arc three = circle_arc(1.0, 0.0, 0.02, 3, 1.0);
    CHECK_THROWS_AS(strictly_convex_subarc(three, 5), GeometryError);
}

TEST_CASE("check_hull_condition on a sub-semicircle arc") {
    const Symbol id = Symbol::identity();
    const Arc arc = circle_arc(1.0, M_PI / 3, 2 * M_PI / 3, 80, 1.0);
    const HullCheck hc = check_hull_condition(id, arc, 40);
    CHECK(hc.ok);
    CHECK(hc.witness_value < 1.0);
}

TEST_CASE("check_hull_condition rejects glued antipodal arcs") {
    const Symbol id = Symbol::identity();
    Arc glued;
    glued.level = 1.0;
    for (int i = 0; i <= 30; ++i) glued.points.push_back(std::polar(1.0, 0.01 * i));
    for (int i = 0; i <= 30; ++i) glued.points.push_back(std::polar(1.0, M_PI + 0.01 * i));
    fill_curvatures(glued);
    const HullCheck hc = check_hull_condition(id, glued, 30);
    CHECK_FALSE(hc.ok);  // malformed-input regression: ordering invariant violated
}

TEST_CASE("check_hull_condition fails past a critical point of cos") {
    const Symbol c = Symbol::cosine({1, 0});
    const Arc wrapped = cos_level_branch(-1.0, 1.0, 81);  // passes through z = 0
    const HullCheck hc = check_hull_condition(c, wrapped, 40);
    CHECK_FALSE(hc.ok);
    CHECK(std::abs(c.eval(hc.witness)) >= 1.0);
}

TEST_CASE("relaxed origin condition") {
    const Symbol id = Symbol::identity();
    const Arc arc = circle_arc(1.0, M_PI / 4, 3 * M_PI / 4, 60, 1.0);
    CHECK(check_relaxed_origin_condition(id, arc, 0.5, 40));
    CHECK_FALSE(check_relaxed_origin_condition(id, arc, 3.0, 40));

    // cos fails the origin test but admits the relaxed condition on a
    // strictly convex branch arc
    const Symbol c = Symbol::cosine({1, 0});
    const Arc branch = cos_level_branch(0.4, 2.7, 100);
    CHECK_FALSE(validate_hypotheses(c).origin_ok);
    CHECK(check_relaxed_origin_condition(c, branch, 0.1, 40));
}

TEST_CASE("check_minkowski_conditions on the documented configurations") {
    const Symbol id = Symbol::identity();
    // documented passing configuration: short arc at r = 1.05 around i*r,
    // Lambda = [-0.35i, -0.15i], d = M = 2
    const Arc gamma = circle_arc(1.05, M_PI / 2 - 0.45, M_PI / 2 + 0.45, 91, 1.05);
    const Segment lambda = make_segment({0, -0.35}, {0, -0.15}, 41);
    const MinkowskiReport rep = check_minkowski_conditions(id, gamma, lambda, 2, 2, 40);
    CHECK(rep.lambda_sums.pass);
    CHECK(rep.hull_plus_lambda.pass);
    CHECK(rep.scaled_arc_sums.pass);
    CHECK(rep.hull_condition.pass);
    CHECK(rep.all_pass());

    // M = 1 leaves condition (iii) vacuous
    const MinkowskiReport rep1 = check_minkowski_conditions(id, gamma, lambda, 2, 1, 40);
    CHECK(rep1.scaled_arc_sums.vacuous);
    CHECK(rep1.scaled_arc_sums.pass);

    // documented oversized configuration: 2 max|Lambda| >= 1 makes (i) fail
    const Segment big = make_segment({0, -0.6}, {0, -0.5}, 41);
    const MinkowskiReport bad = check_minkowski_conditions(id, gamma, big, 2, 2, 40);
    CHECK_FALSE(bad.lambda_sums.pass);
    CHECK(bad.lambda_sums.witness_value >= 1.0);
    CHECK(std::abs(bad.lambda_sums.witness) >= 1.0);

    CHECK_THROWS_AS(check_minkowski_conditions(id, gamma, lambda, 1, 2, 40), std::invalid_argument);
}

TEST_CASE("segment construction guards") {
    CHECK_THROWS_AS(make_segment({0, 0}, {0, 0}, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_segment({-1, 0}, {1, 0}, 10), std::invalid_argument);  // crosses 0
    const Segment s = make_segment({0.1, 0.1}, {0.5, 0.5}, 11);
    CHECK(s.samples.size() == 11);
    CHECK(s.samples.front() == s.a);
    CHECK(s.samples.back() == s.b);
}

TEST_CASE("build_theorem_data certifies the identity symbol") {
    const Symbol id = Symbol::identity();
    const TheoremData td = build_theorem_data(id, 2, 2);
    CHECK(td.r > 1.0);
    CHECK(td.r < 2.0);
    CHECK(td.certificate.all_pass());
    CHECK(max_level_residual(id, td.gamma_r) < 1e-8);
    // Lambda points into the unit disc on the ray opposite the arc
    for (const cplx& s : td.lambda.samples) CHECK(std::abs(s) < 1.0);
    const cplx mid = td.gamma_r.points[td.gamma_r.points.size() / 2];
    CHECK(std::real(td.lambda.a * std::conj(mid)) < 0.0);

    // re-passes at doubled sampling density
    const MinkowskiReport dense =
        check_minkowski_conditions(id, td.gamma_r, td.lambda, 2, 2, 80);
    CHECK(dense.all_pass());

    // curvature of a level-r circle is 1/r
    for (std::size_t i = 1; i + 1 < td.gamma_r.points.size(); ++i)
        CHECK(std::abs(std::abs(signed_curvature(td.gamma_r, i)) - 1.0 / td.r) < 1e-3);
}

TEST_CASE("build_theorem_data with d = M = 1 is the easy case") {
    const Symbol id = Symbol::identity();
    const TheoremData td = build_theorem_data(id, 1, 1);
    CHECK(td.certificate.all_pass());
    CHECK(td.certificate.hull_plus_lambda.vacuous);
    CHECK(td.certificate.scaled_arc_sums.vacuous);
}

TEST_CASE("build_theorem_data rejects constants") {
    const Symbol c = Symbol::polynomial({{2, 0}});
    try {
        build_theorem_data(c, 2, 2);
        FAIL("expected GeometryError");
    } catch (const GeometryError& e) {
        CHECK(e.kind == GeometryFailure::no_seed_arc);
    }
}
