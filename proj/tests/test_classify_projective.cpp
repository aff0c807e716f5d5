#include "test_helpers.hpp"

#include "phase/classify_projective.hpp"
#include "phase/witness.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace phase;
using namespace phase::testing;

TEST_CASE("jordan_block_count_compatible") {
    ToleranceConfig tol;
    GeneratorSet a = make_set(complex_projective(1), {diag2(2.0, 1.0)});
    GeneratorSet b = make_set(complex_projective(1), {diag2(3.0, 1.0)});
    CHECK(jordan_block_count_compatible(a, b, tol));

    GeneratorSet sh = make_set(complex_projective(1), {mat2(1, 1, 0, 1)});
    CHECK_FALSE(jordan_block_count_compatible(sh, a, tol));

    GeneratorSet scal = make_set(complex_projective(1), {CMat::Identity(2, 2) * cplx(2.0, 1.0)});
    GeneratorSet id = make_set(complex_projective(1), {CMat::Identity(2, 2)});
    CHECK(jordan_block_count_compatible(scal, id, tol));
}

TEST_CASE("classify_cp1_top examples") {
    ToleranceConfig tol;
    SUBCASE("ratio 2 vs 1/2: equivalent through the fixed-point swap") {
        GeneratorSet ps = make_set(complex_projective(1), {diag2(2.0, 1.0)});
        GeneratorSet qs = make_set(complex_projective(1), {diag2(0.5, 1.0)});
        Verdict v = classify_cp1_top(ps, qs, tol);
        REQUIRE(v.equivalent());
        // the swap can live in the exponent (alpha = -2) or in the frame
        // column order (alpha = 0); both present the same conjugacy
        cplx alpha = v.details[0].second;
        bool exponent_form = std::abs(alpha - cplx(-2.0, 0.0)) < 1e-9 &&
                             v.witness->as<DiagPowerWitness>().swapped_fixed_points;
        bool frame_form = std::abs(alpha) < 1e-9;
        CHECK((exponent_form || frame_form));
        CHECK(v.residual_report->max_residual <= tol.residual);
    }
    SUBCASE("equal ratios: alpha = 0") {
        GeneratorSet ps = make_set(complex_projective(1), {diag2(2.0, 1.0)});
        Verdict v = classify_cp1_top(ps, ps, tol);
        REQUIRE(v.equivalent());
        CHECK(std::abs(v.details[0].second) < 1e-12);
    }
    SUBCASE("ratio 2 vs 1 forces the excluded exponent") {
        GeneratorSet ps = make_set(complex_projective(1), {diag2(2.0, 1.0)});
        GeneratorSet qs = make_set(complex_projective(1), {diag2(1.0, 1.0)});
        CHECK(classify_cp1_top(ps, qs, tol).status == Status::NotEquivalent);
    }
}

TEST_CASE("classify_cpn_top examples") {
    ToleranceConfig tol;
    auto build = [&](const CMat& d, cplx alpha, const std::vector<int>& perm, bool conj) {
        const int m = static_cast<int>(d.rows());
        CMat out = CMat::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            cplx ratio = d(k, k) / d(m - 1, m - 1);
            cplx base = conj ? std::conj(ratio) : ratio;
            out(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k)]) =
                base * std::exp(alpha * std::log(std::abs(ratio)));
        }
        return out;
    };
    SUBCASE("construct-then-recover with alpha = 0.5") {
        CMat d = diag3(2.0, 3.0, 1.0);
        GeneratorSet ps = make_set(complex_projective(2), {d});
        GeneratorSet qs = make_set(complex_projective(2), {build(d, 0.5, {0, 1, 2}, false)});
        Verdict v = classify_cpn_top(ps, qs, tol);
        REQUIRE(v.equivalent());
        CHECK(std::abs(v.details[0].second - cplx(0.5, 0.0)) < 1e-9);
    }
    SUBCASE("identical families: alpha = 0") {
        GeneratorSet ps = make_set(complex_projective(2), {diag3(2.0, 3.0, 1.0)});
        Verdict v = classify_cpn_top(ps, ps, tol);
        REQUIRE(v.equivalent());
        CHECK(std::abs(v.details[0].second) < 1e-9);
    }
    SUBCASE("per-coordinate exponents violate the common-alpha form") {
        CMat d = diag3(2.0, 3.0, 1.0);
        CMat q = CMat::Zero(3, 3);
        q(0, 0) = 2.0 * std::exp(1.0 * std::log(2.0)); // alpha_1 = 1
        q(1, 1) = 3.0 * std::exp(2.0 * std::log(3.0)); // alpha_2 = 2
        q(2, 2) = 1.0;
        GeneratorSet ps = make_set(complex_projective(2), {d});
        GeneratorSet qs = make_set(complex_projective(2), {q});
        CHECK(classify_cpn_top(ps, qs, tol).status == Status::NotEquivalent);
    }
}

TEST_CASE("classify_proj_rigid examples") {
    ToleranceConfig tol;
    SUBCASE("identical families") {
        GeneratorSet ps = make_set(complex_projective(1), {mat2(1, 1, 0, 1), diag2(2.0, 1.0)});
        Verdict v = classify_proj_rigid(ps, ps, Category::Holomorphic, tol);
        REQUIRE(v.equivalent());
    }
    SUBCASE("conjugated family: smooth yes via antiholomorphic, holomorphic no") {
        GeneratorSet ps = make_set(complex_projective(1),
                                   {diag2(std::exp(cplx(0.3, 1.1)), 1.0),
                                    mat2(1.0, cplx(0.5, 0.2), 0.0, 1.0)});
        GeneratorSet qs = make_set(complex_projective(1),
                                   {ps.generators[0].conjugate(), ps.generators[1].conjugate()});
        Verdict smooth = classify_proj_rigid(ps, qs, Category::Smooth, tol);
        REQUIRE(smooth.equivalent());
        CHECK(smooth.witness->as<LinearMapWitness>().conj);
        Verdict holo = classify_proj_rigid(ps, qs, Category::Holomorphic, tol);
        CHECK(holo.status == Status::NotEquivalent);
    }
    SUBCASE("diag(2,1) vs diag(1/2,1): equivalent at every rigid level via the swap") {
        GeneratorSet ps = make_set(complex_projective(1), {diag2(2.0, 1.0)});
        GeneratorSet qs = make_set(complex_projective(1), {diag2(0.5, 1.0)});
        Verdict smooth = classify_proj_rigid(ps, qs, Category::Smooth, tol);
        REQUIRE(smooth.equivalent());
        Verdict holo = classify_proj_rigid(ps, qs, Category::Holomorphic, tol);
        REQUIRE(holo.equivalent());
    }
}

TEST_CASE("classify_projective dispatcher routes non-abelian topological through rigidity") {
    ToleranceConfig tol;
    auto rng = seeded_rng(61, 11);
    GeneratorSet ps = make_set(complex_projective(1), {mat2(1, 1, 0, 1), diag2(2.0, 1.0)});
    CMat s = random_invertible(2, rng);
    GeneratorSet qs = make_set(complex_projective(1), {s * ps.generators[0] * s.inverse(),
                                                       s * ps.generators[1] * s.inverse()});
    Verdict v = classify_projective(ps, qs, Category::Topological, tol);
    REQUIRE(v.equivalent());
    CHECK(v.category == Category::Topological);

    GeneratorSet bad = make_set(complex_projective(1), {mat2(1, 1, 0, 1), diag2(3.0, 1.0)});
    Verdict undecided = classify_projective(ps, bad, Category::Topological, tol);
    CHECK(undecided.status == Status::Inconclusive);
}

TEST_CASE("projective verdicts are scale invariant") {
    ToleranceConfig tol;
    auto rng = seeded_rng(71, 12);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        GeneratorSet ps = make_set(complex_projective(1),
                                   {diag2(std::exp(cplx(0.4, unif(rng))), 1.0)});
        GeneratorSet qs = make_set(complex_projective(1),
                                   {diag2(std::exp(cplx(0.4 + 0.3 * unif(rng), unif(rng))), 1.0)});
        Status base = classify_projective(ps, qs, Category::Topological, tol).status;
        cplx scale = std::exp(cplx(unif(rng) - 0.5, 6.0 * unif(rng)));
        GeneratorSet ps_scaled = ps;
        ps_scaled.generators[0] *= scale;
        GeneratorSet qs_scaled = qs;
        qs_scaled.generators[0] *= 1.0 / scale;
        CHECK(classify_projective(ps_scaled, qs_scaled, Category::Topological, tol).status == base);
        CHECK(classify_projective(ps_scaled, qs, Category::Smooth, tol).status ==
              classify_projective(ps, qs, Category::Smooth, tol).status);
    }
}
