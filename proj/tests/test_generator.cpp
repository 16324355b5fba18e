#include <cmath>
#include <functional>

#include "doctest.h"
#include "pdk/errors.hpp"
#include "pdk/generator.hpp"
#include "pdk/presets.hpp"
#include "pdk/scale.hpp"
#include "pdk/verify.hpp"

using namespace pdk;

namespace {

PiecewiseExpAffine whole_line(ExpAffine seg) {
    PiecewiseExpAffine f;
    f.segments.push_back(std::move(seg));
    return f;
}

} // namespace

TEST_CASE("generator on elementary test functions") {
    const LevyModel m = preset("case1").model;
    const double q = 0.05;

    SUBCASE("constants absorb only the discount") {
        ExpAffine one;
        one.c0 = 1.0;
        const PiecewiseExpAffine f = whole_line(one);
        for (double x : {-1.0, 0.0, 2.5, 40.0})
            CHECK(generator_apply(m, q, f, x) == doctest::Approx(-q).epsilon(1e-13));
    }

    SUBCASE("identity function picks up drift minus expected jump flux") {
        ExpAffine lin;
        lin.c1 = 1.0;
        const PiecewiseExpAffine f = whole_line(lin);
        double flux = 0.0;
        for (const auto& j : m.jumps) flux += j.rate / j.lambda;
        for (double x : {-0.5, 0.0, 1.0, 7.0})
            CHECK(generator_apply(m, q, f, x) ==
                  doctest::Approx(m.c - flux - q * x).epsilon(1e-12));
    }

    SUBCASE("pure exponentials diagonalize the operator") {
        for (double theta : {0.3, -0.4, 1.7}) {
            CAPTURE(theta);
            ExpAffine e;
            e.a = {1.0};
            e.beta = {theta};
            const PiecewiseExpAffine f = whole_line(e);
            const double factor = laplace_exponent(m, theta) - q;
            for (double x : {0.0, 1.0, 3.0})
                CHECK(generator_apply(m, q, f, x) ==
                      doctest::Approx(factor * std::exp(theta * x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("identity suite holds at machine precision on every preset") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const IdentitySuiteReport rep = generator_identity_suite(build_spec_bases(preset(name)));
        REQUIRE(rep.results.size() == 5);
        CHECK(rep.results[0].name == "W_q");
        CHECK(rep.results[1].name == "Z_q");
        CHECK(rep.results[2].name == "W_qr");
        CHECK(rep.results[3].name == "Wbar_qr");
        CHECK(rep.results[4].name == "Wbarbar_qr");
        CHECK(rep.pass);
        CHECK(rep.max_residual <= 1e-9);
    }
}

TEST_CASE("rate shift identity survives the steep diffusion root") {
    // The q+r basis of the Brownian case carries a mode near e^{-76 x}; the
    // closed-form jump integral must handle it without overflow at any x.
    const SpecBases bases = build_spec_bases(preset("case1"));
    const PiecewiseExpAffine wqr = piecewise_W(bases.qr_basis);
    const double q = bases.spec.q, r = bases.spec.r;
    for (double x : {0.1, 1.0, 5.0, 30.0, 200.0}) {
        CAPTURE(x);
        const double fy = wqr.eval(x);
        const double gen = generator_apply(bases.spec.model, q, wqr, x);
        CHECK(std::isfinite(gen));
        CHECK(std::abs(gen - r * fy) / (1.0 + std::abs(fy)) < 1e-9);
    }
}

TEST_CASE("quadrature path converges to the closed form") {
    const SpecBases bases = build_spec_bases(preset("case1"));
    const PiecewiseExpAffine wq = piecewise_W(bases.q_basis);
    const auto& basis = bases.q_basis;

    GenericFn fn;
    fn.f = [&](double x) { return basis.W(x); };
    fn.d1 = [&](double x) { return basis.W(x, 1); };
    fn.d2 = [&](double x) { return basis.W(x, 2); };

    for (double x : {0.5, 2.0, 6.0}) {
        CAPTURE(x);
        const double exact = generator_apply(bases.spec.model, bases.spec.q, wq, x);
        const double loose = generator_apply(bases.spec.model, bases.spec.q, fn, x, 1e-5);
        const double tight = generator_apply(bases.spec.model, bases.spec.q, fn, x, 1e-9);
        CHECK(std::abs(loose - exact) < 1e-4);
        CHECK(std::abs(tight - exact) < 1e-8);
        // Tightening the tolerance must actually buy accuracy.
        CHECK(std::abs(tight - exact) <= std::abs(loose - exact) + 1e-15);
    }
}

TEST_CASE("quadrature path works without supplied derivatives") {
    const SpecBases bases = build_spec_bases(preset("case1p"));
    const PiecewiseExpAffine wq = piecewise_W(bases.q_basis);
    GenericFn fn;
    fn.f = [&](double x) { return bases.q_basis.W(x); };
    for (double x : {1.0, 4.0}) {
        const double exact = generator_apply(bases.spec.model, bases.spec.q, wq, x);
        const double approx = generator_apply(bases.spec.model, bases.spec.q, fn, x, 1e-8);
        // Both sides are ~0 here (W is killed by the generator), so a
        // relative comparison would demand exact equality; bound the gap
        // absolutely instead.  The jump kernel is discontinuous at 0 and a
        // split that samples the wrong side contributes ~4e-3, well above
        // this margin.
        CHECK(std::abs(approx - exact) < 1e-6);
        CHECK(std::abs(approx) < 1e-6);
    }
}

TEST_CASE("segment rate colliding with a jump parameter is rejected") {
    const LevyModel m = preset("case1p").model;  // lambda = 1
    ExpAffine e;
    e.a = {1.0};
    e.beta = {-1.0};
    const PiecewiseExpAffine f = whole_line(e);
    CHECK_THROWS_AS(generator_apply(m, 0.05, f, 1.0), numerical_error);
}

TEST_CASE("piecewise scale wrappers agree with the basis") {
    const ScaleBasis b = build_basis(preset("case2").model, 0.05);
    const PiecewiseExpAffine w = piecewise_W(b);
    const PiecewiseExpAffine z = piecewise_Z(b);
    const PiecewiseExpAffine wb = piecewise_Wbar(b);
    const PiecewiseExpAffine wbb = piecewise_Wbarbar(b);
    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
        CAPTURE(x);
        CHECK(w.eval(x) == doctest::Approx(b.W(x)).epsilon(1e-13));
        CHECK(z.eval(x) == doctest::Approx(b.Z(x)).epsilon(1e-13));
        CHECK(wb.eval(x) == doctest::Approx(b.Wbar(x)).epsilon(1e-13));
        CHECK(wbb.eval(x) == doctest::Approx(b.Wbarbar(x)).epsilon(1e-13));
    }
}
