#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epns/fluid.hpp"
#include "epns/rng.hpp"

using namespace epns;

namespace {

SpectralVector taylor_green(const TorusGrid& g, double t, double nu) {
    SpectralVector v(g);
    double decay = std::exp(-2.0 * nu * t);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            double x = g.node(i), y = g.node(j);
            v[0][idx] = std::sin(x) * std::cos(y) * decay;
            v[1][idx] = -std::cos(x) * std::sin(y) * decay;
        }
    return v;
}

} // namespace

TEST_CASE("drag source") {
    TorusGrid g(2, 16);
    KineticMoments m;
    m.rho = SpectralScalar(g, 1.0);
    m.momentum = SpectralVector(g);
    m.stress.assign(4, SpectralScalar(g));

    SUBCASE("no slip -> zero") {
        SpectralVector v(g);
        for (std::size_t i = 0; i < v[0].size(); ++i) {
            v[0][i] = 0.3;
            m.momentum[0][i] = 0.3;  // rho = 1
        }
        auto s = drag_source(m, v);
        CHECK(field_max_abs(s) < 1e-15);
    }

    SUBCASE("rest particles against constant flow") {
        SpectralVector v(g);
        for (std::size_t i = 0; i < v[0].size(); ++i) v[0][i] = 0.7;
        auto s = drag_source(m, v);
        CHECK(s[0][0] == doctest::Approx(-0.7).epsilon(1e-14));
        CHECK(s[1][0] == 0.0);
    }

    SUBCASE("random fields: equals rho u - rho v") {
        Rng rng(3);
        SpectralVector v(g);
        for (std::size_t i = 0; i < v[0].size(); ++i) {
            m.rho[i] = 1.0 + 0.5 * rng.uniform();
            m.momentum[0][i] = rng.normal();
            m.momentum[1][i] = rng.normal();
            v[0][i] = rng.normal();
            v[1][i] = rng.normal();
        }
        auto s = drag_source(m, v);
        double err = 0.0;
        for (std::size_t i = 0; i < v[0].size(); ++i)
            for (int c = 0; c < 2; ++c)
                err = std::max(err,
                               std::abs(s[c][i] - (m.momentum[c][i] - m.rho[i] * v[c][i])));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("ns step: exact viscous decay of a single mode") {
    TorusGrid g(2, 32);
    FluidState st(g, 1.0);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) st.v[0][idx] = std::cos(2.0 * g.node(j));
    // v = (cos 2y, 0): divergence-free, |k|^2 = 4; advection (v.grad)v = 0.
    const double dt = 7e-3;
    SpectralVector zero(g);
    ns_step(st, zero, dt);
    double expect = std::exp(-4.0 * dt);
    double err = 0.0;
    idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx)
            err = std::max(err, std::abs(st.v[0][idx] - expect * std::cos(2.0 * g.node(j))));
    CHECK(err < 1e-12);
}

TEST_CASE("ns step: zero stays zero; constant source integrates exactly") {
    TorusGrid g(2, 16);
    FluidState st(g, 1.0);
    SpectralVector zero(g);
    ns_step(st, zero, 0.01);
    CHECK(field_max_abs(st.v) == 0.0);

    SpectralVector src(g);
    for (std::size_t i = 0; i < src[0].size(); ++i) src[0][i] = 0.3;
    for (int s = 0; s < 10; ++s) ns_step(st, src, 0.01);
    CHECK(st.v[0][5] == doctest::Approx(0.3 * 0.1).epsilon(1e-13));
    CHECK(std::abs(st.v[1][5]) < 1e-15);
}

TEST_CASE("ns step: momentum balance on the mean mode") {
    TorusGrid g(2, 32);
    FluidState st(g, 1.0);
    Rng rng(5);
    // random solenoidal start + random source with nonzero mean
    SpectralVector psi_grad(g);
    for (int kx = -3; kx <= 3; ++kx)
        for (int ky = -3; ky <= 3; ++ky) {
            if (!kx && !ky) continue;
            double a = 0.05 * rng.normal(), b = 0.05 * rng.normal();
            std::size_t idx = 0;
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j, ++idx) {
                    double ph = kx * g.node(i) + ky * g.node(j);
                    st.v[0][idx] += -ky * (a * std::cos(ph) + b * std::sin(ph));
                    st.v[1][idx] += kx * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    (void)psi_grad;
    SpectralVector src(g);
    for (std::size_t i = 0; i < src[0].size(); ++i) {
        src[0][i] = 0.2 + 0.1 * std::sin(kTwoPi * i / src[0].size());
        src[1][i] = -0.1;
    }
    double mean0 = mean(st.v[0]), mean1 = mean(st.v[1]);
    const double dt = 4e-3;
    for (int s = 0; s < 25; ++s) ns_step(st, src, dt);
    CHECK(mean(st.v[0]) == doctest::Approx(mean0 + 25 * dt * mean(src[0])).epsilon(1e-12));
    CHECK(mean(st.v[1]) == doctest::Approx(mean1 + 25 * dt * mean(src[1])).epsilon(1e-12));
}

TEST_CASE("ns step: Taylor-Green vortex at n=64") {
    TorusGrid g(2, 64);
    FluidState st(g, 1.0);
    st.v = taylor_green(g, 0.0, 1.0);
    SpectralVector zero(g);
    const double dt = 1e-3;
    double max_div = 0.0;
    for (int s = 0; s < 1000; ++s) {
        ns_step(st, zero, dt);
        if (s % 100 == 99) max_div = std::max(max_div, field_max_abs(divergence(st.v)));
    }
    auto exact = taylor_green(g, 1.0, 1.0);
    double err2 = 0.0;
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < exact[c].size(); ++i) {
            double d = st.v[c][i] - exact[c][i];
            err2 += d * d;
        }
    double l2 = std::sqrt(err2 * g.cell_volume());
    CHECK(l2 < 1e-6);
    CHECK(max_div < 1e-10);
}

TEST_CASE("ns step: unforced energy decay matches enstrophy at second order") {
    TorusGrid g(2, 32);
    Rng rng(11);
    FluidState base(g, 1.0);
    for (int kx = -2; kx <= 2; ++kx)
        for (int ky = -2; ky <= 2; ++ky) {
            if (!kx && !ky) continue;
            double a = 0.1 * rng.normal(), b = 0.1 * rng.normal();
            std::size_t idx = 0;
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j, ++idx) {
                    double ph = kx * g.node(i) + ky * g.node(j);
                    base.v[0][idx] += -ky * (a * std::cos(ph) + b * std::sin(ph));
                    base.v[1][idx] += kx * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    SpectralVector zero(g);

    auto residual = [&](double dt) {
        FluidState st = base;
        double e0 = 0.5 * inner(st.v, st.v);
        double d0 = 0.0;
        for (int c = 0; c < 2; ++c) {
            auto gc = gradient(st.v[c]);
            d0 += inner(gc, gc);
        }
        ns_step(st, zero, dt);
        double e1 = 0.5 * inner(st.v, st.v);
        CHECK(e1 <= e0);
        double d1 = 0.0;
        for (int c = 0; c < 2; ++c) {
            auto gc = gradient(st.v[c]);
            d1 += inner(gc, gc);
        }
        return std::abs((e1 - e0) / dt + 0.5 * (d0 + d1));
    };
    double r1 = residual(2e-3);
    double r2 = residual(1e-3);
    CHECK(r1 / r2 > 3.0);  // one-step residual refines at order >= 2
}

TEST_CASE("ns step: CFL guard") {
    TorusGrid g(2, 32);
    FluidState st(g, 1.0);
    for (std::size_t i = 0; i < st.v[0].size(); ++i) st.v[0][i] = 5.0;
    SpectralVector zero(g);
    CHECK_THROWS_AS(ns_step(st, zero, 0.5), StepSizeError);
}
