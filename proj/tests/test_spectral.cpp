#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epns/rng.hpp"
#include "epns/spectral_ops.hpp"

using namespace epns;

namespace {

SpectralScalar make_field(const TorusGrid& g, double (*fn)(double, double)) {
    SpectralScalar f(g);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < (g.dim == 2 ? g.n : 1); ++j, ++idx)
            f[idx] = fn(g.node(i), g.dim == 2 ? g.node(j) : 0.0);
    return f;
}

// Random band-limited field with modes |k|_inf <= kmax, mean zero.
SpectralScalar random_low_mode(const TorusGrid& g, Rng& rng, int kmax, double amp = 1.0) {
    SpectralScalar f(g);
    for (int kx = -kmax; kx <= kmax; ++kx) {
        for (int ky = (g.dim == 2 ? -kmax : 0); ky <= (g.dim == 2 ? kmax : 0); ++ky) {
            if (kx == 0 && ky == 0) continue;
            double a = amp * rng.normal();
            double b = amp * rng.normal();
            std::size_t idx = 0;
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < (g.dim == 2 ? g.n : 1); ++j, ++idx) {
                    double ph = kx * g.node(i) + ky * (g.dim == 2 ? g.node(j) : 0.0);
                    f[idx] += a * std::cos(ph) + b * std::sin(ph);
                }
        }
    }
    return f;
}

} // namespace

TEST_CASE("fft round trip") {
    TorusGrid g(2, 16);
    Rng rng(7);
    SpectralScalar f(g);
    for (auto& v : f.values) v = rng.normal();
    auto back = SpectralScalar::from_coeffs(g, f.coeffs());
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(f[i] - back[i]));
    CHECK(err < 10.0 * 2.2e-16 * static_cast<double>(g.size()));
}

TEST_CASE("poisson: zero source") {
    TorusGrid g(2, 16);
    SpectralScalar rho(g, 1.0);
    auto u = solve_poisson(rho);
    CHECK(field_max_abs(u) < 1e-14);
}

TEST_CASE("poisson: single mode is identity at |k|=1") {
    TorusGrid g(2, 32);
    auto rho = make_field(g, [](double x, double) { return 1.0 + 0.5 * std::cos(x); });
    auto u = solve_poisson(rho);
    auto expect = make_field(g, [](double x, double) { return 0.5 * std::cos(x); });
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - expect[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("poisson: mixed mode coefficient and residual") {
    TorusGrid g(2, 32);
    auto rho = make_field(g, [](double x, double y) { return 1.0 + 0.3 * std::cos(2 * x) * std::cos(y); });
    auto u = solve_poisson(rho);
    auto expect = make_field(g, [](double x, double y) { return 0.06 * std::cos(2 * x) * std::cos(y); });
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - expect[i]));
    CHECK(err < 1e-12);

    // residual check -Lap U - (rho - 1) ~ 0
    auto res = laplacian(u);
    double rmax = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i)
        rmax = std::max(rmax, std::abs(-res[i] - (rho[i] - 1.0)));
    CHECK(rmax < 1e-10 * field_max_abs(rho));
}

TEST_CASE("poisson residual on random band-limited sources") {
    TorusGrid g(2, 32);
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        auto h = random_low_mode(g, rng, 5, 0.2);
        SpectralScalar rho(g);
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 2.0 + h[i];
        auto u = solve_poisson(rho);
        auto res = laplacian(u);
        double rmax = 0.0;
        for (std::size_t i = 0; i < res.size(); ++i)
            rmax = std::max(rmax, std::abs(-res[i] - (rho[i] - mean(rho))));
        CHECK(rmax < 1e-10 * field_max_abs(rho));
    }
}

TEST_CASE("poisson: degenerate grid rejected") {
    CHECK_THROWS_AS(TorusGrid(2, 4), ConfigError);
}

TEST_CASE("kernel convolution: exact single mode") {
    TorusGrid g(2, 32);
    auto h = make_field(g, [](double x, double) { return std::cos(x); });
    auto kh = convolve_kernel(h, KernelKind::exact);
    double err = 0.0;
    for (std::size_t i = 0; i < kh.size(); ++i) err = std::max(err, std::abs(kh[i] - h[i]));
    CHECK(err < 1e-12);

    SpectralScalar zero(g, 0.0);
    CHECK(field_max_abs(convolve_kernel(zero, KernelKind::exact)) < 1e-14);
    CHECK(field_max_abs(convolve_kernel(zero, KernelKind::regularized, 0.1)) < 1e-14);
}

TEST_CASE("kernel convolution: nonzero mean rejected") {
    TorusGrid g(2, 16);
    SpectralScalar h(g, 0.5);
    CHECK_THROWS_AS(convolve_kernel(h, KernelKind::exact), ContractViolation);
}

TEST_CASE("regularized kernel converges to exact kernel") {
    TorusGrid g(2, 128);
    auto h = make_field(g, [](double x, double y) { return std::cos(x) + 0.5 * std::sin(2 * y); });
    auto exact = convolve_kernel(h, KernelKind::exact);
    double prev = 1e100;
    for (double ek : {1e-1, 1e-2, 1e-3}) {
        auto reg = convolve_kernel(h, KernelKind::regularized, ek);
        double err = l2_norm(reg - exact);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("derivatives: gradient of cos") {
    TorusGrid g(2, 32);
    auto f = make_field(g, [](double x, double) { return std::cos(x); });
    auto grad = gradient(f);
    auto expect0 = make_field(g, [](double x, double) { return -std::sin(x); });
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, std::abs(grad[0][i] - expect0[i]));
        err = std::max(err, std::abs(grad[1][i]));
    }
    CHECK(err < 1e-13);
}

TEST_CASE("derivatives: div(grad) == laplacian") {
    TorusGrid g(2, 32);
    Rng rng(3);
    auto f = random_low_mode(g, rng, 6);
    auto a = divergence(gradient(f));
    auto b = laplacian(f);
    double scale = field_max_abs(b) + 1e-30;
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    CHECK(err / scale < 1e-12);
}

TEST_CASE("derivatives: divergence-free field") {
    TorusGrid g(2, 32);
    SpectralVector v(g);
    v[0] = make_field(g, [](double, double y) { return -std::sin(y); });
    v[1] = make_field(g, [](double x, double) { return std::sin(x); });
    CHECK(field_max_abs(divergence(v)) < 1e-13);
}

TEST_CASE("leray projection") {
    TorusGrid g(2, 32);
    Rng rng(5);

    SUBCASE("divergence-free input unchanged; idempotent") {
        SpectralVector w(g);
        w[0] = make_field(g, [](double, double y) { return std::cos(2 * y); });
        w[1] = make_field(g, [](double x, double) { return 0.3 * std::sin(x); });
        auto p = leray_project(w);
        double err = 0.0;
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < w[c].size(); ++i)
                err = std::max(err, std::abs(p[c][i] - w[c][i]));
        CHECK(err < 1e-12);
        CHECK(field_max_abs(divergence(p)) < 1e-12);
    }

    SUBCASE("pure gradient annihilated") {
        auto phi = random_low_mode(g, rng, 4);
        auto v = gradient(phi);
        auto p = leray_project(v);
        CHECK(field_max_abs(p) < 1e-11 * (1.0 + field_max_abs(v)));
    }

    SUBCASE("gradient plus solenoidal recovers solenoidal; mean preserved") {
        auto phi = random_low_mode(g, rng, 4);
        auto psi = random_low_mode(g, rng, 4);
        // w = curl(psi) is divergence-free
        auto gp = gradient(psi);
        SpectralVector w(g);
        w[0] = -1.0 * gp[1];
        w[1] = gp[0];
        for (std::size_t i = 0; i < w[0].size(); ++i) w[0][i] += 0.7;  // mean part
        auto v = gradient(phi) + w;
        auto p = leray_project(v);
        double err = 0.0;
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < w[c].size(); ++i)
                err = std::max(err, std::abs(p[c][i] - w[c][i]));
        CHECK(err < 1e-10);
        CHECK(mean(p[0]) == doctest::Approx(0.7).epsilon(1e-12));
    }

    SUBCASE("symmetric: <Pv,w> == <v,Pw>") {
        for (int t = 0; t < 5; ++t) {
            SpectralVector v(g), w(g);
            v[0] = random_low_mode(g, rng, 5);
            v[1] = random_low_mode(g, rng, 5);
            w[0] = random_low_mode(g, rng, 5);
            w[1] = random_low_mode(g, rng, 5);
            double a = inner(leray_project(v), w);
            double b = inner(v, leray_project(w));
            CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("h_minus1_norm: closed form and poisson cross-check") {
    TorusGrid g(2, 32);
    SpectralScalar zero(g, 0.0);
    CHECK(h_minus1_norm(zero) == 0.0);

    auto h = make_field(g, [](double x, double) { return std::cos(x); });
    CHECK(h_minus1_norm(h) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-12));

    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
        auto hh = random_low_mode(g, rng, 6);
        SpectralScalar rho(g);
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 1.0 + 0.1 * hh[i];
        auto u = solve_poisson(rho);
        double a = h_minus1_norm(0.1 * hh);
        double b = l2_norm(gradient(u));
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + a));
    }
}

TEST_CASE("sobolev_norm: constants, single mode, monotonicity, parseval") {
    TorusGrid g(2, 32);
    SpectralScalar c(g, -1.5);
    CHECK(sobolev_norm(c, 0.0) == doctest::Approx(1.5 * kTwoPi).epsilon(1e-12));
    CHECK(sobolev_norm(c, 3.7) == doctest::Approx(1.5 * kTwoPi).epsilon(1e-12));

    auto f = make_field(g, [](double x, double) { return std::cos(x); });
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(kTwoPi).epsilon(1e-12));

    Rng rng(13);
    auto r = random_low_mode(g, rng, 5);
    double prev = sobolev_norm(r, 0.0);
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        double cur = sobolev_norm(r, s);
        CHECK(cur >= prev);
        prev = cur;
    }

    // Parseval: H^0 norm squared equals the quadrature integral of f^2.
    double a = sobolev_norm(r, 0.0);
    CHECK(std::abs(a * a - inner(r, r)) < 1e-10 * (1.0 + a * a));
}

TEST_CASE("translate: exact phase shift") {
    TorusGrid g(2, 32);
    auto f = make_field(g, [](double x, double y) { return std::sin(x) + std::cos(2 * y + 1.0); });
    double shift[2] = {0.37, -1.21};
    auto t = translate(f, shift);
    std::size_t idx = 0;
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            double x = g.node(i) - shift[0], y = g.node(j) - shift[1];
            err = std::max(err, std::abs(t[idx] - (std::sin(x) + std::cos(2 * y + 1.0))));
        }
    CHECK(err < 1e-12);
}
