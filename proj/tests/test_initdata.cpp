#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epns/driver.hpp"
#include "epns/initdata.hpp"

using namespace epns;

TEST_CASE("smooth profiles: trivial amplitude and positivity sweep") {
    TorusGrid g(2, 16);
    auto d0 = smooth_profiles(g, 5, 0.0, 2);
    CHECK(field_max_abs(d0.u0) == 0.0);
    CHECK(field_max_abs(d0.v0) < 1e-15);
    for (double v : d0.rho0.values) CHECK(v == 1.0);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto d = smooth_profiles(g, seed, 0.3, 2);
        CHECK(field_min(d.rho0) >= 1.0 - 0.3 - 1e-12);
        CHECK(field_max_abs(divergence(d.v0)) < 1e-10);
    }

    CHECK_THROWS_AS(smooth_profiles(g, 1, 0.6, 2), ConfigError);
}

TEST_CASE("smooth profiles: deterministic in the seed") {
    TorusGrid g(2, 16);
    auto a = smooth_profiles(g, 123, 0.2, 3);
    auto b = smooth_profiles(g, 123, 0.2, 3);
    for (std::size_t i = 0; i < a.rho0.size(); ++i) {
        CHECK(a.rho0[i] == b.rho0[i]);
        CHECK(a.u0[0][i] == b.u0[0][i]);
        CHECK(a.v0[1][i] == b.v0[1][i]);
    }
}

TEST_CASE("well-prepared family: sigma > 0 certificates") {
    TorusGrid g(2, 16);
    VelocityBox vb(2, 48, 8.0);
    auto lim = smooth_profiles(g, 9, 0.1, 2);
    auto fam = well_prepared_family(lim, 1.0, 0.05, vb);
    CHECK(std::abs(fam.h1_gap) <= 1e-8);
    CHECK(fam.h2_gap <= 1e-9);
}

TEST_CASE("well-prepared family: sigma = 0 energy gap is d eps / 2") {
    TorusGrid g(2, 16);
    VelocityBox vb(2, 64, 2.0);
    auto lim = smooth_profiles(g, 11, 0.1, 2);
    auto fam = well_prepared_family(lim, 0.0, 0.01, vb);
    CHECK(std::abs(fam.h1_gap - 0.01) < 1e-6);  // d * eps / 2 with d = 2
    CHECK(fam.h2_gap <= 1e-9);
    CHECK(fam.f0.sigma == 0.0);
}

TEST_CASE("well-prepared family: sigma = 0 gap scales linearly in eps") {
    TorusGrid g(2, 16);
    VelocityBox vb(2, 64, 2.0);
    auto lim = smooth_profiles(g, 13, 0.1, 2);
    std::vector<std::pair<double, double>> pts;
    for (double eps : {0.04, 0.02, 0.01}) {
        auto fam = well_prepared_family(lim, 0.0, eps, vb);
        pts.push_back({eps, fam.h1_gap});
    }
    auto fit = fit_rate(pts);
    CHECK(std::abs(fit.slope - 1.0) <= 0.01);
}

TEST_CASE("well-prepared family: misprepared option opens the (H2) gap") {
    TorusGrid g(2, 16);
    VelocityBox vb(2, 48, 8.0);
    auto lim = smooth_profiles(g, 17, 0.1, 2);
    const double eps = 0.04;
    auto fam = well_prepared_family(lim, 1.0, eps, vb, /*misprepare=*/true);
    CHECK(fam.h2_gap > 1e-3 * eps);  // sqrt(eps)-size velocity offset, squared
    CHECK(fam.h2_gap < 10.0 * eps);
}

TEST_CASE("well-prepared family: box-too-small guard") {
    TorusGrid g(2, 16);
    VelocityBox vb(2, 16, 0.5);
    auto lim = smooth_profiles(g, 19, 0.1, 2);
    CHECK_THROWS_AS(well_prepared_family(lim, 0.0, 0.04, vb), ConfigError);
    CHECK_THROWS_AS(well_prepared_family(lim, 1.0, 0.04, vb), ConfigError);
}
