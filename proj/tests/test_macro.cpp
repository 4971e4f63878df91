#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "epns/initdata.hpp"
#include "epns/macro.hpp"
#include "epns/rng.hpp"

using namespace epns;

namespace {

MacroState equilibrium(const TorusGrid& g, double sigma) {
    MacroState st(sigma > 0 ? MacroVariant::isothermal : MacroVariant::pressureless, g, sigma);
    return st;  // g=0 (rho=1), u=v=0
}

// Fourier cosine coefficients of exp(a cos x) by composite Simpson; an
// independent route to the kernel convolution for the manufactured test.
std::vector<double> exp_cos_coeffs(double a, int kmax) {
    const int N = 4096;
    std::vector<double> beta(kmax + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= N; ++i) {
            double x = kTwoPi * i / N;
            double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * std::exp(a * std::cos(x)) * std::cos(k * x);
        }
        acc *= kTwoPi / (3.0 * N);
        beta[k] = (k == 0 ? acc / kTwoPi : acc / M_PI);
    }
    return beta;
}

} // namespace

TEST_CASE("epns rhs: equilibrium and Galilean rest state give zero tendency") {
    TorusGrid g(2, 32);
    for (double sigma : {1.0, 0.0}) {
        auto st = equilibrium(g, sigma);
        auto rhs = epns_rhs(st);
        CHECK(field_max_abs(rhs.density_var) < 1e-13);
        CHECK(field_max_abs(rhs.u) < 1e-13);
        CHECK(field_max_abs(rhs.v) < 1e-13);

        // u = v = w constant: drag, pressure, transport and field all vanish
        for (std::size_t i = 0; i < st.u[0].size(); ++i) {
            st.u[0][i] = st.v[0][i] = 0.4;
            st.u[1][i] = st.v[1][i] = -0.2;
        }
        rhs = epns_rhs(st);
        CHECK(field_max_abs(rhs.density_var) < 1e-13);
        CHECK(field_max_abs(rhs.u) < 1e-13);
        CHECK(field_max_abs(rhs.v) < 1e-13);
    }
}

TEST_CASE("epns rhs: manufactured solution with an independent kernel oracle") {
    TorusGrid g(2, 64);
    const double a = 0.1, c = 0.05, sigma = 1.0;
    MacroState st(MacroVariant::isothermal, g, sigma);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            st.density_var[idx] = a * std::cos(g.node(i));
            st.u[0][idx] = st.v[0][idx] = c * std::sin(g.node(j));
        }

    auto beta = exp_cos_coeffs(a, 20);
    auto rhs = epns_rhs(st);

    double err = 0.0;
    idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            double x = g.node(i), y = g.node(j);
            // dg = a c sin x sin y
            err = std::max(err, std::abs(rhs.density_var[idx] - a * c * std::sin(x) * std::sin(y)));
            // du1 = sigma a sin x + sum_k beta_k sin(kx)/k ; du2 = 0
            double force = 0.0;
            for (int k = 1; k <= 20; ++k) force += beta[k] * std::sin(k * x) / k;
            err = std::max(err, std::abs(rhs.u[0][idx] - (sigma * a * std::sin(x) + force)));
            err = std::max(err, std::abs(rhs.u[1][idx]));
            // dv = Lap v = (-c sin y, 0)
            err = std::max(err, std::abs(rhs.v[0][idx] + c * std::sin(y)));
            err = std::max(err, std::abs(rhs.v[1][idx]));
        }
    CHECK(err < 1e-8);
}

TEST_CASE("epns step: equilibrium fixed; per-step mass drift tiny at n=64") {
    TorusGrid g(2, 64);
    auto st = equilibrium(g, 1.0);
    epns_step(st, 0.01);
    CHECK(field_max_abs(st.density_var) < 1e-12);
    CHECK(field_max_abs(st.u) < 1e-12);
    CHECK(field_max_abs(st.v) < 1e-12);

    LimitData lim = smooth_profiles(g, 42, 0.1, 2);
    MacroState st2(MacroVariant::isothermal, g, 1.0);
    for (std::size_t i = 0; i < st2.density_var.size(); ++i)
        st2.density_var[i] = std::log(lim.rho0[i]);
    st2.u = lim.u0;
    st2.v = lim.v0;
    double drift = epns_step(st2, 0.01);
    CHECK(std::abs(drift) < 1e-10);
}

TEST_CASE("epns step: self-convergence order >= 3") {
    TorusGrid g(2, 32);
    LimitData lim = smooth_profiles(g, 7, 0.1, 2);
    auto make = [&]() {
        MacroState st(MacroVariant::isothermal, g, 1.0);
        for (std::size_t i = 0; i < st.density_var.size(); ++i)
            st.density_var[i] = std::log(lim.rho0[i]);
        st.u = lim.u0;
        st.v = lim.v0;
        return st;
    };
    const double T = 0.16;
    auto run = [&](double dt) {
        auto st = make();
        int steps = static_cast<int>(std::round(T / dt));
        for (int s = 0; s < steps; ++s) epns_step(st, dt);
        return st;
    };
    auto sa = run(0.02), sb = run(0.01), sc = run(0.005);
    auto dist = [&](const MacroState& x, const MacroState& y) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.density_var.size(); ++i) {
            m = std::max(m, std::abs(x.density_var[i] - y.density_var[i]));
            for (int ccc = 0; ccc < 2; ++ccc) {
                m = std::max(m, std::abs(x.u[ccc][i] - y.u[ccc][i]));
                m = std::max(m, std::abs(x.v[ccc][i] - y.v[ccc][i]));
            }
        }
        return m;
    };
    double e1 = dist(sa, sb), e2 = dist(sb, sc);
    CHECK(std::log2(e1 / e2) >= 2.9);
}

TEST_CASE("epns step: linearized mode against a dense per-mode ODE oracle") {
    TorusGrid g(2, 32);
    const double sigma = 1.0, amp = 1e-6, T = 0.5, dt = 1.0 / 128.0;
    MacroState st(MacroVariant::isothermal, g, sigma);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) st.density_var[idx] = amp * std::cos(g.node(i));

    int steps = static_cast<int>(std::round(T / dt));
    for (int s = 0; s < steps; ++s) epns_step(st, dt);

    // oracle: mode k = (1,0) of the linearization, fine-dt RK4
    using C = std::complex<double>;
    C gh(amp / 2, 0), u1(0, 0), u2(0, 0), v2(0, 0);
    auto rhs = [&](C G, C U1, C U2, C V2) {
        C iu(0, 1);
        return std::array<C, 4>{-iu * U1, -iu * (sigma + 1.0) * G - U1, -U2 + V2, U2 - 2.0 * V2};
    };
    const double hh = 1e-5;
    int osteps = static_cast<int>(std::round(T / hh));
    for (int s = 0; s < osteps; ++s) {
        auto k1 = rhs(gh, u1, u2, v2);
        auto k2 = rhs(gh + 0.5 * hh * k1[0], u1 + 0.5 * hh * k1[1], u2 + 0.5 * hh * k1[2],
                      v2 + 0.5 * hh * k1[3]);
        auto k3 = rhs(gh + 0.5 * hh * k2[0], u1 + 0.5 * hh * k2[1], u2 + 0.5 * hh * k2[2],
                      v2 + 0.5 * hh * k2[3]);
        auto k4 = rhs(gh + hh * k3[0], u1 + hh * k3[1], u2 + hh * k3[2], v2 + hh * k3[3]);
        gh += hh / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        u1 += hh / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        u2 += hh / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        v2 += hh / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }

    auto gc = st.density_var.coeffs();
    auto uc = st.u[0].coeffs();
    std::size_t mode = static_cast<std::size_t>(1) * g.n;  // k = (1,0)
    CHECK(std::abs(gc[mode] - gh) < 1e-5 * amp);
    CHECK(std::abs(uc[mode] - u1) < 1e-5 * amp);
}

TEST_CASE("energy report: equilibrium, Taylor-Green, coulomb identity") {
    TorusGrid g(2, 32);
    auto st = equilibrium(g, 1.0);
    auto er = energy_report(st);
    CHECK(er.kinetic == 0.0);
    CHECK(std::abs(er.coulomb) < 1e-20);
    CHECK(er.fluid == 0.0);
    CHECK(std::abs(er.entropy) < 1e-15);
    CHECK(er.dissipation_v == 0.0);
    CHECK(er.dissipation_drag == 0.0);

    MacroState tg(MacroVariant::pressureless, g, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            tg.v[0][idx] = std::sin(g.node(i)) * std::cos(g.node(j));
            tg.v[1][idx] = -std::cos(g.node(i)) * std::sin(g.node(j));
        }
    auto er2 = energy_report(tg);
    CHECK(er2.fluid == doctest::Approx(M_PI * M_PI).epsilon(1e-12));
    CHECK(er2.dissipation_v == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));

    // coulomb == h_minus1_norm(rho - 1)^2 / 2
    MacroState pert(MacroVariant::isothermal, g, 1.0);
    for (std::size_t i = 0; i < pert.density_var.size(); ++i)
        pert.density_var[i] = 0.2 * std::cos(g.node(static_cast<int>(i) / g.n));
    auto rho = pert.rho();
    SpectralScalar h = rho;
    double mh = mean(h);
    for (auto& v : h.values) v -= mh;
    auto er3 = energy_report(pert);
    double hm = h_minus1_norm(h);
    CHECK(std::abs(er3.coulomb - 0.5 * hm * hm) < 1e-10 * (1.0 + er3.coulomb));
}

TEST_CASE("energy identity residual refines at order >= 2") {
    TorusGrid g(2, 32);
    LimitData lim = smooth_profiles(g, 3, 0.1, 2);
    auto residual = [&](double dt) {
        MacroState st(MacroVariant::isothermal, g, 1.0);
        for (std::size_t i = 0; i < st.density_var.size(); ++i)
            st.density_var[i] = std::log(lim.rho0[i]);
        st.u = lim.u0;
        st.v = lim.v0;
        double e0 = energy_report(st).total();
        double acc = 0.0, prev = energy_report(st).dissipation_v +
                                 energy_report(st).dissipation_drag;
        int steps = static_cast<int>(std::round(0.2 / dt));
        double worst = 0.0;
        for (int s = 0; s < steps; ++s) {
            epns_step(st, dt);
            auto er = energy_report(st);
            double diss = er.dissipation_v + er.dissipation_drag;
            acc += 0.5 * dt * (diss + prev);
            prev = diss;
            worst = std::max(worst, std::abs(er.total() - e0 + acc));
        }
        return worst;
    };
    double r1 = residual(4e-3), r2 = residual(2e-3);
    CHECK(r1 / r2 > 3.2);
}

TEST_CASE("coulomb integration-by-parts identity") {
    TorusGrid g(2, 32);
    SpectralScalar zero_h(g, 0.0);
    SpectralVector u(g);
    auto [l0, r0] = coulomb_ibp_check(zero_h, u);
    CHECK(l0 == 0.0);
    CHECK(r0 == 0.0);

    Rng rng(17);
    auto rand_field = [&](int kmax, double amp) {
        SpectralScalar f(g);
        for (int kx = -kmax; kx <= kmax; ++kx)
            for (int ky = -kmax; ky <= kmax; ++ky) {
                if (!kx && !ky) continue;
                double a = amp * rng.normal(), b = amp * rng.normal();
                std::size_t idx = 0;
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j, ++idx) {
                        double ph = kx * g.node(i) + ky * g.node(j);
                        f[idx] += a * std::cos(ph) + b * std::sin(ph);
                    }
            }
        return f;
    };

    // divergence-free u forces both sides to vanish
    {
        SpectralScalar h = rand_field(3, 0.2);
        SpectralVector w(g);
        w[0] = rand_field(3, 0.2);
        w[1] = rand_field(3, 0.2);
        w = leray_project(w);
        auto [lhs, rhs] = coulomb_ibp_check(h, w);
        CHECK(std::abs(rhs) < 1e-10);
        CHECK(std::abs(lhs) < 1e-9);
    }

    for (int trial = 0; trial < 100; ++trial) {
        SpectralScalar h = rand_field(3, 0.3);
        SpectralVector w(g);
        w[0] = rand_field(3, 0.5);
        w[1] = rand_field(3, 0.5);
        auto [lhs, rhs] = coulomb_ibp_check(h, w);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    }
}

TEST_CASE("norm tracker: zero state, additivity, delegate cross-check") {
    TorusGrid g(2, 32);
    auto st = equilibrium(g, 1.0);
    CHECK(norm_tracker(st, 3.0) == 0.0);

    // additivity over disjoint Fourier supports via the underlying norm
    SpectralScalar f1(g), f2(g);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) {
            f1[idx] = std::cos(g.node(i));
            f2[idx] = 0.3 * std::sin(5.0 * g.node(j));
        }
    double a = std::pow(sobolev_norm(f1, 2.0), 2), b = std::pow(sobolev_norm(f2, 2.0), 2);
    double ab = std::pow(sobolev_norm(f1 + f2, 2.0), 2);
    CHECK(std::abs(ab - a - b) < 1e-12 * (1.0 + ab));

    MacroState gs(MacroVariant::isothermal, g, 1.0);
    gs.density_var = f1;
    CHECK(norm_tracker(gs, 1.0) ==
          doctest::Approx(std::pow(sobolev_norm(f1, 1.0), 2)).epsilon(1e-12));

    // pressureless tracker uses the shifted order on the density slot
    MacroState hs(MacroVariant::pressureless, g, 0.0);
    hs.density_var = f1;
    CHECK(norm_tracker(hs, 2.0) ==
          doctest::Approx(std::pow(sobolev_norm(f1, 1.0), 2)).epsilon(1e-12));
}

TEST_CASE("pressureless blowup sentinel carries the first violation time") {
    TorusGrid g(2, 32);
    MacroState st(MacroVariant::pressureless, g, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j, ++idx) st.u[0][idx] = -2.0 * std::sin(g.node(i));

    bool aborted = false;
    double t = 0.0;
    const double dt = 5e-3;
    try {
        for (int s = 0; s < 2000; ++s) {
            epns_step(st, dt, t);
            t += dt;
        }
    } catch (const SolverAbort& e) {
        aborted = true;
        CHECK(e.time > 0.0);
        CHECK(e.time <= t + dt + 1e-12);
    }
    CHECK(aborted);
}
