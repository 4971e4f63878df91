#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epns/diagnostics.hpp"
#include "epns/driver.hpp"
#include "epns/initdata.hpp"
#include "epns/kinetic.hpp"
#include "epns/spectral_ops.hpp"

namespace py = pybind11;
using namespace epns;

namespace {

TorusGrid grid_of(const py::array_t<double>& a) {
    if (a.ndim() == 1) return TorusGrid(1, static_cast<int>(a.shape(0)));
    if (a.ndim() == 2) {
        if (a.shape(0) != a.shape(1)) throw ConfigError("expected a square field");
        return TorusGrid(2, static_cast<int>(a.shape(0)));
    }
    throw ConfigError("expected a 1D or 2D field");
}

SpectralScalar to_field(const py::array_t<double>& a) {
    TorusGrid g = grid_of(a);
    auto buf = a.request();
    SpectralScalar f(g);
    const double* src = static_cast<const double*>(buf.ptr);
    if (a.ndim() == 1) {
        for (int i = 0; i < g.n; ++i) f[i] = src[i * buf.strides[0] / sizeof(double)];
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                f[static_cast<std::size_t>(i) * g.n + j] =
                    src[i * buf.strides[0] / sizeof(double) + j * buf.strides[1] / sizeof(double)];
    }
    return f;
}

py::array_t<double> from_field(const SpectralScalar& f) {
    if (f.grid.dim == 1) {
        py::array_t<double> out(f.grid.n);
        std::copy(f.values.begin(), f.values.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out({f.grid.n, f.grid.n});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

DistributionFunction to_phase(const py::array_t<double>& f4, double vmax, double sigma,
                              double epsilon) {
    if (f4.ndim() != 4) throw ConfigError("phase array must be (n, n, nv, nv)");
    int n = static_cast<int>(f4.shape(0));
    int nv = static_cast<int>(f4.shape(2));
    if (f4.shape(1) != n || f4.shape(3) != nv) throw ConfigError("phase array must be (n, n, nv, nv)");
    DistributionFunction f(TorusGrid(2, n), VelocityBox(2, nv, vmax), sigma, epsilon);
    auto r = f4.unchecked<4>();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < nv; ++a)
                for (int b = 0; b < nv; ++b, ++idx) f.values[idx] = r(i, j, a, b);
    f.seal_ledger();
    return f;
}

py::array_t<double> from_phase(const DistributionFunction& f) {
    py::array_t<double> out({f.grid.n, f.grid.n, f.vbox.n, f.vbox.n});
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "kinetic-fluid hydrodynamic-limit laboratory (spectral core bindings)";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<StepSizeError>(m, "StepSizeError");

    m.def("solve_poisson",
          [](py::array_t<double> rho) { return from_field(solve_poisson(to_field(rho))); },
          py::arg("rho"), "Mean-zero solution of -Lap U = rho - mean(rho).");

    m.def("h_minus1_norm",
          [](py::array_t<double> h) { return h_minus1_norm(to_field(h)); }, py::arg("h"));

    m.def("sobolev_norm",
          [](py::array_t<double> f, double s) { return sobolev_norm(to_field(f), s); },
          py::arg("f"), py::arg("s"));

    m.def("leray_project",
          [](py::array_t<double> vx, py::array_t<double> vy) {
              SpectralVector v(grid_of(vx));
              v[0] = to_field(vx);
              v[1] = to_field(vy);
              auto p = leray_project(v);
              return py::make_tuple(from_field(p[0]), from_field(p[1]));
          },
          py::arg("vx"), py::arg("vy"));

    m.def("maxwellian",
          [](py::array_t<double> rho, py::array_t<double> ux, py::array_t<double> uy,
             double sigma, double vmax, int nv) {
              SpectralVector u(grid_of(rho));
              u[0] = to_field(ux);
              u[1] = to_field(uy);
              auto f = maxwellian(to_field(rho), u, sigma, VelocityBox(2, nv, vmax));
              return from_phase(f);
          },
          py::arg("rho"), py::arg("ux"), py::arg("uy"), py::arg("sigma"), py::arg("vmax"),
          py::arg("nv"));

    m.def("moments",
          [](py::array_t<double> f4, double vmax) {
              auto f = to_phase(f4, vmax, 1.0, 1.0);
              auto mm = compute_moments(f);
              py::dict d;
              d["rho"] = from_field(mm.rho);
              d["mom0"] = from_field(mm.momentum[0]);
              d["mom1"] = from_field(mm.momentum[1]);
              d["energy"] = mm.energy;
              return d;
          },
          py::arg("f"), py::arg("vmax"));

    m.def("stiff_ou_step",
          [](py::array_t<double> f4, py::array_t<double> ux, py::array_t<double> uy,
             double vmax, double sigma, double epsilon, double dt) {
              auto f = to_phase(f4, vmax, sigma, epsilon);
              SpectralVector u(f.grid);
              u[0] = to_field(ux);
              u[1] = to_field(uy);
              stiff_ou_step(f, u, dt);
              return from_phase(f);
          },
          py::arg("f"), py::arg("ux"), py::arg("uy"), py::arg("vmax"), py::arg("sigma"),
          py::arg("epsilon"), py::arg("dt"),
          "Exact Ornstein-Uhlenbeck relaxation step toward u with diffusion sigma/epsilon.");

    m.def("run_from_config",
          [](const std::string& text, const std::string& outdir) {
              ExperimentConfig cfg = parse_config_text(text);
              cfg.validate();
              py::dict d;
              if (cfg.mode == RunMode::epns) {
                  auto res = run_epns(cfg, outdir);
                  d["rows"] = res.rows.size();
                  d["tracker0"] = res.tracker0;
                  d["tracker_max"] = res.tracker_max;
                  d["energy_residual_max"] = res.energy_residual_max;
              } else if (cfg.mode == RunMode::sweep) {
                  auto res = sweep(cfg, outdir);
                  d["slope_mod_coulomb"] = res.fit_mod_coulomb.slope;
                  d["r2_mod_coulomb"] = res.fit_mod_coulomb.r2;
              } else {
                  auto res = run_vpns(cfg, outdir);
                  d["records"] = res.records.size();
                  d["h1_gap"] = res.h1_gap;
                  d["h2_gap"] = res.h2_gap;
                  d["entropy_residual_max"] = res.entropy_residual_max;
                  d["sup_mod_plus_coulomb"] = res.sup_mod_plus_coulomb;
              }
              return d;
          },
          py::arg("config_text"), py::arg("outdir"),
          "Run a configuration (INI text) and return the headline metrics.");
}
