#include <doctest.h>

#include <cmath>

#include "ddc/discrete.hpp"
#include "ddc/io.hpp"
#include "test_support.hpp"

using namespace ddc;
using namespace testsup;

TEST_CASE("build_grid spacings and rejection") {
    Grid g = build_grid(4, 4, 1.0, 1.0);
    CHECK(g.hx == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.hy == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.cell_area == doctest::Approx(0.0625).epsilon(1e-15));

    Grid g2 = build_grid(8, 4, 2.0, 1.0);
    CHECK(g2.hx == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g2.hy == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS(build_grid(3, 4, 1.0, 1.0));
    CHECK_THROWS(build_grid(4, 3, 1.0, 1.0));
    CHECK_THROWS(build_grid(8, 8, 0.0, 1.0));
    CHECK_THROWS(build_grid(8, 8, 1.0, -2.0));
}

TEST_CASE("total cell area equals the domain area") {
    for (auto [nx, ny, Lx, Ly] : {std::tuple{7, 5, 2.5, 0.75}, {64, 32, 1.0, 3.0}}) {
        Grid g = build_grid(nx, ny, Lx, Ly);
        ScalarField one = constant_field(g, 1.0);
        CHECK(integrate(one) == doctest::Approx(Lx * Ly).epsilon(1e-14));
    }
}

TEST_CASE("integrate: constants and the shuffled-summation oracle") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    CHECK(integrate(constant_field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));

    Grid g2 = build_grid(16, 8, 2.0, 0.5);
    CHECK(integrate(constant_field(g2, 3.25)) ==
          doctest::Approx(3.25 * 2.0 * 0.5).epsilon(1e-15));

    ScalarField f = random_field(g, -1.0, 1.0, 42);
    const double expect = shuffled_kahan_sum(f.data, 7) * g.cell_area;
    CHECK(integrate(f) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("sup_norm: constants, peaks, scan oracle") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    CHECK(sup_norm(constant_field(g, 2.0)) == 2.0);

    ScalarField peak = constant_field(g, 0.0);
    peak(3, 5) = 5.0;
    CHECK(sup_norm(peak) == 5.0);

    ScalarField f = random_field(g, -3.0, 3.0, 17);
    double scan = 0.0;
    for (double x : f.data) scan = std::max(scan, std::fabs(x));
    CHECK(sup_norm(f) == scan);
}

TEST_CASE("face_gradient: constants, linear and quadratic profiles") {
    Grid g = build_grid(10, 6, 1.0, 0.6);
    FaceField gz = face_gradient(constant_field(g, 4.0));
    for (double x : gz.x) CHECK(x == 0.0);
    for (double x : gz.y) CHECK(x == 0.0);

    ScalarField lin(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) lin(i, j) = g.xc(i);
    FaceField gl = face_gradient(lin);
    for (double x : gl.x) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));
    for (double y : gl.y) CHECK(y == 0.0);

    // f = x^2 with h = 0.1: the centered face difference equals 2 x_face
    Grid gq = build_grid(10, 4, 1.0, 0.4);
    ScalarField quad(gq);
    for (int j = 0; j < gq.ny; ++j)
        for (int i = 0; i < gq.nx; ++i) quad(i, j) = gq.xc(i) * gq.xc(i);
    FaceField gg = face_gradient(quad);
    for (int j = 0; j < gq.ny; ++j)
        for (int i = 0; i < gq.nx - 1; ++i) {
            const double xf = (i + 1) * gq.hx;
            CHECK(gg.x[gg.xidx(i, j)] == doctest::Approx(2.0 * xf).epsilon(1e-12));
        }
}

TEST_CASE("neumann_laplacian: constant, eigenfunction and conservation") {
    Grid g = build_grid(16, 12, 1.0, 1.5);
    ScalarField zf = neumann_laplacian(constant_field(g, 2.5));
    for (double x : zf.data) CHECK(x == 0.0);

    // cos(pi x / Lx) sampled at cell centers is an exact discrete
    // eigenfunction with eigenvalue -(4/h^2) sin^2(pi h / (2 Lx))
    ScalarField f(g);
    const double k = M_PI / g.Lx;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = std::cos(k * g.xc(i));
    ScalarField lap = neumann_laplacian(f);
    const double lam = -4.0 / (g.hx * g.hx) * std::pow(std::sin(0.5 * k * g.hx), 2);
    for (int c = 0; c < g.ncells(); ++c)
        CHECK(lap[c] == doctest::Approx(lam * f[c]).epsilon(1e-11));
    CHECK(std::fabs(integrate(lap)) <= 1e-12);
}

TEST_CASE("neumann_laplacian matches dense assembly on a random field") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    ScalarField f = random_field(g, -1.0, 2.0, 5);
    auto A = assemble_laplacian(g);
    ScalarField lap = neumann_laplacian(f);
    for (int r = 0; r < g.ncells(); ++r) {
        double s = 0.0;
        for (int c = 0; c < g.ncells(); ++c) s += A[r][c] * f[c];
        CHECK(lap[r] == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("laplacian conservation, linearity and self-adjointness") {
    Grid g = build_grid(64, 64, 1.0, 1.0);
    ScalarField f = random_field(g, -1.0, 1.0, 11);
    ScalarField h = random_field(g, -2.0, 2.0, 12);

    ScalarField lf = neumann_laplacian(f);
    CHECK(std::fabs(integrate(lf)) <= 1e-12 * (1.0 + sup_norm(f)) * g.area());

    // linearity
    const double a = 1.7, b = -0.3;
    ScalarField mix(g);
    for (int c = 0; c < g.ncells(); ++c) mix[c] = a * f[c] + b * h[c];
    ScalarField lmix = neumann_laplacian(mix);
    ScalarField lh = neumann_laplacian(h);
    double worst = 0.0;
    for (int c = 0; c < g.ncells(); ++c)
        worst = std::max(worst, std::fabs(lmix[c] - (a * lf[c] + b * lh[c])));
    CHECK(worst <= 1e-10 * (sup_norm(lf) + sup_norm(lh)));

    // self-adjointness under the cell-area inner product
    const double lhs = inner(lf, h);
    const double rhs = inner(f, lh);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("snapshot CSV round-trips bit-exactly") {
    Grid g = build_grid(9, 7, 1.25, 0.5);
    ScalarField f = random_field(g, -1e3, 1e3, 99);
    const auto path = std::filesystem::temp_directory_path() / "ddc_snap_test.csv";
    write_field_csv(path, f, 0.375);
    double t = 0.0;
    ScalarField back = read_field_csv(path, &t);
    CHECK(t == 0.375);
    CHECK(back.grid.nx == g.nx);
    CHECK(back.grid.ny == g.ny);
    CHECK(back.grid.Lx == g.Lx);
    REQUIRE(back.size() == f.size());
    for (int c = 0; c < f.size(); ++c) CHECK(back[c] == f[c]);
    std::filesystem::remove(path);
}
