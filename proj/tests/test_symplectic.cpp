#include "gslice/symplectic.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gslice;

namespace {

struct Setup {
    LieContext ctx;
    SlodowySlice slice;
    explicit Setup(int n) : ctx(n), slice(ctx, principal_triple(ctx)) {}
};

}  // namespace

TEST_CASE("phi on a diagonal group element at the base point") {
    Setup s(2);
    // g = diag(a, 1/a), x = xi: phi = -g^{-1} xi g = -a^{-2} xi
    const double a = 1.7;
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = a;
    g(1, 1) = 1.0 / a;
    const PhasePoint p = make_phase_point(s.ctx, s.slice, g, Vector::Zero(1));
    const Matrix want = -(1.0 / (a * a)) * s.slice.triple().xi;
    CHECK(frob(phi(p) - want) < 1e-12);
}

TEST_CASE("phi at the identity is minus the slice point") {
    Setup s(3);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 1);
    const PhasePoint at_id =
        make_phase_point(s.ctx, s.slice, Matrix::Identity(3, 3), p.x_coords);
    CHECK(frob(phi(at_id) + at_id.x) < 1e-13);
}

TEST_CASE("d_phi matches finite differences of phi") {
    Setup s(3);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector dir(s.ctx.dim() + s.slice.rank());
    for (int i = 0; i < dir.size(); ++i) dir(i) = Cplx(uni(rng), uni(rng));
    const TangentVector v = tangent_from_coordinates(s.ctx, s.slice, dir);
    const double t = 1e-6;
    auto shifted = [&](double dt) {
        const Matrix g = group_exp(dt * v.y) * p.g;
        const Vector c =
            p.x_coords + dt * s.slice.coords_of(s.ctx, v.z + s.slice.triple().xi);
        return PhasePoint{g, c, s.slice.point(c)};
    };
    const Matrix fd = (phi(shifted(t)) - phi(shifted(-t))) / (2.0 * t);
    CHECK(frob(fd - d_phi(p, v)) < 1e-6 * (1.0 + frob(fd)));
}

TEST_CASE("omega agrees with its matrix representation") {
    Setup s(3);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 3);
    const Matrix om = omega_matrix(s.ctx, s.slice, p);
    CHECK((om + om.transpose()).norm() < 1e-12);
    const int m = s.ctx.dim() + s.slice.rank();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector a(m), b(m);
    for (int i = 0; i < m; ++i) {
        a(i) = Cplx(uni(rng), uni(rng));
        b(i) = Cplx(uni(rng), uni(rng));
    }
    const Cplx direct = omega(s.ctx, p, tangent_from_coordinates(s.ctx, s.slice, a),
                              tangent_from_coordinates(s.ctx, s.slice, b));
    const Cplx via_matrix = (a.transpose() * om * b)(0);
    CHECK(std::abs(direct - via_matrix) < 1e-10 * (1.0 + std::abs(direct)));
}

TEST_CASE("pullback differential matches finite differences") {
    Setup s(3);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 4);
    const auto fs = invariants(s.ctx);
    const Observable obs = pullback(s.ctx, s.slice, fs[1]);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector dir(s.ctx.dim() + s.slice.rank());
    for (int i = 0; i < dir.size(); ++i) dir(i) = Cplx(uni(rng), uni(rng));
    const TangentVector v = tangent_from_coordinates(s.ctx, s.slice, dir);
    const double t = 1e-6;
    auto shifted = [&](double dt) {
        const Matrix g = group_exp(dt * v.y) * p.g;
        const Vector c =
            p.x_coords + dt * s.slice.coords_of(s.ctx, v.z + s.slice.triple().xi);
        return PhasePoint{g, c, s.slice.point(c)};
    };
    const Cplx fd = (obs.value(shifted(t)) - obs.value(shifted(-t))) / (2.0 * t);
    const Cplx an = (obs.diff(p).transpose() * dir)(0);
    CHECK(std::abs(fd - an) < 1e-5 * (1.0 + std::abs(an)));
}

TEST_CASE("hamiltonian field solves the defining equation") {
    Setup s(2);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 5);
    const Observable obs = pullback(s.ctx, s.slice, invariants(s.ctx)[0]);
    const TangentVector v = hamiltonian_field(s.ctx, s.slice, p, obs);
    const Vector d = obs.diff(p);
    for (int i = 0; i < s.ctx.dim() + s.slice.rank(); ++i) {
        const TangentVector w = tangent_basis_vector(s.ctx, s.slice, i);
        CHECK(std::abs(omega(s.ctx, p, v, w) - d(i)) < 1e-10 * (1.0 + std::abs(d(i))));
    }
}

TEST_CASE("moment map identity over random points and directions") {
    Setup s(3);
    for (int k = 0; k < 20; ++k) {
        const PhasePoint p = sample_phase_point(s.ctx, s.slice, 100 + k);
        const Matrix y = sample(s.ctx, 200 + k, SampleKind::generic);
        CHECK(verify_moment_map(s.ctx, s.slice, p, y) < 1e-8);
    }
}

TEST_CASE("both bracket engines agree") {
    Setup s(3);
    for (int k = 0; k < 20; ++k) {
        const PhasePoint p = sample_phase_point(s.ctx, s.slice, 300 + k);
        const Matrix a = sample(s.ctx, 400 + k, SampleKind::generic);
        const Matrix b = sample(s.ctx, 500 + k, SampleKind::generic);
        CHECK(verify_poisson_morphism(s.ctx, s.slice, p, linear_function(s.ctx, a),
                                      quadratic_function(s.ctx, b)) < 1e-8);
    }
}

TEST_CASE("lie poisson bracket on the sl2 triple") {
    LieContext ctx(2);
    Matrix e = Matrix::Zero(2, 2), f = Matrix::Zero(2, 2), h = Matrix::Zero(2, 2);
    e(0, 1) = 1.0;
    f(1, 0) = 1.0;
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    // {<e,.>, <f,.>}(y) = <y,[e,f]> = <y,h>; at y = h this is pair(h,h) = 2
    const Cplx v = lie_poisson(ctx, linear_function(ctx, e), linear_function(ctx, f), h);
    CHECK(std::abs(v - Cplx(2.0, 0.0)) < 1e-13);
}

TEST_CASE("fibers over regular semisimple points are isotropic tori") {
    for (int n : {2, 3}) {
        Setup s(n);
        for (int k = 0; k < 10; ++k) {
            const Matrix x = sample(s.ctx, 600 + k, SampleKind::regular_semisimple);
            const auto rep = fiber_report(s.ctx, s.slice, x);
            CHECK(rep.kind == FiberKind::torus);
            CHECK(rep.fiber_dim == s.ctx.rank());
            REQUIRE(rep.component_count_theoretical.has_value());
            CHECK(*rep.component_count_theoretical == 1);
            CHECK(rep.isotropy < 1e-9 * (1.0 + frob(rep.tilde_x)));
        }
    }
}

TEST_CASE("fiber over the negated nilpotent base point") {
    Setup s(3);
    const Matrix x = -s.slice.triple().xi;
    const auto rep = fiber_report(s.ctx, s.slice, x);
    CHECK(rep.kind == FiberKind::nilpotent_type);
    REQUIRE(rep.component_count_theoretical.has_value());
    CHECK(*rep.component_count_theoretical == 3);
}

TEST_CASE("fiber report rejects non-regular points") {
    Setup s(3);
    CHECK_THROWS_AS(fiber_report(s.ctx, s.slice, Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("dimension certificate") {
    for (int n = 2; n <= 5; ++n) {
        Setup s(n);
        const auto cert = ais_certificate(s.ctx, s.slice, 50, 9);
        CHECK(cert.phase_dim == (n * n - 1) + (n - 1));
        CHECK(cert.dim_ok);
        CHECK(cert.regular_failures == 0);
    }
}
