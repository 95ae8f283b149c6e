#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/grid.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace inls;

TEST_CASE("make_grid basics") {
    auto g = make_grid(32.0, 4096);
    CHECK(g->h == doctest::Approx(0.0078125).epsilon(1e-15));
    CHECK(g->nodes.front() == 0.0);
    CHECK(g->nodes.back() == 32.0);
    CHECK(g->num_nodes() == 4097);

    CHECK_THROWS_AS(make_grid(0.0, 100), ValidationError);
    CHECK_THROWS_AS(make_grid(16.0, 63), ValidationError);
    CHECK_THROWS_AS(make_grid(std::numeric_limits<double>::quiet_NaN(), 128), ValidationError);
}

TEST_CASE("integrate: ball volume and zero") {
    auto g = make_grid(2.0, 128);
    std::vector<double> one(g->num_nodes(), 1.0);
    const double vol = integrate(*g, one);
    CHECK(vol == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 8.0).epsilon(1e-13));

    std::vector<double> zero(g->num_nodes(), 0.0);
    CHECK(integrate(*g, zero) == 0.0);
}

TEST_CASE("integrate: Gaussian matches pi^{3/2}") {
    auto g = make_grid(16.0, 4096);
    std::vector<double> f(g->num_nodes());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::exp(-g->nodes[i] * g->nodes[i]);
    const double exact = std::pow(std::numbers::pi, 1.5);
    CHECK(integrate(*g, f) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("integrate rejects non-finite samples") {
    auto g = make_grid(4.0, 64);
    std::vector<double> f(g->num_nodes(), 1.0);
    f[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(integrate(*g, f), ValidationError);
}

TEST_CASE("integrate: polynomial exactness of the Simpson rule") {
    auto g = make_grid(3.0, 64);
    // f = r gives integrand r^3 which composite Simpson integrates exactly
    std::vector<double> f(g->num_nodes());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = g->nodes[i];
    const double exact = 4.0 * std::numbers::pi * std::pow(3.0, 4) / 4.0;
    CHECK(integrate(*g, f) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("integrate: odd n trapezoid fallback stays consistent") {
    auto g = make_grid(8.0, 255);
    std::vector<double> f(g->num_nodes());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::exp(-g->nodes[i]);
    const double oracle =
        testsup::volume_oracle([](double r) { return std::exp(-r); }, 8.0);
    CHECK(integrate(*g, f) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("quadrature convergence order >= 3.8 under h halving") {
    auto err_at = [](std::size_t n) {
        auto g = make_grid(10.0, n);
        std::vector<double> f(g->num_nodes());
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = std::cos(g->nodes[i]) * std::exp(-g->nodes[i]);
        const double oracle = testsup::volume_oracle(
            [](double r) { return std::cos(r) * std::exp(-r); }, 10.0);
        return std::abs(integrate(*g, f) - oracle);
    };
    const double e1 = err_at(128);
    const double e2 = err_at(256);
    CHECK(e1 / e2 >= 3.8);
}

TEST_CASE("singular weight r^{-b}: fused quadrature converges at order >= 1.9") {
    // closed form: 4*pi Int_0^inf r^{2-b} e^{-r^2} dr = 2*pi Gamma((3-b)/2)
    const double b = 0.5;
    const double exact = 2.0 * std::numbers::pi * std::tgamma(0.5 * (3.0 - b));
    auto err_at = [&](std::size_t n) {
        auto g = make_grid(12.0, n);
        std::vector<double> f(g->num_nodes());
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = std::exp(-g->nodes[i] * g->nodes[i]);
        return std::abs(integrate_weighted(*g, f, b) - exact);
    };
    const double e1 = err_at(512);
    const double e2 = err_at(1024);
    CHECK(e1 / e2 >= std::pow(2.0, 1.9));
    CHECK(err_at(8192) < 1e-7);
}

TEST_CASE("radial_derivative: exact on quadratics, zero on constants") {
    auto g = make_grid(8.0, 128);
    std::vector<Complex> v(g->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = Complex(g->nodes[i] * g->nodes[i], 0.0);
    RadialField u{g, v};
    auto d = radial_derivative(*g, u);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(d[i].real() == doctest::Approx(2.0 * g->nodes[i]).epsilon(1e-12));

    std::vector<double> c(g->num_nodes(), 3.25);
    auto dc = radial_derivative(*g, std::span<const double>(c));
    for (double x : dc)
        CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("radial_derivative: error contracts by >= 3.8 when h halves") {
    auto err_at = [](std::size_t n) {
        auto g = make_grid(16.0, n);
        std::vector<double> v(g->num_nodes());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = std::sin(g->nodes[i]);
        auto d = radial_derivative(*g, std::span<const double>(v));
        double e = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            e = std::max(e, std::abs(d[i] - std::cos(g->nodes[i])));
        return e;
    };
    const double e1 = err_at(2048);
    const double e2 = err_at(4096);
    CHECK(e1 / e2 >= 3.8);
}

TEST_CASE("field builders enforce the Dirichlet end") {
    auto g = make_grid(8.0, 64);
    auto u = gaussian_field(g, 0.5, 3.0);
    CHECK(u.values.back() == Complex(0.0, 0.0));
    CHECK(u.values.front().real() == doctest::Approx(0.5));

    CHECK_THROWS_AS(gaussian_field(g, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_field(g, std::vector<Complex>(3)), ValidationError);
    CHECK(is_zero_field(zero_field(g)));
}
