#include "doctest.h"

#include "liesym/errors.hpp"
#include "liesym/geometry.hpp"
#include "liesym/kernel.hpp"

#include <cmath>
#include <random>

using namespace liesym;

namespace {

const ManifoldKind kAll[] = {ManifoldKind::SphereStereographic, ManifoldKind::HyperbolicPoincare,
                             ManifoldKind::EuclideanFlat};

double at(const Expr& e, std::vector<double> x) {
    EvalEnv env;
    env.x = std::move(x);
    return evaluate(e, env);
}

}  // namespace

TEST_CASE("metric examples") {
    auto s2 = ManifoldModel::make(ManifoldKind::SphereStereographic, 2);
    CHECK(at(metric(s2, 1, 1), {0, 0}) == doctest::Approx(4));
    CHECK(metric(ManifoldModel::make(ManifoldKind::HyperbolicPoincare, 3), 1, 2).str() == "0");
    CHECK(metric(ManifoldModel::make(ManifoldKind::EuclideanFlat, 3), 2, 2).str() == "1");
    CHECK_THROWS_AS(metric(s2, 3, 1), IndexError);
}

TEST_CASE("christoffel examples") {
    auto s2 = ManifoldModel::make(ManifoldKind::SphereStereographic, 2);
    // Oracle: 2/(|x|^2+1) * (-x_i d_jk - x_j d_ik + x_k d_ij) at the given points.
    CHECK(at(christoffel(s2, 1, 1, 1), {1, 0}) == doctest::Approx(2.0 / 2.0 * (-1 - 1 + 1)));
    CHECK(at(christoffel(s2, 2, 1, 1), {0, 1}) == doctest::Approx(2.0 / 2.0 * (0 - 0 + 1)));
    auto h3 = ManifoldModel::make(ManifoldKind::HyperbolicPoincare, 3);
    for (int k = 1; k <= 3; ++k)
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) CHECK(at(christoffel(h3, k, i, j), {0, 0, 0}) == 0.0);
}

TEST_CASE("christoffel symbols are symmetric and match the metric derivation") {
    for (auto kind : kAll)
        for (int n = 2; n <= 4; ++n) {
            auto m = ManifoldModel::make(kind, n);
            for (int k = 1; k <= n; ++k)
                for (int i = 1; i <= n; ++i)
                    for (int j = 1; j <= n; ++j) {
                        CHECK(christoffel(m, k, i, j) == christoffel(m, k, j, i));
                        if (n <= 3) CHECK(is_zero(christoffel(m, k, i, j) - christoffel_from_metric(m, k, i, j)));
                    }
        }
}

TEST_CASE("laplace-beltrami examples") {
    auto s2 = ManifoldModel::make(ManifoldKind::SphereStereographic, 2);
    CHECK(laplace_beltrami(s2, parse("x1", 2)).str() == "0");
    CHECK(laplace_beltrami(ManifoldModel::make(ManifoldKind::EuclideanFlat, 2), parse("x1^2", 2)).str() == "2");
    auto s3 = ManifoldModel::make(ManifoldKind::SphereStereographic, 3);
    CHECK(at(laplace_beltrami(s3, parse("x1", 3)), {0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(laplace_beltrami(s2, parse("u_1", 2)), ValueError);
}

TEST_CASE("both laplacian routes agree symbolically") {
    const char* basis[] = {"1", "x1", "x1^2", "x1*x2", "x1^3*x2 - x2^2", "exp(x1)*x2", "arctan(x1 + x2)"};
    for (auto kind : kAll)
        for (int n = 2; n <= 3; ++n) {
            auto m = ManifoldModel::make(kind, n);
            for (const char* f : basis) {
                Expr e = parse(f, n);
                CHECK_MESSAGE(is_zero(laplace_beltrami(m, e) - laplace_beltrami_components(m, e)), f);
            }
        }
}

TEST_CASE("laplace-beltrami matches a finite-difference stencil") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    Expr f = parse("x1^2*x2 + arctan(x1) + exp(x2/2)", 2);
    for (auto kind : kAll) {
        auto m = ManifoldModel::make(kind, 2);
        Expr lb = laplace_beltrami(m, f);
        for (int s = 0; s < 50; ++s) {
            std::vector<double> x;
            do {
                x = {U(rng), U(rng)};
            } while (kind == ManifoldKind::HyperbolicPoincare && x[0] * x[0] + x[1] * x[1] > 0.81);
            double h = 1e-4;
            double g_inv = at(inverse_metric(m, 1, 1), x);
            double value = 0;
            for (int i = 0; i < 2; ++i) {
                auto xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                double second = (at(f, xp) - 2 * at(f, x) + at(f, xm)) / (h * h);
                double grad_term = 0;
                for (int k = 0; k < 2; ++k) {
                    auto kp = x, km = x;
                    kp[k] += h;
                    km[k] -= h;
                    grad_term += at(christoffel(m, k + 1, i + 1, i + 1), x) * (at(f, kp) - at(f, km)) / (2 * h);
                }
                value += g_inv * (second - grad_term);
            }
            double exact = at(lb, x);
            CHECK(std::abs(exact - value) <= 1e-5 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("stereographic chart") {
    for (int n = 2; n <= 3; ++n) {
        auto m = ManifoldModel::make(ManifoldKind::SphereStereographic, n);
        ChartMaps c = chart_maps(m);
        std::vector<double> origin(n, 0.0);
        for (int i = 0; i < n; ++i) CHECK(at(c.forward[i], origin) == 0.0);
        CHECK(at(c.forward[n], origin) == -1.0);
        std::vector<std::pair<Expr, Expr>> subs;
        for (int i = 0; i <= n; ++i) subs.emplace_back(c.inverse_vars[i], c.forward[i]);
        for (int i = 0; i < n; ++i) CHECK(substitute(c.inverse[i], subs) == Expr::coord(i + 1));
        std::vector<Expr> sq;
        for (const auto& X : c.forward) sq.push_back(Expr::pow(X, Expr(2)));
        CHECK(simplify(Expr::add(sq)).str() == "1");
    }
    CHECK_THROWS_AS(chart_maps(ManifoldModel::make(ManifoldKind::HyperbolicPoincare, 2)), ValueError);
}
