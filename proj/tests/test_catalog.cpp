#include "doctest.h"

#include "liesym/catalog.hpp"
#include "liesym/errors.hpp"
#include "support/fixtures.hpp"

#include <cmath>
#include <random>

using namespace liesym;

namespace {

struct CaseParams {
    CaseAssumption c;
    Rational r, q;
};

// Representative exponents per case, including a negative and a fractional r.
std::vector<CaseParams> representatives() {
    return {
        {CaseAssumption::Generic, Rational(1), Rational(3)},
        {CaseAssumption::Generic, Rational(-1, 3), Rational(5, 2)},
        {CaseAssumption::QeqRplus1, Rational(1), Rational(2)},
        {CaseAssumption::QeqRplus1, Rational(1, 2), Rational(3, 2)},
        {CaseAssumption::Qeq1, Rational(2), Rational(1)},
        {CaseAssumption::Qeq1, Rational(-1, 2), Rational(1)},
        {CaseAssumption::Req0, Rational(0), Rational(3)},
        {CaseAssumption::QeqRplus1eq1, Rational(0), Rational(1)},
    };
}

const ManifoldKind kModels[] = {ManifoldKind::SphereStereographic, ManifoldKind::HyperbolicPoincare};

const GroupAction& find(const std::vector<GroupAction>& cat, const std::string& name) {
    for (const auto& g : cat)
        if (g.name == name) return g;
    throw std::runtime_error("missing " + name);
}

}  // namespace

TEST_CASE("catalog examples") {
    auto c2 = build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::QeqRplus1, 1, 2);
    const auto& g1 = find(c2, "exponential_time");
    CHECK(g1.flow[0] == Expr::coord(1));
    CHECK(is_zero(g1.flow[2] - parse("-ln(exp(-t) - eps)", 2)));
    CHECK(is_zero(g1.flow[3] - parse("u*(exp(-t) - eps)^(-1)*exp(-t)", 2)));
    CHECK(c2.size() == 3);

    auto c5 = build_catalog(ManifoldKind::HyperbolicPoincare, 3, CaseAssumption::QeqRplus1eq1, 0, 1);
    const auto& u1 = find(c5, "u_scaling");
    CHECK(u1.flow[3] == Expr::time());
    CHECK(is_zero(u1.flow[4] - parse("exp(eps)*u", 3)));

    for (int n = 2; n <= 4; ++n) {
        auto c1 = build_catalog(ManifoldKind::SphereStereographic, n, CaseAssumption::Generic, 1, 3);
        CHECK(c1.size() == static_cast<std::size_t>(1 + n * (n - 1) / 2));
        auto c4 = build_catalog(ManifoldKind::HyperbolicPoincare, n, CaseAssumption::Req0, 0, 2);
        CHECK(c4.size() == static_cast<std::size_t>(1 + n * (n - 1) / 2));
    }
}

TEST_CASE("catalog rejects inconsistent parameters") {
    CHECK_THROWS_AS(build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::QeqRplus1, 1, 3), ValueError);
    CHECK_THROWS_AS(build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::Qeq1, 0, 1), ValueError);
    CHECK_THROWS_AS(build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::Generic, 0, 2), ValueError);
    CHECK_THROWS_AS(build_catalog(ManifoldKind::SphereStereographic, 7, CaseAssumption::Generic, 1, 3), IndexError);
    CHECK_THROWS_AS(rotation_action(ManifoldKind::EuclideanFlat, 2, CaseAssumption::Generic, {{1, 0}, {0, 0}}),
                    ValueError);
}

TEST_CASE("exponential time flow differentiates to its generator") {
    for (Rational r : {Rational(1), Rational(3), Rational(-1, 3), Rational(5, 2)}) {
        auto cat = build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::QeqRplus1, r, r + 1);
        const auto& g = find(cat, "exponential_time");
        Expr R(r);
        // Hand differentiation at eps = 0.
        Expr dt = substitute(partial(g.flow[2], eps_symbol()), {{eps_symbol(), Expr()}});
        Expr du = substitute(partial(g.flow[3], eps_symbol()), {{eps_symbol(), Expr()}});
        CHECK(is_zero(dt - exp(R * Expr::time())));
        CHECK(is_zero(du - exp(R * Expr::time()) * Expr::dep()));
    }
}

TEST_CASE("all families exponentiate consistently") {
    for (auto m : kModels)
        for (int n = 2; n <= 3; ++n)
            for (const auto& p : representatives())
                for (const auto& g : build_catalog(m, n, p.c, p.r, p.q)) {
                    auto rep = exponentiate_check(g);
                    INFO(g.name, " ", case_name(p.c), " r=", to_string(p.r));
                    CHECK(rep.identity_at_zero);
                    CHECK(rep.generator_matches);
                    CHECK(rep.samples == 100);
                    CHECK(rep.group_law_error <= 1e-10);
                    if (!g.is_rotation()) CHECK(rep.group_law_symbolic);
                    else {
                        CHECK(rep.orthogonality_error <= 1e-12);
                        CHECK(rep.determinant_error <= 1e-12);
                    }
                    CHECK(rep.pass);
                }
}

TEST_CASE("rotation one-parameter subgroup") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-3, 3);
    std::vector<std::vector<Rational>> a{{0, 2, Rational(-1, 2)}, {-2, 0, 1}, {Rational(1, 2), -1, 0}};
    for (int k = 0; k < 50; ++k) {
        double e1 = U(rng), e2 = U(rng);
        auto A1 = rotation_exponential(a, e1), A2 = rotation_exponential(a, e2), A12 = rotation_exponential(a, e1 + e2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0, o = 0;
                for (int l = 0; l < 3; ++l) {
                    s += A1[i][l] * A2[l][j];
                    o += A1[l][i] * A1[l][j];
                }
                CHECK(std::abs(s - A12[i][j]) <= 1e-12);
                CHECK(std::abs(o - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
    }
    // A plane rotation against cos and sin.
    auto R = rotation_exponential({{0, 1}, {-1, 0}}, 0.7);
    CHECK(R[0][0] == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
    CHECK(R[0][1] == doctest::Approx(std::sin(0.7)).epsilon(1e-14));
}

TEST_CASE("catalog generators satisfy the determining system and the criterion") {
    for (auto m : {ManifoldKind::SphereStereographic, ManifoldKind::HyperbolicPoincare, ManifoldKind::EuclideanFlat})
        for (int n = 2; n <= 3; ++n) {
            auto symbolic = PDEInstance::make(ManifoldModel::make(m, n));
            for (auto c : {CaseAssumption::Generic, CaseAssumption::QeqRplus1, CaseAssumption::Qeq1, CaseAssumption::Req0,
                           CaseAssumption::QeqRplus1eq1}) {
                auto ds = derive_determining_system(symbolic, c);
                for (const auto& p : representatives()) {
                    if (p.c != c) continue;
                    auto pde = PDEInstance::make(ManifoldModel::make(m, n), Expr(p.r), Expr(p.q));
                    std::vector<std::pair<Expr, Expr>> params{{Expr::param("r"), Expr(p.r)}, {Expr::param("q"), Expr(p.q)}};
                    for (const auto& g : build_catalog(m, n, c, p.r, p.q)) {
                        INFO(manifold_name(m), " n=", n, " ", g.name, " ", case_name(c));
                        auto rep = check_membership(g.generator, ds, params);
                        CHECK(rep.satisfied);
                        auto crit = apply_symmetry_criterion(g.generator, pde);
                        CHECK(crit.expr.is_zero_const());
                        CHECK_FALSE(crit.mixed_jets);
                    }
                }
            }
        }
}

TEST_CASE("case generators fail outside their case") {
    auto sphere = ManifoldModel::make(ManifoldKind::SphereStereographic, 2);
    auto g = find(build_catalog(sphere.kind, 2, CaseAssumption::QeqRplus1eq1, 0, 1), "u_scaling");
    CHECK_FALSE(apply_symmetry_criterion(g.generator, PDEInstance::make(sphere, Expr(1), Expr(3))).expr.is_zero_const());
    auto s = find(build_catalog(sphere.kind, 2, CaseAssumption::Qeq1, 2, 1), "scaling");
    CHECK_FALSE(apply_symmetry_criterion(s.generator, PDEInstance::make(sphere, Expr(2), Expr(3))).expr.is_zero_const());
}

TEST_CASE("the exponential time generator refutes the printed xi equation") {
    for (auto m : kModels)
        for (int n = 2; n <= 3; ++n) {
            VectorFieldAnsatz v = find(build_catalog(m, n, CaseAssumption::QeqRplus1, 1, 2), "exponential_time").generator;
            v.eta = parse("exp(r*t)", n);
            v.phi = parse("exp(r*t)*u", n);
            Expr alpha = parse("exp(r*t)", n);
            FunctionRule rule = [&](FuncName f, int k) -> std::optional<Expr> {
                switch (f) {
                    case FuncName::Xi: return v.xi[k - 1];
                    case FuncName::Eta: return v.eta;
                    case FuncName::Phi: return v.phi;
                    case FuncName::Alpha: return alpha;
                    default: return std::nullopt;
                }
            };
            auto eval = [&](const testing::Fixture& f) {
                return apply_case(substitute_functions(f.eq, rule), CaseAssumption::QeqRplus1);
            };
            for (const auto& f : testing::printed_reduced_system(m, n)) {
                INFO(manifold_name(m), " n=", n, " ", f.label);
                if (f.label.rfind("5:", 0) == 0) CHECK_FALSE(eval(f).is_zero_const());
                else CHECK(eval(f).is_zero_const());
            }
            for (const auto& f : testing::printed_like_terms(m, n)) {
                INFO(manifold_name(m), " n=", n, " ", f.label);
                if (f.label.rfind("6:", 0) == 0) CHECK_FALSE(eval(f).is_zero_const());
                else CHECK(eval(f).is_zero_const());
            }
            for (const auto& f : testing::corrected_conditions(m, n)) CHECK(eval(f).is_zero_const());
        }
}

TEST_CASE("reduction to the semilinear form") {
    auto a = reduce_to_semilinear(1, 1);
    CHECK(a.r == 0);
    CHECK(a.q == 1);
    CHECK(a.assumption == CaseAssumption::QeqRplus1eq1);
    auto b = reduce_to_semilinear(2, 3);
    CHECK(b.r == Rational(-1, 2));
    CHECK(b.q == Rational(3, 2));
    CHECK(b.assumption == CaseAssumption::Generic);
    auto c = reduce_to_semilinear(Rational(1, 2), Rational(1, 2));
    CHECK(c.r == 1);
    CHECK(c.q == 1);
    CHECK(c.assumption == CaseAssumption::Qeq1);
    CHECK(reduce_to_semilinear(1, 3).assumption == CaseAssumption::Req0);
    CHECK(reduce_to_semilinear(Rational(1, 2), 1).assumption == CaseAssumption::QeqRplus1);
    CHECK_THROWS_AS(reduce_to_semilinear(0, 1), ValueError);
    CHECK_THROWS_AS(semilinear_inverse(-1, 2), ValueError);
}

TEST_CASE("reduction round trip") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
    for (int k = 0; k < 100; ++k) {
        Rational m(num(rng), den(rng)), p(num(rng), den(rng));
        m.canonicalize();
        p.canonicalize();
        if (m == 0) continue;
        auto s = reduce_to_semilinear(m, p);
        auto [m2, p2] = semilinear_inverse(s.r, s.q);
        CHECK(m2 == m);
        CHECK(p2 == p);
    }
}

TEST_CASE("acting on sampled graphs") {
    std::vector<SamplePoint> pts{{{0.1, 0.2}, 0.0, 1.0}, {{-0.3, 0.5}, 0.0, 0.7}};
    auto c5 = build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::QeqRplus1eq1, 0, 1);
    for (const auto& g : c5) {
        auto same = act_on_function(g, 0.0, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(same[i].t == doctest::Approx(pts[i].t));
            CHECK(same[i].u == doctest::Approx(pts[i].u));
            for (int k = 0; k < 2; ++k) CHECK(same[i].x[k] == doctest::Approx(pts[i].x[k]));
        }
    }
    auto dbl = act_on_function(find(c5, "u_scaling"), std::log(2.0), pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(dbl[i].u == doctest::Approx(2 * pts[i].u).epsilon(1e-14));

    auto c2 = build_catalog(ManifoldKind::SphereStereographic, 2, CaseAssumption::QeqRplus1, 1, 2);
    const auto& g1 = find(c2, "exponential_time");
    auto half = act_on_function(g1, 0.5, pts);
    CHECK(half[0].t == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(half[0].u == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(act_on_function(g1, 1.0, pts), DomainError);
    CHECK_THROWS_AS(act_on_function(g1, 2.0, pts), DomainError);
}

TEST_CASE("translations are not symmetries of the curved models") {
    for (auto m : kModels) {
        auto pde = PDEInstance::make(ManifoldModel::make(m, 2), Expr(1), Expr(2));
        VectorFieldAnsatz shift{{Expr(1), Expr()}, Expr(), Expr()};
        CHECK_FALSE(apply_symmetry_criterion(shift, pde).expr.is_zero_const());
    }
    auto flat = PDEInstance::make(ManifoldModel::make(ManifoldKind::EuclideanFlat, 2), Expr(1), Expr(2));
    CHECK(apply_symmetry_criterion(VectorFieldAnsatz{{Expr(1), Expr()}, Expr(), Expr()}, flat).expr.is_zero_const());
}
