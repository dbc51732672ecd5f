// One pass/fail line per acceptance criterion. Run all, or one with --criterion N.

#include "liesym/catalog.hpp"
#include "liesym/liesym.h"
#include "liesym/torsion.hpp"
#include "liesym/verify.hpp"
#include "support/fixtures.hpp"
#include "support/random_expr.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>

using namespace liesym;

namespace {

class Criterion {
public:
    explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            ++failures_;
            if (failures_ <= 40) std::printf("  FAIL %s\n", what.c_str());
        }
    }
    void note(const std::string& what) { std::printf("  note %s\n", what.c_str()); }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool finish(const std::string& title) {
        bool pass = failures_ == 0;
        std::printf("criterion %d %s: %s (%d checks, %d failed, %.1f s)\n", id_, title.c_str(), pass ? "PASS" : "FAIL",
                    checks_, failures_, seconds());
        std::fflush(stdout);
        return pass;
    }

private:
    int id_;
    int checks_ = 0, failures_ = 0;
    std::chrono::steady_clock::time_point start_;
};

const ManifoldKind kCurved[] = {ManifoldKind::SphereStereographic, ManifoldKind::HyperbolicPoincare};

struct CaseParams {
    CaseAssumption c;
    Rational r, q;
};

std::vector<CaseParams> case_params() {
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

std::string tag(ManifoldKind m, int n) { return manifold_name(m) + " n=" + std::to_string(n); }

// Equations of the determine artifact, read back through the C API.
std::vector<Expr> determine_artifact(ManifoldKind m, int n) {
    char* json = nullptr;
    if (liesym_run_determine(manifold_name(m).c_str(), n, "generic", &json) != LIESYM_OK)
        throw std::runtime_error(liesym_last_error());
    auto j = nlohmann::json::parse(json);
    liesym_string_free(json);
    std::vector<Expr> out;
    for (const auto& e : j["equations"]) out.push_back(parse(e.get<std::string>(), n));
    return out;
}

bool contains(const ManifoldModel& model, const std::vector<Expr>& eqs, const Expr& fixture) {
    Expr target = normalize_for(model, fixture);
    for (const auto& e : eqs)
        if (is_zero(normalize_for(model, e) - target)) return true;
    return false;
}

bool criterion1() {
    Criterion c(1);
    for (auto m : kCurved)
        for (int n = 2; n <= 3; ++n) {
            auto t0 = std::chrono::steady_clock::now();
            auto model = ManifoldModel::make(m, n);
            auto eqs = determine_artifact(m, n);
            for (const auto& f : testing::printed_like_terms(m, n))
                c.check(contains(model, eqs, f.eq), tag(m, n) + " like-terms " + f.label);
            for (const auto& f : testing::printed_reduced_system(m, n))
                c.check(contains(model, eqs, f.eq), tag(m, n) + " reduced system " + f.label);
            for (const auto& f : testing::corrected_conditions(m, n))
                if (contains(model, eqs, f.eq)) c.note(tag(m, n) + " present: " + f.label);
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            c.check(s < 30, tag(m, n) + " runtime " + std::to_string(s) + " s");
        }
    return c.finish("determining-system reproduction");
}

bool criterion2() {
    Criterion c(2);
    for (auto m : kCurved)
        for (int n = 2; n <= 3; ++n)
            for (const auto& p : case_params()) {
                auto pde = PDEInstance::make(ManifoldModel::make(m, n), Expr(p.r), Expr(p.q));
                auto pts = sample_jet_points(pde, 1000, 1);
                for (const auto& g : build_catalog(m, n, p.c, p.r, p.q)) {
                    std::string what = tag(m, n) + " " + case_name(p.c) + " r=" + to_string(p.r) + " " + g.name;
                    auto crit = apply_symmetry_criterion(g.generator, pde);
                    c.check(crit.expr.is_zero_const() && !crit.mixed_jets, what + " symbolic");
                    auto rep = verify_generator(g.name, g.generator, pde, pts, 1e-8);
                    c.check(rep.pass, what + " numeric max " + std::to_string(rep.max_residual));
                }
            }
    c.check(c.seconds() < 120, "runtime");
    return c.finish("catalog soundness");
}

bool criterion3() {
    Criterion c(3);
    for (auto m : kCurved)
        for (int n = 2; n <= 3; ++n)
            for (const auto& p : case_params())
                for (const auto& g : build_catalog(m, n, p.c, p.r, p.q)) {
                    auto rep = exponentiate_check(g, 100, 3, 1e-10);
                    std::string what = tag(m, n) + " " + case_name(p.c) + " r=" + to_string(p.r) + " " + g.name;
                    c.check(rep.identity_at_zero, what + " identity at 0");
                    c.check(rep.generator_matches, what + " generator");
                    c.check(rep.samples == 100 && rep.group_law_error <= 1e-10,
                            what + " group law " + std::to_string(rep.group_law_error));
                    if (g.is_rotation())
                        c.check(rep.orthogonality_error <= 1e-12 && rep.determinant_error <= 1e-12, what + " orthogonality");
                    else
                        c.check(rep.group_law_symbolic, what + " symbolic group law");
                }
    return c.finish("catalog exponentiation");
}

bool criterion4() {
    Criterion c(4);
    std::mt19937_64 rng(44);
    std::uniform_int_distribution<int> entry(-6, 6), den(1, 4);
    for (int n = 2; n <= 4; ++n)
        for (const auto& ts : TorsionSystem::all_variants(n))
            for (int k = 0; k < 100; ++k) {
                std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        a[i][j] = Rational(entry(rng), den(rng));
                        a[i][j].canonicalize();
                        a[j][i] = -a[i][j];
                    }
                auto sol = family_construct(a, std::vector<Rational>(n, Rational(0)));
                bool zero = true;
                for (const auto& r : torsion_residual(ts, sol.components(), Expr())) zero = zero && r.is_zero_const();
                c.check(zero, "(a) " + ts.variant_name() + " n=" + std::to_string(n) + " sample " + std::to_string(k));
            }
    for (double lam0 : {0.0, 1.0, -2.0, 0.5, 1e-3}) {
        auto rep = lambda_ode_check(lam0);
        std::string l = "lam0=" + std::to_string(lam0);
        c.check(rep.max_deviation <= 1e-8, "(b) " + l + " deviation " + std::to_string(rep.max_deviation));
        c.check(rep.grid_points == 400, "(c) " + l + " grid size");
        c.check(rep.residual_vanishes == (lam0 == 0.0),
                "(c) " + l + " consistency residual " + std::to_string(rep.max_residual));
    }
    for (int n = 2; n <= 4; ++n)
        for (const auto& ts : TorsionSystem::all_variants(n)) {
            auto cases = falsify_random(ts, 20, 100 + n);
            int refuted = 0;
            for (const auto& fc : cases) refuted += fc.refuted;
            c.check(cases.size() == 20 && refuted == 20,
                    "(d) " + ts.variant_name() + " n=" + std::to_string(n) + " refuted " + std::to_string(refuted));
        }
    return c.finish("torsion Liouville evidence");
}

double at(const Expr& e, const std::vector<double>& x) {
    EvalEnv env;
    env.x = x;
    return evaluate(e, env);
}

bool criterion5() {
    Criterion c(5);
    const char* basis[] = {"1", "x1", "x1^2", "x1*x2", "x1^3*x2 - x2^2", "exp(x1)*x2", "arctan(x1 + x2)", "x2^2*x1 - x1^4"};
    const ManifoldKind all[] = {ManifoldKind::SphereStereographic, ManifoldKind::HyperbolicPoincare,
                                ManifoldKind::EuclideanFlat};
    for (auto kind : all)
        for (int n = 2; n <= 3; ++n) {
            auto m = ManifoldModel::make(kind, n);
            for (const char* f : basis) {
                Expr e = parse(f, n);
                c.check(is_zero(laplace_beltrami(m, e) - laplace_beltrami_components(m, e)),
                        tag(kind, n) + " symbolic " + f);
            }
        }
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (auto kind : all)
        for (int n = 2; n <= 3; ++n) {
            auto m = ManifoldModel::make(kind, n);
            Expr f = parse(n == 2 ? "x1^2*x2 + arctan(x1) + exp(x2/2)" : "x1*x2*x3 + arctan(x3 - x1) + exp(x2/2)", n);
            Expr lb = laplace_beltrami(m, f);
            for (int s = 0; s < 50; ++s) {
                std::vector<double> x(n);
                double r2;
                do {
                    r2 = 0;
                    for (auto& xi : x) {
                        xi = U(rng);
                        r2 += xi * xi;
                    }
                } while (kind == ManifoldKind::HyperbolicPoincare && r2 > 0.81);
                const double h = 1e-4;
                double value = 0;
                for (int i = 1; i <= n; ++i)
                    for (int j = 1; j <= n; ++j) {
                        double gij = at(inverse_metric(m, i, j), x);
                        if (gij == 0) continue;
                        auto shifted = [&](int a, double da, int b, double db) {
                            auto y = x;
                            y[a - 1] += da;
                            y[b - 1] += db;
                            return at(f, y);
                        };
                        double second = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) +
                                         shifted(i, -h, j, -h)) /
                                        (4 * h * h);
                        double grad = 0;
                        for (int k = 1; k <= n; ++k)
                            grad += at(christoffel(m, k, i, j), x) * (shifted(k, h, k, 0) - shifted(k, -h, k, 0)) / (2 * h);
                        value += gij * (second - grad);
                    }
                double exact = at(lb, x);
                c.check(std::abs(exact - value) <= 1e-5 * std::max(1.0, std::abs(exact)),
                        tag(kind, n) + " stencil point " + std::to_string(s));
            }
        }
    return c.finish("geometry cross-validation");
}

bool criterion6() {
    Criterion c(6);
    {
        testing::ExprGen g(601);
        for (int k = 0; k < 500; ++k) {
            Expr s = simplify(g.gen(3));
            c.check(simplify(s) == s, "idempotence " + s.str());
            c.check(parse(s.str(), 2) == s, "round trip " + s.str());
        }
    }
    {
        testing::ExprGen g(602);
        Expr vars[] = {Expr::coord(1), Expr::coord(2), Expr::time(), Expr::dep()};
        for (int k = 0; k < 500; ++k) {
            Expr f = g.gen(2), h = g.gen(2);
            const Expr& v = vars[k % 4];
            c.check(is_zero(partial(f * h, v) - (partial(f, v) * h + f * partial(h, v))),
                    "product rule " + f.str() + " ; " + h.str());
        }
    }
    {
        testing::ExprGen g(603);
        g.jets = true;
        for (int k = 0; k < 500; ++k) {
            Expr e = g.gen(2);
            int i = 1 + k % 2, j = (k % 3 == 0) ? kTSlot : 2 - k % 2;
            Expr dij = total_derivative(total_derivative(e, j, 3), i, 3);
            Expr dji = total_derivative(total_derivative(e, i, 3), j, 3);
            c.check(is_zero(dij - dji), "commutation " + e.str());
        }
    }
    return c.finish("kernel properties");
}

bool criterion7() {
    Criterion c(7);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-60, 60), den(1, 15);
    int done = 0;
    while (done < 100) {
        Rational m(num(rng), den(rng)), p(num(rng), den(rng));
        m.canonicalize();
        p.canonicalize();
        if (m == 0) continue;
        ++done;
        auto s = reduce_to_semilinear(m, p);
        auto [m2, p2] = semilinear_inverse(s.r, s.q);
        c.check(m2 == m && p2 == p, "round trip m=" + to_string(m) + " p=" + to_string(p));
        c.check(s.assumption == classify_case(s.r, s.q), "case of m=" + to_string(m));
    }
    bool m0 = false, r1 = false;
    try {
        reduce_to_semilinear(0, 1);
    } catch (const std::exception&) {
        m0 = true;
    }
    try {
        semilinear_inverse(-1, 2);
    } catch (const std::exception&) {
        r1 = true;
    }
    c.check(m0, "m = 0 rejected");
    c.check(r1, "r = -1 rejected");
    return c.finish("reduction map");
}

}  // namespace

int main(int argc, char** argv) {
    std::function<bool()> all[] = {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > 7) {
        std::fprintf(stderr, "criterion must be 1..7\n");
        return 2;
    }
    bool pass = true;
    for (int k = 1; k <= 7; ++k) {
        if (only != 0 && k != only) continue;
        try {
            pass = all[k - 1]() && pass;
        } catch (const std::exception& e) {
            std::printf("criterion %d: FAIL (error: %s)\n", k, e.what());
            pass = false;
        }
    }
    return pass ? 0 : 1;
}
