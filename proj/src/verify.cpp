#include "liesym/verify.hpp"

#include "liesym/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace liesym {

namespace {

Expr ujet(std::vector<int> slots) { return Expr::jet(JetIndex::make(std::move(slots))); }

void require_numeric(const PDEInstance& pde) {
    if (mentions_kind(pde.F, Kind::Param)) throw ValueError("numeric verification needs concrete r and q");
}

Expr w_var(int a, int n) { return a < n ? Expr::coord(a + 1) : Expr::time(); }

// Richardson-extrapolated central difference.
template <class G>
double derivative(const G& g, double at, double h) {
    auto d = [&](double s) { return (g(at + s) - g(at - s)) / (2 * s); };
    return (4 * d(h / 2) - d(h)) / 3;
}

// Value, gradient and Hessian in (x, t) of a map component composed with u(x, t).
struct Jet2 {
    double v = 0.0;
    std::vector<double> d;
    std::vector<std::vector<double>> dd;
    explicit Jet2(int m = 0) : d(m, 0.0), dd(m, std::vector<double>(m, 0.0)) {}
};

struct ComponentDerivs {
    Expr g, gu, guu;
    std::vector<Expr> ga, gau;
    std::vector<std::vector<Expr>> gac;
};

ComponentDerivs component_derivs(const Expr& g, int n) {
    ComponentDerivs c;
    Expr u = Expr::dep();
    c.g = g;
    c.gu = simplify(partial(g, u));
    c.guu = simplify(partial(c.gu, u));
    for (int a = 0; a <= n; ++a) {
        Expr da = simplify(partial(g, w_var(a, n)));
        c.ga.push_back(da);
        c.gau.push_back(simplify(partial(da, u)));
        std::vector<Expr> row;
        for (int b = 0; b <= n; ++b) row.push_back(simplify(partial(da, w_var(b, n))));
        c.gac.push_back(row);
    }
    return c;
}

Jet2 compose(const ComponentDerivs& c, const EvalEnv& env, const Jet2& u) {
    const int m = static_cast<int>(u.d.size());
    Jet2 out(m);
    double gu = evaluate(c.gu, env), guu = evaluate(c.guu, env);
    std::vector<double> ga(m), gau(m);
    for (int a = 0; a < m; ++a) {
        ga[a] = evaluate(c.ga[a], env);
        gau[a] = evaluate(c.gau[a], env);
    }
    out.v = evaluate(c.g, env);
    for (int a = 0; a < m; ++a) {
        out.d[a] = ga[a] + gu * u.d[a];
        for (int b = 0; b < m; ++b)
            out.dd[a][b] = evaluate(c.gac[a][b], env) + gau[a] * u.d[b] + gau[b] * u.d[a] + guu * u.d[a] * u.d[b] +
                           gu * u.dd[a][b];
    }
    return out;
}

}  // namespace

EvalEnv JetPoint::env() const {
    EvalEnv e;
    e.x = x;
    e.t = t;
    e.u = u;
    const int n = static_cast<int>(x.size());
    for (int i = 1; i <= n; ++i) {
        e.set_jet(JetIndex::make({i}), Du.at(i - 1));
        for (int j = i; j <= n; ++j) e.set_jet(JetIndex::make({i, j}), D2u.at(i - 1).at(j - 1));
        if (!Dut.empty()) e.set_jet(JetIndex::make({i, kTSlot}), Dut.at(i - 1));
    }
    e.set_jet(JetIndex::make({kTSlot}), ut);
    e.set_jet(JetIndex::make({kTSlot, kTSlot}), utt);
    return e;
}

std::vector<JetPoint> sample_jet_points(const PDEInstance& pde, int count, std::uint64_t seed) {
    if (count < 1) throw ValueError("count must be at least 1");
    require_numeric(pde);
    const int n = pde.model.n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), uval(0.5, 2.0);
    Expr ut = pde.time_derivative();
    auto clamp_norm = [](std::vector<double*> v, double bound) {
        double s = 0;
        for (double* p : v) s += *p * *p;
        s = std::sqrt(s);
        if (s > bound)
            for (double* p : v) *p *= bound / s;
    };
    std::vector<JetPoint> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        JetPoint jp;
        jp.x.assign(n, 0.0);
        do {
            for (auto& xi : jp.x) xi = pde.model.kind == ManifoldKind::HyperbolicPoincare ? 0.9 * unit(rng) : 1.5 * unit(rng);
        } while (!pde.model.in_domain(jp.x) ||
                 (pde.model.kind == ManifoldKind::HyperbolicPoincare &&
                  std::inner_product(jp.x.begin(), jp.x.end(), jp.x.begin(), 0.0) > 0.81));
        jp.t = unit(rng);
        jp.u = uval(rng);
        jp.Du.assign(n, 0.0);
        std::vector<double*> du;
        for (auto& d : jp.Du) {
            d = 3 * unit(rng);
            du.push_back(&d);
        }
        clamp_norm(du, 3.0);
        jp.D2u.assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) jp.D2u[i][j] = jp.D2u[j][i] = 3 * unit(rng);
        double fro = 0;
        for (const auto& row : jp.D2u)
            for (double v : row) fro += v * v;
        fro = std::sqrt(fro);
        if (fro > 3)
            for (auto& row : jp.D2u)
                for (double& v : row) v *= 3 / fro;
        jp.Dut.assign(n, 0.0);
        for (auto& d : jp.Dut) d = 3 * unit(rng);
        jp.utt = 3 * unit(rng);
        jp.ut = evaluate(ut, jp.env());
        out.push_back(std::move(jp));
    }
    return out;
}

double pde_residual(const PDEInstance& pde, const JetPoint& jp) { return evaluate(pde.F, jp.env()); }

ResidualEvaluator::ResidualEvaluator(const VectorFieldAnsatz& v, const PDEInstance& pde) {
    require_numeric(pde);
    const int n = pde.model.n;
    if (v.n() != n) throw ValueError("vector field dimension does not match the PDE");
    for (const auto& c : v.xi)
        if (mentions_kind(c, Kind::Param) || mentions_kind(c, Kind::Func))
            throw ValueError("vector field must be concrete for numeric evaluation");
    if (mentions_kind(v.eta, Kind::Param) || mentions_kind(v.phi, Kind::Param) || mentions_kind(v.eta, Kind::Func) ||
        mentions_kind(v.phi, Kind::Func))
        throw ValueError("vector field must be concrete for numeric evaluation");
    ProlongedCoefficients c = prolong_coefficients(v);
    const Expr& F = pde.F;
    for (int i = 1; i <= n; ++i) {
        terms_.emplace_back(v.xi[i - 1], simplify(partial(F, Expr::coord(i))));
        terms_.emplace_back(c.phi_i[i - 1], simplify(partial(F, ujet({i}))));
        for (int j = i; j <= n; ++j) terms_.emplace_back(c.phi_ij[i - 1][j - 1], simplify(partial(F, ujet({i, j}))));
    }
    terms_.emplace_back(v.eta, simplify(partial(F, Expr::time())));
    terms_.emplace_back(v.phi, simplify(partial(F, Expr::dep())));
    terms_.emplace_back(c.phi_t, simplify(partial(F, ujet({kTSlot}))));
    std::erase_if(terms_, [](const auto& t) { return t.first.is_zero_const() || t.second.is_zero_const(); });
}

ResidualSample ResidualEvaluator::at(const JetPoint& jp) const {
    EvalEnv env = jp.env();
    ResidualSample s;
    double sum = 0;
    for (const auto& [coef, dF] : terms_) {
        double v = evaluate(coef, env) * evaluate(dF, env);
        sum += v;
        s.scale = std::max(s.scale, std::abs(v));
    }
    s.absolute = std::abs(sum);
    s.relative = s.scale > 0 ? s.absolute / s.scale : 0.0;
    return s;
}

double residual_at(const VectorFieldAnsatz& v, const PDEInstance& pde, const JetPoint& jp) {
    return ResidualEvaluator(v, pde).at(jp).relative;
}

double flow_invariance_derivative(const GroupAction& ga, const PDEInstance& pde, const Expr& u0,
                                  const std::vector<double>& x, double t) {
    require_numeric(pde);
    const int n = pde.model.n;
    if (ga.n != n || static_cast<int>(x.size()) != n) throw ValueError("dimension mismatch in flow check");
    if (mentions_kind(u0, Kind::Dep) || mentions_kind(u0, Kind::Jet) || mentions_kind(u0, Kind::Param) ||
        mentions_kind(u0, Kind::Func))
        throw ValueError("manufactured function must depend on x and t only");
    const int m = n + 1;
    EvalEnv base;
    base.x = x;
    base.t = t;
    Jet2 u(m);
    u.v = evaluate(u0, base);
    // Summand by summand: keeps the rational normal form small.
    std::vector<Expr> parts = u0.kind() == Kind::Add ? u0.args() : std::vector<Expr>{u0};
    for (const auto& s : parts)
        for (int a = 0; a < m; ++a) {
            Expr da = partial(s, w_var(a, n));
            if (da.is_zero_const()) continue;
            u.d[a] += evaluate(da, base);
            for (int b = a; b < m; ++b) {
                double v = evaluate(partial(da, w_var(b, n)), base);
                u.dd[a][b] += v;
                if (b != a) u.dd[b][a] += v;
            }
        }
    // Shift the Laplacian so that F = 0 at the point.
    {
        JetPoint jp;
        jp.x = x;
        jp.t = t;
        jp.u = u.v;
        jp.Du.assign(u.d.begin(), u.d.begin() + n);
        for (int i = 0; i < n; ++i) jp.D2u.emplace_back(u.dd[i].begin(), u.dd[i].begin() + n);
        jp.ut = u.d[n];
        double shift = pde_residual(pde, jp) / evaluate(pde.model.laplacian_coefficient(), base);
        for (int i = 0; i < n; ++i) u.dd[i][i] += shift / n;
    }

    std::vector<ComponentDerivs> comps;
    if (!ga.is_rotation())
        for (const auto& g : ga.flow) comps.push_back(component_derivs(g, n));

    auto transformed_residual = [&](double eps) {
        if (!ga.in_domain(eps, x, t, u.v))
            throw DomainError(ga.name + ": eps = " + std::to_string(eps) + " is outside the flow domain");
        std::vector<Jet2> Y;
        Jet2 U(m);
        if (ga.is_rotation()) {
            Matrix A = rotation_exponential(ga.rotation, eps);
            for (int b = 0; b < n; ++b) {
                Jet2 y(m);
                for (int j = 0; j < n; ++j) {
                    y.v += A[b][j] * x[j];
                    y.d[j] = A[b][j];
                }
                Y.push_back(y);
            }
            Jet2 yt(m);
            yt.v = t;
            yt.d[n] = 1;
            Y.push_back(yt);
            U = u;
        } else {
            EvalEnv env;
            env.x = x;
            env.t = t;
            env.u = u.v;
            env.params["eps"] = eps;
            for (int b = 0; b <= n; ++b) Y.push_back(compose(comps[b], env, u));
            U = compose(comps[n + 1], env, u);
        }
        Eigen::MatrixXd J(m, m), M(m, m);
        Eigen::VectorXd g(m);
        for (int b = 0; b < m; ++b)
            for (int a = 0; a < m; ++a) J(b, a) = Y[b].d[a];
        for (int a = 0; a < m; ++a) g(a) = U.d[a];
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J.transpose());
        Eigen::VectorXd p = lu.solve(g);
        for (int a = 0; a < m; ++a)
            for (int c = 0; c < m; ++c) {
                double s = U.dd[a][c];
                for (int b = 0; b < m; ++b) s -= p(b) * Y[b].dd[a][c];
                M(a, c) = s;
            }
        Eigen::MatrixXd Jinv = J.inverse();
        Eigen::MatrixXd H = Jinv.transpose() * M * Jinv;
        JetPoint jp;
        for (int i = 0; i < n; ++i) jp.x.push_back(Y[i].v);
        jp.t = Y[n].v;
        jp.u = U.v;
        for (int i = 0; i < n; ++i) {
            jp.Du.push_back(p(i));
            jp.D2u.emplace_back();
            for (int j = 0; j < n; ++j) jp.D2u.back().push_back(H(i, j));
        }
        jp.ut = p(n);
        return pde_residual(pde, jp);
    };
    return std::abs(derivative(transformed_residual, 0.0, 1e-4));
}

Expr manufactured_function(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> c(-2, 2);
    auto q = [](int a, long b) { return Expr(Rational(a, b)); };
    std::vector<Expr> terms{q(3, 2)};
    for (int i = 1; i <= n; ++i) {
        terms.push_back(q(c(rng), 20L * n) * Expr::coord(i));
        for (int j = i; j <= n; ++j) terms.push_back(q(c(rng), 20L * n * n) * Expr::coord(i) * Expr::coord(j));
    }
    Expr t = Expr::time();
    terms.push_back(q(c(rng), 20) * t);
    int e1 = c(rng);
    terms.push_back(q(c(rng) == 0 ? 1 : 2, 20) * exp(q(e1, 5) * Expr::coord(1) - q(1, 5) * t));
    terms.push_back(q(c(rng), 20) * arctan(Expr::coord(n) + q(1, 2) * t));
    return simplify(Expr::add(terms));
}

double flow_derivative_gap(const GroupAction& ga, int samples, std::uint64_t seed) {
    if (ga.is_rotation()) throw ValueError("rotation flows are numeric only");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), uval(0.5, 2.0);
    std::vector<Expr> dflow;
    for (const auto& f : ga.flow) dflow.push_back(simplify(partial(f, eps_symbol())));
    const double h = 1e-4;
    double gap = 0;
    for (int k = 0; k < samples; ++k) {
        std::vector<double> x(ga.n);
        double t = 0, u = 1, eps = 0;
        for (int tries = 0;; ++tries) {
            if (tries > 1000) throw DomainError(ga.name + ": no sample inside the flow domain");
            for (auto& xi : x) xi = 0.5 * unit(rng);
            t = unit(rng);
            u = uval(rng);
            eps = 0.5 * unit(rng);
            if (ga.in_domain(eps - h, x, t, u) && ga.in_domain(eps + h, x, t, u)) break;
        }
        for (std::size_t c = 0; c < ga.flow.size(); ++c) {
            auto g = [&](double e) {
                EvalEnv env;
                env.x = x;
                env.t = t;
                env.u = u;
                env.params["eps"] = e;
                return evaluate(ga.flow[c], env);
            };
            EvalEnv env;
            env.x = x;
            env.t = t;
            env.u = u;
            env.params["eps"] = eps;
            double sym = evaluate(dflow[c], env);
            gap = std::max(gap, std::abs(sym - derivative(g, eps, h)) / std::max(1.0, std::abs(sym)));
        }
    }
    return gap;
}

VectorFieldAnsatz random_linear_field(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> m(-3, 3), s(-2, 2);
    std::vector<std::vector<int>> a(n, std::vector<int>(n));
    bool symmetric_part = false;
    while (!symmetric_part) {
        for (auto& row : a)
            for (int& v : row) v = m(rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) symmetric_part = symmetric_part || a[i][j] + a[j][i] != 0;
    }
    VectorFieldAnsatz v;
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms{Expr(s(rng))};
        for (int j = 0; j < n; ++j) terms.push_back(Expr(a[i][j]) * Expr::coord(j + 1));
        v.xi.push_back(simplify(Expr::add(terms)));
    }
    v.eta = Expr(s(rng));
    v.phi = simplify(Expr(s(rng)) * Expr::dep());
    return v;
}

GeneratorReport verify_generator(const std::string& name, const VectorFieldAnsatz& v, const PDEInstance& pde,
                                 const std::vector<JetPoint>& points, double tol) {
    ResidualEvaluator ev(v, pde);
    GeneratorReport rep;
    rep.name = name;
    double total = 0;
    for (const auto& jp : points) {
        double r = ev.at(jp).relative;
        rep.max_residual = std::max(rep.max_residual, r);
        total += r;
    }
    rep.points = static_cast<int>(points.size());
    rep.mean_residual = points.empty() ? 0.0 : total / points.size();
    rep.pass = rep.max_residual < tol;
    return rep;
}

VerifyReport verify_catalog(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q, int points,
                            std::uint64_t seed, double tol) {
    auto catalog = build_catalog(m, n, c, r, q);
    PDEInstance pde = PDEInstance::make(ManifoldModel::make(m, n), Expr(r), Expr(q));
    auto pts = sample_jet_points(pde, points, seed);
    VerifyReport rep{m, n, c, r, q, seed, tol, {}, true};
    for (const auto& ga : catalog) {
        rep.generators.push_back(verify_generator(ga.name, ga.generator, pde, pts, tol));
        rep.pass = rep.pass && rep.generators.back().pass;
    }
    return rep;
}

}  // namespace liesym
