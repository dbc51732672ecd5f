#include "liesym/catalog.hpp"

#include "liesym/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace liesym {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<Rational>>& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = to_double(a[i][j]);
    return m;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
    Matrix out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

GroupAction scalar_action(std::string name, ManifoldKind m, int n, CaseAssumption c, const Expr& eta, const Expr& phi,
                          const Expr& t_flow, const Expr& u_flow) {
    GroupAction ga;
    ga.name = std::move(name);
    ga.assumption = c;
    ga.manifold = m;
    ga.n = n;
    for (int i = 1; i <= n; ++i) {
        ga.generator.xi.push_back(Expr());
        ga.flow.push_back(Expr::coord(i));
    }
    ga.generator.eta = simplify(eta);
    ga.generator.phi = simplify(phi);
    ga.flow.push_back(simplify(t_flow));
    ga.flow.push_back(simplify(u_flow));
    return ga;
}

EvalEnv env_at(double eps, const std::vector<double>& x, double t, double u) {
    EvalEnv env;
    env.x = x;
    env.t = t;
    env.u = u;
    env.params["eps"] = eps;
    return env;
}

std::vector<Expr> flow_at(const GroupAction& ga, const Expr& eps) {
    std::vector<Expr> out;
    for (const auto& c : ga.flow) out.push_back(substitute(c, {{eps_symbol(), eps}}));
    return out;
}

}  // namespace

Expr eps_symbol() { return Expr::param("eps"); }

bool GroupAction::in_domain(double eps, const std::vector<double>& x, double t, double u) const {
    if (!domain) return true;
    return evaluate(*domain, env_at(eps, x, t, u)) > 0;
}

std::vector<double> GroupAction::apply(double eps, const std::vector<double>& x, double t, double u) const {
    if (static_cast<int>(x.size()) != n) throw ValueError("point has the wrong dimension");
    if (!in_domain(eps, x, t, u))
        throw DomainError(name + ": eps = " + std::to_string(eps) + " is outside the flow domain " + domain->str() + " > 0");
    std::vector<double> out;
    if (is_rotation()) {
        Matrix A = rotation_exponential(rotation, eps);
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += A[i][j] * x[j];
            out.push_back(s);
        }
        out.push_back(t);
        out.push_back(u);
        return out;
    }
    EvalEnv env = env_at(eps, x, t, u);
    for (const auto& c : flow) out.push_back(evaluate(c, env));
    return out;
}

CaseAssumption classify_case(const Rational& r, const Rational& q) {
    Rational r1 = r + 1;
    if (q == r1 && q == 1) return CaseAssumption::QeqRplus1eq1;
    if (q == r1) return CaseAssumption::QeqRplus1;
    if (q == 1) return CaseAssumption::Qeq1;
    if (r1 == 1) return CaseAssumption::Req0;
    return CaseAssumption::Generic;
}

void check_case(CaseAssumption c, const Rational& r, const Rational& q) {
    if ((c == CaseAssumption::QeqRplus1 || c == CaseAssumption::Qeq1) && r == 0)
        throw ValueError("r = 0 is excluded in case " + case_name(c) + " (its flow divides by r)");
    CaseAssumption actual = classify_case(r, q);
    if (actual != c)
        throw ValueError("(r, q) = (" + to_string(r) + ", " + to_string(q) + ") belongs to case " + case_name(actual) +
                         ", not " + case_name(c));
}

GroupAction time_translation(ManifoldKind m, int n, CaseAssumption c) {
    Expr eps = eps_symbol();
    return scalar_action("time_translation", m, n, c, Expr(1), Expr(), Expr::time() + eps, Expr::dep());
}

GroupAction rotation_action(ManifoldKind m, int n, CaseAssumption c, const std::vector<std::vector<Rational>>& a) {
    if (static_cast<int>(a.size()) != n) throw ValueError("rotation generator must be n x n");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw ValueError("rotation generator must be n x n");
        for (int j = 0; j < n; ++j)
            if (a[i][j] != -a[j][i]) throw ValueError("rotation generator must be antisymmetric");
    }
    GroupAction ga;
    ga.name = "rotation";
    ga.assumption = c;
    ga.manifold = m;
    ga.n = n;
    ga.rotation = a;
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (int j = 0; j < n; ++j) terms.push_back(Expr(a[i][j]) * Expr::coord(j + 1));
        ga.generator.xi.push_back(simplify(Expr::add(terms)));
    }
    return ga;
}

std::vector<GroupAction> build_catalog(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q) {
    ManifoldModel::make(m, n);
    check_case(c, r, q);
    std::vector<GroupAction> out;
    Expr t = Expr::time(), u = Expr::dep(), eps = eps_symbol(), R(r);
    switch (c) {
        case CaseAssumption::QeqRplus1: {
            Expr d = exp(-R * t) - R * eps;
            auto g = scalar_action("exponential_time", m, n, c, exp(R * t), exp(R * t) * u, -ln(d) / R,
                                   u * pow(d, Expr(-1) / R) * exp(-t));
            g.domain = simplify(d);
            out.push_back(g);
            break;
        }
        case CaseAssumption::Qeq1:
            out.push_back(scalar_action("scaling", m, n, c, t, u / R, exp(eps) * t, exp(eps / R) * u));
            break;
        case CaseAssumption::QeqRplus1eq1:
            out.push_back(scalar_action("u_scaling", m, n, c, Expr(), u, t, exp(eps) * u));
            break;
        default: break;
    }
    out.push_back(time_translation(m, n, c));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
            a[i][j] = 1;
            a[j][i] = -1;
            auto g = rotation_action(m, n, c, a);
            g.name = "rotation_" + std::to_string(i + 1) + std::to_string(j + 1);
            out.push_back(g);
        }
    return out;
}

Matrix rotation_exponential(const std::vector<std::vector<Rational>>& a, double eps) {
    Eigen::MatrixXd m = to_eigen(a) * eps;
    return from_eigen(m.exp());
}

ExponentiationReport exponentiate_check(const GroupAction& ga, int samples, std::uint64_t seed, double tol) {
    ExponentiationReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    const int n = ga.n;

    if (ga.is_rotation()) {
        Eigen::MatrixXd a = to_eigen(ga.rotation);
        rep.identity_at_zero = (to_eigen(ga.rotation) * 0.0).exp().isIdentity(0.0);
        const double h = 1e-5;
        Eigen::MatrixXd fd = ((a * h).exp() - (a * -h).exp()) / (2 * h);
        rep.generator_error = (fd - a).cwiseAbs().maxCoeff();
        rep.generator_matches = rep.generator_error <= 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff());
        for (int k = 0; k < samples; ++k) {
            double e1 = 2 * U(rng), e2 = 2 * U(rng);
            Eigen::MatrixXd A1 = (a * e1).exp(), A2 = (a * e2).exp(), A12 = (a * (e1 + e2)).exp();
            Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            rep.orthogonality_error = std::max(rep.orthogonality_error, (A1.transpose() * A1 - I).cwiseAbs().maxCoeff());
            rep.determinant_error = std::max(rep.determinant_error, std::abs(A1.determinant() - 1));
            rep.group_law_error = std::max(rep.group_law_error, (A1 * A2 - A12).cwiseAbs().maxCoeff());
            ++rep.samples;
        }
        rep.pass = rep.identity_at_zero && rep.generator_matches && rep.group_law_error <= tol &&
                   rep.orthogonality_error <= 1e-12 && rep.determinant_error <= 1e-12;
        return rep;
    }

    std::vector<Expr> ident;
    for (int i = 1; i <= n; ++i) ident.push_back(Expr::coord(i));
    ident.push_back(Expr::time());
    ident.push_back(Expr::dep());
    std::vector<Expr> gen = ga.generator.xi;
    gen.push_back(ga.generator.eta);
    gen.push_back(ga.generator.phi);

    auto at0 = flow_at(ga, Expr());
    rep.identity_at_zero = true;
    rep.generator_matches = true;
    for (std::size_t c = 0; c < ga.flow.size(); ++c) {
        if (!is_zero(at0[c] - ident[c])) rep.identity_at_zero = false;
        Expr d = substitute(partial(ga.flow[c], eps_symbol()), {{eps_symbol(), Expr()}});
        if (!is_zero(d - gen[c])) rep.generator_matches = false;
    }

    Expr e1 = Expr::param("eps1"), e2 = Expr::param("eps2");
    auto f1 = flow_at(ga, e1), f2 = flow_at(ga, e2), f12 = flow_at(ga, e1 + e2);
    std::vector<std::pair<Expr, Expr>> into;
    for (std::size_t c = 0; c < ident.size(); ++c) into.emplace_back(ident[c], f2[c]);
    rep.group_law_symbolic = true;
    for (std::size_t c = 0; c < ga.flow.size(); ++c)
        if (!is_zero(substitute(f1[c], into) - f12[c])) rep.group_law_symbolic = false;

    int tries = 0;
    while (rep.samples < samples && tries < 100 * samples) {
        ++tries;
        std::vector<double> x(n);
        for (auto& v : x) v = 0.6 * U(rng) / std::sqrt(static_cast<double>(n));
        double t = (U(rng) + 1) / 2, u = 0.5 + 0.75 * (U(rng) + 1);
        double a = U(rng) / 2, b = U(rng) / 2;
        if (!ga.in_domain(b, x, t, u) || !ga.in_domain(a + b, x, t, u)) continue;
        auto p2 = ga.apply(b, x, t, u);
        std::vector<double> x2(p2.begin(), p2.begin() + n);
        if (!ga.in_domain(a, x2, p2[n], p2[n + 1])) continue;
        auto lhs = ga.apply(a, x2, p2[n], p2[n + 1]);
        auto rhs = ga.apply(a + b, x, t, u);
        for (std::size_t c = 0; c < lhs.size(); ++c)
            rep.group_law_error = std::max(rep.group_law_error, std::abs(lhs[c] - rhs[c]) / std::max(1.0, std::abs(rhs[c])));
        ++rep.samples;
    }
    rep.pass = rep.identity_at_zero && rep.generator_matches && rep.samples == samples && rep.group_law_error <= tol;
    return rep;
}

SemilinearExponents reduce_to_semilinear(const Rational& m, const Rational& p) {
    if (m == 0) throw ValueError("m must be nonzero");
    SemilinearExponents s;
    s.r = (Rational(1) - m) / m;
    s.q = p / m;
    s.assumption = classify_case(s.r, s.q);
    return s;
}

std::pair<Rational, Rational> semilinear_inverse(const Rational& r, const Rational& q) {
    if (r == -1) throw ValueError("r = -1 has no preimage");
    Rational m = Rational(1) / (r + 1);
    return {m, q * m};
}

std::vector<SamplePoint> act_on_function(const GroupAction& ga, double eps, const std::vector<SamplePoint>& samples) {
    std::vector<SamplePoint> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        auto v = ga.apply(eps, s.x, s.t, s.u);
        out.push_back(SamplePoint{std::vector<double>(v.begin(), v.begin() + ga.n), v[ga.n], v[ga.n + 1]});
    }
    return out;
}

}  // namespace liesym
