#include "liesym/geometry.hpp"

#include "liesym/errors.hpp"
#include "liesym/kernel.hpp"

#include <cctype>

namespace liesym {

std::string manifold_name(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::SphereStereographic: return "sphere";
        case ManifoldKind::HyperbolicPoincare: return "hyperbolic";
        case ManifoldKind::EuclideanFlat: return "flat";
    }
    return "sphere";
}

ManifoldKind parse_manifold(const std::string& text) {
    std::string s;
    for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "sphere") return ManifoldKind::SphereStereographic;
    if (s == "hyperbolic" || s == "ball" || s == "poincare") return ManifoldKind::HyperbolicPoincare;
    if (s == "flat") return ManifoldKind::EuclideanFlat;
    throw ValueError("unknown manifold '" + text + "'");
}

ManifoldModel ManifoldModel::make(ManifoldKind kind, int n) {
    if (n < 2 || n > kMaxDim) throw IndexError("dimension must be in 2.." + std::to_string(kMaxDim));
    return ManifoldModel{kind, n};
}

Expr ManifoldModel::norm_sq() const {
    std::vector<Expr> t;
    for (int i = 1; i <= n; ++i) t.push_back(Expr::pow(Expr::coord(i), Expr(2)));
    return simplify(Expr::add(t));
}

Expr ManifoldModel::rho() const {
    switch (kind) {
        case ManifoldKind::SphereStereographic: return simplify(norm_sq() + Expr(1));
        case ManifoldKind::HyperbolicPoincare: return simplify(Expr(1) - norm_sq());
        case ManifoldKind::EuclideanFlat: return Expr(1);
    }
    return Expr(1);
}

Expr ManifoldModel::conformal_factor() const {
    if (kind == ManifoldKind::EuclideanFlat) return Expr(1);
    return simplify(Expr(2) / rho());
}

Expr ManifoldModel::laplacian_coefficient() const {
    if (kind == ManifoldKind::EuclideanFlat) return Expr(1);
    return simplify(Expr::pow(rho(), Expr(2)) / Expr(4));
}

Expr ManifoldModel::drift_coefficient() const {
    Rational k(n - 2, 2);
    switch (kind) {
        case ManifoldKind::SphereStereographic: return simplify(Expr(-k) * rho());
        case ManifoldKind::HyperbolicPoincare: return simplify(Expr(k) * rho());
        case ManifoldKind::EuclideanFlat: return Expr(0);
    }
    return Expr(0);
}

bool ManifoldModel::in_domain(const std::vector<double>& x) const {
    if (kind != ManifoldKind::HyperbolicPoincare) return true;
    double s = 0;
    for (double v : x) s += v * v;
    return s < 1.0;
}

namespace {

void check_index(const ManifoldModel& m, int i) {
    if (i < 1 || i > m.n) throw IndexError("index " + std::to_string(i) + " out of range 1.." + std::to_string(m.n));
}

Expr delta(int i, int j) { return Expr(i == j ? 1 : 0); }

}  // namespace

Expr metric(const ManifoldModel& m, int i, int j) {
    check_index(m, i);
    check_index(m, j);
    if (i != j) return Expr(0);
    return simplify(Expr::pow(m.conformal_factor(), Expr(2)));
}

Expr inverse_metric(const ManifoldModel& m, int i, int j) {
    check_index(m, i);
    check_index(m, j);
    if (i != j) return Expr(0);
    return simplify(Expr::pow(m.conformal_factor(), Expr(-2)));
}

Expr christoffel(const ManifoldModel& m, int k, int i, int j) {
    check_index(m, k);
    check_index(m, i);
    check_index(m, j);
    if (m.kind == ManifoldKind::EuclideanFlat) return Expr(0);
    Expr xi = Expr::coord(i), xj = Expr::coord(j), xk = Expr::coord(k);
    Expr bracket = -xi * delta(j, k) - xj * delta(i, k) + xk * delta(i, j);
    Expr s = m.kind == ManifoldKind::SphereStereographic ? Expr(2) : Expr(-2);
    return simplify(s / m.rho() * bracket);
}

Expr christoffel_from_metric(const ManifoldModel& m, int k, int i, int j) {
    check_index(m, k);
    check_index(m, i);
    check_index(m, j);
    std::vector<Expr> terms;
    for (int l = 1; l <= m.n; ++l) {
        Expr gkl = inverse_metric(m, k, l);
        if (gkl.is_zero_const()) continue;
        Expr inner = partial(metric(m, j, l), Expr::coord(i)) + partial(metric(m, i, l), Expr::coord(j)) -
                     partial(metric(m, i, j), Expr::coord(l));
        terms.push_back(Expr(Rational(1, 2)) * gkl * inner);
    }
    return simplify(Expr::add(terms));
}

namespace {

void reject_jets(const Expr& f) {
    if (has_jets(f)) throw ValueError("laplace_beltrami: argument contains jet variables");
}

}  // namespace

Expr laplace_beltrami(const ManifoldModel& m, const Expr& f) {
    reject_jets(f);
    std::vector<Expr> lap, drift;
    for (int i = 1; i <= m.n; ++i) {
        Expr xi = Expr::coord(i);
        Expr fi = partial(f, xi);
        lap.push_back(partial(fi, xi));
        drift.push_back(xi * fi);
    }
    return simplify(m.laplacian_coefficient() * Expr::add(lap) + m.drift_coefficient() * Expr::add(drift));
}

Expr laplace_beltrami_components(const ManifoldModel& m, const Expr& f) {
    reject_jets(f);
    std::vector<Expr> grad;
    for (int k = 1; k <= m.n; ++k) grad.push_back(partial(f, Expr::coord(k)));
    std::vector<Expr> terms;
    for (int i = 1; i <= m.n; ++i)
        for (int j = 1; j <= m.n; ++j) {
            Expr gij = inverse_metric(m, i, j);
            if (gij.is_zero_const()) continue;
            std::vector<Expr> inner{partial(grad[i - 1], Expr::coord(j))};
            for (int k = 1; k <= m.n; ++k) inner.push_back(-christoffel(m, k, i, j) * grad[k - 1]);
            terms.push_back(gij * Expr::add(inner));
        }
    return simplify(Expr::add(terms));
}

Expr laplace_beltrami_jets(const ManifoldModel& m) {
    std::vector<Expr> lap, drift;
    for (int i = 1; i <= m.n; ++i) {
        lap.push_back(Expr::jet(JetIndex::make({i, i})));
        drift.push_back(Expr::coord(i) * Expr::jet(JetIndex::make({i})));
    }
    return simplify(m.laplacian_coefficient() * Expr::add(lap) + m.drift_coefficient() * Expr::add(drift));
}

ChartMaps chart_maps(const ManifoldModel& m) {
    if (m.kind != ManifoldKind::SphereStereographic) throw ValueError("chart maps exist only for the sphere model");
    ChartMaps c;
    Expr s = m.norm_sq();
    for (int i = 1; i <= m.n; ++i) c.forward.push_back(simplify(Expr(2) * Expr::coord(i) / (s + Expr(1))));
    c.forward.push_back(simplify((s - Expr(1)) / (s + Expr(1))));
    Expr z = Expr::param("z");
    for (int i = 1; i <= m.n; ++i) {
        Expr y = Expr::param("y" + std::to_string(i));
        c.inverse_vars.push_back(y);
        c.inverse.push_back(simplify(y / (Expr(1) - z)));
    }
    c.inverse_vars.push_back(z);
    return c;
}

}  // namespace liesym
