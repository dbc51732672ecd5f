#include "liesym/torsion.hpp"

#include "liesym/errors.hpp"
#include "liesym/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace liesym {

TorsionSystem TorsionSystem::make(int n, int sign, TorsionDenominator d) {
    if (n < 2 || n > kMaxDim) throw ValueError("dimension must be in 2.." + std::to_string(kMaxDim));
    if (sign != 1 && sign != -1) throw ValueError("sign must be +1 or -1");
    return TorsionSystem{n, sign, d};
}

TorsionSystem TorsionSystem::parse_variant(const std::string& text, int n) {
    if (text == "sphere+") return make(n, 1, TorsionDenominator::OnePlusNormSq);
    if (text == "sphere-") return make(n, -1, TorsionDenominator::OnePlusNormSq);
    if (text == "ball" || text == "ball-") return make(n, -1, TorsionDenominator::OneMinusNormSq);
    if (text == "ball+") return make(n, 1, TorsionDenominator::OneMinusNormSq);
    throw ValueError("unknown torsion variant '" + text + "' (expected sphere+, sphere-, ball, ball+)");
}

std::vector<TorsionSystem> TorsionSystem::all_variants(int n) {
    return {make(n, 1, TorsionDenominator::OnePlusNormSq), make(n, -1, TorsionDenominator::OnePlusNormSq),
            make(n, -1, TorsionDenominator::OneMinusNormSq), make(n, 1, TorsionDenominator::OneMinusNormSq)};
}

std::string TorsionSystem::variant_name() const {
    std::string base = denom == TorsionDenominator::OnePlusNormSq ? "sphere" : "ball";
    return base + (sign > 0 ? "+" : "-");
}

Expr TorsionSystem::denominator() const {
    std::vector<Expr> sq;
    for (int i = 1; i <= n; ++i) sq.push_back(pow(Expr::coord(i), Expr(2)));
    Expr s = Expr::add(sq);
    return simplify(denom == TorsionDenominator::OnePlusNormSq ? s + Expr(1) : Expr(1) - s);
}

std::vector<Expr> torsion_residual(const TorsionSystem& ts, const std::vector<Expr>& xi, const Expr& lam) {
    if (static_cast<int>(xi.size()) != ts.n) throw ValueError("xi must have n components");
    for (const auto& c : xi)
        if (mentions_kind(c, Kind::Time) || mentions_kind(c, Kind::Dep) || has_jets(c))
            throw ValueError("xi must depend on x only: " + c.str());
    std::vector<Expr> dot;
    for (int k = 1; k <= ts.n; ++k) dot.push_back(Expr::coord(k) * xi[k - 1]);
    Expr drift = Expr(2L * ts.sign) * Expr::add(dot) / ts.denominator();
    std::vector<Expr> out;
    for (int i = 1; i <= ts.n; ++i) out.push_back(simplify(partial(xi[i - 1], Expr::coord(i)) - lam - drift));
    for (int i = 1; i <= ts.n; ++i)
        for (int j = i + 1; j <= ts.n; ++j)
            out.push_back(simplify(partial(xi[i - 1], Expr::coord(j)) + partial(xi[j - 1], Expr::coord(i))));
    return out;
}

std::vector<Expr> TorsionSolution::components() const {
    std::vector<Expr> out;
    for (int i = 0; i < n(); ++i) {
        std::vector<Expr> terms{Expr(b[i])};
        for (int j = 0; j < n(); ++j) terms.push_back(Expr(a[i][j]) * Expr::coord(j + 1));
        out.push_back(simplify(Expr::add(terms)));
    }
    return out;
}

TorsionSolution family_construct(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b) {
    const std::size_t n = b.size();
    if (a.size() != n) throw ValueError("a must be n x n with n = len(b)");
    for (const auto& row : a)
        if (row.size() != n) throw ValueError("a must be square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a[i][j] != -a[j][i])
                throw ValueError("a is not antisymmetric at (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    return TorsionSolution{a, b, Rational(0)};
}

std::vector<Expr> harmonicity_check(const std::vector<Expr>& xi) {
    const int n = static_cast<int>(xi.size());
    std::vector<Expr> out;
    for (int j = 1; j <= n; ++j) {
        std::vector<Expr> terms;
        for (int i = 1; i <= n; ++i) terms.push_back(partial(partial(xi[j - 1], Expr::coord(i)), Expr::coord(i)));
        Expr djj = partial(partial(xi[j - 1], Expr::coord(j)), Expr::coord(j));
        out.push_back(simplify(Expr::add(terms) + Expr(static_cast<long>(n - 2)) * djj));
    }
    return out;
}

namespace {

template <std::size_t N, class F>
std::array<double, N> rk4_step(const F& f, double r, const std::array<double, N>& y, double h) {
    auto axpy = [](const std::array<double, N>& a, const std::array<double, N>& b, double s) {
        std::array<double, N> o;
        for (std::size_t i = 0; i < N; ++i) o[i] = a[i] + s * b[i];
        return o;
    };
    auto k1 = f(r, y);
    auto k2 = f(r + h / 2, axpy(y, k1, h / 2));
    auto k3 = f(r + h / 2, axpy(y, k2, h / 2));
    auto k4 = f(r + h, axpy(y, k3, h));
    std::array<double, N> o;
    for (std::size_t i = 0; i < N; ++i) o[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return o;
}

void check_finite(double v, double r, const char* what) {
    if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " is not finite at r = " + std::to_string(r));
}

}  // namespace

double RadialSolution::at(double radius) const {
    if (r.empty() || radius < r.front() || radius > r.back() + 1e-12)
        throw ValueError("radius outside the integrated range");
    auto k = static_cast<std::size_t>(std::floor((radius - r.front()) / h));
    if (k + 1 >= r.size()) return phi.back();
    double w = (radius - r[k]) / h;
    return (1 - w) * phi[k] + w * phi[k + 1];
}

RadialSolution radial_reduction(const std::function<double(double)>& lam, double R, double h) {
    if (!(h > 0) || !(R > h)) throw ValueError("need 0 < h < R");
    RadialSolution s;
    s.h = h;
    auto f = [&](double r, const std::array<double, 1>& y) {
        return std::array<double, 1>{lam(r) * r + (r * r - 1) / (r * (r * r + 1)) * y[0]};
    };
    std::array<double, 1> y{lam(0.0) * h * h / 3};
    const auto steps = static_cast<long>(std::llround((R - h) / h));
    s.r.push_back(h);
    s.phi.push_back(y[0]);
    for (long k = 0; k < steps; ++k) {
        double r = h * static_cast<double>(k + 1);
        y = rk4_step<1>(f, r, y, h);
        check_finite(y[0], r + h, "phi");
        s.r.push_back(h * static_cast<double>(k + 2));
        s.phi.push_back(y[0]);
    }
    return s;
}

double radial_closed_form_constant(double lam0, double r) { return lam0 * (r * r + 1) / r * (r - std::atan(r)); }

double lambda_closed_form(double lam0, double r) { return lam0 * (r * r + 3) / (r * r + 1); }

double consistency_residual(double r, double x_i, double lam_r, double integral_r) {
    return (1 - r * r - x_i * r - 3 * x_i / r) * integral_r / (r * r * r) - (r - x_i) / r * lam_r;
}

LambdaOdeReport lambda_ode_check(double lam0, double tol) {
    LambdaOdeReport rep;
    rep.lam0 = lam0;
    const double h = 1e-3;
    // State (lam, I) with I' = r^2 lam / (r^2 + 1); the closed form fixes lam(0) = 3 lam0.
    auto f = [](double r, const std::array<double, 2>& y) {
        return std::array<double, 2>{-4 * r / ((r * r + 1) * (r * r + 3)) * y[0], r * r / (r * r + 1) * y[0]};
    };
    std::array<double, 2> y{3 * lam0, 0.0};
    const int steps_per_node = 250;
    for (int node = 1; node <= 20; ++node) {
        for (int k = 0; k < steps_per_node; ++k) {
            double r = h * ((node - 1) * steps_per_node + k);
            y = rk4_step<2>(f, r, y, h);
            double rn = r + h;
            check_finite(y[0], rn, "lambda");
            rep.max_deviation = std::max(rep.max_deviation, std::abs(y[0] - lambda_closed_form(lam0, rn)));
        }
        double r = 0.25 * node;
        for (int j = 0; j < 20; ++j) {
            double xi = r * (-1 + (2.0 * j + 1) / 20);
            rep.max_residual = std::max(rep.max_residual, std::abs(consistency_residual(r, xi, y[0], y[1])));
            ++rep.grid_points;
        }
        if (node == 4) rep.probe_residual = consistency_residual(1.0, 1 / std::sqrt(2.0), y[0], y[1]);
    }
    rep.residual_vanishes = rep.max_residual <= tol;
    return rep;
}

namespace {

void monomials(int n, int degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    int used = 0;
    for (int e : cur) used += e;
    for (int e = 0; e + used <= degree; ++e) {
        cur.push_back(e);
        monomials(n, degree, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<FalsificationCase> falsify_random(const TorsionSystem& ts, int count, std::uint64_t seed, int degree) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::vector<std::vector<int>> monos;
    std::vector<int> cur;
    monomials(ts.n, degree, cur, monos);
    std::vector<FalsificationCase> out;
    while (static_cast<int>(out.size()) < count) {
        std::vector<std::vector<int>> c(ts.n, std::vector<int>(monos.size()));
        for (auto& row : c)
            for (auto& v : row) v = rng() % 2 ? coef(rng) : 0;
        // Skip members of the family: degree <= 1 with antisymmetric linear part.
        bool family = true;
        for (int i = 0; i < ts.n && family; ++i)
            for (std::size_t m = 0; m < monos.size() && family; ++m) {
                int deg = 0;
                for (int e : monos[m]) deg += e;
                if (deg > 1 && c[i][m] != 0) family = false;
                if (deg != 1) continue;
                int j = static_cast<int>(std::find(monos[m].begin(), monos[m].end(), 1) - monos[m].begin());
                auto mirror = std::find_if(monos.begin(), monos.end(), [&](const std::vector<int>& e) {
                    int d = 0;
                    for (int x : e) d += x;
                    return d == 1 && e[i] == 1;
                });
                if (c[i][m] != -c[j][static_cast<std::size_t>(mirror - monos.begin())]) family = false;
            }
        if (family) continue;
        FalsificationCase fc;
        for (int i = 0; i < ts.n; ++i) {
            std::vector<Expr> terms;
            for (std::size_t m = 0; m < monos.size(); ++m) {
                if (c[i][m] == 0) continue;
                std::vector<Expr> f{Expr(static_cast<long>(c[i][m]))};
                for (int k = 0; k < ts.n; ++k)
                    if (monos[m][k] > 0) f.push_back(pow(Expr::coord(k + 1), Expr(static_cast<long>(monos[m][k]))));
                terms.push_back(Expr::mul(f));
            }
            fc.xi.push_back(simplify(Expr::add(terms)));
        }
        std::vector<Expr> dot;
        for (int k = 1; k <= ts.n; ++k) dot.push_back(Expr::coord(k) * fc.xi[k - 1]);
        fc.lam = simplify(partial(fc.xi[0], Expr::coord(1)) -
                          Expr(2L * ts.sign) * Expr::add(dot) / ts.denominator());
        fc.residuals = torsion_residual(ts, fc.xi, fc.lam);
        fc.refuted = std::any_of(fc.residuals.begin(), fc.residuals.end(), [](const Expr& e) { return !e.is_zero_const(); });
        out.push_back(std::move(fc));
    }
    return out;
}

}  // namespace liesym
