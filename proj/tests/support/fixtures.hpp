#pragma once

// Hand-encoded determining-system fixtures for the sphere and ball, as printed
// and in corrected form, built as parser input for a given n.

#include "liesym/geometry.hpp"
#include "liesym/kernel.hpp"

#include <string>
#include <vector>

namespace liesym::testing {

struct Fixture {
    std::string label;
    std::string text;
    Expr eq;
};

class FixtureText {
public:
    FixtureText(ManifoldKind kind, int n) : kind_(kind), n_(n) {}

    bool sphere() const { return kind_ == ManifoldKind::SphereStereographic; }
    std::string n() const { return std::to_string(n_); }
    std::string x(int i) const { return "x" + std::to_string(i); }
    std::string xi(int k) const { return "xi" + std::to_string(k); }

    std::string rho() const {
        std::string s;
        for (int i = 1; i <= n_; ++i) s += (i > 1 ? " + " : "") + x(i) + "^2";
        return sphere() ? "(" + s + " + 1)" : "(1 - (" + s + "))";
    }
    std::string xdot_xi() const {
        std::string s;
        for (int i = 1; i <= n_; ++i) s += (i > 1 ? " + " : "") + x(i) + "*" + xi(i);
        return "(" + s + ")";
    }
    // Flat Laplacian of a named function: f_11 + ... + f_nn.
    std::string lap(const std::string& f) const {
        std::string s;
        for (int i = 1; i <= n_; ++i) s += (i > 1 ? " + " : "") + f + "_" + std::to_string(i) + std::to_string(i);
        return "(" + s + ")";
    }
    std::string xgrad(const std::string& f) const {
        std::string s;
        for (int i = 1; i <= n_; ++i) s += (i > 1 ? " + " : "") + x(i) + "*" + f + "_" + std::to_string(i);
        return "(" + s + ")";
    }
    std::string laplace_beltrami(const std::string& f) const {
        std::string drift = "(" + n() + " - 2)*" + rho() + "/2*" + xgrad(f);
        return "(" + rho() + "^2/4*" + lap(f) + (sphere() ? " - " : " + ") + drift + ")";
    }

private:
    ManifoldKind kind_;
    int n_;
};

inline Fixture make_fixture(const std::string& label, const std::string& text, int n) {
    return Fixture{label, text, parse(text, n)};
}

// The like-terms conditions printed before the reduction to phi = alpha u.
inline std::vector<Fixture> printed_like_terms(ManifoldKind kind, int n) {
    FixtureText f(kind, n);
    std::vector<Fixture> out;
    const std::string s = f.sphere() ? "" : "-";
    out.push_back(make_fixture("1: eta_u = 0", "eta_u", n));
    for (int k = 1; k <= n; ++k)
        out.push_back(make_fixture("1: eta_" + std::to_string(k) + " = 0", "eta_" + std::to_string(k), n));
    for (int k = 1; k <= n; ++k)
        out.push_back(make_fixture("2: xi" + std::to_string(k) + "_u = 0", f.xi(k) + "_u", n));
    out.push_back(make_fixture("3: phi_uu = 0", "phi_uu", n));
    for (int i = 1; i <= n; ++i) {
        std::string t = "r*u^(-1)*phi - eta_t " + std::string(f.sphere() ? "-" : "+") + " 4*" + f.xdot_xi() + "/" +
                        f.rho() + " + 2*" + f.xi(i) + "_" + std::to_string(i);
        out.push_back(make_fixture("4: trace, i = " + std::to_string(i), t, n));
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::string t = f.xi(i) + "_" + std::to_string(j) + " + " + f.xi(j) + "_" + std::to_string(i);
            out.push_back(make_fixture("5: antisymmetry, i = " + std::to_string(i) + ", j = " + std::to_string(j), t, n));
        }
    for (int k = 1; k <= n; ++k) {
        std::string ks = std::to_string(k), xk = f.x(k), xik = f.xi(k);
        std::string dxi;
        for (int i = 1; i <= n; ++i) dxi += (i > 1 ? " + " : "") + xik + "_" + std::to_string(i) + "*" + f.x(i);
        std::string t = s + "2/" + f.rho() + "*u^r*" + xik + "_t " + (f.sphere() ? "+" : "-") + " " + f.rho() +
                        "/2*(2*phi_" + ks + "u - " + f.lap(xik) + ") - r*u^(-1)*phi*" + xk + " + (eta_t + (1 - " +
                        f.n() + ")*phi_u)*" + xk + " + (2 - " + f.n() + ")*(" + s + "2*" + f.xdot_xi() + "/" +
                        f.rho() + "*" + xk + " + " + xik + " - (" + dxi + "))";
        out.push_back(make_fixture("6: u_k coefficient, k = " + ks, t, n));
    }
    std::string t = "(r - q)*u^(q - 1)*phi + u^r*phi_t + (phi_u - eta_t)*u^q - " + f.rho() + "^2/4*" + f.lap("phi") +
                    (f.sphere() ? " - " : " + ") + "(2 - " + f.n() + ")*" + f.rho() + "/2*" + f.xgrad("phi");
    out.push_back(make_fixture("7: jet-free terms", t, n));
    return out;
}

// The reduced system in alpha as printed.
inline std::vector<Fixture> printed_reduced_system(ManifoldKind kind, int n) {
    FixtureText f(kind, n);
    std::vector<Fixture> out;
    out.push_back(make_fixture("1: eta = eta(t), eta_u = 0", "eta_u", n));
    for (int k = 1; k <= n; ++k)
        out.push_back(make_fixture("1: eta = eta(t), eta_" + std::to_string(k) + " = 0", "eta_" + std::to_string(k), n));
    for (int k = 1; k <= n; ++k)
        out.push_back(make_fixture("1: xi" + std::to_string(k) + " = xi" + std::to_string(k) + "(x,t)", f.xi(k) + "_u", n));
    out.push_back(make_fixture("1: phi = alpha u, phi_uu = 0", "phi_uu", n));
    for (int i = 1; i <= n; ++i) {
        std::string t = "2*" + f.xi(i) + "_" + std::to_string(i) + " - (-r*alpha + eta_t " +
                        (f.sphere() ? "+" : "-") + " 4*" + f.xdot_xi() + "/" + f.rho() + ")";
        out.push_back(make_fixture("2: trace, i = " + std::to_string(i), t, n));
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::string t = f.xi(i) + "_" + std::to_string(j) + " + " + f.xi(j) + "_" + std::to_string(i);
            out.push_back(make_fixture("3: antisymmetry, i = " + std::to_string(i) + ", j = " + std::to_string(j), t, n));
        }
    out.push_back(make_fixture("4: u-power equation",
                               "((r + 1 - q)*alpha - eta_t)*u^q + alpha_t*u^(r + 1) - u*" + f.laplace_beltrami("alpha"),
                               n));
    for (int k = 1; k <= n; ++k) {
        std::string ks = std::to_string(k), xk = f.x(k), xik = f.xi(k);
        std::string t = "u^r*" + xik + "_t - " + f.laplace_beltrami(xik) + " + " + f.rho() + "^2/2*alpha_" + ks +
                        (f.sphere() ? " + " : " - ") + f.rho() + "/2*(eta_t + (1 - " + f.n() + " - r)*alpha)*" + xk +
                        " + (2 - " + f.n() + ")*(" + f.xdot_xi() + "*" + xk + (f.sphere() ? " + " : " - ") +
                        f.rho() + "/2*" + xik + ")";
        out.push_back(make_fixture("5: xi equation, k = " + ks, t, n));
    }
    return out;
}

// Forms of the two u_k-coefficient conditions that the prolongation produces.
// They differ from the printed ones in the x^k term.
inline std::vector<Fixture> corrected_conditions(ManifoldKind kind, int n) {
    FixtureText f(kind, n);
    std::vector<Fixture> out;
    const std::string s = f.sphere() ? "" : "-";
    for (int k = 1; k <= n; ++k) {
        std::string ks = std::to_string(k), xk = f.x(k), xik = f.xi(k);
        std::string dxi;
        for (int i = 1; i <= n; ++i) dxi += (i > 1 ? " + " : "") + xik + "_" + std::to_string(i) + "*" + f.x(i);
        std::string t = s + "2/" + f.rho() + "*u^r*" + xik + "_t " + (f.sphere() ? "+" : "-") + " " + f.rho() +
                        "/2*(2*phi_" + ks + "u - " + f.lap(xik) + ") + (2 - " + f.n() + ")*(eta_t - r*u^(-1)*phi)*" +
                        xk + " + (2 - " + f.n() + ")*(" + s + "2*" + f.xdot_xi() + "/" + f.rho() + "*" + xk + " + " +
                        xik + " - (" + dxi + "))";
        out.push_back(make_fixture("like-terms 6 corrected, k = " + ks, t, n));
    }
    for (int k = 1; k <= n; ++k) {
        std::string ks = std::to_string(k), xk = f.x(k), xik = f.xi(k);
        std::string t = "u^r*" + xik + "_t - " + f.laplace_beltrami(xik) + " + " + f.rho() + "^2/2*alpha_" + ks +
                        (f.sphere() ? " - " : " + ") + "(2 - " + f.n() + ")*" + f.rho() + "/2*(r*alpha - eta_t)*" +
                        xk + " + (2 - " + f.n() + ")*(" + f.xdot_xi() + "*" + xk + (f.sphere() ? " + " : " - ") +
                        f.rho() + "/2*" + xik + ")";
        out.push_back(make_fixture("reduced 5 corrected, k = " + ks, t, n));
    }
    return out;
}

}  // namespace liesym::testing
