#include "liesym/liesym.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInternal = 3 };

struct UsageError {
    std::string flag, message;
};

struct Global {
    std::uint64_t seed = 1;
    double tol = 1e-8;
    std::string out;
    bool json_only = false;
};

struct Options {
    std::string manifold, kase = "generic", r, q, variant = "sphere+", lam0 = "0", eta = "0", phi = "0", m, p;
    int n = 2, points = 1000, random = 20;
    std::vector<std::string> xi;
};

void check(liesym_status s, const std::string& flag) {
    if (s != LIESYM_OK) throw UsageError{flag, liesym_last_error()};
}

struct Document {
    std::string json;
    bool pass = true;
};

Document take(liesym_status s, char*& json, int pass = 1) {
    if (s != LIESYM_OK) {
        std::string msg = std::string(liesym_status_name(s)) + ": " + liesym_last_error();
        throw std::runtime_error(msg);
    }
    Document d{json, pass != 0};
    liesym_string_free(json);
    json = nullptr;
    return d;
}

void print_table(const std::string& command, const nlohmann::ordered_json& j) {
    auto verdict = [](bool b) { return b ? "pass" : "FAIL"; };
    if (command == "determine") {
        std::printf("%s n=%d case=%s: %zu equations\n", j["manifold"].get<std::string>().c_str(), j["n"].get<int>(),
                    j["case"].get<std::string>().c_str(), j["equations"].size());
        for (const auto& e : j["equations"]) std::printf("  %s = 0\n", e.get<std::string>().c_str());
    } else if (command == "catalog") {
        for (const auto& g : j["generators"]) {
            std::printf("%-18s xi = (", g["name"].get<std::string>().c_str());
            bool first = true;
            for (const auto& x : g["generator"]["xi"]) {
                std::printf("%s%s", first ? "" : ", ", x.get<std::string>().c_str());
                first = false;
            }
            std::printf("), eta = %s, phi = %s\n", g["generator"]["eta"].get<std::string>().c_str(),
                        g["generator"]["phi"].get<std::string>().c_str());
        }
    } else if (command == "verify") {
        std::printf("%-18s %-12s %-12s %s\n", "generator", "max", "mean", "result");
        for (const auto& g : j["generators"])
            std::printf("%-18s %-12.3e %-12.3e %s\n", g["name"].get<std::string>().c_str(), g["max_residual"].get<double>(),
                        g["mean_residual"].get<double>(), verdict(g["pass"].get<bool>()));
    } else if (command == "torsion-check") {
        std::printf("family:        %d nonzero residuals over %d samples  %s\n", j["family"]["nonzero_residuals"].get<int>(),
                    j["family"]["samples"].get<int>(), verdict(j["family"]["pass"].get<bool>()));
        std::printf("ode:           deviation %.3e, consistency residual %.3e  %s\n",
                    j["ode"]["max_deviation"].get<double>(), j["ode"]["max_consistency_residual"].get<double>(),
                    verdict(j["ode"]["pass"].get<bool>()));
        std::printf("falsification: %d of %d refuted  %s\n", j["falsification"]["refuted"].get<int>(),
                    j["falsification"]["count"].get<int>(), verdict(j["falsification"]["pass"].get<bool>()));
    } else if (command == "prolong") {
        std::printf("criterion: %s\n", j["criterion"].get<std::string>().c_str());
        std::printf("symmetry:  %s\n", j["symmetry"].get<bool>() ? "yes" : "no");
    } else if (command == "reduce") {
        std::printf("r = %s, q = %s, case %s\n", j["r"].dump().c_str(), j["q"].dump().c_str(),
                    j["case"].get<std::string>().c_str());
    }
}

Document run(const std::string& command, const Options& o, const Global& g) {
    char* json = nullptr;
    int pass = 1;
    auto model = [&] {
        check(liesym_check_manifold(o.manifold.c_str()), "--manifold");
        check(liesym_check_dimension(o.n), "--n");
        check(liesym_check_case(o.kase.c_str()), "--case");
    };
    auto exponents = [&] {
        check(liesym_check_rational(o.r.c_str()), "--r");
        check(liesym_check_rational(o.q.c_str()), "--q");
        check(liesym_check_case_params(o.kase.c_str(), o.r.c_str(), o.q.c_str()), "--case");
    };
    if (command == "determine") {
        model();
        liesym_status s = liesym_run_determine(o.manifold.c_str(), o.n, o.kase.c_str(), &json);
        return take(s, json);
    }
    if (command == "catalog") {
        model();
        exponents();
        liesym_status s = liesym_run_catalog(o.manifold.c_str(), o.n, o.kase.c_str(), o.r.c_str(), o.q.c_str(), &json);
        return take(s, json);
    }
    if (command == "verify") {
        model();
        exponents();
        if (o.points < 1) throw UsageError{"--points", "must be at least 1"};
        liesym_status s = liesym_run_verify(o.manifold.c_str(), o.n, o.kase.c_str(), o.r.c_str(), o.q.c_str(), o.points,
                                            g.seed, g.tol, &json, &pass);
        return take(s, json, pass);
    }
    if (command == "torsion-check") {
        check(liesym_check_dimension(o.n), "--n");
        check(liesym_check_rational(o.lam0.c_str()), "--lam0");
        if (o.random < 0) throw UsageError{"--random", "must be nonnegative"};
        liesym_status s =
            liesym_run_torsion_check(o.variant.c_str(), o.n, o.lam0.c_str(), o.random, g.seed, g.tol, &json, &pass);
        if (s == LIESYM_E_INVALID) throw UsageError{"--variant", liesym_last_error()};
        return take(s, json, pass);
    }
    if (command == "prolong") {
        check(liesym_check_manifold(o.manifold.c_str()), "--manifold");
        check(liesym_check_dimension(o.n), "--n");
        if (static_cast<int>(o.xi.size()) != o.n)
            throw UsageError{"--xi", "expected " + std::to_string(o.n) + " components, got " + std::to_string(o.xi.size())};
        std::vector<const char*> xi;
        for (const auto& x : o.xi) {
            liesym_expr* e = nullptr;
            check(liesym_expr_parse(x.c_str(), o.n, &e), "--xi");
            liesym_expr_free(e);
            xi.push_back(x.c_str());
        }
        for (auto [flag, text] : {std::pair{"--eta", &o.eta}, std::pair{"--phi", &o.phi}}) {
            liesym_expr* e = nullptr;
            check(liesym_expr_parse(text->c_str(), o.n, &e), flag);
            liesym_expr_free(e);
        }
        if (!o.r.empty()) check(liesym_check_rational(o.r.c_str()), "--r");
        if (!o.q.empty()) check(liesym_check_rational(o.q.c_str()), "--q");
        liesym_status s = liesym_run_prolong(o.manifold.c_str(), o.n, xi.data(), o.eta.c_str(), o.phi.c_str(),
                                       o.r.empty() ? nullptr : o.r.c_str(), o.q.empty() ? nullptr : o.q.c_str(), &json);
        return take(s, json);
    }
    check(liesym_check_rational(o.m.c_str()), "--m");
    check(liesym_check_rational(o.p.c_str()), "--p");
    liesym_status s = liesym_run_reduce(o.m.c_str(), o.p.c_str(), &json);
    if (s == LIESYM_E_INVALID) throw UsageError{"--m", liesym_last_error()};
    return take(s, json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie point symmetries of u_t = u^-r (Laplace-Beltrami u + u^q) on the sphere and the hyperbolic ball"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    Options o;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--tol", g.tol, "numeric pass threshold")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "write the JSON artifact here");
    app.add_flag("--json-only", g.json_only, "print only JSON on standard output");

    auto add_model = [&](CLI::App* c, bool with_case) {
        c->add_option("--manifold", o.manifold, "sphere | hyperbolic | flat")->required();
        c->add_option("--n", o.n, "dimension, 2..6");
        if (with_case) c->add_option("--case", o.kase, "generic | qr1 | q1 | r0 | q1r0");
    };
    auto* determine = app.add_subcommand("determine", "derive the determining system");
    add_model(determine, true);
    auto* catalog = app.add_subcommand("catalog", "list generators and their flows");
    add_model(catalog, true);
    catalog->add_option("--r", o.r)->required();
    catalog->add_option("--q", o.q)->required();
    auto* verify = app.add_subcommand("verify", "check catalog generators at random jet points");
    add_model(verify, true);
    verify->add_option("--r", o.r)->required();
    verify->add_option("--q", o.q)->required();
    verify->add_option("--points", o.points, "number of jet points");
    auto* torsion = app.add_subcommand("torsion-check", "torsion system evidence");
    torsion->add_option("--n", o.n, "dimension, 2..6");
    torsion->add_option("--variant", o.variant, "sphere+ | sphere- | ball | ball+");
    torsion->add_option("--lam0", o.lam0, "lambda at the origin");
    torsion->add_option("--random", o.random, "number of random falsification fields");
    auto* prolong = app.add_subcommand("prolong", "prolong a vector field and apply the symmetry criterion");
    add_model(prolong, false);
    prolong->add_option("--xi", o.xi, "spatial components, one per dimension")->required();
    prolong->add_option("--eta", o.eta, "time component");
    prolong->add_option("--phi", o.phi, "u component");
    prolong->add_option("--r", o.r, "exponent r, symbolic if omitted");
    prolong->add_option("--q", o.q, "exponent q, symbolic if omitted");
    auto* reduce = app.add_subcommand("reduce", "map (m, p) to the semilinear exponents (r, q)");
    reduce->add_option("--m", o.m)->required();
    reduce->add_option("--p", o.p)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    std::string command = app.get_subcommands().front()->get_name();

    std::ofstream file;
    try {
        if (!g.out.empty()) {
            file.open(g.out, std::ios::binary | std::ios::trunc);
            if (!file) throw UsageError{"--out", "cannot write " + g.out};
        }
        Document d = run(command, o, g);
        if (file.is_open()) {
            file << d.json;
            file.close();
            if (!file) throw std::runtime_error("failed writing " + g.out);
        }
        if (g.out.empty() || g.json_only) {
            std::fwrite(d.json.data(), 1, d.json.size(), stdout);
        } else {
            print_table(command, nlohmann::ordered_json::parse(d.json));
        }
        return d.pass ? kPass : kFail;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.flag.c_str(), e.message.c_str());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInternal;
    }
}
