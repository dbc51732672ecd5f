#include "liesym/liesym.h"

#include "liesym/errors.hpp"
#include "liesym/report.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct liesym_expr {
    liesym::Expr e;
    int n;
};

struct liesym_system {
    liesym::DeterminingSystem ds;
};

namespace {

thread_local std::string last_error;

liesym_status fail(liesym_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

struct NullArg {};

template <class... P>
void require(P... ptrs) {
    if (((ptrs == nullptr) || ...)) throw NullArg{};
}

template <class F>
liesym_status guarded(F&& f) {
    try {
        last_error.clear();
        f();
        return LIESYM_OK;
    } catch (const NullArg&) {
        return fail(LIESYM_E_NULL, "null argument");
    } catch (const liesym::ParseError& e) {
        return fail(LIESYM_E_PARSE, e.what());
    } catch (const liesym::IndexError& e) {
        return fail(LIESYM_E_INDEX, e.what());
    } catch (const liesym::DomainError& e) {
        return fail(LIESYM_E_DOMAIN, e.what());
    } catch (const liesym::EvaluationError& e) {
        return fail(LIESYM_E_EVALUATION, e.what());
    } catch (const liesym::Error& e) {
        return fail(LIESYM_E_INVALID, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LIESYM_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(LIESYM_E_INTERNAL, e.what());
    } catch (...) {
        return fail(LIESYM_E_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

liesym::Rational rat(const char* s) { return liesym::rational_from_string(s); }

}  // namespace

extern "C" {

const char* liesym_last_error(void) { return last_error.c_str(); }

const char* liesym_status_name(liesym_status s) {
    switch (s) {
        case LIESYM_OK: return "ok";
        case LIESYM_E_NULL: return "null argument";
        case LIESYM_E_INVALID: return "invalid argument";
        case LIESYM_E_PARSE: return "parse error";
        case LIESYM_E_INDEX: return "index out of range";
        case LIESYM_E_DOMAIN: return "domain error";
        case LIESYM_E_EVALUATION: return "evaluation error";
        case LIESYM_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* liesym_version(void) { return "0.1.0"; }

void liesym_string_free(char* s) { std::free(s); }

liesym_status liesym_check_manifold(const char* manifold) {
    return guarded([&] {
        require(manifold);
        liesym::parse_manifold(manifold);
    });
}

liesym_status liesym_check_case(const char* case_name) {
    return guarded([&] {
        require(case_name);
        liesym::parse_case(case_name);
    });
}

liesym_status liesym_check_rational(const char* value) {
    return guarded([&] {
        require(value);
        rat(value);
    });
}

liesym_status liesym_check_dimension(int n) {
    return guarded([&] { liesym::ManifoldModel::make(liesym::ManifoldKind::EuclideanFlat, n); });
}

liesym_status liesym_check_case_params(const char* case_name, const char* r, const char* q) {
    return guarded([&] {
        require(case_name, r, q);
        liesym::check_case(liesym::parse_case(case_name), rat(r), rat(q));
    });
}

liesym_status liesym_expr_parse(const char* text, int n, liesym_expr** out) {
    return guarded([&] {
        require(text, out);
        *out = nullptr;
        *out = new liesym_expr{liesym::parse(text, n), n};
    });
}

void liesym_expr_free(liesym_expr* e) { delete e; }

liesym_status liesym_expr_to_string(const liesym_expr* e, char** out) {
    return guarded([&] {
        require(e, out);
        *out = dup(e->e.str());
    });
}

liesym_status liesym_expr_is_zero(const liesym_expr* e, int* out) {
    return guarded([&] {
        require(e, out);
        *out = liesym::is_zero(e->e);
    });
}

liesym_status liesym_expr_equal(const liesym_expr* a, const liesym_expr* b, int* out) {
    return guarded([&] {
        require(a, b, out);
        *out = liesym::is_zero(a->e - b->e);
    });
}

liesym_status liesym_expr_partial(const liesym_expr* e, const char* symbol, liesym_expr** out) {
    return guarded([&] {
        require(e, symbol, out);
        liesym::Expr v = liesym::parse(symbol, e->n);
        *out = new liesym_expr{liesym::partial(e->e, v), e->n};
    });
}

liesym_status liesym_determine(const char* manifold, int n, const char* case_name, liesym_system** out) {
    return guarded([&] {
        require(manifold, case_name, out);
        *out = nullptr;
        auto pde = liesym::PDEInstance::make(liesym::ManifoldModel::make(liesym::parse_manifold(manifold), n));
        *out = new liesym_system{liesym::derive_determining_system(pde, liesym::parse_case(case_name))};
    });
}

void liesym_system_free(liesym_system* s) { delete s; }

liesym_status liesym_system_size(const liesym_system* s, size_t* out) {
    return guarded([&] {
        require(s, out);
        *out = s->ds.equations.size();
    });
}

liesym_status liesym_system_equation(const liesym_system* s, size_t i, char** out) {
    return guarded([&] {
        require(s, out);
        if (i >= s->ds.equations.size()) throw liesym::IndexError("equation index out of range");
        *out = dup(s->ds.equations[i].str());
    });
}

liesym_status liesym_system_contains(const liesym_system* s, const char* text, int* out) {
    return guarded([&] {
        require(s, text, out);
        *out = liesym::system_contains(s->ds, liesym::parse(text, s->ds.model.n));
    });
}

liesym_status liesym_system_to_json(const liesym_system* s, char** out) {
    return guarded([&] {
        require(s, out);
        *out = dup(liesym::determine_json(s->ds).json);
    });
}

liesym_status liesym_run_determine(const char* manifold, int n, const char* case_name, char** json) {
    return guarded([&] {
        require(manifold, case_name, json);
        *json = dup(liesym::determine_json(liesym::parse_manifold(manifold), n, liesym::parse_case(case_name)).json);
    });
}

liesym_status liesym_run_catalog(const char* manifold, int n, const char* case_name, const char* r, const char* q,
                                 char** json) {
    return guarded([&] {
        require(manifold, case_name, r, q, json);
        *json = dup(liesym::catalog_json(liesym::parse_manifold(manifold), n, liesym::parse_case(case_name), rat(r),
                                         rat(q))
                        .json);
    });
}

liesym_status liesym_run_verify(const char* manifold, int n, const char* case_name, const char* r, const char* q,
                                int points, uint64_t seed, double tol, char** json, int* pass) {
    return guarded([&] {
        require(manifold, case_name, r, q, json);
        auto out = liesym::verify_json(liesym::parse_manifold(manifold), n, liesym::parse_case(case_name), rat(r),
                                       rat(q), points, seed, tol);
        *json = dup(out.json);
        if (pass) *pass = out.pass;
    });
}

liesym_status liesym_run_torsion_check(const char* variant, int n, const char* lam0, int random, uint64_t seed,
                                       double tol, char** json, int* pass) {
    return guarded([&] {
        require(variant, json);
        if (random < 0) throw liesym::ValueError("random count must be nonnegative");
        liesym::TorsionCheckConfig cfg;
        cfg.variant = variant;
        cfg.n = n;
        cfg.lam0 = lam0 ? rat(lam0) : liesym::Rational(0);
        cfg.random = random;
        cfg.seed = seed;
        cfg.tol = tol;
        auto out = liesym::torsion_check_json(cfg);
        *json = dup(out.json);
        if (pass) *pass = out.pass;
    });
}

liesym_status liesym_run_prolong(const char* manifold, int n, const char* const* xi, const char* eta, const char* phi,
                                 const char* r, const char* q, char** json) {
    return guarded([&] {
        require(manifold, xi, eta, phi, json);
        liesym::ManifoldModel::make(liesym::parse_manifold(manifold), n);
        liesym::VectorFieldAnsatz v;
        for (int i = 0; i < n; ++i) {
            require(xi[i]);
            v.xi.push_back(liesym::parse(xi[i], n));
        }
        v.eta = liesym::parse(eta, n);
        v.phi = liesym::parse(phi, n);
        liesym::Expr R = r ? liesym::Expr(rat(r)) : liesym::Expr::param("r");
        liesym::Expr Q = q ? liesym::Expr(rat(q)) : liesym::Expr::param("q");
        *json = dup(liesym::prolong_json(liesym::parse_manifold(manifold), n, v, R, Q).json);
    });
}

liesym_status liesym_run_reduce(const char* m, const char* p, char** json) {
    return guarded([&] {
        require(m, p, json);
        *json = dup(liesym::reduce_json(rat(m), rat(p)).json);
    });
}

}  // extern "C"
