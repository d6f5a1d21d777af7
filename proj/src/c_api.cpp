#include "iontrap/iontrap.h"

#include <exception>
#include <new>
#include <string>

#include "iontrap/closed_forms.hpp"
#include "iontrap/error.hpp"
#include "iontrap/experiments.hpp"
#include "iontrap/hamiltonians.hpp"
#include "iontrap/oracle.hpp"
#include "iontrap/perturbation.hpp"

#ifndef IONTRAP_VERSION
#define IONTRAP_VERSION "0.0.0"
#endif

struct iontrap_space {
    iontrap::SpaceConfig config;
};

struct iontrap_operator {
    iontrap::Operator op;
};

namespace {

thread_local std::string last_error;

// Translates whatever the core throws into a status and remembers the text.
template <class F>
iontrap_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return IONTRAP_OK;
    } catch (const iontrap::ConfigError& e) {
        last_error = e.what();
        return IONTRAP_CONFIG_ERROR;
    } catch (const iontrap::ClusteringAmbiguous& e) {
        last_error = e.what();
        return IONTRAP_CLUSTERING_AMBIGUOUS;
    } catch (const iontrap::NumericalDiagnostic& e) {
        last_error = e.what();
        return IONTRAP_NUMERICAL;
    } catch (const iontrap::DimensionMismatch& e) {
        last_error = e.what();
        return IONTRAP_DIMENSION_MISMATCH;
    } catch (const iontrap::InvalidArgument& e) {
        last_error = e.what();
        return IONTRAP_INVALID_ARGUMENT;
    } catch (const iontrap::Error& e) {
        last_error = e.what();
        return IONTRAP_IO_ERROR;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return IONTRAP_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return IONTRAP_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return IONTRAP_INTERNAL;
    }
}

template <class T>
void need(const T* ptr, const char* what) {
    if (ptr == nullptr) throw iontrap::InvalidArgument(std::string(what) + " is NULL");
}

iontrap::ModelParams model_of(const iontrap_model_params* p) {
    need(p, "params");
    iontrap::ModelParams m;
    m.nu = p->nu;
    m.omega_ge = p->omega_ge;
    m.omega_L = p->omega_L;
    m.Omega_R = p->Omega_R;
    m.eta = p->eta;
    m.validate();
    return m;
}

iontrap::BhParams bh_of(const iontrap_bh_params* p) {
    need(p, "params");
    iontrap::BhParams b{p->nu, p->delta_breve, p->eta_breve, p->lambda};
    b.validate();
    return b;
}

const iontrap::SpaceConfig& space_of(const iontrap_space* s) {
    need(s, "space");
    return s->config;
}

void emit(iontrap::Operator op, iontrap_operator** out) {
    need(out, "out");
    *out = new iontrap_operator{std::move(op)};
}

}  // namespace

extern "C" {

const char* iontrap_version(void) { return IONTRAP_VERSION; }

const char* iontrap_last_error(void) { return last_error.c_str(); }

const char* iontrap_status_name(iontrap_status status) {
    switch (status) {
        case IONTRAP_OK: return "ok";
        case IONTRAP_INVALID_ARGUMENT: return "invalid argument";
        case IONTRAP_DIMENSION_MISMATCH: return "dimension mismatch";
        case IONTRAP_CONFIG_ERROR: return "config error";
        case IONTRAP_NUMERICAL: return "numerical diagnostic";
        case IONTRAP_CLUSTERING_AMBIGUOUS: return "ambiguous clustering";
        case IONTRAP_IO_ERROR: return "i/o error";
        case IONTRAP_INTERNAL: return "internal error";
    }
    return "unknown status";
}

iontrap_status iontrap_space_create(int n_max, int interior_margin, iontrap_space** out) {
    return guarded([&] {
        need(out, "out");
        iontrap::SpaceConfig s{n_max, interior_margin};
        s.validate();
        *out = new iontrap_space{s};
    });
}

void iontrap_space_destroy(iontrap_space* space) { delete space; }

iontrap_status iontrap_space_dim(const iontrap_space* space, int* dim, int* interior_dim) {
    return guarded([&] {
        const auto& s = space_of(space);
        if (dim) *dim = s.dim();
        if (interior_dim) *interior_dim = s.interior_dim();
    });
}

iontrap_status iontrap_reduce_params(const iontrap_model_params* p, iontrap_bh_params* out) {
    return guarded([&] {
        need(out, "out");
        const iontrap::BhParams b = iontrap::BhParams::from_model(model_of(p));
        *out = iontrap_bh_params{b.nu, b.delta_breve, b.eta_breve, b.lambda};
    });
}

iontrap_status iontrap_bh_scalar_offset(const iontrap_model_params* p, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = iontrap::bh_scalar_offset(model_of(p));
    });
}

iontrap_status iontrap_rfh(const iontrap_model_params* p, const iontrap_space* space, iontrap_operator** out) {
    return guarded([&] { emit(iontrap::rfh(model_of(p), space_of(space)), out); });
}

iontrap_status iontrap_t_delta(const iontrap_model_params* p, const iontrap_space* space, iontrap_operator** out) {
    return guarded([&] { emit(iontrap::t_delta(model_of(p), space_of(space)), out); });
}

iontrap_status iontrap_bh(const iontrap_model_params* p, const iontrap_space* space, iontrap_route route,
                          iontrap_operator** out) {
    return guarded([&] {
        if (route != IONTRAP_ROUTE_CLOSED_FORM && route != IONTRAP_ROUTE_CONJUGATION)
            throw iontrap::InvalidArgument("unknown route");
        const auto r = route == IONTRAP_ROUTE_CLOSED_FORM ? iontrap::BhRoute::closed_form : iontrap::BhRoute::conjugation;
        emit(iontrap::bh(model_of(p), space_of(space), r), out);
    });
}

iontrap_status iontrap_bh_reduced(const iontrap_bh_params* p, const iontrap_space* space, iontrap_operator** out) {
    return guarded([&] { emit(iontrap::bh(bh_of(p), space_of(space)), out); });
}

iontrap_status iontrap_propagator(const iontrap_operator* h, double t, iontrap_operator** out) {
    return guarded([&] {
        need(h, "operator");
        emit(iontrap::exact_propagator(h->op, t), out);
    });
}

void iontrap_operator_destroy(iontrap_operator* op) { delete op; }

iontrap_status iontrap_operator_dim(const iontrap_operator* op, int* dim) {
    return guarded([&] {
        need(op, "operator");
        need(dim, "dim");
        *dim = op->op.space().dim();
    });
}

iontrap_status iontrap_operator_entry(const iontrap_operator* op, int row, int col, double* re, double* im) {
    return guarded([&] {
        need(op, "operator");
        const int d = op->op.space().dim();
        if (row < 0 || col < 0 || row >= d || col >= d) throw iontrap::InvalidArgument("entry index out of range");
        const iontrap::Complex z = op->op.matrix()(row, col);
        if (re) *re = z.real();
        if (im) *im = z.imag();
    });
}

iontrap_status iontrap_interior_distance(const iontrap_operator* a, const iontrap_operator* b, double* out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = iontrap::interior_distance(a->op, b->op);
    });
}

iontrap_status iontrap_eigenvalues(const iontrap_operator* h, double* values, int capacity) {
    return guarded([&] {
        need(h, "operator");
        need(values, "values");
        if (capacity < h->op.space().dim()) throw iontrap::InvalidArgument("capacity is smaller than the dimension");
        const iontrap::EigenSystem es = iontrap::exact_eigs(h->op);
        for (int i = 0; i < es.values.size(); ++i) values[i] = es.values(i);
    });
}

iontrap_status iontrap_spectrum_second_order(const iontrap_bh_params* p, int n_levels, double rho, double* e0,
                                             double* e_minus, double* e_plus) {
    return guarded([&] {
        const iontrap::SecondOrderSpectrum s = iontrap::spectrum_second_order(bh_of(p), n_levels, rho);
        if (e0) *e0 = s.E0;
        for (std::size_t i = 0; i < s.levels.size(); ++i) {
            if (e_minus) e_minus[i] = s.levels[i].E_minus;
            if (e_plus) e_plus[i] = s.levels[i].E_plus;
        }
    });
}

iontrap_status iontrap_engine_residuals(const iontrap_bh_params* p, iontrap_regime regime, int order,
                                        const iontrap_space* space, double* residuals) {
    return guarded([&] {
        need(residuals, "residuals");
        if (regime < IONTRAP_ETA_MUCH_LESS || regime > IONTRAP_NEAR_RESONANT)
            throw iontrap::InvalidArgument("unknown regime");
        const iontrap::BhParams b = bh_of(p);
        const iontrap::Regime r = iontrap::make_regime(static_cast<iontrap::RegimeKind>(regime), b);
        const iontrap::EngineProblem prob = iontrap::engine_problem(b, r, space_of(space));
        const auto sol = iontrap::solve(iontrap::decompose(prob.h0, r.eps_deg), prob.series, order);
        for (int n = 1; n <= order; ++n)
            residuals[n - 1] = iontrap::residual(prob.h0, prob.series, sol, prob.lambda, n);
    });
}

iontrap_status iontrap_anticrossing_shift(int n, const iontrap_bh_params* p, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = iontrap::anticrossing_shift(n, bh_of(p));
    });
}

int iontrap_experiment_count(void) { return static_cast<int>(iontrap::experiment_names().size()); }

const char* iontrap_experiment_name(int index) {
    const auto& names = iontrap::experiment_names();
    if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
    return names[index].c_str();
}

iontrap_status iontrap_run_config(const char* config_path, const char* out_dir, int threads) {
    return guarded([&] {
        need(config_path, "config_path");
        need(out_dir, "out_dir");
        if (threads < 1) throw iontrap::ConfigError("threads must be >= 1");
        const iontrap::RunConfig cfg = iontrap::load_config(config_path);
        iontrap::RunResult result;
        try {
            result = iontrap::run_experiment(cfg, threads);
        } catch (const iontrap::InvalidArgument& e) {
            // parameters that parse but do not suit the experiment
            throw iontrap::ConfigError(e.what());
        }
        iontrap::write_outputs(cfg, result, out_dir);
        if (!result.diagnostics.empty()) {
            std::string msg;
            for (const auto& d : result.diagnostics) msg += (msg.empty() ? "" : "; ") + d;
            throw iontrap::NumericalDiagnostic(msg);
        }
    });
}

}  // extern "C"
