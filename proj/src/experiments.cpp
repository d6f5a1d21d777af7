#include "iontrap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "iontrap/closed_forms.hpp"
#include "iontrap/error.hpp"
#include "iontrap/hamiltonians.hpp"
#include "iontrap/oracle.hpp"
#include "iontrap/perturbation.hpp"

#ifndef IONTRAP_VERSION
#define IONTRAP_VERSION "0.0.0"
#endif

namespace iontrap {

namespace {

const std::set<std::string> kModelKeys{"omega_ge", "omega_L", "Omega_R", "eta"};
const std::set<std::string> kReducedKeys{"delta_breve", "eta_breve", "lambda"};

double parse_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' is not a number: '" + value + "'");
    }
    if (value.find_first_not_of(" \t", used) != std::string::npos)
        throw ConfigError("'" + key + "' is not a number: '" + value + "'");
    if (!std::isfinite(x)) throw ConfigError("'" + key + "' must be finite");
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_real(key, value);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(x);
}

const std::map<std::string, std::set<std::string>>& experiment_options() {
    static const std::map<std::string, std::set<std::string>> table{
        {"spectrum", {"n_levels", "rho"}},
        {"evolve", {"times", "initial_fock", "initial_spin", "regime"}},
        {"compare-rwa", {"lambdas", "times", "delta_ratio", "regime"}},
        {"residual-order", {"lambdas", "order", "regime", "delta_ratio", "rho"}},
        {"anticrossing", {"levels", "offsets", "offset_range"}},
        {"limits", {"deltas", "rabi"}},
        {"frame-chain", {"times", "steps_per_unit", "route"}},
    };
    return table;
}

RegimeKind parse_regime(const std::string& name) {
    for (RegimeKind k : {RegimeKind::eta_much_less, RegimeKind::eta_comparable, RegimeKind::eta_much_greater,
                         RegimeKind::near_resonant})
        if (name == regime_name(k)) return k;
    throw ConfigError("unknown regime '" + name +
                      "' (valid: eta_much_less, eta_comparable, eta_much_greater, near_resonant)");
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    for (int k = 0; k < count; ++k) v.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
    return v;
}

std::vector<double> logspace(double lo_exp, double hi_exp, int count) {
    std::vector<double> v;
    for (double e : linspace(lo_exp, hi_exp, count)) v.push_back(std::pow(10.0, e));
    return v;
}

// Each index is handled by exactly one worker and writes its own slot, so the
// result is the same for any thread count. The first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> guard(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void check_fit(RunResult& out, const std::string& what, const ConvergenceFit& fit) {
    if (!fit.conclusive()) {
        std::ostringstream msg;
        msg << "inconclusive fit for " << what << ": r^2 = " << fit.r_squared << " < 0.95";
        out.diagnostics.push_back(msg.str());
    }
}

BhParams resonant_point(const RunConfig& cfg, double lambda) {
    const BhParams base = cfg.bh_params();
    double ratio = 0.0;
    if (cfg.has("delta_ratio"))
        ratio = cfg.real("delta_ratio", 0.0);
    else if (base.lambda != 0.0)
        ratio = base.eta_breve / base.lambda;
    return BhParams{base.nu, base.nu, ratio * lambda, lambda};
}

// --- experiments ----------------------------------------------------------

RunResult run_spectrum(const RunConfig& cfg, int) {
    const BhParams p = cfg.bh_params();
    const SpaceConfig& space = cfg.space;
    const int n_levels = cfg.integer("n_levels", 10);
    const double rho = cfg.real("rho", 0.1);
    if (n_levels < 1 || n_levels > space.interior_top())
        throw ConfigError("n_levels must lie in [1, n_max - interior_margin]");

    const SecondOrderSpectrum second = spectrum_second_order(p, n_levels, rho);
    const SecondOrderSpectrum first = spectrum_first_order(p, n_levels, rho);
    const Operator h = bh(p, space);

    std::vector<double> n, em, ep, xm, xp, dm, dp, fm, fp;
    double worst = 0.0;
    for (const Level& lv : second.levels) {
        const auto [lo, hi] = exact_pair(lv.n, h);
        n.push_back(lv.n);
        em.push_back(lv.E_minus);
        ep.push_back(lv.E_plus);
        xm.push_back(lo);
        xp.push_back(hi);
        dm.push_back(std::abs(lv.E_minus - lo));
        dp.push_back(std::abs(lv.E_plus - hi));
        worst = std::max({worst, dm.back(), dp.back()});
    }
    for (const Level& lv : first.levels) {
        fm.push_back(lv.E_minus);
        fp.push_back(lv.E_plus);
    }

    RunResult out;
    ResultTable t{"levels", {}};
    t.add("n", n);
    t.add("E_minus", em);
    t.add("E_plus", ep);
    t.add("E_minus_exact", xm);
    t.add("E_plus_exact", xp);
    t.add("err_minus", dm);
    t.add("err_plus", dp);
    t.add("E_minus_first_order", fm);
    t.add("E_plus_first_order", fp);
    out.tables.push_back(std::move(t));
    out.summary["E0"] = second.E0;
    out.summary["E0_exact"] = exact_vacuum_level(h);
    out.summary["max_level_error"] = worst;
    out.summary["lambda_cubed_nu"] = std::pow(p.lambda, 3) * p.nu;
    return out;
}

RunResult run_evolve(const RunConfig& cfg, int threads) {
    const BhParams p = cfg.bh_params();
    const SpaceConfig& space = cfg.space;
    const std::vector<double> times = cfg.reals("times", linspace(0.0, 10.0, 21));
    const int fock = cfg.integer("initial_fock", 0);
    const std::string spin_name = cfg.text("initial_spin", "e");
    if (fock < 0 || fock > space.interior_top()) throw ConfigError("initial_fock must lie in the interior block");
    if (spin_name != "e" && spin_name != "g") throw ConfigError("initial_spin must be e or g");
    const Spin spin = spin_name == "e" ? Spin::e : Spin::g;
    const int start = BasisIndex{fock, spin}.flat();

    const EigenSystem es = exact_eigs(bh(p, space));
    const bool compare = p.resonant();
    std::optional<Regime> regime;
    if (compare) regime = make_regime(parse_regime(cfg.text("regime", "eta_much_less")), p);

    const Operator pe = spin_projector(Spin::e, space);
    const Operator nn = number(space);
    auto excited = [&](const Eigen::VectorXcd& psi) { return (psi.adjoint() * pe.matrix() * psi)(0).real(); };

    const std::size_t m = times.size();
    std::vector<double> p_exact(m), mean_n(m), p_rwa(m), p_e1(m);
    parallel_for(m, threads, [&](std::size_t i) {
        const double t = times[i];
        const Eigen::VectorXcd phases = (-kI * t * es.values.cast<Complex>()).array().exp();
        const Eigen::VectorXcd psi = es.vectors * phases.asDiagonal() * es.vectors.row(start).adjoint();
        p_exact[i] = excited(psi);
        mean_n[i] = (psi.adjoint() * nn.matrix() * psi)(0).real();
        if (compare) {
            p_rwa[i] = excited(rwa_evolutor(t, p, space).matrix().col(start));
            p_e1[i] = excited(first_order_evolutor(t, p, *regime, space).matrix().col(start));
        }
    });

    RunResult out;
    ResultTable tab{"populations", {}};
    tab.add("t", times);
    tab.add("p_excited", p_exact);
    tab.add("mean_n", mean_n);
    if (compare) {
        tab.add("p_excited_rwa", p_rwa);
        tab.add("p_excited_e1", p_e1);
    }
    out.tables.push_back(std::move(tab));
    out.summary["resonant"] = compare ? 1.0 : 0.0;
    return out;
}

RunResult run_compare_rwa(const RunConfig& cfg, int threads) {
    const SpaceConfig& space = cfg.space;
    const std::vector<double> lambdas = cfg.reals("lambdas", kLambdaGrid);
    const std::vector<double> times = cfg.reals("times", {3.0});
    const RegimeKind kind = parse_regime(cfg.text("regime", "eta_much_less"));

    const std::size_t nl = lambdas.size(), nt = times.size();
    std::vector<double> col_l(nl * nt), col_t(nl * nt), err_rwa(nl * nt), err_e1(nl * nt);
    parallel_for(nl, threads, [&](std::size_t i) {
        const BhParams p = resonant_point(cfg, lambdas[i]);
        const Regime regime = make_regime(kind, p);
        const Operator h = bh(p, space);
        for (std::size_t j = 0; j < nt; ++j) {
            const double t = times[j];
            const Operator exact = exact_propagator(h, t);
            const std::size_t k = i * nt + j;
            col_l[k] = lambdas[i];
            col_t[k] = t;
            err_rwa[k] = interior_distance(rwa_evolutor(t, p, space), exact);
            err_e1[k] = interior_distance(first_order_evolutor(t, p, regime, space), exact);
        }
    });

    RunResult out;
    std::vector<double> ratio(nl * nt);
    for (std::size_t k = 0; k < ratio.size(); ++k) ratio[k] = err_rwa[k] / err_e1[k];
    ResultTable errors{"errors", {}};
    errors.add("lambda", col_l);
    errors.add("t", col_t);
    errors.add("err_rwa", err_rwa);
    errors.add("err_e1", err_e1);
    errors.add("ratio", ratio);
    out.tables.push_back(std::move(errors));

    std::vector<double> ft, s_rwa, r2_rwa, s_e1, r2_e1;
    for (std::size_t j = 0; j < nt; ++j) {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < nl; ++i) {
            a.push_back(err_rwa[i * nt + j]);
            b.push_back(err_e1[i * nt + j]);
        }
        const ConvergenceFit fa = fit_order(lambdas, a), fb = fit_order(lambdas, b);
        std::ostringstream tag;
        tag << "t = " << times[j];
        check_fit(out, "err_rwa at " + tag.str(), fa);
        check_fit(out, "err_e1 at " + tag.str(), fb);
        ft.push_back(times[j]);
        s_rwa.push_back(fa.slope);
        r2_rwa.push_back(fa.r_squared);
        s_e1.push_back(fb.slope);
        r2_e1.push_back(fb.r_squared);
    }
    ResultTable fits{"fits", {}};
    fits.add("t", ft);
    fits.add("slope_rwa", s_rwa);
    fits.add("r_squared_rwa", r2_rwa);
    fits.add("slope_e1", s_e1);
    fits.add("r_squared_e1", r2_e1);
    out.tables.push_back(std::move(fits));
    return out;
}

RunResult run_residual_order(const RunConfig& cfg, int threads) {
    const SpaceConfig& space = cfg.space;
    const std::vector<double> lambdas = cfg.reals("lambdas", kLambdaGrid);
    const int order = cfg.integer("order", 2);
    const double rho = cfg.real("rho", 0.1);
    const RegimeKind kind = parse_regime(cfg.text("regime", "eta_much_less"));
    if (order < 1 || order > 4) throw ConfigError("order must lie in [1, 4]");

    const BhParams base = cfg.bh_params();
    const std::size_t nl = lambdas.size();
    std::vector<std::vector<double>> r(order, std::vector<double>(nl));
    parallel_for(nl, threads, [&](std::size_t i) {
        BhParams p = resonant_point(cfg, lambdas[i]);
        if (kind == RegimeKind::near_resonant) p.delta_breve = base.delta_breve;
        const Regime regime = make_regime(kind, p, rho);
        const EngineProblem prob = engine_problem(p, regime, space);
        const PerturbativeSolution sol = solve(decompose(prob.h0, regime.eps_deg), prob.series, order);
        for (int n = 1; n <= order; ++n) r[n - 1][i] = residual(prob.h0, prob.series, sol, prob.lambda, n);
    });

    RunResult out;
    ResultTable res{"residuals", {}};
    res.add("lambda", lambdas);
    for (int n = 1; n <= order; ++n) res.add("R_" + std::to_string(n), r[n - 1]);
    out.tables.push_back(std::move(res));

    std::vector<double> fn, slope, intercept, r2;
    for (int n = 1; n <= order; ++n) {
        const ConvergenceFit fit = fit_order(lambdas, r[n - 1]);
        check_fit(out, "R_" + std::to_string(n), fit);
        fn.push_back(n);
        slope.push_back(fit.slope);
        intercept.push_back(fit.intercept);
        r2.push_back(fit.r_squared);
    }
    ResultTable fits{"fits", {}};
    fits.add("n", fn);
    fits.add("slope", slope);
    fits.add("intercept", intercept);
    fits.add("r_squared", r2);
    out.tables.push_back(std::move(fits));
    return out;
}

RunResult run_anticrossing(const RunConfig& cfg, int threads) {
    const SpaceConfig& space = cfg.space;
    std::vector<double> levels = cfg.reals("levels", {1.0, 2.0, 3.0});
    std::vector<double> offsets;
    if (cfg.has("offsets")) {
        offsets = cfg.reals("offsets", {});
    } else {
        const std::vector<double> range = cfg.reals("offset_range", {-0.02, 0.02, 401.0});
        if (range.size() != 3 || range[2] < 3 || range[2] != std::floor(range[2]))
            throw ConfigError("offset_range must be 'low high count' with count >= 3");
        offsets = linspace(range[0], range[1], static_cast<int>(range[2]));
    }
    if (!std::is_sorted(offsets.begin(), offsets.end())) throw ConfigError("offsets must be ascending");
    for (double n : levels)
        if (n < 1 || n != std::floor(n) || n > space.interior_top())
            throw ConfigError("levels must be integers in [1, n_max - interior_margin]");

    const std::size_t nlev = levels.size();
    std::vector<GapScan> scans(nlev);
    parallel_for(nlev, threads, [&](std::size_t i) {
        const int n = static_cast<int>(levels[i]);
        scans[i] = cfg.model ? scan_gap(n, *cfg.model, offsets, space) : scan_gap(n, *cfg.reduced, offsets, space);
    });

    const double lambda = cfg.model ? cfg.model->lambda() : cfg.reduced->lambda;
    const double nu = cfg.model ? cfg.model->nu : cfg.reduced->nu;

    RunResult out;
    ResultTable gaps{"gaps", {}};
    gaps.add("offset", offsets);
    for (std::size_t i = 0; i < nlev; ++i) gaps.add("gap_n" + std::to_string(static_cast<int>(levels[i])), scans[i].gaps);
    out.tables.push_back(std::move(gaps));

    std::vector<double> argmin, half, predicted, min_gap;
    for (std::size_t i = 0; i < nlev; ++i) {
        argmin.push_back(scans[i].argmin);
        half.push_back(scans[i].half_detuning_argmin);
        predicted.push_back(-0.5 * lambda * lambda * nu * levels[i]);
        min_gap.push_back(scans[i].min_gap);
    }
    ResultTable minima{"minima", {}};
    minima.add("n", levels);
    minima.add("argmin", argmin);
    minima.add("half_detuning_argmin", half);
    minima.add("predicted_shift", predicted);
    minima.add("min_gap", min_gap);
    out.tables.push_back(std::move(minima));
    out.summary["lambda"] = lambda;
    return out;
}

RunResult run_limits(const RunConfig& cfg, int threads) {
    const ModelParams& base = cfg.require_model();
    if (base.Omega_R == 0.0) throw ConfigError("limits needs Omega_R != 0");
    const SpaceConfig& space = cfg.space;
    const std::vector<double> deltas = cfg.reals("deltas", {1e-6, 1.0, 1e6});
    const std::vector<double> rabi = cfg.reals("rabi", logspace(-3.0, 3.0, 61));

    const std::size_t nd = deltas.size();
    std::vector<double> to_id(nd), to_t1(nd), lam(nd), eb(nd), kp(nd), km(nd);
    parallel_for(nd, threads, [&](std::size_t i) {
        const ModelParams p = base.with_detuning(deltas[i] * base.Omega_R);
        const Operator td = t_delta(p, space);
        to_id[i] = interior_norm(td - Operator::identity(space));
        to_t1[i] = interior_norm(td - t1(p, space));
        lam[i] = p.lambda();
        eb[i] = p.eta_breve();
        const TDeltaCoefficients c = t_delta_coefficients(deltas[i]);
        kp[i] = c.kappa_plus;
        km[i] = c.kappa_minus;
    });

    RunResult out;
    ResultTable lim{"limits", {}};
    lim.add("reduced_detuning", deltas);
    lim.add("norm_t_delta_minus_identity", to_id);
    lim.add("norm_t_delta_minus_t1", to_t1);
    lim.add("lambda", lam);
    lim.add("eta_breve", eb);
    lim.add("kappa_plus", kp);
    lim.add("kappa_minus", km);
    out.tables.push_back(std::move(lim));

    std::vector<double> rl, re;
    const double eta = std::abs(base.eta);
    double worst_l = 0.0, worst_e = 0.0;
    for (double w : rabi) {
        ModelParams p = base;
        p.Omega_R = w;
        rl.push_back(p.lambda());
        re.push_back(p.eta_breve());
        worst_l = std::max(worst_l, std::abs(rl.back()));
        worst_e = std::max(worst_e, std::abs(re.back()));
    }
    ResultTable bounds{"bounds", {}};
    bounds.add("Omega_R", rabi);
    bounds.add("lambda", rl);
    bounds.add("eta_breve", re);
    out.tables.push_back(std::move(bounds));
    out.summary["max_abs_lambda"] = worst_l;
    out.summary["max_abs_eta_breve"] = worst_e;
    if (worst_l > 0.5 * eta + 1e-15) out.diagnostics.push_back("invariant |lambda| <= |eta|/2 violated");
    if (worst_e > eta + 1e-15) out.diagnostics.push_back("invariant |eta_breve| <= |eta| violated");
    return out;
}

RunResult run_frame_chain(const RunConfig& cfg, int threads) {
    const ModelParams& p = cfg.require_model();
    const SpaceConfig& space = cfg.space;
    const std::vector<double> times = cfg.reals("times", {2.0});
    const int steps = cfg.integer("steps_per_unit", 200);
    const std::string route_name = cfg.text("route", "conjugation");
    if (route_name != "conjugation" && route_name != "closed_form")
        throw ConfigError("route must be conjugation or closed_form");
    const ChainRoute route = route_name == "conjugation" ? ChainRoute::conjugation : ChainRoute::closed_form;

    const std::size_t nt = times.size();
    std::vector<double> e2(nt), e4(nt), unit(nt);
    parallel_for(nt, threads, [&](std::size_t i) {
        const Operator chain = frame_chain(p, times[i], space, route);
        e2[i] = interior_distance(chain, magnus2_ith(p, times[i], space, steps));
        e4[i] = interior_distance(chain, magnus4_ith(p, times[i], space, steps));
        unit[i] = unitarity_defect(chain);
    });

    RunResult out;
    ResultTable tab{"errors", {}};
    tab.add("t", times);
    tab.add("err_magnus2", e2);
    tab.add("err_magnus4", e4);
    tab.add("unitarity_defect", unit);
    out.tables.push_back(std::move(tab));
    for (std::size_t i = 0; i < nt; ++i) {
        if (unit[i] > 1e-10) {
            std::ostringstream msg;
            msg << "invariant unitarity of the frame chain violated at t = " << times[i] << " (" << unit[i] << ")";
            out.diagnostics.push_back(msg.str());
        }
    }
    return out;
}

void write_atomic(const std::filesystem::path& target, const std::string& content) {
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

}  // namespace

// --- RunConfig --------------------------------------------------------------

BhParams RunConfig::bh_params() const {
    if (reduced) return *reduced;
    if (model) return BhParams::from_model(*model);
    throw ConfigError("no parameters given");
}

const ModelParams& RunConfig::require_model() const {
    if (!model) throw ConfigError("experiment '" + experiment + "' needs the laser parameter set (omega_ge, omega_L, Omega_R, eta)");
    return *model;
}

double RunConfig::real(const std::string& key, double fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : parse_real(key, it->second);
}

int RunConfig::integer(const std::string& key, int fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : parse_int(key, it->second);
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

std::vector<double> RunConfig::reals(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    std::string s = it->second;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<double> v;
    std::string item;
    while (in >> item) v.push_back(parse_real(key, item));
    if (v.empty()) throw ConfigError("'" + key + "' is an empty list");
    return v;
}

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }

    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (section != "params" && section != "space" && section != "experiment")
            throw ConfigError("unknown section [" + section + "] (valid: params, space, experiment)");
        if (!body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
        for (const auto& [key, value] : body) cfg.echo[section + "." + key] = value.data();
    }

    const auto params = tree.get_child_optional("params");
    if (!params) throw ConfigError("missing [params] section");
    std::map<std::string, double> pv;
    for (const auto& [key, value] : *params) {
        if (key != "nu" && !kModelKeys.count(key) && !kReducedKeys.count(key))
            throw ConfigError("unknown key params." + key);
        pv[key] = parse_real("params." + key, value.data());
    }
    int model_keys = 0, reduced_keys = 0;
    for (const auto& [key, value] : pv) {
        model_keys += kModelKeys.count(key);
        reduced_keys += kReducedKeys.count(key);
    }
    if (model_keys > 0 && reduced_keys > 0)
        throw ConfigError("[params] mixes the laser set and the reduced set; give exactly one");
    const double nu = pv.count("nu") ? pv["nu"] : 1.0;
    if (model_keys > 0) {
        for (const auto& k : kModelKeys)
            if (!pv.count(k)) throw ConfigError("laser parameter set is missing params." + k);
        ModelParams m;
        m.nu = nu;
        m.omega_ge = pv["omega_ge"];
        m.omega_L = pv["omega_L"];
        m.Omega_R = pv["Omega_R"];
        m.eta = pv["eta"];
        try {
            m.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        cfg.model = m;
    } else if (reduced_keys > 0) {
        for (const auto& k : kReducedKeys)
            if (!pv.count(k)) throw ConfigError("reduced parameter set is missing params." + k);
        BhParams b{nu, pv["delta_breve"], pv["eta_breve"], pv["lambda"]};
        try {
            b.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        cfg.reduced = b;
    } else {
        throw ConfigError("[params] holds neither parameter set");
    }

    if (const auto space = tree.get_child_optional("space")) {
        for (const auto& [key, value] : *space) {
            if (key == "n_max")
                cfg.space.n_max = parse_int("space.n_max", value.data());
            else if (key == "interior_margin")
                cfg.space.interior_margin = parse_int("space.interior_margin", value.data());
            else
                throw ConfigError("unknown key space." + key);
        }
    }
    try {
        cfg.space.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    const auto experiment = tree.get_child_optional("experiment");
    if (!experiment) throw ConfigError("missing [experiment] section");
    cfg.experiment = experiment->get<std::string>("name", "");
    const auto known = experiment_options().find(cfg.experiment);
    if (known == experiment_options().end()) {
        std::string valid;
        for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("unknown experiment '" + cfg.experiment + "' (valid: " + valid + ")");
    }
    for (const auto& [key, value] : *experiment) {
        if (key == "name") continue;
        if (!known->second.count(key)) throw ConfigError("experiment " + cfg.experiment + " has no option '" + key + "'");
        cfg.options[key] = value.data();
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config " + path.string());
    std::ostringstream text;
    text << f.rdbuf();
    return parse_config(text.str());
}

// --- tables -------------------------------------------------------------------

void ResultTable::add(std::string column, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows())
        throw InvalidArgument("table " + name + ": column " + column + " has a different length");
    columns.push_back(Column{std::move(column), std::move(values)});
}

std::string ResultTable::csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c].name;
    out += '\n';
    char buf[40];
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", columns[c].values[r]);
            if (c) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"spectrum",     "evolve", "compare-rwa", "residual-order",
                                                "anticrossing", "limits", "frame-chain"};
    return names;
}

RunResult run_experiment(const RunConfig& cfg, int threads) {
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    static const std::map<std::string, std::function<RunResult(const RunConfig&, int)>> table{
        {"spectrum", run_spectrum},         {"evolve", run_evolve},   {"compare-rwa", run_compare_rwa},
        {"residual-order", run_residual_order}, {"anticrossing", run_anticrossing}, {"limits", run_limits},
        {"frame-chain", run_frame_chain},
    };
    const auto it = table.find(cfg.experiment);
    if (it == table.end()) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    RunResult out = it->second(cfg, threads);
    out.experiment = cfg.experiment;
    return out;
}

void write_outputs(const RunConfig& cfg, const RunResult& result, const std::filesystem::path& out_dir) {
    using nlohmann::json;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

    json meta;
    meta["experiment"] = result.experiment;
    meta["engine_version"] = IONTRAP_VERSION;
    meta["config"] = cfg.echo;
    json params;
    if (cfg.model) {
        params = {{"set", "laser"},
                  {"nu", cfg.model->nu},
                  {"omega_ge", cfg.model->omega_ge},
                  {"omega_L", cfg.model->omega_L},
                  {"Omega_R", cfg.model->Omega_R},
                  {"eta", cfg.model->eta}};
    } else {
        params = {{"set", "reduced"}};
    }
    const BhParams b = cfg.bh_params();
    params["derived"] = {{"delta_breve", b.delta_breve}, {"eta_breve", b.eta_breve}, {"lambda", b.lambda}};
    meta["params"] = params;
    meta["space"] = {{"n_max", cfg.space.n_max},
                     {"interior_margin", cfg.space.interior_margin},
                     {"dim", cfg.space.dim()},
                     {"interior_dim", cfg.space.interior_dim()}};
    meta["tolerances"] = {{"eps_deg", kDefaultDegeneracyTol},
                          {"tol_comm_relative", 1e-9},
                          {"hermiticity_relative", 1e-10},
                          {"series_tail", 1e-12},
                          {"overlap_threshold", 0.8},
                          {"fit_r_squared_min", 0.95},
                          {"magnus_steps_per_unit", 200},
                          {"resonance_relative", 1e-8}};
    if (const char* seed = std::getenv("IONTRAP_SEED")) meta["IONTRAP_SEED"] = std::string(seed) + " (reserved, unused)";
    meta["summary"] = result.summary;
    meta["diagnostics"] = result.diagnostics;
    json tables = json::array();
    for (const ResultTable& t : result.tables) {
        json cols = json::array();
        for (const Column& c : t.columns) cols.push_back(c.name);
        tables.push_back({{"name", t.name},
                          {"file", result.experiment + "_" + t.name + ".csv"},
                          {"rows", t.rows()},
                          {"columns", cols}});
    }
    meta["tables"] = tables;

    for (const ResultTable& t : result.tables) write_atomic(out_dir / (result.experiment + "_" + t.name + ".csv"), t.csv());
    write_atomic(out_dir / (result.experiment + ".json"), meta.dump(2) + "\n");
}

}  // namespace iontrap
