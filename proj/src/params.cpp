#include "iontrap/params.hpp"

#include <cmath>

#include "iontrap/error.hpp"

namespace iontrap {

void ModelParams::validate() const {
    if (!std::isfinite(nu) || !std::isfinite(omega_ge) || !std::isfinite(omega_L) ||
        !std::isfinite(Omega_R) || !std::isfinite(eta))
        throw InvalidArgument("ModelParams: non-finite value");
    if (nu <= 0.0) throw InvalidArgument("ModelParams: nu must be > 0");
    if (Omega_R < 0.0) throw InvalidArgument("ModelParams: Omega_R must be >= 0");
    if (balanced_detuning() == 0.0)
        throw InvalidArgument("ModelParams: Omega_R = 0 and delta = 0 leave the balanced detuning at 0");
}

double ModelParams::reduced_detuning() const {
    if (Omega_R == 0.0) throw InvalidArgument("Delta = delta/Omega_R is undefined for Omega_R = 0");
    return detuning() / Omega_R;
}

double ModelParams::balanced_detuning() const { return std::hypot(2.0 * Omega_R, detuning()); }

double ModelParams::eta_breve() const { return detuning() * eta / balanced_detuning(); }

double ModelParams::lambda() const { return Omega_R * eta / balanced_detuning(); }

double ModelParams::theta() const { return std::atan(0.5 * reduced_detuning()); }

ModelParams ModelParams::with_detuning(double delta) const {
    ModelParams p = *this;
    p.omega_ge = omega_L + delta;
    return p;
}

bool JCParams::resonant(double tol) const { return std::abs(nu - omega) <= tol * std::abs(nu); }

void BhParams::validate() const {
    if (!std::isfinite(nu) || !std::isfinite(delta_breve) || !std::isfinite(eta_breve) ||
        !std::isfinite(lambda))
        throw InvalidArgument("BhParams: non-finite value");
    if (nu <= 0.0) throw InvalidArgument("BhParams: nu must be > 0");
    if (delta_breve <= 0.0) throw InvalidArgument("BhParams: delta_breve must be > 0");
}

BhParams BhParams::from_model(const ModelParams& p) {
    p.validate();
    return BhParams{p.nu, p.balanced_detuning(), p.eta_breve(), p.lambda()};
}

double BhParams::reduced_detuning() const {
    if (lambda == 0.0) throw InvalidArgument("Delta = eta_breve/lambda is undefined for lambda = 0");
    return eta_breve / lambda;
}

BhParams BhParams::with_lambda(double new_lambda) const {
    BhParams p = *this;
    if (lambda != 0.0) p.eta_breve = eta_breve * (new_lambda / lambda);
    p.lambda = new_lambda;
    return p;
}

bool BhParams::resonant(double tol) const { return std::abs(nu - delta_breve) <= tol * nu; }

}  // namespace iontrap
