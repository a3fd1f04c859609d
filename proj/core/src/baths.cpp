#include "qhe/baths.hpp"

#include <cmath>
#include <stdexcept>

namespace qhe {

BathSpec BathSpec::flat(double t_cold, double t_hot, double g0, double omega0) {
    return BathSpec{t_cold, t_hot, g0, g0, omega0};
}

void BathSpec::validate() const {
    if (!(t_cold > 0.0) || !std::isfinite(t_cold)) throw std::invalid_argument("BathSpec: t_cold must be positive");
    if (!(t_hot >= t_cold) || !std::isfinite(t_hot)) throw std::invalid_argument("BathSpec: t_hot must be >= t_cold");
    if (!(g_cold >= 0.0) || !(g_hot >= 0.0) || !std::isfinite(g_cold) || !std::isfinite(g_hot)) {
        throw std::invalid_argument("BathSpec: band amplitudes must be finite and >= 0");
    }
    if (!(separation_omega > 0.0) || !std::isfinite(separation_omega)) {
        throw std::invalid_argument("BathSpec: separation_omega must be positive");
    }
}

namespace {

double positive_band(const BathSpec& bath, Bath which, double omega) {
    // omega > 0 here; the boundary itself belongs to neither band
    if (which == Bath::cold) return omega < bath.separation_omega ? bath.g_cold : 0.0;
    return omega > bath.separation_omega ? bath.g_hot : 0.0;
}

}  // namespace

double spectral_response(const BathSpec& bath, Bath which, double omega) {
    if (omega > 0.0) return positive_band(bath, which, omega);
    if (omega == 0.0) return which == Bath::cold ? bath.g_cold : 0.0;
    const double g = positive_band(bath, which, -omega);
    if (g == 0.0) return 0.0;
    return std::exp(omega / bath.temperature(which)) * g;
}

double boltzmann_factor(const BathSpec& bath, Bath which, double omega) {
    return std::exp(-omega / bath.temperature(which));
}

}  // namespace qhe
