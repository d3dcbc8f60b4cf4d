#include "hydropol/radiation.hpp"

#include <cmath>
#include <stdexcept>

#include "hydropol/constants.hpp"

namespace hydropol {

double planck(double T_kelvin, double nu_hz) {
    if (T_kelvin <= 0.0 || nu_hz <= 0.0)
        throw std::invalid_argument("planck requires T > 0 and nu > 0");
    namespace k = constants;
    const double x = k::h_planck * nu_hz / (k::k_boltzmann * T_kelvin);
    return 2.0 * k::h_planck * nu_hz * nu_hz * nu_hz / (k::c_light * k::c_light) /
           std::expm1(x);
}

Illumination Illumination::diluted_planck(double T_kelvin, double dilution) {
    if (T_kelvin <= 0.0 || dilution < 0.0)
        throw std::invalid_argument("diluted_planck requires T > 0 and dilution >= 0");
    Illumination ill;
    ill.mode_ = Mode::DilutedPlanck;
    ill.T_ = T_kelvin;
    ill.dilution_ = dilution;
    return ill;
}

Illumination Illumination::planck_te(double T_kelvin) {
    Illumination ill = diluted_planck(T_kelvin, 1.0);
    ill.mode_ = Mode::PlanckTE;
    return ill;
}

Illumination Illumination::per_line(std::map<LineId, double> mean_intensities) {
    for (const auto& [id, j] : mean_intensities)
        if (j < 0.0) throw std::invalid_argument("negative mean intensity");
    Illumination ill;
    ill.mode_ = Mode::PerLine;
    ill.per_line_ = std::move(mean_intensities);
    return ill;
}

double Illumination::mean_intensity(LineId line, double omega) const {
    if (mode_ == Mode::PerLine) {
        auto it = per_line_.find(line);
        if (it == per_line_.end())
            throw std::invalid_argument("no mean intensity configured for line " +
                                        line.label());
        return it->second;
    }
    return dilution_ * planck(T_, omega / (2.0 * M_PI));
}

double Illumination::photon_occupation(LineId line, double omega) const {
    namespace k = constants;
    const double nu = omega / (2.0 * M_PI);
    const double jbar = mean_intensity(line, omega);
    return jbar * k::c_light * k::c_light / (2.0 * k::h_planck * nu * nu * nu);
}

const TermRates* RateSet::find(Term upper, Term lower) const {
    for (const auto& e : entries)
        if (e.upper == upper && e.lower == lower) return &e;
    return nullptr;
}

double RateSet::downward(Term upper, Term lower) const {
    const TermRates* e = find(upper, lower);
    return e ? e->r_spont + e->r_stim : 0.0;
}

double RateSet::upward(Term upper, Term lower) const {
    const TermRates* e = find(upper, lower);
    return e ? e->r_abs : 0.0;
}

RateSet rates(const Illumination& ill, const TransitionTable& table,
              const LevelScheme& scheme) {
    RateSet out;
    for (const auto& pair : table.radiative()) {
        const LineId line{pair.upper.n, pair.lower.n};
        const double omega = table.line_omega(line);
        const double nbar = ill.photon_occupation(line, omega);
        TermRates r;
        r.upper = pair.upper;
        r.lower = pair.lower;
        r.nbar = nbar;
        r.r_spont = pair.einstein_a;
        r.r_stim = pair.einstein_a * nbar;
        r.r_abs = pair.einstein_a * nbar * scheme.term_weight(pair.upper) /
                  scheme.term_weight(pair.lower);
        out.entries.push_back(r);
    }
    return out;
}

}  // namespace hydropol
