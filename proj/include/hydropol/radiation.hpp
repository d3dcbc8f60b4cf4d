#pragma once

#include <map>
#include <vector>

#include "hydropol/hydrogen.hpp"

namespace hydropol {

// Planck specific intensity B_T(nu), W m^-2 Hz^-1 sr^-1.
double planck(double T_kelvin, double nu_hz);

// Broadband, unpolarized, zero-anisotropy illumination. Only the mean
// intensity per line can be represented; the type has no anisotropy channel.
class Illumination {
public:
    enum class Mode { DilutedPlanck, PlanckTE, PerLine };

    static Illumination diluted_planck(double T_kelvin, double dilution);
    static Illumination planck_te(double T_kelvin);
    static Illumination per_line(std::map<LineId, double> mean_intensities);

    Mode mode() const { return mode_; }
    double temperature() const { return T_; }
    double dilution() const { return dilution_; }

    // Mean intensity for a line at angular frequency omega (rad/s). Per-line
    // mode ignores omega and throws if the line has no entry.
    double mean_intensity(LineId line, double omega) const;

    // Photon occupation number n-bar at the line frequency.
    double photon_occupation(LineId line, double omega) const;

private:
    Mode mode_ = Mode::DilutedPlanck;
    double T_ = 0.0;
    double dilution_ = 0.0;
    std::map<LineId, double> per_line_;
};

// Radiative rate scalars per dipole-allowed term pair, at term granularity.
struct TermRates {
    Term upper, lower;
    double nbar = 0.0;     // photon occupation at the line frequency
    double r_spont = 0.0;  // Einstein A, per upper state
    double r_stim = 0.0;   // A * nbar, per upper state
    double r_abs = 0.0;    // A * nbar * g_u / g_l, per lower state
};

struct RateSet {
    std::vector<TermRates> entries;
    const TermRates* find(Term upper, Term lower) const;
    double downward(Term upper, Term lower) const;  // r_spont + r_stim, 0 if absent
    double upward(Term upper, Term lower) const;    // r_abs, 0 if absent
};

RateSet rates(const Illumination& ill, const TransitionTable& table,
              const LevelScheme& scheme);

}  // namespace hydropol
