#include "hydropol/hydrogen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "hydropol/constants.hpp"

namespace hydropol {

namespace {

constexpr char kLLetters[] = "SPDFGH";

bool valid_term(Term t) {
    return t.n >= 1 && t.n <= 9 && t.L >= 0 && t.L < t.n;
}

long double hyp2f1_terminating(int a_neg, int b_neg, int c, long double x) {
    // 2F1(-a, -b; c; x) with a_neg = a >= 0, b_neg = b >= 0: a finite sum.
    long double term = 1.0L, sum = 1.0L;
    const int kmax = std::min(a_neg, b_neg);
    for (int k = 0; k < kmax; ++k) {
        term *= static_cast<long double>(-a_neg + k) * (-b_neg + k) /
                ((c + k) * (k + 1.0L)) * x;
        sum += term;
    }
    return sum;
}

long double lfact(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

std::string Term::label() const {
    return std::to_string(n) + kLLetters[L];
}

std::optional<Term> parse_term(const std::string& label) {
    if (label.size() < 2) return std::nullopt;
    if (!std::isdigit(static_cast<unsigned char>(label[0]))) return std::nullopt;
    int n = label[0] - '0';
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(label[1])));
    const char* p = std::find(std::begin(kLLetters), std::end(kLLetters) - 1, c);
    if (p == std::end(kLLetters) - 1) return std::nullopt;
    Term t{n, static_cast<int>(p - std::begin(kLLetters))};
    if (!valid_term(t) || label.size() != 2) return std::nullopt;
    return t;
}

LevelScheme::LevelScheme(int n_max, bool fine_structure, SchemeOptions opts)
    : n_max_(n_max),
      fine_structure_(fine_structure),
      spin_(fine_structure ? HalfInt::from_twice(1) : HalfInt::whole(0)),
      opts_(std::move(opts)) {
    if (n_max < 1 || n_max > 6) throw std::invalid_argument("n_max must be in 1..6");

    auto keep = [&](Term t) {
        if (!opts_.term_filter) return true;
        return std::find(opts_.term_filter->begin(), opts_.term_filter->end(), t) !=
               opts_.term_filter->end();
    };
    if (opts_.term_filter)
        for (Term t : *opts_.term_filter)
            if (!valid_term(t) || t.n > n_max)
                throw std::invalid_argument("term filter entry outside scheme: " + t.label());

    for (int n = 1; n <= n_max; ++n) {
        int first = static_cast<int>(states_.size());
        for (int L = 0; L < n; ++L) {
            if (!keep({n, L})) continue;
            terms_.push_back({n, L});
            std::vector<HalfInt> js;
            if (fine_structure) {
                if (L > 0) js.push_back(HalfInt::from_twice(2 * L - 1));
                js.push_back(HalfInt::from_twice(2 * L + 1));
            } else {
                js.push_back(HalfInt::whole(L));
            }
            for (HalfInt J : js)
                for (int tm = -J.twice(); tm <= J.twice(); tm += 2)
                    states_.push_back({n, L, J, HalfInt::from_twice(tm)});
        }
        int count = static_cast<int>(states_.size()) - first;
        if (count > 0) {
            shells_.push_back(n);
            shell_span_[n] = {first, count};
        }
    }

    offsets_.reserve(states_.size());
    for (const State& s : states_) {
        double off = fine_structure_ ? fine_structure_offset(s.n, s.J) : 0.0;
        if (s.n == 2 && s.L == 0) off += opts_.lamb_shift_2s;
        offsets_.push_back(off);
    }
}

LevelScheme build_levels(int n_max, bool fine_structure, SchemeOptions opts) {
    return LevelScheme(n_max, fine_structure, std::move(opts));
}

int LevelScheme::shell_dim(int n) const {
    auto it = shell_span_.find(n);
    return it == shell_span_.end() ? 0 : it->second.second;
}

std::span<const State> LevelScheme::shell_states(int n) const {
    auto it = shell_span_.find(n);
    if (it == shell_span_.end()) return {};
    return {states_.data() + it->second.first, static_cast<size_t>(it->second.second)};
}

int LevelScheme::index_in_shell(const State& s) const {
    auto block = shell_states(s.n);
    for (size_t i = 0; i < block.size(); ++i)
        if (block[i].L == s.L && block[i].J == s.J && block[i].M == s.M)
            return static_cast<int>(i);
    throw std::invalid_argument("state not in scheme");
}

int LevelScheme::dyad_dimension() const {
    int d = 0;
    for (int n : shells_) d += shell_dim(n) * shell_dim(n);
    return d;
}

bool LevelScheme::has_term(Term t) const {
    return std::find(terms_.begin(), terms_.end(), t) != terms_.end();
}

int LevelScheme::term_weight(Term t) const {
    int w = 0;
    for (const State& s : shell_states(t.n))
        if (s.L == t.L) ++w;
    return w;
}

double LevelScheme::energy_offset(const State& s) const {
    auto it = shell_span_.find(s.n);
    if (it == shell_span_.end()) throw std::invalid_argument("state not in scheme");
    return offsets_[it->second.first + index_in_shell(s)];
}

double LevelScheme::shell_energy(int n) const {
    return -constants::rydberg / (static_cast<double>(n) * n);
}

double radial_dipole(int n, int L, int np, int Lp) {
    if (!valid_term({n, L}) || !valid_term({np, Lp}))
        throw std::invalid_argument("invalid quantum numbers in radial_dipole");
    if (std::abs(L - Lp) != 1)
        throw std::invalid_argument("radial_dipole requires |L - L'| = 1");

    // Put the larger L on the (n, l) side of the Gordon formula.
    if (Lp > L) {
        std::swap(n, np);
        std::swap(L, Lp);
    }
    const int l = L;

    if (n == np) return -1.5 * n * std::sqrt(static_cast<double>(n * n - l * l));

    const int nr = n - l - 1;
    const int nrp = np - l;
    const long double x = -4.0L * n * np / (static_cast<long double>(n - np) * (n - np));

    long double pref = (((np - l) % 2 == 0) ? 1.0L : -1.0L) / (4.0L * lfact(2 * l - 1));
    pref *= std::sqrt(lfact(n + l) * lfact(np + l - 1) / (lfact(n - l - 1) * lfact(np - l)));
    pref *= std::pow(4.0L * n * np, l + 1);
    pref *= std::pow(static_cast<long double>(n - np), n + np - 2 * l - 2);
    pref /= std::pow(static_cast<long double>(n + np), n + np);

    const long double ratio2 = std::pow((n - np) / static_cast<long double>(n + np), 2);
    const long double f1 = hyp2f1_terminating(nr, nrp, 2 * l, x);
    const long double f2 = hyp2f1_terminating(nr + 2, nrp, 2 * l, x);
    return static_cast<double>(pref * (f1 - ratio2 * f2));
}

double einstein_A(Term upper, Term lower) {
    if (!valid_term(upper) || !valid_term(lower))
        throw std::invalid_argument("invalid term in einstein_A");
    if (upper.n <= lower.n)
        throw std::invalid_argument("einstein_A requires the upper term above the lower");
    if (std::abs(upper.L - lower.L) != 1)
        throw std::invalid_argument("einstein_A: electric-dipole forbidden pair " +
                                    upper.label() + " -> " + lower.label());

    namespace k = constants;
    const double w = shell_omega(upper.n, lower.n);
    const double r = radial_dipole(upper.n, upper.L, lower.n, lower.L);
    const double kappa = w * w * w * k::e0 * k::e0 * k::a0 * k::a0 /
                         (3.0 * M_PI * k::eps0 * k::hbar * std::pow(k::c_light, 3));
    return kappa * r * r * std::max(upper.L, lower.L) / (2.0 * upper.L + 1.0);
}

double fine_structure_offset(int n, HalfInt J) {
    if (n < 1 || J.is_integer() || J.twice() < 1 || J.twice() > 2 * n - 1)
        throw std::invalid_argument("invalid (n, J) in fine_structure_offset");

    namespace k = constants;
    auto dirac = [&](HalfInt j) {
        const long double kappa = j.value() + 0.5L;
        const long double alpha = k::alpha_fs;
        const long double delta = kappa - std::sqrt(kappa * kappa - alpha * alpha);
        const long double f =
            1.0L / std::sqrt(1.0L + std::pow(alpha / (n - delta), 2));
        return static_cast<double>(k::m_electron * k::c_light * k::c_light * (f - 1.0L));
    };

    double centroid = 0.0;
    for (int L = 0; L < n; ++L) {
        if (L > 0) centroid += 2.0 * L * dirac(HalfInt::from_twice(2 * L - 1));
        centroid += (2.0 * L + 2.0) * dirac(HalfInt::from_twice(2 * L + 1));
    }
    centroid /= 2.0 * n * n;
    return (dirac(J) - centroid) / k::hbar;
}

double shell_omega(int n_upper, int n_lower) {
    if (n_upper <= n_lower) throw std::invalid_argument("shell_omega needs n_upper > n_lower");
    const double inv = 1.0 / (static_cast<double>(n_lower) * n_lower) -
                       1.0 / (static_cast<double>(n_upper) * n_upper);
    return constants::rydberg * inv / constants::hbar;
}

std::string LineId::label() const {
    static const char* series[] = {"lyman", "balmer", "paschen", "brackett", "pfund"};
    static const char* greek[] = {"alpha", "beta", "gamma", "delta", "epsilon"};
    if (n_lower >= 1 && n_lower <= 5 && n_upper - n_lower >= 1 && n_upper - n_lower <= 5)
        return std::string(series[n_lower - 1]) + "-" + greek[n_upper - n_lower - 1];
    return std::to_string(n_upper) + "-" + std::to_string(n_lower);
}

std::optional<LineId> parse_line(const std::string& label) {
    for (int nl = 1; nl <= 5; ++nl)
        for (int nu = nl + 1; nu <= 6; ++nu) {
            LineId id{nu, nl};
            if (label == id.label() ||
                label == std::to_string(nu) + "-" + std::to_string(nl))
                return id;
        }
    return std::nullopt;
}

TransitionTable::TransitionTable(const LevelScheme& scheme) {
    const auto& terms = scheme.terms();
    for (Term u : terms) {
        for (Term l : terms) {
            if (u.n > l.n && std::abs(u.L - l.L) == 1) {
                radiative_.push_back({u, l, radial_dipole(u.n, u.L, l.n, l.L),
                                      einstein_A(u, l)});
                LineId id{u.n, l.n};
                if (std::find(lines_.begin(), lines_.end(), id) == lines_.end())
                    lines_.push_back(id);
            }
            if (u.n == l.n && u.L + 1 == l.L)
                stark_.push_back({u, l, radial_dipole(u.n, u.L, l.n, l.L)});
        }
    }
    std::sort(lines_.begin(), lines_.end());
}

std::vector<RadiativePair> TransitionTable::line_pairs(LineId line) const {
    std::vector<RadiativePair> out;
    for (const auto& p : radiative_)
        if (p.upper.n == line.n_upper && p.lower.n == line.n_lower) out.push_back(p);
    return out;
}

double TransitionTable::line_omega(LineId line) const {
    return shell_omega(line.n_upper, line.n_lower);
}

const RadiativePair* TransitionTable::find(Term upper, Term lower) const {
    for (const auto& p : radiative_)
        if (p.upper == upper && p.lower == lower) return &p;
    return nullptr;
}

double TransitionTable::stark_radial(Term a, Term b) const {
    for (const auto& p : stark_)
        if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return p.radial;
    return 0.0;
}

}  // namespace hydropol
