#include "hydropol/density_matrix.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hydropol/wigner.hpp"

namespace hydropol {

DensityMatrix::DensityMatrix(std::shared_ptr<const LevelScheme> scheme)
    : scheme_(std::move(scheme)) {
    for (int n : scheme_->shells()) {
        int d = scheme_->shell_dim(n);
        blocks_[n] = Eigen::MatrixXcd::Zero(d, d);
    }
}

Eigen::MatrixXcd& DensityMatrix::block(int n) {
    auto it = blocks_.find(n);
    if (it == blocks_.end()) throw std::invalid_argument("no such shell");
    return it->second;
}

const Eigen::MatrixXcd& DensityMatrix::block(int n) const {
    auto it = blocks_.find(n);
    if (it == blocks_.end()) throw std::invalid_argument("no such shell");
    return it->second;
}

Complex DensityMatrix::get(const State& a, const State& b) const {
    if (a.n != b.n) return 0.0;  // inter-shell dyads are not represented
    return block(a.n)(scheme_->index_in_shell(a), scheme_->index_in_shell(b));
}

void DensityMatrix::set(const State& a, const State& b, Complex v) {
    if (a.n != b.n) throw std::invalid_argument("inter-shell dyads are not represented");
    block(a.n)(scheme_->index_in_shell(a), scheme_->index_in_shell(b)) = v;
}

double DensityMatrix::trace() const {
    double t = 0.0;
    for (const auto& [n, m] : blocks_) t += m.trace().real();
    return t;
}

void DensityMatrix::scale(double f) {
    for (auto& [n, m] : blocks_) m *= f;
}

double DensityMatrix::hermiticity_error() const {
    double e = 0.0;
    for (const auto& [n, m] : blocks_)
        e = std::max(e, (m - m.adjoint()).cwiseAbs().maxCoeff());
    return e;
}

void DensityMatrix::hermitize() {
    for (auto& [n, m] : blocks_) m = 0.5 * (m + m.adjoint()).eval();
}

double DensityMatrix::min_population() const {
    double p = std::numeric_limits<double>::max();
    for (const auto& [n, m] : blocks_) p = std::min(p, m.diagonal().real().minCoeff());
    return p;
}

Eigen::VectorXcd DensityMatrix::to_vector() const {
    Eigen::VectorXcd v(scheme_->dyad_dimension());
    int k = 0;
    for (int n : scheme_->shells()) {
        const auto& m = block(n);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) v[k++] = m(r, c);
    }
    return v;
}

DensityMatrix DensityMatrix::from_vector(std::shared_ptr<const LevelScheme> scheme,
                                         const Eigen::VectorXcd& v) {
    DensityMatrix rho(std::move(scheme));
    if (v.size() != rho.scheme().dyad_dimension())
        throw std::invalid_argument("vector length does not match dyad dimension");
    int k = 0;
    for (int n : rho.scheme().shells()) {
        auto& m = rho.block(n);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) m(r, c) = v[k++];
    }
    return rho;
}

void DensityMatrix::write_text(std::ostream& os) const {
    os << "hydropol-density-matrix v1\n";
    os << "n_max " << scheme_->n_max() << " fine_structure " << scheme_->fine_structure()
       << " shells " << scheme_->shells().size() << "\n";
    os.precision(17);
    for (int n : scheme_->shells()) {
        const auto& m = block(n);
        os << "shell " << n << " dim " << m.rows() << "\n";
        for (int r = 0; r < m.rows(); ++r) {
            for (int c = 0; c < m.cols(); ++c) {
                if (c) os << ' ';
                os << m(r, c).real() << ' ' << m(r, c).imag();
            }
            os << '\n';
        }
    }
}

Complex StatisticalTensors::get(const Key& k) const {
    auto it = components_.find(k);
    return it == components_.end() ? Complex(0.0) : it->second;
}

void StatisticalTensors::set(const Key& k, Complex v) { components_[k] = v; }

void StatisticalTensors::write_text(std::ostream& os) const {
    os << "hydropol-statistical-tensors v1\n";
    os.precision(17);
    for (const auto& [k, v] : components_)
        os << "component " << k.n << ' ' << k.L << ' ' << k.twoJ << ' ' << k.Lp << ' '
           << k.twoJp << ' ' << k.K << ' ' << k.Q << ' ' << v.real() << ' ' << v.imag()
           << '\n';
}

namespace {

// distinct (L, J) groups of a shell, with their state offsets
struct Group {
    int L;
    HalfInt J;
    int offset;  // index of M = -J within the shell block
};

std::vector<Group> shell_groups(const LevelScheme& scheme, int n) {
    std::vector<Group> out;
    auto states = scheme.shell_states(n);
    for (size_t i = 0; i < states.size();) {
        Group g{states[i].L, states[i].J, static_cast<int>(i)};
        out.push_back(g);
        i += static_cast<size_t>(states[i].J.twice() + 1);
    }
    return out;
}

}  // namespace

StatisticalTensors to_tensors(const DensityMatrix& rho) {
    StatisticalTensors t(rho.scheme_ptr());
    const auto& scheme = rho.scheme();
    for (int n : scheme.shells()) {
        const auto& m = rho.block(n);
        auto groups = shell_groups(scheme, n);
        for (const Group& ga : groups)
            for (const Group& gb : groups) {
                const HalfInt J = ga.J, Jp = gb.J;
                for (int K = std::abs((J - Jp).as_int()); K <= (J + Jp).as_int(); ++K) {
                    for (int Q = -K; Q <= K; ++Q) {
                        Complex sum = 0.0;
                        for (int tm = -J.twice(); tm <= J.twice(); tm += 2) {
                            int tmp = tm - 2 * Q;  // Q = M - M'
                            if (tmp < -Jp.twice() || tmp > Jp.twice()) continue;
                            HalfInt M = HalfInt::from_twice(tm);
                            HalfInt Mp = HalfInt::from_twice(tmp);
                            double w = phase(J - M) * std::sqrt(2.0 * K + 1.0) *
                                       wigner3j(J, Jp, HalfInt::whole(K), M, -Mp,
                                                HalfInt::whole(-Q)).value;
                            if (w == 0.0) continue;
                            sum += w * m(ga.offset + (tm + J.twice()) / 2,
                                         gb.offset + (tmp + Jp.twice()) / 2);
                        }
                        t.set({n, ga.L, J.twice(), gb.L, Jp.twice(), K, Q}, sum);
                    }
                }
            }
    }
    return t;
}

DensityMatrix from_tensors(const StatisticalTensors& t) {
    DensityMatrix rho(t.scheme_ptr());
    const auto& scheme = t.scheme();
    for (int n : scheme.shells()) {
        auto& m = rho.block(n);
        auto groups = shell_groups(scheme, n);
        for (const Group& ga : groups)
            for (const Group& gb : groups) {
                const HalfInt J = ga.J, Jp = gb.J;
                for (int tm = -J.twice(); tm <= J.twice(); tm += 2)
                    for (int tmp = -Jp.twice(); tmp <= Jp.twice(); tmp += 2) {
                        HalfInt M = HalfInt::from_twice(tm);
                        HalfInt Mp = HalfInt::from_twice(tmp);
                        int Q = (tm - tmp) / 2;
                        Complex sum = 0.0;
                        for (int K = std::abs(Q); K <= (J + Jp).as_int(); ++K) {
                            Complex comp = t.get({n, ga.L, J.twice(), gb.L, Jp.twice(), K, Q});
                            if (comp == Complex(0.0)) continue;
                            double w = phase(J - M) * std::sqrt(2.0 * K + 1.0) *
                                       wigner3j(J, Jp, HalfInt::whole(K), M, -Mp,
                                                HalfInt::whole(-Q)).value;
                            sum += w * comp;
                        }
                        m(ga.offset + (tm + J.twice()) / 2, gb.offset + (tmp + Jp.twice()) / 2) =
                            sum;
                    }
            }
    }
    return rho;
}

Complex term_tensor(const StatisticalTensors& t, int n, int L, int Lp, int K, int Q) {
    const auto& scheme = t.scheme();
    if (!scheme.has_term({n, L}) || !scheme.has_term({n, Lp}))
        throw std::invalid_argument("term_tensor: term not in scheme");

    if (!scheme.fine_structure())
        return t.get({n, L, 2 * L, Lp, 2 * Lp, K, Q});

    const HalfInt S = scheme.spin();
    const HalfInt hL = HalfInt::whole(L), hLp = HalfInt::whole(Lp), hK = HalfInt::whole(K);
    Complex sum = 0.0;
    for (int twoJ = std::abs(2 * L - 1); twoJ <= 2 * L + 1; twoJ += 2)
        for (int twoJp = std::abs(2 * Lp - 1); twoJp <= 2 * Lp + 1; twoJp += 2) {
            HalfInt J = HalfInt::from_twice(twoJ), Jp = HalfInt::from_twice(twoJp);
            double w = wigner6j(hL, hLp, hK, Jp, J, S).value;
            if (w == 0.0) continue;
            double coef = phase(hK + hLp + Jp + S) *
                          std::sqrt((twoJ + 1.0) * (twoJp + 1.0)) * w;
            sum += coef * t.get({n, L, twoJ, Lp, twoJp, K, Q});
        }
    return sum;
}

Observables observables(const DensityMatrix& rho) {
    Observables out;
    const auto& scheme = rho.scheme();
    StatisticalTensors t = to_tensors(rho);

    for (int n : scheme.shells())
        for (const Group& g : shell_groups(scheme, n)) {
            double nj = std::sqrt(g.J.twice() + 1.0) *
                        t.get({n, g.L, g.J.twice(), g.L, g.J.twice(), 0, 0}).real();
            out.level_populations[{n, g.L, g.J.twice()}] = nj;
            out.term_populations[{n, g.L}] += nj;
        }

    // Cross-parity term tensors recoupled with fine structure differ by
    // (-1)^(L+L') from the spinless ones under a spin-spectator embedding; the
    // reported coherence keeps the restricted-model sign convention.
    if (scheme.has_term({2, 0}) && scheme.has_term({2, 1}))
        out.c_2s2p = (scheme.fine_structure() ? -1.0 : 1.0) * term_tensor(t, 2, 0, 1, 1, 0);
    if (scheme.has_term({2, 1})) out.a_2p = term_tensor(t, 2, 1, 1, 2, 0).real();
    out.max_rel_multipole = max_relative_term_multipole(rho);
    return out;
}

double max_relative_term_multipole(const DensityMatrix& rho, int k_min) {
    const auto& scheme = rho.scheme();
    StatisticalTensors t = to_tensors(rho);

    // K=0 scales: per (L,J) level and per term
    std::map<std::tuple<int, int, int>, double> lvl0;
    std::map<Term, double> k0;
    double k0_max = 0.0;
    for (int n : scheme.shells()) {
        auto states = scheme.shell_states(n);
        for (const State& s : states) {
            auto key = std::make_tuple(s.n, s.L, s.J.twice());
            if (lvl0.count(key)) continue;
            lvl0[key] = std::abs(t.get({s.n, s.L, s.J.twice(), s.L, s.J.twice(), 0, 0}).real());
        }
    }
    for (Term term : scheme.terms()) {
        double v = std::abs(term_tensor(t, term.n, term.L, term.L, 0, 0).real());
        k0[term] = v;
        k0_max = std::max(k0_max, v);
    }
    if (k0_max == 0.0) return 0.0;
    const double floor2 = 1e-30 * k0_max * k0_max;

    double worst = 0.0;
    // level components
    for (const auto& [key, v] : t.components()) {
        if (key.K < k_min) continue;
        double sa = lvl0[{key.n, key.L, key.twoJ}];
        double sb = lvl0[{key.n, key.Lp, key.twoJp}];
        worst = std::max(worst, std::abs(v) / std::sqrt(std::max(sa * sb, floor2)));
    }
    // term components
    for (Term a : scheme.terms())
        for (Term b : scheme.terms()) {
            if (a.n != b.n) continue;
            for (int K = std::max(k_min, std::abs(a.L - b.L)); K <= a.L + b.L; ++K)
                for (int Q = -K; Q <= K; ++Q) {
                    double v = std::abs(term_tensor(t, a.n, a.L, b.L, K, Q));
                    double den = std::sqrt(std::max(k0[a] * k0[b], floor2));
                    worst = std::max(worst, v / den);
                }
        }
    return worst;
}

}  // namespace hydropol
