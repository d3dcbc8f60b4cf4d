#include "hydropol/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "hydropol/emission.hpp"
#include "hydropol/sweep.hpp"
#include "hydropol/toy_model.hpp"
#include "hydropol/wigner.hpp"

namespace hydropol::selftest {

namespace {

namespace k = constants;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << "FAILED " << what;
        }
    }
    void note(const std::string& what) {
        detail << (detail.str().empty() ? "" : "; ") << what;
    }
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::shared_ptr<const LevelScheme> full_scheme(const Options&, SchemeOptions sopts = {}) {
    return std::make_shared<LevelScheme>(4, true, sopts);
}

Illumination half_planck() { return Illumination::diluted_planck(20000.0, 0.5); }

FieldConfig field(Eigen::Vector3d e_vm, Eigen::Vector3d b_t = Eigen::Vector3d::Zero()) {
    FieldConfig f;
    f.e_field_vm = std::move(e_vm);
    f.b_field_tesla = std::move(b_t);
    return f;
}

Illumination lyman_beta_only(int n_max) {
    auto scheme = build_levels(n_max, false);
    TransitionTable table(scheme);
    std::map<LineId, double> m;
    for (LineId line : table.lines()) m[line] = 0.0;
    m[{3, 1}] = 0.5 * planck(20000.0, shell_omega(3, 1) / (2 * M_PI));
    return Illumination::per_line(m);
}

// shared expensive runs
struct Fixtures {
    const Options& opts;
    std::optional<SweepResult> fig2;
    std::optional<SweepResult> fig3;
    double fig3_wall = 0.0;

    explicit Fixtures(const Options& o) : opts(o) {}

    const SweepResult& get_fig2() {
        if (!fig2) {
            FigureOptions fo;
            fo.workers = opts.workers;
            fo.n_points = opts.quick ? 20 : 40;
            fig2 = reproduce_figure(FigureId::Fig2, fo);
        }
        return *fig2;
    }
    const SweepResult& get_fig3() {
        if (!fig3) {
            FigureOptions fo;
            fo.workers = opts.workers;
            fo.n_points = opts.quick ? 6 : 40;
            fo.n_polar = opts.quick ? 8 : 0;
            double t0 = now_seconds();
            fig3 = reproduce_figure(FigureId::Fig3, fo);
            fig3_wall = now_seconds() - t0;
        }
        return *fig3;
    }
};

using CriterionFn = std::function<void(Check&, Fixtures&)>;

void criterion_toy_oracle(Check& c, Fixtures&) {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> logr(4.0, 9.5), logw(3.0, 13.0);
    double t0 = now_seconds();
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
        ToyRates r{std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng)),
                   std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng)),
                   std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng))};
        double w = std::pow(10.0, logw(rng));
        ToySolution s = toy_solve(r, w);
        auto [a, cf] = toy_closed_form(r, s);
        double scale_a = std::max(std::abs(a), 1e-300);
        double scale_c = std::max(std::abs(cf), 1e-300);
        worst = std::max(worst, std::abs(s.a_2p - a) / scale_a);
        worst = std::max(worst, std::abs(s.c_2s2p - cf) / scale_c);
    }
    double wall = now_seconds() - t0;
    c.require(worst <= 1e-12, "closed-form agreement (worst " + std::to_string(worst) + ")");
    c.require(wall < 1.0, "runtime " + std::to_string(wall) + " s < 1 s");
    std::ostringstream os;
    os.precision(3);
    os << "worst rel diff " << worst << ", " << wall << " s for 1000 rate sets";
    c.note(os.str());
}

void criterion_asymptote(Check& c, Fixtures& fx) {
    const double target = 1.0 / std::sqrt(6.0);
    ToyRates tr = toy_rates_from(half_planck());
    double max_r = std::max({tr.r12, tr.r13, tr.r21, tr.r23, tr.r31, tr.r32});
    ToySolution s = toy_solve(tr, 1e6 * max_r);
    double norm_toy = s.a_2p / s.imbalance;
    c.require(std::abs(norm_toy - target) <= 1e-6,
              "toy normalized alignment at 1e6 max(R)");

    double t0 = now_seconds();
    SweepRequest req;
    req.scheme = full_scheme(fx.opts);
    req.illumination = half_planck();
    req.e_grid_vm = log_grid_vm(0.1, 1e6, 20);
    req.workers = fx.opts.workers;
    SweepResult res = sweep(req);
    double wall = now_seconds() - t0;
    double norm_full = res.rows.back().normalized_alignment;
    c.require(std::abs(norm_full - target) <= 1e-3,
              "full-model normalized asymptote (got " + std::to_string(norm_full) + ")");
    c.require(wall < 120.0, "20-point grid runtime " + std::to_string(wall) + " s < 2 min");
    std::ostringstream os;
    os.precision(10);
    os << "toy " << norm_toy << ", full " << norm_full << ", target " << target;
    c.note(os.str());
}

void criterion_two_term(Check& c, Fixtures&) {
    ToyRates r = toy_rates_from(half_planck());
    r.r13 = r.r31 = r.r23 = r.r32 = 0.0;
    c.require(two_term_factor(r) == 0.0, "two_term_factor identically zero");
    double worst = 0.0;
    for (double lw = 3.0; lw <= 13.0; lw += 0.5) {
        ToySolution s = toy_solve(r, std::pow(10.0, lw));
        worst = std::max({worst, std::abs(s.a_2p), std::abs(s.c_2s2p)});
    }
    // the dyadic solver with Lyman-alpha-only pumping of the restricted scheme
    auto toy = restrict_to_toy(LevelScheme(3, false));
    std::map<LineId, double> m{{LineId{2, 1}, 0.5 * planck(20000.0, shell_omega(2, 1) / (2 * M_PI))},
                               {LineId{3, 1}, 0.0},
                               {LineId{3, 2}, 0.0}};
    auto lya = Illumination::per_line(m);
    for (double lw = 3.0; lw <= 13.0; lw += 2.0) {
        DensityMatrix rho = stationary_solve(
            assemble(toy, lya, field({0, 0, std::pow(10.0, lw) / k::omega_e_per_vm})));
        auto obs = observables(rho);
        worst = std::max({worst, std::abs(obs.a_2p), std::abs(obs.c_2s2p)});
    }
    c.require(worst <= 1e-12, "alignment/coherence zero across the grid");
    std::ostringstream os;
    os.precision(3);
    os << "worst |a|,|c| " << worst;
    c.note(os.str());
}

void criterion_te_null(Check& c, Fixtures& fx) {
    double worst_mult = 0.0, worst_pop = 0.0;
    for (double T : {5000.0, 20000.0, 50000.0}) {
        auto scheme = full_scheme(fx.opts);
        std::vector<FieldConfig> fields = {
            field({0, 0, 0}),
            field({0, 0, 1e7}),
            field({1e7 / std::sqrt(2.0), 0, 1e7 / std::sqrt(2.0)}, {0, 0, 1.0}),
            field({3e5, 2e5, 1e5}, {0.1, 0.0, 0.3})};
        for (const FieldConfig& f : fields) {
            DensityMatrix rho =
                stationary_solve(assemble(scheme, Illumination::planck_te(T), f));
            worst_mult = std::max(worst_mult, max_relative_term_multipole(rho));
            auto obs = observables(rho);
            for (Term t : scheme->terms()) {
                double de = scheme->shell_energy(t.n) - scheme->shell_energy(1);
                double gratio = static_cast<double>(scheme->term_weight(t)) /
                                scheme->term_weight({1, 0});
                double expect = gratio * std::exp(-de / (k::k_boltzmann * T));
                double got = obs.term_populations.at(t) / obs.term_populations.at({1, 0});
                worst_pop = std::max(worst_pop, std::abs(got / expect - 1.0));
            }
        }
    }
    c.require(worst_mult <= 1e-10, "K>0 multipoles vanish under TE illumination");
    c.require(worst_pop <= 1e-8, "Boltzmann term populations");
    std::ostringstream os;
    os.precision(3);
    os << "worst multipole " << worst_mult << ", worst population rel err " << worst_pop;
    c.note(os.str());
}

void criterion_magnetic_null(Check& c, Fixtures& fx) {
    double worst = 0.0;
    auto scheme = full_scheme(fx.opts);
    for (double gauss : {10.0, 1000.0, 10000.0}) {
        DensityMatrix rho = stationary_solve(assemble(
            scheme, half_planck(), field({0, 0, 0}, {0, 0, gauss * k::gauss_to_tesla})));
        worst = std::max(worst, max_relative_term_multipole(rho));
    }
    c.require(worst <= 1e-10, "B-only multipoles");
    std::ostringstream os;
    os.precision(3);
    os << "worst relative multipole " << worst;
    c.note(os.str());
}

void criterion_dimension(Check& c, Fixtures&) {
    int dim = LevelScheme(4, true).dyad_dimension();
    c.require(dim == 1416, "dyad dimension " + std::to_string(dim) + " == 1416");
}

void criterion_lyb_anchors(Check& c, Fixtures& fx) {
    auto view = ViewingGeometry::from_angles(M_PI / 2.0, 0.0);
    // strong field, restricted model: fully polarized along E
    auto toy = restrict_to_toy(LevelScheme(3, false));
    auto lyb = lyman_beta_only(3);
    for (double we : {1e10, 1e12}) {
        DensityMatrix rho =
            stationary_solve(assemble(toy, lyb, field({0, 0, we / k::omega_e_per_vm})));
        double p = blp(stokes_emissivity(rho, {2, 1}, {1, 0}, view));
        c.require(std::abs(p + 1.0) <= 1e-3,
                  "restricted-model strong field blp (got " + std::to_string(p) + ")");
    }
    // same restricted term set with fine structure, far above the splittings
    SchemeOptions fs_opts;
    fs_opts.term_filter = std::vector<Term>{{1, 0}, {2, 0}, {2, 1}, {3, 1}};
    auto toy_fs = std::make_shared<LevelScheme>(3, true, fs_opts);
    DensityMatrix rho_fs =
        stationary_solve(assemble(toy_fs, lyb, field({0, 0, 1e13 / k::omega_e_per_vm})));
    double p_fs = blp(stokes_emissivity(rho_fs, {2, 1}, {1, 0}, view));
    c.require(std::abs(p_fs + 1.0) <= 1e-3,
              "fine-structure strong field blp (got " + std::to_string(p_fs) + ")");

    // vanishing field with fine structure and the physical 2S-2P interval
    SchemeOptions lamb;
    lamb.lamb_shift_2s = 2.0 * M_PI * 1057.845e6;
    auto scheme = full_scheme(fx.opts, lamb);
    auto lyb_full = lyman_beta_only(4);
    double prev = 0.0;
    for (double we : {1e4, 1e3}) {
        DensityMatrix rho = stationary_solve(
            assemble(scheme, lyb_full, field({0, 0, we / k::omega_e_per_vm})));
        double p = blp(stokes_emissivity(rho, {2, 1}, {1, 0}, view));
        c.require(std::abs(p - 0.3288) <= 0.003,
                  "weak-field blp (got " + std::to_string(p) + ")");
        if (prev != 0.0)
            c.require(std::abs(p - prev) < 1e-4, "weak-field plateau");
        prev = p;
    }
    std::ostringstream os;
    os.precision(6);
    os << "strong-field blp " << p_fs << ", weak-field blp " << prev;
    c.note(os.str());
}

void criterion_bcp_null(Check& c, Fixtures& fx) {
    auto scheme = full_scheme(fx.opts);
    double worst = 0.0;
    SweepRequest req;
    req.scheme = scheme;
    req.illumination = half_planck();
    req.e_grid_vm = log_grid_vm(10.0, 1e6, 3);
    req.workers = fx.opts.workers;
    TransitionTable table(*scheme);
    req.lines = table.lines();
    std::vector<FieldDistribution> dists = {
        {FieldDistribution::Kind::Deterministic, 0.0, 0.0},
        {FieldDistribution::Kind::Deterministic, 1.1, 0.6},
        {FieldDistribution::Kind::RandomAzimuth, M_PI / 3.0, 0.0},
        {FieldDistribution::Kind::Isotropic, 0.0, 0.0, 8, 8}};
    for (const auto& dist : dists) {
        req.distribution = dist;
        for (double theta : {0.0, M_PI / 2.0, 1.0}) {
            req.geometry = ViewingGeometry::from_angles(theta, 0.4);
            SweepResult res = sweep(req);
            for (const SweepRow& row : res.rows) {
                c.require(row.ok, "sweep row " + row.distribution);
                for (const auto& [line, s] : row.stokes)
                    if (s.i > 0.0) worst = std::max(worst, std::abs(s.v / s.i));
            }
        }
    }
    c.require(worst <= 1e-10, "E-only circular polarization");
    std::ostringstream os;
    os.precision(3);
    os << "worst |bcp| " << worst;
    c.note(os.str());
}

void criterion_isotropic_symmetry(Check& c, Fixtures& fx) {
    // B = 0: quadrature-averaged polarization vanishes
    SweepRequest req;
    req.scheme = full_scheme(fx.opts);
    req.illumination = half_planck();
    req.distribution = {FieldDistribution::Kind::Isotropic, 0.0, 0.0, 8,
                        fx.opts.quick ? 8 : 12};
    req.e_grid_vm = log_grid_vm(100.0, 1e6, 3);
    req.workers = fx.opts.workers;
    double worst0 = 0.0;
    for (const SweepRow& row : sweep(req).rows) {
        c.require(row.ok, "isotropic B=0 row");
        const StokesResult& s = row.stokes.at({2, 1});
        worst0 = std::max({worst0, std::abs(s.q / s.i), std::abs(s.v / s.i)});
    }
    c.require(worst0 <= 1e-8, "isotropic distribution with B = 0");

    // B = 1000 G: nonzero at intermediate strengths, vanishing at the top
    const SweepResult& fig3 = fx.get_fig3();
    double peak = 0.0, last = 0.0;
    for (const SweepRow& row : fig3.rows) {
        if (row.distribution != "isotropic") continue;
        c.require(row.ok, "fig3 isotropic row");
        double p = blp(row.stokes.at({2, 1}));
        peak = std::max(peak, std::abs(p));
        last = std::abs(p);
    }
    c.require(peak > 1e-4, "isotropic blp nonzero at intermediate E");
    c.require(last < 1e-4, "isotropic blp vanishes at the largest grid E (got " +
                               std::to_string(last) + ")");
    std::ostringstream os;
    os.precision(3);
    os << "B=0 worst " << worst0 << "; B=1000 G peak |blp| " << peak << ", last " << last;
    c.note(os.str());
}

void criterion_fig2_shape(Check& c, Fixtures& fx) {
    const SweepResult& fig2 = fx.get_fig2();
    const double target = 1.0 / std::sqrt(6.0);
    // The full model carries a genuine sub-1e-4 wiggle deep in the
    // fine-structure-dominated weak-field region (channel competition below
    // figure resolution); monotonicity is asserted at curve scale.
    const double mono_slack = 1e-4 * target;
    double prev_full = -1.0, prev_toy = -1.0, max_diff = 0.0;
    for (const SweepRow& row : fig2.rows) {
        c.require(row.ok, "fig2 row");
        double nf = row.normalized_alignment;
        double nt = row.extras.at("norm_toy");
        c.require(nf >= prev_full - mono_slack, "full curve monotone");
        c.require(nt >= prev_toy - 1e-12, "toy curve monotone");
        prev_full = nf;
        prev_toy = nt;
        max_diff = std::max(max_diff, std::abs(nf - nt));
    }
    c.require(fig2.rows.front().normalized_alignment < 1e-3, "full curve starts at zero");
    c.require(fig2.rows.front().extras.at("norm_toy") < 1e-3, "toy curve starts at zero");
    c.require(std::abs(fig2.rows.back().normalized_alignment - target) < 1e-3,
              "full curve reaches the asymptote");
    c.require(std::abs(fig2.rows.back().extras.at("norm_toy") - target) < 1e-3,
              "toy curve reaches the asymptote");
    c.require(max_diff > 0.01, "curves differ at intermediate strengths");
    std::ostringstream os;
    os.precision(4);
    os << "max |full - toy| " << max_diff;
    c.note(os.str());
}

void criterion_property_suites(Check& c, Fixtures& fx) {
    // wigner orthogonality, randomized to j = 6
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dj(0, 12);
    double worst3j = 0.0;
    for (int it = 0; it < 200; ++it) {
        HalfInt j1 = HalfInt::from_twice(dj(rng)), j2 = HalfInt::from_twice(dj(rng));
        for (int t3 = std::abs(j1.twice() - j2.twice()); t3 <= j1.twice() + j2.twice();
             t3 += 2) {
            HalfInt j3 = HalfInt::from_twice(t3);
            for (int tm3 = -t3; tm3 <= t3; tm3 += 2) {
                HalfInt m3 = HalfInt::from_twice(tm3);
                double sum = 0.0;
                for (int tm1 = -j1.twice(); tm1 <= j1.twice(); tm1 += 2) {
                    HalfInt m1 = HalfInt::from_twice(tm1);
                    HalfInt m2 = -m1 - m3;
                    if (!valid_projection(j2, m2)) continue;
                    double w = wigner3j(j1, j2, j3, m1, m2, m3).value;
                    sum += (t3 + 1.0) * w * w;
                }
                worst3j = std::max(worst3j, std::abs(sum - 1.0));
            }
            break;  // one j3 per draw is enough coverage
        }
    }
    c.require(worst3j <= 1e-12, "3j orthogonality");

    // round trip
    auto scheme = std::make_shared<LevelScheme>(3, true);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DensityMatrix rho(scheme);
    for (int n : scheme->shells()) {
        auto& m = rho.block(n);
        for (int r = 0; r < m.rows(); ++r)
            for (int col = 0; col < m.cols(); ++col) m(r, col) = Complex(u(rng), u(rng));
        m = 0.5 * (m + m.adjoint()).eval();
    }
    DensityMatrix back = from_tensors(to_tensors(rho));
    double rt = 0.0;
    for (int n : scheme->shells())
        rt = std::max(rt, (rho.block(n) - back.block(n)).cwiseAbs().maxCoeff());
    c.require(rt <= 1e-13, "tensor round trip");

    // stationary solutions: trace, hermiticity, positivity
    double worst_tr = 0.0, worst_h = 0.0, worst_pop = 0.0;
    for (double we : {0.0, 1e9, 1e12}) {
        DensityMatrix sol = stationary_solve(
            assemble(scheme, half_planck(),
                     field({0, 0, we / k::omega_e_per_vm}, {0, 0, 0.05})));
        worst_tr = std::max(worst_tr, std::abs(sol.trace() - 1.0));
        worst_h = std::max(worst_h, sol.hermiticity_error());
        worst_pop = std::min(worst_pop, sol.min_population());
    }
    c.require(worst_tr <= 1e-12, "trace of stationary solutions");
    c.require(worst_h <= 1e-12, "hermiticity of stationary solutions");
    c.require(worst_pop >= -1e-10, "positivity of stationary populations");

    // rotational covariance of the n <= 3 solver
    FieldConfig fz = field({0, 0, 5e3});
    DensityMatrix rho_z = stationary_solve(assemble(scheme, half_planck(), fz));
    Eigen::Matrix3d r = rotation_matrix(0.6, 0.8, -0.3);
    DensityMatrix rho_r = stationary_solve(
        assemble(scheme, half_planck(), field(r * fz.e_field_vm)));
    DensityMatrix expect = rotated(rho_z, 0.6, 0.8, -0.3);
    double cov = 0.0;
    for (int n : scheme->shells())
        cov = std::max(cov, (rho_r.block(n) - expect.block(n)).cwiseAbs().maxCoeff());
    c.require(cov <= 1e-9, "rotational covariance");

    // quadrature invariants
    auto [x, w] = gauss_legendre(24);
    double wsum = 0.0;
    for (double wi : w) wsum += 0.5 * wi;
    c.require(std::abs(wsum - 1.0) <= 1e-14, "quadrature weights sum to one");
    SweepRequest req;
    req.scheme = scheme;
    req.illumination = half_planck();
    req.distribution = {FieldDistribution::Kind::Isotropic, 0.0, 0.0, 8, 12};
    req.e_grid_vm = {2e4};
    req.workers = fx.opts.workers;
    SweepResult coarse = sweep(req);
    req.distribution.n_polar = 24;
    req.distribution.n_azimuth = 16;
    SweepResult fine = sweep(req);
    double dq = std::abs(coarse.rows[0].stokes.at({2, 1}).q -
                         fine.rows[0].stokes.at({2, 1}).q) /
                fine.rows[0].stokes.at({2, 1}).i;
    c.require(dq <= 1e-6, "quadrature convergence (B = 0)");
    std::ostringstream os;
    os.precision(3);
    os << "orthogonality " << worst3j << ", round trip " << rt << ", covariance " << cov
       << ", quadrature " << dq;
    c.note(os.str());
}

void criterion_performance(Check& c, Fixtures& fx) {
    auto scheme = std::make_shared<LevelScheme>(4, true);
    double t0 = now_seconds();
    EvolutionOperator op = assemble(scheme, half_planck(), field({0, 0, 1e5}));
    DensityMatrix rho = stationary_solve(op);
    double wall = now_seconds() - t0;
    c.require(wall < 5.0, "1416-dimensional assemble+solve " + std::to_string(wall) + " s");

    if (fx.opts.quick) {
        c.note("assemble+solve " + std::to_string(wall) + " s; fig3 timing skipped (quick)");
        return;
    }
    fx.get_fig3();
    c.require(fx.fig3_wall < 1800.0,
              "fig3 reproduction " + std::to_string(fx.fig3_wall) + " s < 30 min");
    std::ostringstream os;
    os.precision(4);
    os << "assemble+solve " << wall << " s, fig3 " << fx.fig3_wall << " s with "
       << fx.opts.workers << " workers";
    c.note(os.str());
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& opts, std::ostream& log) {
    struct Entry {
        int id;
        const char* name;
        CriterionFn fn;
    };
    const std::vector<Entry> entries = {
        {1, "toy-model oracle equivalence", criterion_toy_oracle},
        {2, "strong-field asymptote", criterion_asymptote},
        {3, "two-term null theorem", criterion_two_term},
        {4, "TE null theorem", criterion_te_null},
        {5, "magnetic null theorem", criterion_magnetic_null},
        {6, "dimension anchor", criterion_dimension},
        {7, "lyman-beta quenching anchors", criterion_lyb_anchors},
        {8, "electric-only BCP null", criterion_bcp_null},
        {9, "isotropic-field symmetry", criterion_isotropic_symmetry},
        {10, "fig2 shape reproduction", criterion_fig2_shape},
        {11, "property suites", criterion_property_suites},
        {12, "performance envelope", criterion_performance},
    };

    Fixtures fx(opts);
    std::vector<CriterionResult> out;
    for (const Entry& e : entries) {
        CriterionResult r;
        r.id = e.id;
        r.name = e.name;
        double t0 = now_seconds();
        Check c;
        try {
            e.fn(c, fx);
        } catch (const std::exception& ex) {
            c.ok = false;
            c.detail << "exception: " << ex.what();
        }
        r.pass = c.ok;
        r.detail = c.detail.str();
        r.seconds = now_seconds() - t0;
        out.push_back(r);
        log << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name
            << " (" << r.seconds << " s)" << (r.detail.empty() ? "" : " -- " + r.detail)
            << "\n"
            << std::flush;
    }
    return out;
}

int summarize(const std::vector<CriterionResult>& results, std::ostream& os) {
    int failures = 0;
    for (const auto& r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name << "\n";
        if (!r.pass) ++failures;
    }
    os << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
       << "\n";
    return failures;
}

}  // namespace hydropol::selftest
