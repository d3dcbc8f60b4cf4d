#include "hydropol/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hydropol/toy_model.hpp"

namespace hydropol {

std::string FieldDistribution::label() const {
    switch (kind) {
        case Kind::Deterministic: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "deterministic(%.1f,%.1f)",
                          theta_e * 180.0 / M_PI, phi_e * 180.0 / M_PI);
            return buf;
        }
        case Kind::RandomAzimuth: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "random-azimuth(%.1f)", theta_e * 180.0 / M_PI);
            return buf;
        }
        case Kind::Isotropic:
            return "isotropic";
    }
    return "?";
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        // recompute derivative at the converged node
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return {x, w};
}

std::vector<double> log_grid_vm(double e_min_vcm, double e_max_vcm, int n) {
    if (n < 2 || e_min_vcm <= 0.0 || e_max_vcm <= e_min_vcm)
        throw std::invalid_argument("bad field grid");
    std::vector<double> out(n);
    const double l0 = std::log10(e_min_vcm), l1 = std::log10(e_max_vcm);
    for (int i = 0; i < n; ++i)
        out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1.0)) * constants::vcm_to_vm;
    return out;
}

namespace {

struct Node {
    Eigen::Vector3d e_dir;
    double weight = 1.0;
    bool ring = false;  // average the emissivity over a view ring about z
};

struct NodeResult {
    bool ok = true;
    std::string error;
    std::map<LineId, StokesResult> stokes;
    double a_2p = 0.0;
    double imbalance = 0.0;
    double residual = 0.0;
};

std::vector<Node> distribution_nodes(const FieldDistribution& d, bool brute_force) {
    std::vector<Node> nodes;
    auto dir = [](double th, double ph) {
        return Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                               std::cos(th));
    };
    switch (d.kind) {
        case FieldDistribution::Kind::Deterministic:
            nodes.push_back({dir(d.theta_e, d.phi_e), 1.0, false});
            break;
        case FieldDistribution::Kind::RandomAzimuth:
            if (brute_force) {
                for (int k = 0; k < d.n_azimuth; ++k)
                    nodes.push_back(
                        {dir(d.theta_e, 2.0 * M_PI * k / d.n_azimuth), 1.0 / d.n_azimuth,
                         false});
            } else {
                nodes.push_back({dir(d.theta_e, 0.0), 1.0, true});
            }
            break;
        case FieldDistribution::Kind::Isotropic: {
            auto [u, w] = gauss_legendre(d.n_polar);
            for (int i = 0; i < d.n_polar; ++i) {
                double theta = std::acos(u[i]);
                if (brute_force) {
                    for (int k = 0; k < d.n_azimuth; ++k)
                        nodes.push_back({dir(theta, 2.0 * M_PI * k / d.n_azimuth),
                                         0.5 * w[i] / d.n_azimuth, false});
                } else {
                    nodes.push_back({dir(theta, 0.0), 0.5 * w[i], true});
                }
            }
            break;
        }
    }
    return nodes;
}

NodeResult solve_node(const SweepRequest& req, double e_vm, const Node& node) {
    NodeResult out;
    try {
        FieldConfig f;
        f.e_field_vm = e_vm * node.e_dir;
        f.b_field_tesla = req.b_field_tesla;
        AssembleOptions aopts;
        aopts.dimension_cap = req.dimension_cap;
        SolveInfo si;
        DensityMatrix rho = stationary_solve(assemble(req.scheme, req.illumination, f, aopts),
                                             req.solver, &si);
        out.residual = si.residual;

        auto obs = observables(rho);
        out.a_2p = obs.a_2p;
        if (obs.term_populations.count({2, 1}) && obs.term_populations.count({2, 0}))
            out.imbalance = obs.term_populations.at({2, 1}) -
                            3.0 * obs.term_populations.at({2, 0});

        const int n_ring = node.ring ? req.distribution.n_azimuth : 1;
        for (LineId line : req.lines) {
            StokesResult acc;
            for (int k = 0; k < n_ring; ++k) {
                ViewingGeometry g = req.geometry;
                if (node.ring) {
                    Eigen::Matrix3d rz =
                        rotation_matrix(-2.0 * M_PI * k / n_ring, 0.0, 0.0);
                    g.direction = rz * req.geometry.direction;
                    g.reference = rz * req.geometry.reference;
                }
                StokesResult s = stokes_line(rho, line, g);
                acc.i += s.i / n_ring;
                acc.q += s.q / n_ring;
                acc.u += s.u / n_ring;
                acc.v += s.v / n_ring;
            }
            out.stokes[line] = acc;
        }
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

}  // namespace

SweepResult sweep(const SweepRequest& req) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!req.scheme) throw std::invalid_argument("sweep needs a scheme");
    for (size_t i = 1; i < req.e_grid_vm.size(); ++i)
        if (!(req.e_grid_vm[i] > req.e_grid_vm[i - 1]))
            throw std::invalid_argument("field grid must be strictly increasing");
    if (req.distribution.kind != FieldDistribution::Kind::Deterministic &&
        req.b_field_tesla.head<2>().norm() > 1e-15 * (1.0 + req.b_field_tesla.norm()))
        throw std::invalid_argument(
            "orientation distributions require B along the quantization axis");

    const std::vector<Node> nodes = distribution_nodes(req.distribution,
                                                       req.brute_force_azimuth);
    struct Task {
        int row, node;
    };
    std::vector<Task> tasks;
    for (size_t r = 0; r < req.e_grid_vm.size(); ++r)
        for (size_t k = 0; k < nodes.size(); ++k)
            tasks.push_back({static_cast<int>(r), static_cast<int>(k)});

    std::vector<std::vector<NodeResult>> results(req.e_grid_vm.size());
    for (auto& v : results) v.resize(nodes.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            results[t.row][t.node] =
                solve_node(req, req.e_grid_vm[t.row], nodes[t.node]);
        }
    };
    const int n_workers = std::max(1, req.workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepResult out;
    for (size_t r = 0; r < req.e_grid_vm.size(); ++r) {
        SweepRow row;
        row.e_vm = req.e_grid_vm[r];
        row.omega_e = constants::omega_e_per_vm * row.e_vm;
        row.distribution = req.distribution.label();
        for (size_t k = 0; k < nodes.size(); ++k) {
            const NodeResult& nr = results[r][k];
            if (!nr.ok) {
                row.ok = false;
                row.error = "node " + std::to_string(k) + ": " + nr.error;
                continue;
            }
            out.max_residual = std::max(out.max_residual, nr.residual);
            row.a_2p += nodes[k].weight * nr.a_2p;
            row.imbalance += nodes[k].weight * nr.imbalance;
            for (LineId line : req.lines) {
                const StokesResult& s = nr.stokes.at(line);
                StokesResult& acc = row.stokes[line];
                acc.i += nodes[k].weight * s.i;
                acc.q += nodes[k].weight * s.q;
                acc.u += nodes[k].weight * s.u;
                acc.v += nodes[k].weight * s.v;
            }
        }
        if (row.ok && row.imbalance != 0.0)
            row.normalized_alignment = row.a_2p / row.imbalance;
        out.rows.push_back(std::move(row));
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                           .count();
    return out;
}

SweepResult reproduce_figure(FigureId id, FigureOptions opts) {
    SchemeOptions sopts;
    sopts.lamb_shift_2s = opts.lamb_shift_2s;
    auto full = std::make_shared<LevelScheme>(opts.n_max, true, sopts);
    auto ill = Illumination::diluted_planck(20000.0, 0.5);

    if (id == FigureId::Fig2) {
        SweepRequest req;
        req.scheme = full;
        req.illumination = ill;
        req.distribution = {};  // deterministic, E along z
        const double e_max = opts.e_max_vcm > 0.0 ? opts.e_max_vcm : 1e6;
        req.e_grid_vm = log_grid_vm(opts.e_min_vcm, e_max, opts.n_points);
        req.workers = opts.workers;
        SweepResult res = sweep(req);
        // restricted-model curve via the closed form
        ToyRates tr = toy_rates_from(ill);
        for (SweepRow& row : res.rows) {
            ToySolution ts = toy_solve(tr, row.omega_e);
            auto [a, c] = toy_closed_form(tr, ts);
            row.extras["a_2p_toy"] = a;
            row.extras["norm_toy"] =
                ts.imbalance != 0.0 ? a / ts.imbalance : 0.0;
            row.extras["c_2s2p_toy"] = c;
        }
        return res;
    }

    // fig3 / fig4 share the field configuration
    const double e_max = opts.e_max_vcm > 0.0 ? opts.e_max_vcm : 1e7;
    const double b_gauss = opts.b_override ? opts.b_gauss : 1000.0;
    SweepRequest req;
    req.scheme = full;
    req.illumination = ill;
    req.b_field_tesla = Eigen::Vector3d(0, 0, b_gauss * constants::gauss_to_tesla);
    req.e_grid_vm = log_grid_vm(opts.e_min_vcm, e_max, opts.n_points);
    req.workers = opts.workers;
    req.lines = {LineId{2, 1}};
    req.geometry = (id == FigureId::Fig3) ? ViewingGeometry::from_angles(M_PI / 2.0, 0.0)
                                          : ViewingGeometry::from_angles(0.0, 0.0);

    SweepResult out;
    std::vector<FieldDistribution> dists;
    for (double deg : {0.0, 30.0, 60.0, 90.0})
        dists.push_back({FieldDistribution::Kind::RandomAzimuth, deg * M_PI / 180.0, 0.0});
    dists.push_back({FieldDistribution::Kind::Isotropic});
    if (opts.n_polar > 0)
        for (auto& d : dists) d.n_polar = opts.n_polar;
    for (const FieldDistribution& d : dists) {
        req.distribution = d;
        SweepResult part = sweep(req);
        out.max_residual = std::max(out.max_residual, part.max_residual);
        out.wall_seconds += part.wall_seconds;
        for (auto& row : part.rows) out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace hydropol
