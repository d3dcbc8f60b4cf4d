#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "hydropol/emission.hpp"
#include "hydropol/se_solver.hpp"
#include "hydropol/toy_model.hpp"
#include "hydropol/wigner.hpp"

namespace py = pybind11;
using namespace hydropol;

namespace {

HalfInt half_from(double v) {
    double t = 2.0 * v;
    double r = std::round(t);
    if (std::abs(t - r) > 1e-9)
        throw py::value_error("angular momentum must be integer or half-integer");
    return HalfInt::from_twice(static_cast<int>(r));
}

Eigen::Vector3d vec3(const std::vector<double>& v, const char* name) {
    if (v.size() != 3) throw py::value_error(std::string(name) + " needs 3 components");
    return {v[0], v[1], v[2]};
}

struct PySolution {
    DensityMatrix rho;
    Observables obs;
    SolveInfo info;

    double term_population(const std::string& label) const {
        auto term = parse_term(label);
        if (!term) throw py::value_error("unknown term " + label);
        auto it = obs.term_populations.find(*term);
        if (it == obs.term_populations.end()) throw py::value_error("term not in scheme");
        return it->second;
    }

    py::dict stokes(const std::string& line_label, double theta_deg, double phi_deg) const {
        auto line = parse_line(line_label);
        if (!line) throw py::value_error("unknown line " + line_label);
        auto geom = ViewingGeometry::from_angles(theta_deg * M_PI / 180.0,
                                                 phi_deg * M_PI / 180.0);
        StokesResult s = stokes_line(rho, *line, geom);
        py::dict d;
        d["i"] = s.i;
        d["q"] = s.q;
        d["u"] = s.u;
        d["v"] = s.v;
        d["blp"] = s.i > 0.0 ? blp(s) : 0.0;
        d["bcp"] = s.i > 0.0 ? bcp(s) : 0.0;
        return d;
    }
};

struct PyModel {
    std::shared_ptr<const LevelScheme> scheme;
    Illumination ill = Illumination::diluted_planck(20000.0, 0.5);

    PyModel(int n_max, bool fine_structure, double lamb_shift_mhz,
            std::optional<std::vector<std::string>> terms, const Illumination& illumination)
        : ill(illumination) {
        SchemeOptions opts;
        opts.lamb_shift_2s = 2.0 * M_PI * lamb_shift_mhz * 1e6;
        if (terms) {
            std::vector<Term> filter;
            for (const auto& label : *terms) {
                auto t = parse_term(label);
                if (!t) throw py::value_error("unknown term " + label);
                filter.push_back(*t);
            }
            opts.term_filter = std::move(filter);
        }
        scheme = std::make_shared<LevelScheme>(n_max, fine_structure, opts);
    }

    int dimension() const { return scheme->dyad_dimension(); }
    int state_count() const { return static_cast<int>(scheme->states().size()); }

    PySolution solve(const std::vector<double>& e_vcm,
                     const std::vector<double>& b_gauss) const {
        FieldConfig f;
        f.e_field_vm = constants::vcm_to_vm * vec3(e_vcm, "e_vcm");
        f.b_field_tesla = constants::gauss_to_tesla * vec3(b_gauss, "b_gauss");
        SolveInfo info;
        DensityMatrix rho = stationary_solve(assemble(scheme, ill, f), {}, &info);
        Observables obs = observables(rho);
        return PySolution{std::move(rho), std::move(obs), info};
    }
};

}  // namespace

PYBIND11_MODULE(_hydropol, m) {
    m.doc() = "stationary hydrogen density matrix and scattered-line polarization";
    m.attr("__version__") = "0.1.0";

    m.def("wigner3j", [](double j1, double j2, double j3, double m1, double m2, double m3) {
        return wigner3j(half_from(j1), half_from(j2), half_from(j3), half_from(m1),
                        half_from(m2), half_from(m3)).value;
    });
    m.def("wigner6j", [](double j1, double j2, double j3, double l1, double l2, double l3) {
        return wigner6j(half_from(j1), half_from(j2), half_from(j3), half_from(l1),
                        half_from(l2), half_from(l3)).value;
    });
    m.def("clebsch_gordan", [](double j1, double m1, double j2, double m2, double j, double mm) {
        return clebsch_gordan(half_from(j1), half_from(m1), half_from(j2), half_from(m2),
                              half_from(j), half_from(mm));
    });
    m.def("reduced_rotation", [](double j, double mm, double mp, double beta) {
        return reduced_rotation(half_from(j), half_from(mm), half_from(mp), beta);
    });

    m.def("einstein_a", [](const std::string& upper, const std::string& lower) {
        auto u = parse_term(upper), l = parse_term(lower);
        if (!u || !l) throw py::value_error("unknown term label");
        return einstein_A(*u, *l);
    });
    m.def("radial_dipole", &radial_dipole);
    m.def("planck", &planck, py::arg("t_kelvin"), py::arg("nu_hz"));

    py::class_<Illumination>(m, "Illumination")
        .def_static("diluted_planck", &Illumination::diluted_planck, py::arg("t_kelvin"),
                    py::arg("dilution"))
        .def_static("planck_te", &Illumination::planck_te, py::arg("t_kelvin"))
        .def_static("per_line", [](const std::map<std::string, double>& lines) {
            std::map<LineId, double> m2;
            for (const auto& [label, jbar] : lines) {
                auto id = parse_line(label);
                if (!id) throw py::value_error("unknown line " + label);
                m2[*id] = jbar;
            }
            return Illumination::per_line(m2);
        });

    py::class_<ToyRates>(m, "ToyRates")
        .def(py::init<>())
        .def_readwrite("r12", &ToyRates::r12)
        .def_readwrite("r13", &ToyRates::r13)
        .def_readwrite("r21", &ToyRates::r21)
        .def_readwrite("r23", &ToyRates::r23)
        .def_readwrite("r31", &ToyRates::r31)
        .def_readwrite("r32", &ToyRates::r32);

    py::class_<ToySolution>(m, "ToySolution")
        .def_readonly("n_1s", &ToySolution::n_1s)
        .def_readonly("n_2s", &ToySolution::n_2s)
        .def_readonly("n_2p", &ToySolution::n_2p)
        .def_readonly("n_3p", &ToySolution::n_3p)
        .def_readonly("a_2p", &ToySolution::a_2p)
        .def_readonly("c_2s2p", &ToySolution::c_2s2p)
        .def_readonly("imbalance", &ToySolution::imbalance)
        .def_readonly("residual", &ToySolution::residual);

    m.def("toy_solve", &toy_solve, py::arg("rates"), py::arg("omega_e"));
    m.def("toy_closed_form",
          [](const ToyRates& r, const ToySolution& s) { return toy_closed_form(r, s); });
    m.def("two_term_factor", &two_term_factor);
    m.def("toy_rates_from", &toy_rates_from);

    py::class_<PySolution>(m, "Solution")
        .def("term_population", &PySolution::term_population)
        .def("stokes", &PySolution::stokes, py::arg("line"), py::arg("theta_deg"),
             py::arg("phi_deg") = 0.0)
        .def_property_readonly("a_2p", [](const PySolution& s) { return s.obs.a_2p; })
        .def_property_readonly("c_2s2p", [](const PySolution& s) { return s.obs.c_2s2p; })
        .def_property_readonly("max_rel_multipole",
                               [](const PySolution& s) { return s.obs.max_rel_multipole; })
        .def_property_readonly("residual", [](const PySolution& s) { return s.info.residual; })
        .def_property_readonly("trace", [](const PySolution& s) { return s.rho.trace(); });

    py::class_<PyModel>(m, "Model")
        .def(py::init<int, bool, double, std::optional<std::vector<std::string>>,
                      const Illumination&>(),
             py::arg("n_max") = 4, py::arg("fine_structure") = true,
             py::arg("lamb_shift_mhz") = 0.0, py::arg("terms") = std::nullopt,
             py::arg("illumination") = Illumination::diluted_planck(20000.0, 0.5))
        .def_property_readonly("dimension", &PyModel::dimension)
        .def_property_readonly("state_count", &PyModel::state_count)
        .def("solve", &PyModel::solve, py::arg("e_vcm") = std::vector<double>{0, 0, 0},
             py::arg("b_gauss") = std::vector<double>{0, 0, 0});
}
