#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctt/cli.hpp"
#include "ctt/transfer.hpp"

namespace py = pybind11;
using namespace ctt;

namespace {

// pybind11 holders cannot be shared_ptr<const T>
struct TowerHandle {
  TowerPtr t;
};

TowerPtr root_of_pi(const TowerPtr& t, int d) {
  std::vector<Vec> poly(static_cast<size_t>(d), t->zero(t->top()));
  poly[0] = t->neg(t->top(), t->uniformizer());
  return extend_eisenstein(t, poly);
}

std::string rat(const Rat& r) { return r.str(); }

py::dict herbrand_dict(const TowerPtr& t) {
  auto h = ramification_breaks(t);
  py::list breaks;
  for (const auto& [b, j] : h.breaks) breaks.append(py::make_tuple(rat(b), rat(j)));
  py::dict d;
  d["breaks"] = breaks;
  d["e"] = h.e;
  d["different"] = h.different_val;
  d["phi"] = h.phi.str();
  d["psi"] = h.psi.str();
  return d;
}

py::dict report_dict(const Report& r) {
  py::dict d;
  d["name"] = r.name;
  d["pass"] = r.pass;
  d["checked"] = r.checked;
  d["witness"] = r.witness;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact close-field torus transfer";

  using H = TowerHandle;
  py::class_<H>(m, "Tower")
      .def_property_readonly("e", [](const H& h) { return h.t->e(); })
      .def_property_readonly("f", [](const H& h) { return h.t->f(); })
      .def_property_readonly("p", [](const H& h) { return h.t->p(); })
      .def_property_readonly("precision", [](const H& h) { return h.t->precision(); })
      .def_property_readonly("top", [](const H& h) { return h.t->top(); });

  m.def("qp", [](int p, int M) { return H{Tower::base(make_base(Kind::mixed, p, 1, M))}; }, py::arg("p"), py::arg("M"));
  m.def("laurent", [](int p, int M, int f) { return H{Tower::base(make_base(Kind::equal, p, f, M))}; }, py::arg("p"),
        py::arg("M"), py::arg("f") = 1);
  m.def("root_of_pi", [](const H& h, int d) { return H{root_of_pi(h.t, d)}; }, "Eisenstein step x^d - pi",
        py::arg("tower"), py::arg("d"));
  m.def("unramified", [](const H& h, int d) { return H{extend_unramified(h.t, d)}; }, py::arg("tower"), py::arg("d"));
  m.def("herbrand", [](const H& h) { return herbrand_dict(h.t); }, py::arg("tower"));
  m.def("psi", [](const H& h, int64_t num, int64_t den) { return rat(ramification_breaks(h.t).psi(Rat(num) / den)); },
        py::arg("tower"), py::arg("num"), py::arg("den") = 1);
  m.def("l_one", [](const H& h, int64_t l) { return l_one(ramification_breaks(h.t), l); }, py::arg("tower"),
        py::arg("l"));

  py::class_<ClosePairCertificate>(m, "Certificate")
      .def_readonly("level", &ClosePairCertificate::level)
      .def_readonly("note", &ClosePairCertificate::note);
  m.def("certify", [](const H& a, const H& b, int l) { return certify_close(a.t, b.t, l); }, py::arg("F"),
        py::arg("F2"), py::arg("l"));

  py::class_<TorusSpec>(m, "Torus")
      .def_readonly("label", &TorusSpec::label)
      .def_property_readonly("rank", [](const TorusSpec& T) { return T.lattice.rank; })
      .def_property_readonly("weakly_induced", [](const TorusSpec& T) { return weakly_induced(T); });
  m.def("split_torus", [](const H& F, const H& L, size_t rank) { return split_torus(F.t, L.t, rank); }, py::arg("F"),
        py::arg("L"), py::arg("rank") = 1);
  m.def("weil_restriction", [](const H& F, const H& E) { return weil_restriction(F.t, E.t); }, py::arg("F"), py::arg("E"));
  m.def("norm_one", [](const H& F, const H& E) { return norm_one(F.t, E.t); }, py::arg("F"), py::arg("E"));

  py::class_<ClosePairDatum>(m, "ClosePair")
      .def_readonly("l1", &ClosePairDatum::l1)
      .def_property_readonly("level", &ClosePairDatum::level);
  m.def("close_pair", [](const ClosePairCertificate& c, const TorusSpec& T) { return close_pair(c, T); }, py::arg("cert"),
        py::arg("torus"));

  m.def(
      "standard_iso",
      [](const ClosePairDatum& d, int64_t num, int64_t den) {
        auto iso = build_standard_iso(d, Rat(num) / den);
        py::dict out;
        out["ok"] = iso.ok;
        out["witness"] = iso.witness;
        out["source"] = iso.P.points.abstract().str();
        out["target"] = iso.P2.points.abstract().str();
        out["uniqueness"] = report_dict(verify_uniqueness(d, iso));
        out["kottwitz"] = report_dict(verify_kottwitz(d, iso));
        return out;
      },
      py::arg("pair"), py::arg("num"), py::arg("den") = 1);

  m.def(
      "run_scenario",
      [](const std::string& text, int stage_degree, size_t max_enumeration) {
        cli::Options o;
        o.stage_degree = stage_degree;
        o.max_enumeration = max_enumeration;
        cli::RunResult r;
        try {
          r = cli::run_scenario(cli::parse_scenario(text), o);
        } catch (const cli::ParseError& e) {
          r.exit_code = 2;
          r.body = std::string("error: ") + e.what() + "\n";
        }
        py::dict d;
        d["body"] = r.body;
        d["footer"] = r.footer;
        d["exit_code"] = r.exit_code;
        d["passed"] = r.passed;
        d["total"] = r.total;
        return d;
      },
      py::arg("text"), py::arg("stage_degree") = 0, py::arg("max_enumeration") = 10000);
  m.def("explain", &cli::explain, py::arg("name"));

  py::register_exception<cli::ParseError>(m, "ScenarioError", PyExc_ValueError);
}
