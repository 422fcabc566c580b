#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xamm/amm_math.hpp"
#include "xamm/errors.hpp"
#include "xamm/oracle.hpp"
#include "xamm/pool_state.hpp"
#include "xamm/relay_sim.hpp"
#include "xamm/snapshot.hpp"
#include "xamm/swap_protocol.hpp"

namespace py = pybind11;
using namespace xamm;

namespace {

Report run_with(const Scenario& base, std::optional<std::uint64_t> seed) {
    Scenario s = base;
    if (seed) s.relay.seed = *seed;
    return run_scenario(s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cross-chain AMM math and swap simulator";

    auto amm_error = py::register_exception<AmmError>(m, "AmmError", PyExc_ValueError);
    // pybind11 matches translators newest-first, so register subclasses after the base
    py::register_exception<DomainError>(m, "DomainError", amm_error.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", amm_error.ptr());
    py::register_exception<InsufficientLiquidity>(m, "InsufficientLiquidity", amm_error.ptr());
    py::register_exception<SlippageExceeded>(m, "SlippageExceeded", amm_error.ptr());
    py::register_exception<UnknownAsset>(m, "UnknownAsset", amm_error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", amm_error.ptr());
    py::register_exception<InsufficientShares>(m, "InsufficientShares", amm_error.ptr());

    m.attr("DUST_FLOOR") = kDustFloor;
    m.attr("DEFAULT_TOLERANCE") = kDefaultValueTolerance;
    m.attr("BISECTION_BUDGET") = kBisectionBudget;

    py::class_<Curve>(m, "Curve")
        .def_static("volatile", &Curve::volatile_curve, py::arg("weight") = 1.0)
        .def_static("stable", &Curve::stable, py::arg("weight"), py::arg("x_stable"),
                    py::arg("amplification"))
        .def_property_readonly("kind", [](const Curve& c) { return std::string(to_string(c.kind)); })
        .def_readonly("weight", &Curve::weight)
        .def_readonly("x_stable", &Curve::x_stable)
        .def_readonly("amplification", &Curve::amplification)
        .def("scaled", &Curve::scaled)
        .def(py::self == py::self)
        .def("__repr__", [](const Curve& c) {
            if (!c.is_stable()) return "Curve.volatile(" + std::to_string(c.weight) + ")";
            return "Curve.stable(" + std::to_string(c.weight) + ", " + std::to_string(c.x_stable) +
                   ", " + std::to_string(c.amplification) + ")";
        });

    py::class_<Inversion>(m, "Inversion")
        .def_readonly("amount", &Inversion::amount)
        .def_readonly("remaining", &Inversion::remaining)
        .def_readonly("iterations", &Inversion::iterations)
        .def_readonly("residual", &Inversion::residual);

    m.def("price", &price, py::arg("curve"), py::arg("x"));
    m.def("antiderivative", &antiderivative, py::arg("curve"), py::arg("x"));
    m.def("value_between", &value_between, py::arg("curve"), py::arg("x_from"), py::arg("x_to"));
    m.def("invert_out", &invert_out, py::arg("curve"), py::arg("balance"), py::arg("value"),
          py::arg("tol") = kDefaultValueTolerance, py::arg("dust_floor") = kDustFloor);
    m.def("invert_out_detailed", &invert_out_detailed, py::arg("curve"), py::arg("balance"),
          py::arg("value"), py::arg("tol") = kDefaultValueTolerance,
          py::arg("dust_floor") = kDustFloor);
    m.def("atomic_swap_out", &atomic_swap_out, py::arg("curve_in"), py::arg("balance_in"),
          py::arg("amount_in"), py::arg("curve_out"), py::arg("balance_out"),
          py::arg("tol") = kDefaultValueTolerance, py::arg("dust_floor") = kDustFloor);
    m.def("initial_shares",
          [](const std::vector<double>& balances) { return initial_shares(balances); });

    py::module_ oracle = m.def_submodule("oracle", "Independent reference computations");
    oracle.def("quad_value",
               [](const Curve& c, double a, double b, double tol) {
                   const auto r = oracle::quad_value(c, a, b, tol);
                   return py::make_tuple(r.value, r.error_estimate);
               },
               py::arg("curve"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-12);
    oracle.def("brute_invert", &oracle::brute_invert, py::arg("curve"), py::arg("balance"),
               py::arg("value"), py::arg("tol"));
    oracle.def("constant_product_out", &oracle::constant_product_out);

    py::class_<SwapMessage>(m, "SwapMessage")
        .def_readonly("swap_id", &SwapMessage::swap_id)
        .def_readonly("source_chain", &SwapMessage::source_chain)
        .def_readonly("dest_chain", &SwapMessage::dest_chain)
        .def_readonly("asset_in", &SwapMessage::asset_in)
        .def_readonly("asset_out", &SwapMessage::asset_out)
        .def_readonly("value", &SwapMessage::value)
        .def_readonly("min_out", &SwapMessage::min_out)
        .def_property_readonly("status", [](const SwapMessage& msg) {
            return std::string(to_string(msg.status));
        })
        .def(py::self == py::self);
    m.def("encode_message", &encode_message);
    m.def("decode_message", [](const std::string& wire) { return decode_message(wire); });

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("fee_rate", &Scenario::fee_rate)
        .def_property_readonly("seed", [](const Scenario& s) { return s.relay.seed; })
        .def_property_readonly("chains", [](const Scenario& s) {
            std::vector<std::string> ids;
            for (const auto& c : s.chains) ids.push_back(c.id);
            return ids;
        });
    m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); });
    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::class_<Report>(m, "Report")
        .def_property_readonly("passed", &Report::passed)
        .def_property_readonly("quiescent", &Report::quiescent)
        .def_readonly("violations", &Report::violations)
        .def_readonly("refunds", &Report::refunds)
        .def_readonly("final_deviation", &Report::final_deviation)
        .def_property_readonly("max_slippage", &Report::max_slippage)
        .def_property_readonly("swap_count", [](const Report& r) { return r.swaps.size(); })
        .def("to_json", &report_to_json)
        .def("to_csv", &report_to_csv)
        .def("to_table", &report_to_table);
    m.def("run_scenario", &run_with, py::arg("scenario"), py::arg("seed") = py::none(),
          py::call_guard<py::gil_scoped_release>());
}
