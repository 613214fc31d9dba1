#include "spacedmod/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

spacedmod::FieldDesc field_from_string(const std::string& s) {
    if (s.empty() || s == "Q") return spacedmod::FieldDesc::rationals();
    std::string body = s;
    if (body.rfind("Fp:", 0) == 0) body = body.substr(3);
    else if (body[0] == 'F') body = body.substr(1);
    return spacedmod::FieldDesc::prime_field(std::stoll(body));
}

std::string analyze(const std::string& text) { return spacedmod::run_analyze(text).to_json().dump(); }

std::string normalize(const std::string& text, const std::string& mode) {
    auto m = mode == "symbolic" ? spacedmod::RescaleMode::Symbolic : spacedmod::RescaleMode::Numeric;
    return spacedmod::run_normalize(text, m).to_json().dump();
}

std::string certify(const std::string& text) { return spacedmod::run_certify(text).to_json().dump(); }

std::string witness(const std::string& family, const std::vector<std::string>& params,
                    const std::string& field, std::uint64_t seed) {
    auto kind = spacedmod::family_from_string(family);
    if (!kind) throw std::invalid_argument("unknown family '" + family + "'");
    spacedmod::FieldDesc f = field_from_string(field);
    std::vector<spacedmod::ExactScalar> ps;
    for (const auto& s : params) ps.push_back(spacedmod::parse_scalar(s, f));
    return spacedmod::run_witness(*kind, ps, f, seed).dump();
}

std::string canonicalize_doc(const std::string& text) {
    return spacedmod::serialize_presentation(spacedmod::canonicalize(spacedmod::parse_presentation(text)));
}

std::string verify_basis(const std::string& text) {
    return spacedmod::verify_basis_document(nlohmann::json::parse(text)).dump();
}

std::string monomial_mul(const std::string& a, const std::string& b) {
    return spacedmod::parse_monomial(a).mul(spacedmod::parse_monomial(b)).str();
}

std::string monomial_pow(const std::string& a, const std::string& q) {
    spacedmod::Rat e;
    auto slash = q.find('/');
    if (slash == std::string::npos) e = spacedmod::Rat(spacedmod::Int(q));
    else e = spacedmod::Rat(spacedmod::Int(q.substr(0, slash)), spacedmod::Int(q.substr(slash + 1)));
    return spacedmod::parse_monomial(a).pow(e).str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact analysis and multiplicative-basis synthesis for matrix presentations of spaced modules";
    m.def("analyze", &analyze, py::arg("presentation_json"),
          "Run validation, classification and all checks; returns the report as JSON.");
    m.def("normalize", &normalize, py::arg("presentation_json"), py::arg("mode") = "numeric",
          "Analyze and synthesize the multiplicative basis; returns the report as JSON.");
    m.def("certify", &certify, py::arg("presentation_json"),
          "Report weight-function kernel generators and residuals as JSON.");
    m.def("witness", &witness, py::arg("family"), py::arg("params"), py::arg("field") = "Q",
          py::arg("seed") = 1, "Build a witness family and test pairwise isomorphism.");
    m.def("canonicalize", &canonicalize_doc, py::arg("presentation_json"),
          "Return the canonical serialization of a presentation document.");
    m.def("verify_basis", &verify_basis, py::arg("basis_json"),
          "Re-check a normalize-emitted basis document.");
    m.def("monomial_mul", &monomial_mul);
    m.def("monomial_pow", &monomial_pow);
}
