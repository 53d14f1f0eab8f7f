#include "entcert/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace entcert {

namespace {

std::string bits(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (auto b : v) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> parse_bits(const std::string& s) {
  std::vector<std::uint8_t> out;
  for (char c : s) {
    require(c == '0' || c == '1', "stabilizer JSON: bit strings may only contain 0 and 1");
    out.push_back(c == '1');
  }
  return out;
}

// JSON has no infinities; they are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex numbers must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

Vector vector_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "expected a nonempty array of complex numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

json to_json(const PureState& psi) {
  return json{{"dims", psi.dims()}, {"amplitudes", vector_to_json(psi.amplitudes())}};
}

PureState pure_state_from_json(const json& j) {
  require(j.is_object() && j.contains("dims") && j.contains("amplitudes"),
          "pure state JSON needs \"dims\" and \"amplitudes\"");
  require(j["dims"].is_array(), "pure state JSON: dims must be an array");
  return PureState(j["dims"].get<Dims>(), vector_from_json(j["amplitudes"]));
}

json to_json(const ProductState& p) {
  json locals = json::array();
  for (const Vector& v : p.locals()) locals.push_back(vector_to_json(v));
  return json{{"locals", locals}};
}

ProductState product_state_from_json(const json& j) {
  require(j.is_object() && j.contains("locals") && j["locals"].is_array() && !j["locals"].empty(),
          "product state JSON needs a nonempty \"locals\" array");
  std::vector<Vector> locals;
  for (const auto& l : j["locals"]) {
    Vector v = vector_from_json(l);
    require(std::abs(v.norm() - 1.0) <= 1e-10, "product state JSON: local vector is not normalized");
    locals.push_back(std::move(v));
  }
  return ProductState(std::move(locals));
}

json to_json(const StabilizerGroup& g) {
  json gens = json::array();
  for (const auto& s : g.generators()) gens.push_back({{"x", bits(s.x)}, {"z", bits(s.z)}, {"sign", s.sign}});
  return json{{"generators", gens}};
}

StabilizerGroup stabilizer_group_from_json(const json& j) {
  require(j.is_object() && j.contains("generators") && j["generators"].is_array(),
          "stabilizer JSON needs a \"generators\" array");
  std::vector<StabilizerGenerator> gens;
  for (const auto& g : j["generators"]) {
    require(g.is_object() && g.contains("x") && g.contains("z") && g["x"].is_string() && g["z"].is_string(),
            "stabilizer generator needs bit strings \"x\" and \"z\"");
    const int sign = g.value("sign", 1);
    require(sign == 1 || sign == -1, "stabilizer generator sign must be +1 or -1");
    gens.push_back({parse_bits(g["x"].get<std::string>()), parse_bits(g["z"].get<std::string>()), sign});
  }
  return StabilizerGroup(std::move(gens));
}

json to_json(const GeoResult& geo) {
  return json{{"value_bits", number(geo.value_bits)},
              {"overlap", geo.overlap},
              {"iterations", geo.iterations},
              {"restarts_used", geo.restarts_used},
              {"converged", geo.converged},
              {"monotone", geo.monotone},
              {"witness", to_json(geo.witness)}};
}

json to_json(const EqualityCertificate& cert) {
  const Spectrum sp = hermitian_eig(cert.candidate);
  std::vector<double> spectrum(sp.eigenvalues.data(), sp.eigenvalues.data() + sp.eigenvalues.size());
  return json{{"state_id", cert.state_id},
              {"verdict", to_string(cert.verdict)},
              {"eg_bits", number(cert.eg_bits)},
              {"lr_upper_bits", number(cert.lr_upper_bits)},
              {"residual_min_eig", cert.residual_min_eig},
              {"psd_ok", cert.psd_ok},
              {"invariant", cert.invariant},
              {"converged", cert.converged},
              {"candidate_spectrum", spectrum}};
}

json to_json(const MeasureReport& r) {
  json out{{"id", r.id},
           {"eg_bits", number(r.eg_bits)},
           {"geometric_bits", number(r.geometric_bits)},
           {"entropy_bits", number(r.entropy_bits)},
           {"er_upper_bits", number(r.er_upper_bits)},
           {"lr_upper_bits", number(r.lr_upper_bits)},
           {"robustness_t", number(r.robustness_t)},
           {"chain_ok", r.chain_ok},
           {"equality_certified", r.equality_certified},
           {"candidate_id", r.candidate_id},
           {"converged", r.converged},
           {"residual_min_eig", r.residual_min_eig}};
  if (!r.note.empty()) out["note"] = r.note;
  if (r.geo) out["geometric"] = to_json(*r.geo);
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  return out;
}

json to_json(const Witness& w) {
  return json{{"source_id", w.source_id},
              {"dims", w.dims},
              {"alpha", w.alpha},
              {"trivial", w.trivial},
              {"operator", matrix_to_json(w.op)}};
}

json to_json(const Table1Row& row) {
  return json{{"id", row.id},
              {"closed_form", row.closed_form},
              {"eg_bits", number(row.eg_bits)},
              {"er_upper_bits", number(row.er_upper_bits)},
              {"lr_upper_bits", number(row.lr_upper_bits)},
              {"certified", row.certified},
              {"mismatch", row.mismatch}};
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidInput, "malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace entcert
