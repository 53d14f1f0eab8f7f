#include "entcert/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "entcert/serialize.hpp"
#include "entcert/witness.hpp"

namespace entcert {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), what + ": expected an integer, got '" + s + "'");
  return v;
}

std::string file_arg(const std::string& args, const std::string& family) {
  require(args.size() > 1 && args[0] == '@', family + ": expected @path");
  return args.substr(1);
}

StateSpec from_family(const FamilySpec& f) { return {f.id(), f.target(), f.channel()}; }

StateSpec from_stabilizer(const std::string& id, const StabilizerGroup& g) {
  return {id, Target::from_pure(id, stabilizer_state(g)), TwirlChannel::stabilizer(g)};
}

const Matrix& pauli_x() {
  static const Matrix x = (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  return x;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) fail(ErrorKind::InternalError, "cannot write output file '" + cfg.output + "'");
  f << text;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

std::string flag(bool b) { return b ? "true" : "false"; }

ReportOptions report_options(const RunConfig& cfg) {
  ReportOptions o;
  o.geo = cfg.geo;
  return o;
}

std::vector<std::string> report_row(const MeasureReport& r) {
  return {r.id, csv_number(r.eg_bits), csv_number(r.er_upper_bits), csv_number(r.lr_upper_bits),
          flag(r.equality_certified)};
}

const std::vector<std::string> kReportHeader{"id", "eg", "er_upper", "lr_upper", "certified"};

int cmd_measure(const RunConfig& cfg, std::ostream& out) {
  const StateSpec s = parse_state(cfg.state);
  const MeasureReport r = measure_chain_report(s.target, s.channel, report_options(cfg));
  if (cfg.format == Format::Csv) emit(cfg, csv(kReportHeader, {report_row(r)}), out);
  else emit(cfg, to_json(r).dump(2) + "\n", out);
  return cfg.require_certified && !r.equality_certified ? 3 : 0;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const StateSpec s = parse_state(cfg.state);
  const MeasureReport r = measure_chain_report(s.target, s.channel, report_options(cfg));
  if (cfg.format == Format::Csv) {
    emit(cfg, csv(kReportHeader, {report_row(r)}), out);
  } else {
    json j{{"id", r.id},
           {"channel", s.channel.label()},
           {"eg_bits", r.eg_bits},
           {"er_upper_bits", r.er_upper_bits},
           {"lr_upper_bits", r.lr_upper_bits},
           {"equality_certified", r.equality_certified}};
    if (r.certificate) j["certificate"] = to_json(*r.certificate);
    if (!r.note.empty()) j["note"] = r.note;
    emit(cfg, j.dump(2) + "\n", out);
  }
  return cfg.require_certified && !r.equality_certified ? 3 : 0;
}

// A computational basis product is preferred when it is as good as the
// optimizer's witness: its X-flip orbit then averages to I/D.
ProductState seed_product(const PureState& psi, const GeoResult& geo) {
  Eigen::Index top = 0;
  const double best = psi.amplitudes().cwiseAbs2().maxCoeff(&top);
  if (best < geo.overlap * (1.0 - 1e-9)) return geo.witness;
  const std::vector<int> digits = basis_digits(static_cast<std::size_t>(top), psi.dims());
  std::vector<Vector> locals;
  for (std::size_t i = 0; i < digits.size(); ++i) locals.push_back(Vector::Unit(psi.dims()[i], digits[i]));
  return ProductState(std::move(locals));
}

int cmd_discriminate(const RunConfig& cfg, std::ostream& out) {
  const EnsembleSpec es = parse_ensemble(cfg.ensemble);
  const PureState& fid = *es.fiducial.target.pure;
  const Ensemble ens = orbit_ensemble(fid, es.elements);
  const GeoResult geo = optimize_target(es.fiducial.target, cfg.geo);
  // G is invariant under local unitaries, so one value serves the whole orbit.
  const double upper = upper_bound_G(ens, std::vector<double>(ens.size(), geo.value_bits));

  json j{{"ensemble", es.id}, {"N", ens.size()}, {"D", ens.total_dim()}, {"upper_bound", upper}};
  std::string lower_g = "", lower_r = "", achieved = "";
  try {
    const LowerBoundG lb = lower_bound_G(ens, orbit_products(seed_product(fid, geo), es.elements));
    j["lower_bound_G"] = {{"sum_form", lb.sum_form}, {"min_form", lb.min_form}};
    j["achieved"] = lb.achieved;
    j["locc_projective"] = lb.povm.locc_projective;
    lower_g = csv_number(lb.sum_form);
    achieved = csv_number(lb.achieved);
  } catch (const MeanNotMaximallyMixed& e) {
    j["lower_bound_G"] = nullptr;
    j["mean_deviation"] = e.deviation();
  }
  const MeasureReport rep = measure_chain_report(es.fiducial.target, es.fiducial.channel, report_options(cfg));
  if (rep.equality_certified) {
    std::vector<RobustnessData> data;
    for (const auto& m : ens.members()) data.push_back(robustness_data(m, rep.robustness_t));
    const LowerBoundR lr = lower_bound_robustness(ens, data);
    j["lower_bound_R"] = {{"purity_form", lr.purity_form}, {"support_form", lr.support_form}};
    lower_r = csv_number(lr.purity_form);
  } else {
    j["lower_bound_R"] = nullptr;
  }
  if (cfg.format == Format::Csv)
    emit(cfg,
         csv({"ensemble", "N", "D", "upper", "lower_G", "lower_R", "achieved"},
             {{es.id, std::to_string(ens.size()), std::to_string(ens.total_dim()), csv_number(upper), lower_g,
               lower_r, achieved}}),
         out);
  else
    emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_witness(const RunConfig& cfg, std::ostream& out) {
  require(cfg.samples >= 1, "--samples must be >= 1");
  const StateSpec s = parse_state(cfg.state);
  const DensityOp rho = s.target.state();
  const GeoResult geo = optimize_target(s.target, cfg.geo);
  const Witness w = build_WG(rho, geo, s.id);
  const double expectation = witness_expectation(w, rho.matrix());
  const double predicted = std::exp2(geo.value_bits) / s.target.trace - 1.0;
  const ValiditySample vs = witness_validity_sample(w, cfg.samples, cfg.geo.seed);
  if (cfg.format == Format::Csv) {
    emit(cfg,
         csv({"id", "alpha", "expectation", "predicted_robustness", "min_product_value", "violation"},
             {{s.id, csv_number(w.alpha), csv_number(expectation), csv_number(predicted), csv_number(vs.min_value),
               flag(vs.violating.has_value())}}),
         out);
    return 0;
  }
  json j{{"id", s.id},
         {"geometric_bits", geo.value_bits},
         {"expectation", expectation},
         {"predicted_robustness", predicted},
         {"validity",
          {{"samples", cfg.samples},
           {"seed", cfg.geo.seed},
           {"min_value", vs.min_value},
           {"violation", vs.violating.has_value()}}},
         {"witness", to_json(w)}};
  if (vs.violating) j["validity"]["violating_state"] = to_json(*vs.violating);
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_table1(const RunConfig& cfg, std::ostream& out) {
  require(cfg.n_max >= 2 && cfg.n_max <= 5, "--n-max must be in [2, 5]");
  const auto rows = table1_values(table1_specs(cfg.n_max), report_options(cfg));
  bool all_certified = true;
  for (const auto& r : rows) all_certified = all_certified && r.certified && !r.mismatch;
  if (cfg.format == Format::Csv) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
      cells.push_back({r.id, csv_number(r.closed_form), csv_number(r.eg_bits), csv_number(r.er_upper_bits),
                       csv_number(r.lr_upper_bits), flag(r.certified), flag(r.mismatch)});
    emit(cfg, csv({"id", "closed_form", "eg", "er_upper", "lr_upper", "certified", "mismatch"}, cells), out);
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    emit(cfg, j.dump(2) + "\n", out);
  }
  return cfg.require_certified && !all_certified ? 3 : 0;
}

void report_error(bool as_json, ErrorKind kind, const std::string& message, int code, std::ostream& err) {
  if (as_json)
    err << json{{"error", {{"kind", to_string(kind)}, {"message", message}}}, {"exit_code", code}}.dump() << '\n';
  else
    err << "entcert: " << message << '\n';
}

}  // namespace

StateSpec parse_state(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  require(colon != std::string::npos, "state descriptor '" + descriptor + "' has no family prefix");
  const std::string family = descriptor.substr(0, colon);
  const std::string args = descriptor.substr(colon + 1);

  if (family == "dicke") {
    const auto parts = split(args, ',');
    require(parts.size() == 2, "dicke: expected dicke:n,k0-k1-...");
    std::vector<int> kvec;
    for (const auto& k : split(parts[1], '-')) kvec.push_back(parse_int(k, "dicke"));
    return from_family(FamilySpec::dicke(parse_int(parts[0], "dicke"), kvec));
  }
  if (family == "antisym") {
    const auto parts = split(args, ',');
    require(parts.size() == 1 || parts.size() == 2, "antisym: expected antisym:n[,d]");
    const int n = parse_int(parts[0], "antisym");
    return from_family(FamilySpec::antisym(n, parts.size() == 2 ? parse_int(parts[1], "antisym") : 0));
  }
  if (family == "ghz" || family == "cluster") {
    const int n = parse_int(args, family);
    require(n >= 2 && n <= 14, family + ": n must be in [2, 14]");
    return from_stabilizer(descriptor, family == "ghz" ? ghz_stabilizers(n) : linear_cluster_stabilizers(n));
  }
  if (family == "stab") return from_stabilizer(descriptor, stabilizer_group_from_json(read_json_file(file_arg(args, family))));
  if (family == "product" || family == "pure") {
    const json j = read_json_file(file_arg(args, family));
    const PureState psi = family == "product" ? product_state_from_json(j).to_pure() : pure_state_from_json(j);
    return {descriptor, Target::from_pure(descriptor, psi), TwirlChannel::identity(psi.dims())};
  }
  if (family == "symproj") {
    const int n = parse_int(args, family);
    require(n >= 2 && n <= 8, "symproj: n must be in [2, 8]");
    return {descriptor, Target::from_projector(descriptor, symmetric_projector(n, 2)), clifford_tensor_channel(n)};
  }
  if (family == "antisymproj") {
    require(parse_int(args, family) == 2, "antisymproj: only n = 2 (two qubits) is supported");
    return {descriptor, Target::from_projector(descriptor, antisymmetric_projector(2, 2)), clifford_tensor_channel(2)};
  }
  fail(ErrorKind::InvalidInput, "unknown state family '" + family + "'");
}

EnsembleSpec parse_ensemble(const std::string& descriptor) {
  if (descriptor == "bell-xorbit") {
    const Matrix id = Matrix::Identity(2, 2);
    StateSpec s = parse_state("ghz:2");
    s.id = "bell";
    auto elements = group_closure({2, 2}, {{pauli_x(), id}, {id, pauli_x()}, {pauli_x(), pauli_x()}});
    return {descriptor, std::move(s), std::move(elements)};
  }
  std::string state;
  if (descriptor.starts_with("xorbit:")) {
    state = descriptor.substr(7);
  } else if (descriptor.starts_with("ghz") && descriptor.ends_with("-xorbit")) {
    state = "ghz:" + descriptor.substr(3, descriptor.size() - 3 - 7);
  } else {
    fail(ErrorKind::InvalidInput, "unknown ensemble '" + descriptor + "'");
  }
  StateSpec s = parse_state(state);
  require(s.target.pure.has_value(), "ensemble: fiducial must be a pure state");
  for (int d : s.target.dims) require(d == 2, "ensemble: X-flip orbits need qubits");
  auto elements = x_flip_group(static_cast<int>(s.target.dims.size()));
  return {descriptor, std::move(s), std::move(elements)};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Measure:
        require(!cfg.state.empty(), "measure: --state is required");
        return cmd_measure(cfg, out);
      case Command::Certify:
        require(!cfg.state.empty(), "certify: --state is required");
        return cmd_certify(cfg, out);
      case Command::Discriminate:
        require(!cfg.ensemble.empty(), "discriminate: --ensemble is required");
        return cmd_discriminate(cfg, out);
      case Command::Witness:
        require(!cfg.state.empty(), "witness: --state is required");
        return cmd_witness(cfg, out);
      case Command::Table1:
        return cmd_table1(cfg, out);
    }
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::InvalidInput ? 2 : 1;
    report_error(cfg.json_errors, e.kind(), e.what(), code, err);
    return code;
  } catch (const std::exception& e) {
    report_error(cfg.json_errors, ErrorKind::InternalError, e.what(), 1, err);
    return 1;
  }
  return 1;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  bool json_errors = false;
  for (int i = 1; i < argc; ++i) json_errors = json_errors || std::string(argv[i]) == "--json-errors";

  CLI::App app{"Entanglement measures, equality certificates, discrimination bounds and witnesses"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--state", cfg.state, "State descriptor");
  app.add_option("--ensemble", cfg.ensemble, "Ensemble descriptor");
  app.add_option("--restarts", cfg.geo.restarts, "Random restarts of the product-state optimizer")->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.geo.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.geo.seed, "RNG seed");
  app.add_option("--threads", cfg.geo.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "Output file (default stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--n-max", cfg.n_max, "Largest n for table1");
  app.add_option("--samples", cfg.samples, "Product samples for witness validity");
  app.add_flag("--require-certified", cfg.require_certified, "Exit 3 unless equality is certified");
  app.add_flag("--json-errors", cfg.json_errors, "Write errors to stderr as JSON");

  const std::pair<const char*, Command> commands[] = {{"measure", Command::Measure},
                                                      {"certify", Command::Certify},
                                                      {"discriminate", Command::Discriminate},
                                                      {"witness", Command::Witness},
                                                      {"table1", Command::Table1}};
  const char* help[] = {"Full measure report", "Equality certificate", "Discrimination bounds for an orbit ensemble",
                        "Geometric witness and sampled validity", "Closed-form table for symmetric and antisymmetric states"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) subs.push_back(app.add_subcommand(commands[i].first, help[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    report_error(json_errors, ErrorKind::InvalidInput, e.what(), 2, err);
    return 2;
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) cfg.command = commands[i].second;
  cfg.format = format == "csv" ? Format::Csv : Format::Json;

  if (const char* env = std::getenv("ENTCERT_MAX_DIM")) {
    const std::string v(env);
    unsigned long long cap = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), cap);
    if (ec != std::errc() || ptr != v.data() + v.size() || cap == 0) {
      report_error(cfg.json_errors, ErrorKind::InvalidInput, "ENTCERT_MAX_DIM must be a positive integer", 2, err);
      return 2;
    }
    set_max_dimension(static_cast<std::size_t>(cap));
  }
  return run(cfg, out, err);
}

}  // namespace entcert
