#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "entcert/discrimination.hpp"
#include "entcert/measures.hpp"

namespace entcert {

enum class Command { Measure, Certify, Discriminate, Witness, Table1 };
enum class Format { Json, Csv };

struct RunConfig {
  Command command = Command::Measure;
  std::string state;     // state descriptor
  std::string ensemble;  // ensemble descriptor
  GeoOptions geo;
  std::string output;  // empty: stdout
  Format format = Format::Json;
  bool require_certified = false;
  bool json_errors = false;
  int n_max = 4;
  int samples = 10000;
};

/// A parsed state descriptor: the target and the twirl used to certify it.
///
///   dicke:n,k0-k1-…   antisym:n[,d]   ghz:n   cluster:n
///   symproj:n         antisymproj:2   stab:@file.json
///   product:@file.json                pure:@file.json
struct StateSpec {
  std::string id;
  Target target;
  TwirlChannel channel;
};

StateSpec parse_state(const std::string& descriptor);

///   ghz<n>-xorbit, bell-xorbit, xorbit:<qubit state descriptor>
struct EnsembleSpec {
  std::string id;
  StateSpec fiducial;
  std::vector<LocalUnitary> elements;
};

EnsembleSpec parse_ensemble(const std::string& descriptor);

// Exit status: 0 success, 2 invalid input, 3 not certified under
// require_certified, 1 anything else.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (including ENTCERT_MAX_DIM) and calls run.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entcert
