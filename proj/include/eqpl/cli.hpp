#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eqpl/structures.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl::cli {

// A structure with its frame names and an assignment, as stored on disk.
//
// {
//   "frame": ["cati", "cata", "catm"],
//   "aliases": {"cati": 0, "cata": 1, "catm": 2},
//   "admissible": ["000", "100", ...],          // one character per frame qubit
//   "partition": [["cati"], ["cata", "catm"]],
//   "blocks": [{"0": [1, 0]}, {"11": [0.408, 0], ...}],  // per partition block
//   "nu_overrides": [{"F": [...], "A": [...], "value": [re, im]}],
//   "assignment": {"x1": 0.5, "z1": [0, 1]}
// }
//
// Amplitudes and values may also be written as constant terms ("1/sqrt(6)",
// "sqrt(2/3) e^{i pi/3}").
struct ModelFile {
  QuantumStructure structure;
  Assignment assignment;
  AliasTable aliases;
};

// Throws Error on malformed input; the structure is not validated.
ModelFile load_model(std::string_view json_text);
std::string save_model(const ModelFile& m);

// Runs one command line (without the program name). Writes the report to
// `out` and usage errors to `err`. Exit codes: 0 affirmative, 1 negative,
// 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqpl::cli
