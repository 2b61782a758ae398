#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hrtlab/configuration.hpp"
#include "hrtlab/gram.hpp"
#include "hrtlab/search.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// Locale-independent formatting with 12 significant digits; every float
/// in file output goes through this, so identical runs produce identical
/// bytes.
std::string format_sig12(double v);

uint64_t fnv1a64(std::string_view data);
std::string digest_hex(std::string_view data);

/// CSV serialization of a scanned grid: header `a,b,F`, one line per node
/// in row-major order.
std::string csv_of_grid(const FieldGrid& grid);

std::string json_of_gram(const HermitianGram& G);
std::string json_of_certificate(const Certificate& cert);
std::string json_of_classification(const Classification& cls);
std::string json_of_normal_form(const SymplecticMap& map,
                                const Configuration& image);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
std::string json_of_report(const std::vector<CheckResult>& checks);

/// Run manifest: the command line, resolved inputs, version, wall-clock
/// interval and the digests of every produced file.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string tool_version;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest
};
std::string json_of_manifest(const RunManifest& m);

std::string iso8601_utc_now();

/// Window description file: `key = value` lines with keys kind, scale,
/// degree, coeffs, grid_start, grid_step, values. Scalar fields accept
/// the expression grammar; `values` entries are `re` or `re:im`.
WindowSpec parse_window_spec_text(std::string_view text);

/// Configuration text: entries `a,b` separated by newlines or `;`, with
/// coordinates in the expression grammar. `#` starts a comment.
std::vector<TFPoint> parse_points_text(std::string_view text);

/// Builtin window names (gaussian, twosidedexp, rational) or a path to a
/// window description file.
Window window_from_token(const std::string& token, double trunc_tol);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace hrtlab
