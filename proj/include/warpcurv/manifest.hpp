#pragma once

// Line-oriented manifest files.
//
//   # comment
//   kind = chart | warped
//   name = ex2
//   coordinates = x1 x2 x3 x4          (chart)
//   base = ex1_base.mf                 (warped, paths relative to this file)
//   fiber = ex1_fiber.mf
//   warping = (x1 + 1)^2
//   seed = 12648430
//   points = 8
//   orientation = reversed | geometric
//   projective = n-2 | n-1
//
//   [parameters]   a = 3/7   or   a = 0 .. 1
//   [box]          x1 = 1/3 .. 2
//   [metric]       1 1 = 1 + 2*exp(x1)      (1-based, upper triangle, absent = 0)
//   [analyses]     check R.R=L1 Q(g,R) | L1 = a
//                  verify | L1 = a | L2 = 0
//   [expect]       scalar = 20*a
//                  R 1 2 1 2 = ...
//                  S 1 1 = ...

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpcurv/curvature.hpp"
#include "warpcurv/conditions.hpp"
#include "warpcurv/warped.hpp"

namespace warpcurv {

class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& file, int line, const std::string& message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

struct Located {
  std::string text;
  int line = 0;
};

struct Analysis {
  std::string kind;  // "check" or "verify"
  std::string name;  // catalog name for "check"
  std::map<std::string, Located> scalars;
  int line = 0;
};

struct Expectation {
  std::string what;  // "scalar", "R" or "S"
  std::vector<int> index;  // 0-based
  Located expr;
};

struct Manifest {
  std::string file;
  std::string kind;
  std::string name;
  std::vector<std::string> coordinates;
  std::map<std::string, Located> parameters;
  std::map<std::string, Located> box;
  std::map<std::pair<int, int>, Located> metric;  // 0-based, i <= j
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  Orientation orientation = kDefaultOrientation;
  ProjectiveCoefficient projective = ProjectiveCoefficient::n_minus_2;
  Located base;
  Located fiber;
  Located warping;
  std::shared_ptr<const Manifest> base_manifest;
  std::shared_ptr<const Manifest> fiber_manifest;
  std::vector<Analysis> analyses;
  std::vector<Expectation> expectations;
};

Manifest parse_manifest(const std::string& text, const std::string& file = "<string>",
                        const std::filesystem::path& dir = {});
Manifest load_manifest(const std::filesystem::path& path);

/// Parameter values override the manifest (value or "lo .. hi").
using ParameterOverrides = std::map<std::string, std::string>;

Interval parse_interval(const std::string& text);

ChartPtr build_chart(const Manifest& m, const ParameterOverrides& overrides = {});
WarpedSpec build_warped(const Manifest& m, const ParameterOverrides& overrides = {});

/// Parses an expression written in the manifest against `symbols`,
/// reporting errors at the manifest line.
Expr parse_located(const Manifest& m, const Located& l, const Symbols& symbols);

}  // namespace warpcurv
