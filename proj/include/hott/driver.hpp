#pragma once

#include <map>

#include "hott/elab.hpp"

namespace hott {

struct CheckOptions {
  std::vector<std::string> search_paths;  // --path roots + HOTTC_PATH
  unsigned max_class_depth = 32;
  uint64_t fuel = 1000000;
};

struct ReportedError {
  std::string file;
  Span span;
  std::string message;
  std::string error_class;
};

struct DirectiveOutcome {
  std::string kind;  // defeq | check | print_axioms | normalize
  bool passed = false;
  std::string detail;  // axiom list / normal form / failure message
  Span span;
};

struct FileOutcome {
  std::string path;
  uint32_t declarations = 0;  // environment entries committed by this file
  std::vector<DirectiveOutcome> directives;
  std::vector<ReportedError> errors;
  uint32_t directives_passed() const {
    uint32_t n = 0;
    for (const auto& d : directives) n += d.passed ? 1 : 0;
    return n;
  }
  uint32_t directives_failed() const {
    return static_cast<uint32_t>(directives.size()) - directives_passed();
  }
};

struct CheckReport {
  std::vector<FileOutcome> files;
  double total_time_ms = 0;
  bool io_error = false;
  bool parse_error = false;

  bool ok() const;
  // 0 success, 1 type/directive errors, 2 parse errors, 3 IO/import errors.
  int exit_code() const;
};

// Batch checker: resolves imports (relative to the importing file, then the
// search path list), checks each file at most once, threads one environment.
class Checker {
 public:
  explicit Checker(CheckOptions opts = {});

  // Check a single file (with its imports).
  void check_file(const std::string& path);

  // Check files listed in a manifest (one path per line, '#' comments),
  // resolved relative to the manifest's directory.
  void check_manifest(const std::string& manifest_path);

  const CheckReport& report() const { return report_; }
  CheckReport& report() { return report_; }
  const Environment& env() const { return env_; }

 private:
  std::string resolve_import(const std::string& spec, const std::string& importer);
  void check_resolved(const std::string& canonical_path);
  Environment register_coercion(const Name& name);
  DirectiveOutcome run_directive(const SurfaceDecl& d);

  CheckOptions opts_;
  Environment env_;
  CheckReport report_;
  std::map<std::string, bool> done_;          // canonical path -> checked
  std::vector<std::string> in_progress_;      // cycle detection
};

// Serializes a report; when stable is set, the timing field is omitted.
std::string report_to_text(const CheckReport& r, bool stable);
std::string report_to_json(const CheckReport& r, bool stable);

}  // namespace hott
