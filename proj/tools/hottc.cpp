#include <chrono>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "hott/driver.hpp"
#include "hott/parser.hpp"
#include "hott/pretty.hpp"

namespace {

std::vector<std::string> split_path_list(const char* v) {
  std::vector<std::string> out;
  if (!v) return out;
  std::string s = v;
#ifdef _WIN32
  const char sep = ';';
#else
  const char sep = ':';
#endif
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(sep, start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

hott::CheckOptions make_options(const std::vector<std::string>& paths,
                                unsigned max_class_depth, uint64_t fuel) {
  hott::CheckOptions opts;
  opts.search_paths = paths;
  for (auto& p : split_path_list(std::getenv("HOTTC_PATH")))
    opts.search_paths.push_back(p);
  opts.max_class_depth = max_class_depth;
  opts.fuel = fuel;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hottc - a minimal proof assistant for homotopy type theory"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "check .htt files or a manifest");
  std::vector<std::string> check_paths;
  bool manifest = false, json = false, stable = false;
  std::vector<std::string> roots;
  unsigned max_class_depth = 32;
  uint64_t fuel = 1000000;
  check->add_option("paths", check_paths, "files (or manifests with --manifest)")
      ->required();
  check->add_flag("--manifest", manifest, "treat each path as a manifest file");
  check->add_option("--path", roots, "import search root (repeatable)");
  check->add_option("--max-class-depth", max_class_depth,
                    "instance search depth limit");
  check->add_option("--fuel", fuel, "normalization step budget");
  check->add_flag("--json", json, "machine-readable report");
  check->add_flag("--stable-output", stable, "omit timing fields");

  // axioms
  auto* axioms = app.add_subcommand("axioms", "print the axiom closure of a name");
  std::string ax_file, ax_name;
  axioms->add_option("file", ax_file)->required();
  axioms->add_option("name", ax_name)->required();
  axioms->add_option("--path", roots, "import search root (repeatable)");

  // norm
  auto* norm = app.add_subcommand("norm", "normalize a term in a file's environment");
  std::string norm_file, norm_term;
  norm->add_option("file", norm_file)->required();
  norm->add_option("term", norm_term)->required();
  norm->add_option("--fuel", fuel, "normalization step budget");
  norm->add_option("--path", roots, "import search root (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      hott::Checker checker(make_options(roots, max_class_depth, fuel));
      try {
        for (const auto& p : check_paths) {
          if (manifest)
            checker.check_manifest(p);
          else
            checker.check_file(p);
        }
      } catch (const hott::Error& e) {
        // import cycle or IO failure outside per-file recovery
        std::cerr << "error: " << e.what() << "\n";
        return 3;
      }
      auto t1 = std::chrono::steady_clock::now();
      checker.report().total_time_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      std::cout << (json ? hott::report_to_json(checker.report(), stable)
                         : hott::report_to_text(checker.report(), stable));
      return checker.report().exit_code();
    }

    if (axioms->parsed()) {
      hott::Checker checker(make_options(roots, max_class_depth, fuel));
      checker.check_file(ax_file);
      int code = checker.report().exit_code();
      if (code != 0) {
        std::cout << hott::report_to_text(checker.report(), true);
        return code;
      }
      for (const auto& n : hott::collect_axioms(checker.env(), ax_name))
        std::cout << n << "\n";
      return 0;
    }

    if (norm->parsed()) {
      hott::Checker checker(make_options(roots, max_class_depth, fuel));
      checker.check_file(norm_file);
      int code = checker.report().exit_code();
      if (code != 0) {
        std::cout << hott::report_to_text(checker.report(), true);
        return code;
      }
      auto toks = hott::tokenize(norm_term);
      auto st = hott::parse_term(toks);
      hott::Elaborator el(checker.env(), hott::ElabOptions{max_class_depth});
      auto [t, ty] = el.elaborate_term(st, true);
      (void)ty;
      hott::TypeChecker tc(checker.env());
      std::cout << hott::term_to_string(tc.normalize(t, fuel)) << "\n";
      return 0;
    }
  } catch (const hott::Error& e) {
    std::cerr << "error[" << hott::error_class_name(e.cls) << "]: " << e.what() << "\n";
    switch (e.cls) {
      case hott::ErrorClass::Lex:
      case hott::ErrorClass::Parse:
        return 2;
      case hott::ErrorClass::Io:
        return 3;
      default:
        return 1;
    }
  }
  return 0;
}
