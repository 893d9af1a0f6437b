#include "hott/driver.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hott/hit.hpp"
#include "hott/parser.hpp"
#include "hott/pretty.hpp"

#include "json.hpp"

namespace fs = std::filesystem;

namespace hott {

bool CheckReport::ok() const {
  if (io_error) return false;
  for (const auto& f : files)
    if (!f.errors.empty() || f.directives_failed() > 0) return false;
  return true;
}

int CheckReport::exit_code() const {
  if (io_error) return 3;
  if (parse_error) return 2;
  return ok() ? 0 : 1;
}

Checker::Checker(CheckOptions opts) : opts_(std::move(opts)) {}

std::string Checker::resolve_import(const std::string& spec, const std::string& importer) {
  // Module paths use '.' as a separator: init.path -> init/path.htt
  std::string rel = spec;
  for (auto& c : rel)
    if (c == '.') c = '/';
  rel += ".htt";
  std::vector<std::string> roots;
  if (!importer.empty()) roots.push_back(fs::path(importer).parent_path().string());
  for (const auto& p : opts_.search_paths) roots.push_back(p);
  for (const auto& root : roots) {
    fs::path cand = root.empty() ? fs::path(rel) : fs::path(root) / rel;
    std::error_code ec;
    if (fs::exists(cand, ec)) return fs::weakly_canonical(cand, ec).string();
    // Also try one directory up, so sibling directories (init/, hit/) resolve.
    fs::path up = root.empty() ? fs::path("..") / rel
                               : fs::path(root).parent_path() / rel;
    if (fs::exists(up, ec)) return fs::weakly_canonical(up, ec).string();
  }
  throw Error(ErrorClass::Io, "cannot resolve import '" + spec + "'");
}

void Checker::check_file(const std::string& path) {
  std::error_code ec;
  fs::path canon = fs::weakly_canonical(path, ec);
  if (ec) {
    report_.io_error = true;
    FileOutcome fo;
    fo.path = path;
    fo.errors.push_back({path, Span{}, "cannot open '" + path + "'", "io"});
    report_.files.push_back(std::move(fo));
    return;
  }
  check_resolved(canon.string());
}

void Checker::check_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    report_.io_error = true;
    FileOutcome fo;
    fo.path = manifest_path;
    fo.errors.push_back({manifest_path, Span{}, "cannot open manifest", "io"});
    report_.files.push_back(std::move(fo));
    return;
  }
  fs::path base = fs::path(manifest_path).parent_path();
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    check_file((base / line).string());
  }
}

void Checker::check_resolved(const std::string& canonical_path) {
  if (done_.count(canonical_path)) return;
  for (const auto& p : in_progress_)
    if (p == canonical_path) {
      std::string cycle;
      bool in_cycle = false;
      for (const auto& q : in_progress_) {
        if (q == canonical_path) in_cycle = true;
        if (in_cycle) cycle += q + " -> ";
      }
      cycle += canonical_path;
      throw Error(ErrorClass::Io, "cyclic imports: " + cycle);
    }

  std::ifstream in(canonical_path);
  if (!in) {
    report_.io_error = true;
    FileOutcome fo;
    fo.path = canonical_path;
    fo.errors.push_back({canonical_path, Span{}, "cannot open file", "io"});
    report_.files.push_back(std::move(fo));
    done_[canonical_path] = true;
    return;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string source = ss.str();

  FileOutcome fo;
  fo.path = canonical_path;
  in_progress_.push_back(canonical_path);

  std::vector<SurfaceDecl> decls;
  try {
    uint32_t file_id = static_cast<uint32_t>(report_.files.size() + 1);
    decls = parse_module(tokenize(source, file_id));
  } catch (const Error& e) {
    report_.parse_error = true;
    fo.errors.push_back({canonical_path, e.span, e.what(), error_class_name(e.cls)});
    in_progress_.pop_back();
    report_.files.push_back(std::move(fo));
    done_[canonical_path] = true;
    return;
  }

  // Imports first (they appear at the top, but process wherever they occur).
  for (const auto& d : decls) {
    if (d.kind != DeclSyntaxKind::Import) continue;
    try {
      check_resolved(resolve_import(d.import_path, canonical_path));
    } catch (const Error& e) {
      report_.io_error = true;
      fo.errors.push_back({canonical_path, d.span, e.what(), error_class_name(e.cls)});
    }
  }

  size_t env_before = env_.size();
  for (const auto& d : decls) {
    if (d.kind == DeclSyntaxKind::Import) continue;
    try {
      switch (d.kind) {
        case DeclSyntaxKind::HitInit: {
          env_ = d.hit_kind == "quotient" ? init_quotient(env_) : init_trunc(env_);
          break;
        }
        case DeclSyntaxKind::Attribute: {
          if (!env_.contains(d.name))
            throw Error(ErrorClass::Elab, "unknown declaration '" + d.name + "'", d.span);
          for (const auto& a : d.attributes) {
            if (a == "class") env_ = env_.set_class(d.name);
            else if (a == "instance") env_ = env_.add_instance(d.name);
            else env_ = register_coercion(d.name);
          }
          break;
        }
        case DeclSyntaxKind::Directive: {
          fo.directives.push_back(run_directive(d));
          break;
        }
        case DeclSyntaxKind::Definition:
        case DeclSyntaxKind::Axiom:
        case DeclSyntaxKind::Inductive: {
          Elaborator el(env_, ElabOptions{opts_.max_class_depth});
          ElabResult r = el.elaborate_declaration(d);
          Environment next = check_declaration(env_, r.decl);
          // Elaborator output is untrusted: the kernel re-checks before commit
          // (check_declaration) and the attributes are applied afterwards.
          for (const auto& a : r.attributes) {
            if (a == "class") next = next.set_class(d.name);
            else if (a == "instance") next = next.add_instance(d.name);
            else {
              env_ = next;
              next = register_coercion(d.name);
            }
          }
          env_ = next;
          break;
        }
        default:
          break;
      }
    } catch (const Error& e) {
      fo.errors.push_back({canonical_path, e.span, e.what(), error_class_name(e.cls)});
      if (e.cls == ErrorClass::Parse) report_.parse_error = true;
      // Error recovery at declaration granularity: continue with the next one.
    }
  }
  fo.declarations = static_cast<uint32_t>(env_.size() - env_before);

  in_progress_.pop_back();
  report_.files.push_back(std::move(fo));
  done_[canonical_path] = true;
}

// Coercion registration: the source is the head constant of the first
// explicit binder's type.
Environment Checker::register_coercion(const Name& name) {
  const Declaration& d = env_.get(name);
  TermPtr t = d.type;
  while (is_pi(t)) {
    if (t->bind == Binding::Explicit) {
      const Term* head = get_app_fn(t->a.get());
      if (head->kind != TermKind::Const)
        throw Error(ErrorClass::Coercion,
                    "coercion '" + name + "': source type has no head constant");
      return env_.add_coercion(head->cname, name);
    }
    t = t->b;
  }
  throw Error(ErrorClass::Coercion, "coercion '" + name + "' has no explicit argument");
}

DirectiveOutcome Checker::run_directive(const SurfaceDecl& d) {
  DirectiveOutcome out;
  out.kind = d.directive;
  out.span = d.span;
  try {
    if (d.directive == "defeq") {
      Elaborator el(env_, ElabOptions{opts_.max_class_depth});
      auto [lhs, lty] = el.elaborate_term(d.dir_t, true);
      auto [rhs, rty] = el.elaborate_term(d.dir_u, true);
      (void)lty;
      (void)rty;
      // The comparison itself is kernel-only.
      TypeChecker tc(env_);
      out.passed = tc.is_def_eq(lhs, rhs);
      if (!out.passed)
        out.detail = "not definitionally equal: '" + term_to_string(lhs) +
                     "' vs '" + term_to_string(rhs) + "'";
    } else if (d.directive == "check") {
      Elaborator el(env_, ElabOptions{opts_.max_class_depth});
      auto [ty, tyty] = el.elaborate_term(d.dir_u, true);
      (void)tyty;
      auto [t, actual] = el.elaborate_term(d.dir_t, true);
      TypeChecker tc(env_);
      out.passed = tc.is_def_eq(actual, ty);
      if (!out.passed)
        out.detail = "has type '" + term_to_string(actual) + "', expected '" +
                     term_to_string(ty) + "'";
      (void)t;
    } else if (d.directive == "print_axioms") {
      std::vector<Name> axs = collect_axioms(env_, d.dir_name);
      out.passed = true;
      std::string s;
      for (size_t i = 0; i < axs.size(); ++i) s += (i ? " " : "") + axs[i];
      out.detail = s;
    } else {  // normalize
      Elaborator el(env_, ElabOptions{opts_.max_class_depth});
      auto [t, ty] = el.elaborate_term(d.dir_t, true);
      (void)ty;
      TypeChecker tc(env_);
      out.detail = term_to_string(tc.normalize(t, opts_.fuel));
      out.passed = true;
    }
  } catch (const Error& e) {
    out.passed = false;
    out.detail = e.what();
  }
  return out;
}

std::string report_to_text(const CheckReport& r, bool stable) {
  std::ostringstream os;
  uint32_t total_decls = 0, total_dir_pass = 0, total_dir_fail = 0, total_errors = 0;
  for (const auto& f : r.files) {
    os << f.path << ": " << f.declarations << " declarations";
    if (!f.directives.empty())
      os << ", directives " << f.directives_passed() << "/" << f.directives.size()
         << " passed";
    if (!f.errors.empty()) os << ", " << f.errors.size() << " errors";
    os << "\n";
    for (const auto& d : f.directives) {
      if (d.kind == "print_axioms" || d.kind == "normalize") {
        os << "  #" << d.kind << (d.passed ? "" : " FAILED") << ": " << d.detail
           << "\n";
      } else if (!d.passed) {
        os << "  #" << d.kind << " FAILED [" << d.span.start << ".." << d.span.end
           << "]: " << d.detail << "\n";
      }
    }
    for (const auto& e : f.errors) {
      os << "  error[" << e.error_class << "] at " << e.span.start << ".."
         << e.span.end << ": " << e.message << "\n";
      ++total_errors;
    }
    total_decls += f.declarations;
    total_dir_pass += f.directives_passed();
    total_dir_fail += f.directives_failed();
  }
  os << "total: " << r.files.size() << " files, " << total_decls << " declarations, "
     << total_dir_pass << " directives passed, " << total_dir_fail << " failed, "
     << total_errors << " errors";
  if (!stable) os << ", " << r.total_time_ms << " ms";
  os << "\n";
  return os.str();
}

std::string report_to_json(const CheckReport& r, bool stable) {
  nlohmann::json j;
  j["files"] = nlohmann::json::array();
  for (const auto& f : r.files) {
    nlohmann::json jf;
    jf["path"] = f.path;
    jf["declarations"] = f.declarations;
    jf["directives_passed"] = f.directives_passed();
    jf["directives_failed"] = f.directives_failed();
    jf["directives"] = nlohmann::json::array();
    for (const auto& d : f.directives) {
      nlohmann::json jd;
      jd["kind"] = d.kind;
      jd["passed"] = d.passed;
      jd["detail"] = d.detail;
      jd["span"] = {d.span.start, d.span.end};
      jf["directives"].push_back(std::move(jd));
    }
    jf["errors"] = nlohmann::json::array();
    for (const auto& e : f.errors) {
      nlohmann::json je;
      je["class"] = e.error_class;
      je["message"] = e.message;
      je["span"] = {e.span.start, e.span.end};
      jf["errors"].push_back(std::move(je));
    }
    j["files"].push_back(std::move(jf));
  }
  j["ok"] = r.ok();
  j["exit_code"] = r.exit_code();
  if (!stable) j["total_time_ms"] = r.total_time_ms;
  return j.dump(2) + "\n";
}

}  // namespace hott
