#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hott {

using Name = std::string;

// Byte range into a source buffer. end is exclusive. file_id indexes the
// driver's file table; 0 means "no file" (terms built programmatically).
struct Span {
  uint32_t start = 0;
  uint32_t end = 0;
  uint32_t file_id = 0;
};

enum class ErrorClass {
  Lex,
  Parse,
  Elab,
  Kernel,
  Positivity,
  Universe,
  Instance,
  Coercion,
  Prerequisite,
  Io,
  Internal,
};

struct Error : std::runtime_error {
  ErrorClass cls;
  Span span;
  Error(ErrorClass c, std::string msg, Span s = {})
      : std::runtime_error(std::move(msg)), cls(c), span(s) {}
};

inline const char* error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::Lex: return "lex";
    case ErrorClass::Parse: return "parse";
    case ErrorClass::Elab: return "elab";
    case ErrorClass::Kernel: return "kernel";
    case ErrorClass::Positivity: return "positivity";
    case ErrorClass::Universe: return "universe";
    case ErrorClass::Instance: return "instance";
    case ErrorClass::Coercion: return "coercion";
    case ErrorClass::Prerequisite: return "prerequisite";
    case ErrorClass::Io: return "io";
    case ErrorClass::Internal: return "internal";
  }
  return "?";
}

}  // namespace hott
