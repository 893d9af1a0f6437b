#pragma once

#include <vector>

#include "hott/common.hpp"

namespace hott {

enum class TokKind : uint8_t { Ident, Keyword, Symbol, UnivLit, Directive, Eof };

struct Token {
  TokKind kind = TokKind::Eof;
  std::string text;   // original source text (round-trip preserving)
  std::string canon;  // normalized spelling (ASCII alternatives folded)
  Span span;
};

// Tokenizes UTF-8 source. Comments (`--` line, `/- -/` nested block) are
// skipped. Throws on illegal characters and unterminated block comments.
std::vector<Token> tokenize(const std::string& source, uint32_t file_id = 0);

}  // namespace hott
