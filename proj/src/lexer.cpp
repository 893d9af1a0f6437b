#include "hott/token.hpp"

#include <cstring>

namespace hott {

namespace {

// Reserved notation codepoints; everything else non-ASCII is an identifier
// character.
constexpr uint32_t CP_LAMBDA = 0x03BB;   // λ
constexpr uint32_t CP_PI = 0x03A0;       // Π
constexpr uint32_t CP_SIGMA = 0x03A3;    // Σ
constexpr uint32_t CP_ARROW = 0x2192;    // →
constexpr uint32_t CP_CDOT = 0x2B1D;     // ⬝
constexpr uint32_t CP_SUPMINUS = 0x207B; // ⁻
constexpr uint32_t CP_SUPONE = 0x00B9;   // ¹
constexpr uint32_t CP_TRIANGLE = 0x25B8; // ▸
constexpr uint32_t CP_SIMEQ = 0x2243;    // ≃
constexpr uint32_t CP_TIMES = 0x00D7;    // ×
constexpr uint32_t CP_CIRC = 0x2218;     // ∘

struct Cursor {
  const std::string& src;
  size_t pos = 0;
  uint32_t file_id;

  bool eof() const { return pos >= src.size(); }
  char peek(size_t k = 0) const { return pos + k < src.size() ? src[pos + k] : '\0'; }

  // Decodes the codepoint at pos; len receives its byte length.
  uint32_t codepoint(size_t& len) const {
    unsigned char c = static_cast<unsigned char>(src[pos]);
    if (c < 0x80) { len = 1; return c; }
    uint32_t cp = 0;
    size_t n = 0;
    if ((c >> 5) == 0x6) { cp = c & 0x1F; n = 2; }
    else if ((c >> 4) == 0xE) { cp = c & 0x0F; n = 3; }
    else if ((c >> 3) == 0x1E) { cp = c & 0x07; n = 4; }
    else throw Error(ErrorClass::Lex, "invalid UTF-8 byte",
                     Span{static_cast<uint32_t>(pos), static_cast<uint32_t>(pos + 1), file_id});
    if (pos + n > src.size())
      throw Error(ErrorClass::Lex, "truncated UTF-8 sequence",
                  Span{static_cast<uint32_t>(pos), static_cast<uint32_t>(src.size()), file_id});
    for (size_t i = 1; i < n; ++i) cp = (cp << 6) | (static_cast<unsigned char>(src[pos + i]) & 0x3F);
    len = n;
    return cp;
  }
};

bool is_reserved_cp(uint32_t cp) {
  switch (cp) {
    case CP_LAMBDA: case CP_PI: case CP_SIGMA: case CP_ARROW: case CP_CDOT:
    case CP_SUPMINUS: case CP_TRIANGLE: case CP_SIMEQ: case CP_TIMES: case CP_CIRC:
      return true;
    default:
      return false;
  }
}

bool ident_start_ascii(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_cont_ascii(char c) {
  return ident_start_ascii(c) || (c >= '0' && c <= '9') || c == '\'';
}

bool is_keyword(const std::string& s) {
  return s == "definition" || s == "axiom" || s == "inductive" || s == "hit" ||
         s == "attribute" || s == "import" || s == "Type";
}

}  // namespace

std::vector<Token> tokenize(const std::string& source, uint32_t file_id) {
  std::vector<Token> out;
  Cursor c{source, 0, file_id};

  auto span_from = [&](size_t start) {
    return Span{static_cast<uint32_t>(start), static_cast<uint32_t>(c.pos), file_id};
  };
  auto emit = [&](TokKind k, size_t start, const std::string& canon = "") {
    std::string text = source.substr(start, c.pos - start);
    out.push_back(Token{k, text, canon.empty() ? text : canon, span_from(start)});
  };
  auto lex_error = [&](const std::string& msg, size_t start) -> void {
    throw Error(ErrorClass::Lex, msg, span_from(start));
  };

  while (!c.eof()) {
    char ch = c.peek();
    size_t start = c.pos;

    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') { ++c.pos; continue; }

    // Comments.
    if (ch == '-' && c.peek(1) == '-') {
      while (!c.eof() && c.peek() != '\n') ++c.pos;
      continue;
    }
    if (ch == '/' && c.peek(1) == '-') {
      size_t depth = 1;
      c.pos += 2;
      while (depth > 0) {
        if (c.eof()) lex_error("unterminated block comment", start);
        if (c.peek() == '/' && c.peek(1) == '-') { depth++; c.pos += 2; }
        else if (c.peek() == '-' && c.peek(1) == '/') { depth--; c.pos += 2; }
        else ++c.pos;
      }
      continue;
    }

    // Directives.
    if (ch == '#') {
      ++c.pos;
      while (!c.eof() && ident_cont_ascii(c.peek())) ++c.pos;
      std::string text = source.substr(start, c.pos - start);
      if (text != "#defeq" && text != "#check" && text != "#print_axioms" &&
          text != "#normalize")
        lex_error("unknown directive '" + text + "'", start);
      emit(TokKind::Directive, start);
      continue;
    }

    // Universe literals (digits only).
    if (ch >= '0' && ch <= '9') {
      while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') ++c.pos;
      emit(TokKind::UnivLit, start);
      continue;
    }

    // ASCII alternatives and multi-char symbols.
    if (ch == ':') {
      c.pos += c.peek(1) == '=' ? 2 : 1;
      emit(TokKind::Symbol, start);
      continue;
    }
    if (ch == '.') {
      if (c.peek(1) == '{') { c.pos += 2; emit(TokKind::Symbol, start); continue; }
      lex_error("stray '.'", start);
    }
    if (ch == '-') {
      if (c.peek(1) == '>') { c.pos += 2; emit(TokKind::Symbol, start, "→"); continue; }
      if (c.peek(1) == '1') { c.pos += 2; emit(TokKind::Symbol, start, "⁻¹"); continue; }
      lex_error("illegal character '-'", start);
    }
    if (ch == '=') {
      if (c.peek(1) == '[') { c.pos += 2; emit(TokKind::Symbol, start); continue; }
      ++c.pos;
      emit(TokKind::Symbol, start);
      continue;
    }
    if (ch == '|') {
      if (c.peek(1) == '>') { c.pos += 2; emit(TokKind::Symbol, start, "▸"); continue; }
      ++c.pos;
      emit(TokKind::Symbol, start);
      continue;
    }
    if (ch == '~') {
      if (c.peek(1) == '=') { c.pos += 2; emit(TokKind::Symbol, start, "≃"); continue; }
      lex_error("illegal character '~'", start);
    }
    if (ch == '\\') {
      auto alt = [&](const char* word, const char* canon) {
        size_t n = strlen(word);
        if (source.compare(c.pos + 1, n, word) == 0) {
          // The replacement must not swallow identifier characters.
          char after = c.pos + 1 + n < source.size() ? source[c.pos + 1 + n] : '\0';
          if (!ident_cont_ascii(after) || !ident_start_ascii(word[0])) {
            c.pos += 1 + n;
            emit(TokKind::Symbol, start, canon);
            return true;
          }
        }
        return false;
      };
      if (alt("Pi", "Π") || alt("Sigma", "Σ") || alt("lam", "λ") ||
          alt(".", "⬝") || alt("x", "×") || alt("o", "∘"))
        continue;
      lex_error("unknown escape", start);
    }
    if (ch == '(' || ch == ')' || ch == '{' || ch == '}' || ch == '[' || ch == ']' ||
        ch == ',' || ch == '@' || ch == '+' || ch == '*') {
      ++c.pos;
      emit(TokKind::Symbol, start);
      continue;
    }
    if (ch == '_' && !ident_cont_ascii(c.peek(1))) {
      ++c.pos;
      emit(TokKind::Symbol, start);
      continue;
    }

    // Identifiers (ASCII or Unicode) and reserved Unicode symbols.
    if (ident_start_ascii(ch) || static_cast<unsigned char>(ch) >= 0x80) {
      size_t len;
      uint32_t cp = static_cast<unsigned char>(ch) < 0x80 ? ch : c.codepoint(len);
      if (static_cast<unsigned char>(ch) >= 0x80 && is_reserved_cp(cp)) {
        c.codepoint(len);
        c.pos += len;
        if (cp == CP_SUPMINUS) {
          if (c.eof()) lex_error("expected ¹ after ⁻", start);
          size_t l2;
          uint32_t cp2 = c.codepoint(l2);
          if (cp2 != CP_SUPONE) lex_error("expected ¹ after ⁻", start);
          c.pos += l2;
        }
        emit(TokKind::Symbol, start);
        continue;
      }
      // Identifier: letters, digits, _, ', ., subscripts, unreserved Unicode.
      while (!c.eof()) {
        char k = c.peek();
        if (ident_cont_ascii(k)) { ++c.pos; continue; }
        if (k >= '0' && k <= '9') { ++c.pos; continue; }
        if (k == '.') {
          // `.{` ends the identifier; a dot followed by another identifier
          // character is part of the dotted name.
          char nxt = c.peek(1);
          if (nxt == '{') break;
          if (ident_cont_ascii(nxt) || static_cast<unsigned char>(nxt) >= 0x80) {
            ++c.pos;
            continue;
          }
          break;
        }
        if (static_cast<unsigned char>(k) >= 0x80) {
          size_t l2;
          uint32_t cp2 = c.codepoint(l2);
          if (is_reserved_cp(cp2)) break;
          c.pos += l2;
          continue;
        }
        break;
      }
      std::string text = source.substr(start, c.pos - start);
      emit(is_keyword(text) ? TokKind::Keyword : TokKind::Ident, start);
      continue;
    }

    lex_error(std::string("illegal character '") + ch + "'", start);
  }

  out.push_back(Token{TokKind::Eof, "", "",
                      Span{static_cast<uint32_t>(source.size()),
                           static_cast<uint32_t>(source.size()), file_id}});
  return out;
}

}  // namespace hott
