#ifndef CMAP_SEXPR_HPP
#define CMAP_SEXPR_HPP

// Minimal s-expression reader with source positions.  Atoms are
// case-normalized to lower case per PDDL convention; `;` starts a
// comment running to end of line.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmap {

struct SourcePos {
  int line = 0;
  int col = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& msg)
      : std::runtime_error(pos.str() + ": " + msg), pos(pos) {}

  SourcePos pos;
};

struct SExpr {
  bool is_atom = false;
  std::string text;          // atom text, lower-cased
  std::vector<SExpr> items;  // list children
  SourcePos pos;

  const SExpr& at(std::size_t i) const {
    if (i >= items.size())
      throw ParseError(pos, "expected at least " + std::to_string(i + 1) +
                                " list items");
    return items[i];
  }

  // Head word of a list, "" for non-lists / empty lists.
  std::string head() const {
    if (is_atom || items.empty() || !items[0].is_atom) return "";
    return items[0].text;
  }
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return i_ >= text_.size();
  }

  SExpr read() {
    skip_ws();
    if (i_ >= text_.size()) throw ParseError(pos(), "unexpected end of input");
    char c = text_[i_];
    if (c == '(') return read_list();
    if (c == ')') throw ParseError(pos(), "unexpected ')'");
    return read_atom();
  }

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    while (!at_end()) out.push_back(read());
    return out;
  }

 private:
  SourcePos pos() const { return SourcePos{line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_ws() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_list() {
    SExpr node;
    node.pos = pos();
    advance();  // '('
    for (;;) {
      skip_ws();
      if (i_ >= text_.size())
        throw ParseError(node.pos, "unclosed '('");
      if (text_[i_] == ')') {
        advance();
        return node;
      }
      node.items.push_back(read());
    }
  }

  SExpr read_atom() {
    SExpr node;
    node.is_atom = true;
    node.pos = pos();
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '(' || c == ')' || c == ';' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      node.text.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace cmap

#endif  // CMAP_SEXPR_HPP
