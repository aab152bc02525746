#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ru/term/term.hpp"

namespace ru {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// Cursor over Prolog-like text. Atoms `[a-z][A-Za-z0-9_]*`, variables
// `[A-Z_][A-Za-z0-9_]*` (a lone `_` is anonymous and fresh per occurrence),
// integers with optional `-`, compounds `f(t1, ..., tn)`, the cut `!`, and
// `%` line comments. Shared by every file-format loader.
class TermReader {
public:
  TermReader(TermStore& store, std::string_view text, std::size_t first_line = 1);

  Term read_term();
  // Comma-separated terms up to (not including) the first token that cannot
  // continue the list.
  std::vector<Term> read_term_list();

  // Skips whitespace and comments; true when no input remains.
  bool at_end();
  // Consume `token` if it is next (after whitespace).
  bool accept(std::string_view token);
  void expect(std::string_view token);
  bool peek_identifier(std::string_view word);
  std::string read_identifier();

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  [[noreturn]] void fail(const std::string& message) const;

private:
  void skip_space();
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek_at(std::size_t off) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }
  void advance();
  std::string_view scan_word();

  TermStore& store_;
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_ = 1;
};

// Parse exactly one term; an optional trailing `.` is accepted.
Term parse_term(TermStore& store, std::string_view text);
std::vector<Term> parse_term_list(TermStore& store, std::string_view text);

}  // namespace ru
