#include "ru/term/parser.hpp"

#include <cctype>
#include <charconv>

namespace ru {
namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

TermReader::TermReader(TermStore& store, std::string_view text, std::size_t first_line)
    : store_(store), text_(text), line_(first_line) {}

void TermReader::fail(const std::string& message) const { throw ParseError(line_, column_, message); }

void TermReader::advance() {
  if (peek() == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void TermReader::skip_space() {
  while (pos_ < text_.size()) {
    char c = peek();
    if (c == '%') {
      while (pos_ < text_.size() && peek() != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else {
      break;
    }
  }
}

bool TermReader::at_end() {
  skip_space();
  return pos_ >= text_.size();
}

bool TermReader::accept(std::string_view token) {
  skip_space();
  if (text_.substr(pos_, token.size()) != token) return false;
  // Do not split identifiers: `pre` must not match the start of `prefix`.
  if (!token.empty() && is_word_char(token.back()) && is_word_char(peek_at(token.size()))) return false;
  for (std::size_t i = 0; i < token.size(); ++i) advance();
  return true;
}

void TermReader::expect(std::string_view token) {
  if (!accept(token)) {
    if (pos_ >= text_.size()) fail("expected '" + std::string(token) + "', found end of input");
    fail("expected '" + std::string(token) + "', found '" + std::string(1, peek()) + "'");
  }
}

std::string_view TermReader::scan_word() {
  const std::size_t start = pos_;
  while (is_word_char(peek())) advance();
  return text_.substr(start, pos_ - start);
}

bool TermReader::peek_identifier(std::string_view word) {
  skip_space();
  return text_.substr(pos_, word.size()) == word && !is_word_char(peek_at(word.size()));
}

std::string TermReader::read_identifier() {
  skip_space();
  if (!is_lower(peek()) && !is_upper(peek())) fail("expected identifier");
  return std::string(scan_word());
}

Term TermReader::read_term() {
  skip_space();
  if (pos_ >= text_.size()) fail("unexpected end of input, expected a term");
  const char c = peek();

  if (c == '!') {
    advance();
    return store_.atom("!");
  }

  if (is_digit(c) || (c == '-' && is_digit(peek_at(1)))) {
    const std::size_t start = pos_;
    if (c == '-') advance();
    while (is_digit(peek())) advance();
    std::int64_t value{};
    auto digits = text_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{}) fail("integer out of range: " + std::string(digits));
    (void)ptr;
    return store_.number(value);
  }

  if (is_upper(c)) {
    auto name = scan_word();
    if (name == "_") return store_.fresh_variable(store_.intern("_"));
    return store_.variable(name);
  }

  if (is_lower(c)) {
    const std::size_t line = line_;
    const std::size_t column = column_;
    auto name = std::string(scan_word());
    if (!accept("(")) return store_.atom(name);
    if (accept(")")) throw ParseError(line, column, "zero-arity compound '" + name + "()' is not allowed");
    std::vector<Term> args;
    args.push_back(read_term());
    while (accept(",")) args.push_back(read_term());
    expect(")");
    return store_.compound(store_.intern(name), args);
  }

  fail(std::string("unexpected character '") + c + "'");
}

std::vector<Term> TermReader::read_term_list() {
  std::vector<Term> out;
  out.push_back(read_term());
  while (accept(",")) out.push_back(read_term());
  return out;
}

Term parse_term(TermStore& store, std::string_view text) {
  TermReader reader(store, text);
  Term t = reader.read_term();
  reader.accept(".");
  if (!reader.at_end()) reader.fail("unexpected trailing input");
  return t;
}

std::vector<Term> parse_term_list(TermStore& store, std::string_view text) {
  TermReader reader(store, text);
  if (reader.at_end()) return {};
  auto out = reader.read_term_list();
  reader.accept(".");
  if (!reader.at_end()) reader.fail("unexpected trailing input");
  return out;
}

}  // namespace ru
