#include "dirlab/spec_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace dirlab::replicate {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += i + 1 == v.size() ? " or " : ", ";
    out += v[i];
  }
  return out;
}

std::string syntax_message(std::size_t pos, const std::vector<std::string>& expected, std::string_view text) {
  std::string got = pos < text.size() ? "'" + std::string(1, text[pos]) + "'" : "end of input";
  return "at position " + std::to_string(pos) + ": expected " + join(expected) + ", got " + got;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  zoo::TestFunction parse_all() {
    auto f = spec();
    skip_ws();
    if (pos_ != text_.size()) fail({"end of input"});
    return f;
  }

  Complex complex_all() {
    const Complex z = complex_literal();
    skip_ws();
    if (pos_ != text_.size()) fail({"end of input"});
    return z;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto msg = syntax_message(pos_, expected, text_);
    throw SpecError(SpecError::Kind::syntax, pos_, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail({"'" + std::string(1, c) + "'"});
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<double> try_number() {
    skip_ws();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects a leading '+'
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || !std::isfinite(v)) return std::nullopt;
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  double real() {
    if (auto v = try_number()) return *v;
    fail({"number"});
  }

  int integer() {
    skip_ws();
    const auto start = pos_;
    const double v = real();
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      pos_ = start;
      fail({"integer"});
    }
    return static_cast<int>(v);
  }

  bool at_imag_unit() const { return pos_ < text_.size() && text_[pos_] == 'i'; }

  Complex complex_literal() {
    skip_ws();
    // Bare "i", "+i", "-i".
    const auto start = pos_;
    double sign = 1.0;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      sign = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    if (at_imag_unit()) {
      ++pos_;
      return {0.0, sign};
    }
    pos_ = start;
    const auto re = try_number();
    if (!re) fail({"complex number"});
    if (at_imag_unit()) {
      ++pos_;
      return {0.0, *re};
    }
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const double s = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      double im = 1.0;
      if (!at_imag_unit()) {
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) fail({"number", "'i'"});
        const auto v = try_number();
        if (!v) fail({"number", "'i'"});
        im = *v;
      }
      if (!at_imag_unit()) fail({"'i'"});
      ++pos_;
      return {*re, s * im};
    }
    return {*re, 0.0};
  }

  // After ',' a list continues only if a number follows.
  bool list_continues() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    if (text_[pos_] == ';') return true;
    if (text_[pos_] != ',') return false;
    std::size_t k = pos_ + 1;
    while (k < text_.size() && std::isspace(static_cast<unsigned char>(text_[k]))) ++k;
    if (k >= text_.size()) return false;
    const char c = text_[k];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-') return true;
    return c == 'i' && (k + 1 >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[k + 1])));
  }

  std::vector<Complex> complex_list() {
    std::vector<Complex> out{complex_literal()};
    while (list_continues()) {
      ++pos_;
      out.push_back(complex_literal());
    }
    return out;
  }

  template <class F>
  zoo::TestFunction semantic(std::size_t at, F&& build) {
    try {
      return build();
    } catch (const SpecError&) {
      throw;
    } catch (const std::exception& e) {
      throw SpecError(SpecError::Kind::semantic, at, {}, "at position " + std::to_string(at) + ": " + e.what());
    }
  }

  zoo::TestFunction spec() {
    skip_ws();
    const auto start = pos_;
    const auto name = identifier();
    if (name == "sum" || name == "product") {
      expect('(');
      auto f = spec();
      expect(',');
      auto g = spec();
      expect(')');
      const auto op = name == "sum" ? zoo::CombineOp::sum : zoo::CombineOp::product;
      return semantic(start, [&] { return zoo::combine(op, f, g); });
    }
    if (name == "power") {
      expect('(');
      auto f = spec();
      expect(',');
      const double q = real();
      expect(')');
      return semantic(start, [&] { return zoo::power(f, q); });
    }
    if (name == "monomial") {
      expect(':');
      const int n = integer();
      return semantic(start, [&] { return zoo::make_monomial(n); });
    }
    if (name == "fab") {
      expect(':');
      const double a = real();
      expect(':');
      const double b = real();
      return semantic(start, [&] { return zoo::make_fab({a, b}); });
    }
    if (name == "powerouter") {
      expect(':');
      const double c = real();
      double scale = 1.0;
      if (peek(':')) {
        ++pos_;
        scale = real();
      }
      return semantic(start, [&] { return zoo::make_power_outer(c, scale); });
    }
    if (name == "blaschke") {
      expect(':');
      auto zeros = complex_list();
      return semantic(start, [&] { return zoo::make_blaschke(std::move(zeros)); });
    }
    if (name == "atomic") {
      expect(':');
      const double sigma = real();
      return semantic(start, [&] { return zoo::make_atomic(sigma); });
    }
    if (name == "kernel") {
      expect(':');
      const Complex a = complex_literal();
      expect(':');
      const double s = real();
      return semantic(start, [&] { return zoo::make_conformal_kernel(a, s); });
    }
    if (name == "counterexample") {
      expect(':');
      const double alpha = real();
      expect(':');
      const double p = real();
      expect(':');
      const double eps = real();
      return semantic(start, [&] { return zoo::counterexample_h(alpha, p, eps).h; });
    }
    pos_ = start;
    fail({"sum", "product", "power", "monomial", "fab", "powerouter", "blaschke", "atomic", "kernel",
          "counterexample"});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SpecError::SpecError(Kind kind, std::size_t position, std::vector<std::string> expected, const std::string& message)
    : std::runtime_error(message), kind_(kind), position_(position), expected_(std::move(expected)) {}

zoo::TestFunction parse_function_spec(std::string_view text) { return Parser(text).parse_all(); }

Complex parse_complex(std::string_view text) { return Parser(text).complex_all(); }

}  // namespace dirlab::replicate
