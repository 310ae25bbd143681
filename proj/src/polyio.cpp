#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "torusfold/error.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold {

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line) {
  T value{};
  const char* begin = tok.data();
  if (!tok.empty() && tok.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

std::string format_poly(const TrigPoly& f) {
  std::string out = "# dim " + std::to_string(f.dim()) + "\n";
  for (const auto& [lambda, c] : f.coeffs()) {
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(lambda[k]);
    }
    out += lambda.empty() ? ": " : " : ";
    append_double(out, c.real());
    out += ' ';
    append_double(out, c.imag());
    out += '\n';
  }
  return out;
}

TrigPoly parse_poly(std::string_view text, std::optional<std::size_t> dim) {
  struct Term {
    Frequency lambda;
    Complex c;
  };
  std::vector<Term> terms;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto toks = split_ws(line.substr(1));
      if (toks.size() == 2 && toks[0] == "dim") {
        const auto d = parse_number<std::size_t>(toks[1], line_no);
        if (dim && *dim != d) {
          throw ParseError("line " + std::to_string(line_no) + ": dimension " +
                           std::to_string(d) + " conflicts with " + std::to_string(*dim));
        }
        dim = d;
      }
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'l_1 ... l_d : re im'");
    }
    Term term;
    for (auto tok : split_ws(line.substr(0, colon))) {
      term.lambda.push_back(parse_number<std::int64_t>(tok, line_no));
    }
    const auto amp = split_ws(line.substr(colon + 1));
    if (amp.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two amplitude fields");
    }
    term.c = {parse_number<double>(amp[0], line_no), parse_number<double>(amp[1], line_no)};
    if (!dim) dim = term.lambda.size();
    if (term.lambda.size() != *dim) {
      throw ParseError("line " + std::to_string(line_no) + ": frequency has " +
                       std::to_string(term.lambda.size()) + " entries, expected " +
                       std::to_string(*dim));
    }
    terms.push_back(std::move(term));
  }
  if (!dim) throw ParseError("empty polynomial literal without a '# dim D' line");
  TrigPoly f(*dim);
  std::set<Frequency> seen;
  for (const auto& t : terms) {
    if (!seen.insert(t.lambda).second) {
      throw ParseError("duplicate frequency " + to_string(MultiIndex(t.lambda.empty()
                                                                         ? Frequency{0}
                                                                         : t.lambda)));
    }
    f.add_term(t.lambda, t.c);
  }
  return f;
}

TrigPoly read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open polynomial file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_poly(buf.str());
}

void write_poly_file(const std::string& path, const TrigPoly& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write polynomial file " + path);
  out << format_poly(f);
}

}  // namespace torusfold
