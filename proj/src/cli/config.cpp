#include "torusfold/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "torusfold/error.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("bad value '" + std::string(text) + "' for key '" + key + "'");
  }
  return v;
}

std::string format_list(const std::vector<std::int64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

double ExperimentConfig::bound_constant() const { return cb == "paper" ? 1.0 : kTwoPi; }

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ParseError("unterminated array '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_number<std::int64_t>(item, "array"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value(trim(raw));
  if (key == "a") cfg.a = parse_int_list(value);
  else if (key == "tau") cfg.tau = parse_int_list(value);
  else if (key == "tau_target") cfg.tau_target = parse_number<double>(value, key);
  else if (key == "distribution") cfg.distribution = value;
  else if (key == "sparse_k") cfg.sparse_k = parse_number<std::int64_t>(value, key);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, key);
  else if (key == "draws") cfg.draws = parse_number<std::int64_t>(value, key);
  else if (key == "eps") cfg.eps = parse_number<double>(value, key);
  else if (key == "cap") cfg.cap = parse_number<std::int64_t>(value, key);
  else if (key == "cb") cfg.cb = value;
  else if (key == "max_grid_points") cfg.max_grid_points = parse_number<double>(value, key);
  else if (key == "mc_samples") cfg.mc_samples = parse_number<std::int64_t>(value, key);
  else if (key == "out") cfg.out = value;
  else if (key == "csv") cfg.csv = value;
  else if (key == "poly") cfg.poly = value;
  else if (key == "lemma_dim") cfg.lemma_dim = parse_number<std::int64_t>(value, key);
  else if (key == "lemma_degree") cfg.lemma_degree = parse_number<std::int64_t>(value, key);
  else if (key == "lemma_samples") cfg.lemma_samples = parse_int_list(value);
  else if (key == "lemma_parts") cfg.lemma_parts = parse_number<std::int64_t>(value, key);
  else throw ParseError("unknown configuration key '" + key + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    try {
      set_config_value(cfg, key, std::string(body.substr(eq + 1)));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "a = " << format_list(cfg.a) << "\n";
  os << "tau = " << format_list(cfg.tau) << "\n";
  if (cfg.tau_target) os << "tau_target = " << format_double(*cfg.tau_target) << "\n";
  os << "distribution = " << cfg.distribution << "\n";
  os << "sparse_k = " << cfg.sparse_k << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "draws = " << cfg.draws << "\n";
  os << "eps = " << format_double(cfg.eps) << "\n";
  os << "cap = " << cfg.cap << "\n";
  os << "cb = " << cfg.cb << "\n";
  os << "max_grid_points = " << format_double(cfg.max_grid_points) << "\n";
  os << "mc_samples = " << cfg.mc_samples << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  if (!cfg.csv.empty()) os << "csv = " << cfg.csv << "\n";
  if (!cfg.poly.empty()) os << "poly = " << cfg.poly << "\n";
  os << "lemma_dim = " << cfg.lemma_dim << "\n";
  os << "lemma_degree = " << cfg.lemma_degree << "\n";
  os << "lemma_samples = " << format_list(cfg.lemma_samples) << "\n";
  os << "lemma_parts = " << cfg.lemma_parts << "\n";
  return os.str();
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.cb != "2pi" && cfg.cb != "paper") throw ParseError("cb must be '2pi' or 'paper'");
  if (!(cfg.eps > 0)) throw ParseError("eps must be positive");
  if (cfg.draws < 0) throw ParseError("draws must be >= 0");
  if (cfg.cap < 1) throw ParseError("cap must be >= 1");
  if (cfg.sparse_k < 1) throw ParseError("sparse_k must be >= 1");
  if (cfg.mc_samples < 0) throw ParseError("mc_samples must be >= 0");
  if (cfg.lemma_dim < 1) throw ParseError("lemma_dim must be >= 1");
  if (cfg.lemma_degree < 1) throw ParseError("lemma_degree must be >= 1");
  if (cfg.lemma_parts < 1) throw ParseError("lemma_parts must be >= 1");
  if (cfg.lemma_samples.empty()) throw ParseError("lemma_samples must not be empty");
  for (auto n : cfg.lemma_samples) {
    if (n < 1) throw ParseError("lemma_samples entries must be >= 1");
  }
  if (cfg.tau_target && !(*cfg.tau_target > 0)) throw ParseError("tau_target must be positive");
}

}  // namespace torusfold
