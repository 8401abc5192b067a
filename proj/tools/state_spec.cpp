#include "state_spec.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qhelper/errors.hpp"

namespace qhelper::cli {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": bad number '" + s + "'");
  }
}

}  // namespace

io::AnyState load_state(const std::string& spec) {
  if (spec == "bell") return bell_pair().to_density();
  if (spec.rfind("isotropic:", 0) == 0)
    return isotropic_state(parse_num(spec.substr(10), "isotropic"));
  if (spec.rfind("product:", 0) == 0) {
    const auto parts = split(spec.substr(8), ',');
    if (parts.size() != 2)
      throw ValidationError("product preset: expected product:H1,H2");
    return product_state(parse_num(parts[0], "product"), parse_num(parts[1], "product"));
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = split(spec.substr(7), ',');
    if (parts.size() != 3)
      throw ValidationError("random preset: expected random:DA,DB,SEED");
    const int da = static_cast<int>(parse_num(parts[0], "random"));
    const int db = static_cast<int>(parse_num(parts[1], "random"));
    const auto seed = static_cast<std::uint64_t>(parse_num(parts[2], "random"));
    Rng rng(mix_seed(seed));
    return random_density(SystemLayout({"A", "B"}, {da, db}), rng);
  }
  if (!spec.empty() && (spec[0] == '{' || spec[0] == '['))
    return io::state_from_json(spec);
  if (std::filesystem::exists(spec)) return io::state_from_json(read_file(spec));
  throw ValidationError("unknown state spec '" + spec + "'");
}

io::ChannelSpec load_channel(const std::string& spec) {
  if (spec.rfind("preset:", 0) == 0) return io::ChannelSpec::preset(spec.substr(7));
  if (!spec.empty() && spec[0] == '{') return io::channel_from_json(spec);
  if (std::filesystem::exists(spec)) return io::channel_from_json(read_file(spec));
  // Bare preset names are accepted for convenience.
  return io::ChannelSpec::preset(spec);
}

}  // namespace qhelper::cli
