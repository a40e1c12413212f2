#include "core/config_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace defog {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "config line " << line << ": " << what;
  throw PlanError(msg.str());
}

double parse_double(const std::string& v, int line) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double d = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    fail(line, "expected a number, got '" + t + "'");
  return d;
}

int parse_int(const std::string& v, int line) {
  const std::string t = trim(v);
  char* end = nullptr;
  const long n = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    fail(line, "expected an integer, got '" + t + "'");
  return static_cast<int>(n);
}

bool parse_bool(const std::string& v, int line) {
  const std::string t = trim(v);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  fail(line, "expected a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

PlanFile parse_config_text(const std::string& text) {
  PlanFile file;
  SolverConfig& s = file.solver;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(line, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section != "prior" && section != "pde" && section != "stopping" &&
          section != "plan")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "prior") {
      if (key == "omega") s.omega = parse_double(value, line);
      else if (key == "patch_radius") s.patch_radius = parse_int(value, line);
      else if (key == "airlight_fraction") s.airlight_fraction = parse_double(value, line);
      else if (key == "refine_sigma") s.refine_sigma = parse_double(value, line);
      else if (key == "t_floor") s.t_floor = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [prior]");
    } else if (section == "pde") {
      if (key == "lambda_damp") s.lambda_damp = parse_double(value, line);
      else if (key == "lambda_fid") s.lambda_fid = parse_double(value, line);
      else if (key == "k") s.k = parse_double(value, line);
      else if (key == "alpha") s.alpha = parse_double(value, line);
      else if (key == "xi") s.xi = parse_double(value, line);
      else if (key == "v") s.v = parse_double(value, line);
      else if (key == "tau") s.tau = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [pde]");
    } else if (section == "stopping") {
      if (key == "toll") s.toll = parse_double(value, line);
      else if (key == "max_iters") s.max_iters = parse_int(value, line);
      else if (key == "eps_rel") s.eps_rel = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [stopping]");
    } else {  // plan
      if (key == "input") {
        if (value.empty()) fail(line, "input path is empty");
        file.inputs.push_back(value);
      } else if (key == "fog_levels") {
        std::vector<double> levels;
        for (const std::string& item : split_list(value))
          levels.push_back(parse_double(item, line));
        file.fog_levels = std::move(levels);
      } else if (key == "methods") {
        file.methods = split_list(value);
      } else if (key == "fog_airlight") {
        file.fog_airlight = parse_double(value, line);
      } else if (key == "output_dir") {
        if (value.empty()) fail(line, "output_dir is empty");
        file.output_dir = value;
      } else if (key == "emit_traces") {
        file.emit_traces = parse_bool(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [plan]");
      }
    }
  }
  return file;
}

PlanFile load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace defog
