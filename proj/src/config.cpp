#include "minmaxkit/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "minmaxkit/error.hpp"
#include "minmaxkit/linops.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

std::string_view problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::kToy: return "toy";
    case ProblemKind::kQuadratic: return "quadratic";
    case ProblemKind::kImagingDeblur: return "imaging_deblur";
    case ProblemKind::kImagingSuperRes: return "imaging_superres";
    case ProblemKind::kCustom: return "custom";
  }
  return "toy";
}

ProblemKind parse_problem_kind(std::string_view s) {
  for (auto k : {ProblemKind::kToy, ProblemKind::kQuadratic, ProblemKind::kImagingDeblur,
                 ProblemKind::kImagingSuperRes, ProblemKind::kCustom})
    if (problem_kind_name(k) == s) return k;
  throw Error(ErrorCode::kConfigParse, "unknown problem '" + std::string(s) + "'");
}

bool RunConfig::wants(const std::string& diagnostic) const {
  for (const auto& d : diagnostics)
    if (d == diagnostic) return true;
  return false;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

std::vector<std::string> list_items(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  for (const auto& p : split(v, ',')) out.emplace_back(trim(p));
  return out;
}

std::string fmt_doubles(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double d : v) parts.push_back(format_double(d));
  return join(parts);
}

std::vector<double> parse_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& p : list_items(v)) out.push_back(parse_double(p));
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorCode::kConfigParse, "expected true or false, got '" + v + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string fmt_step(const StepChoice& s) {
  if (s.automatic) return "auto";
  if (s.value == 0.0) return "default";
  return format_double(s.value);
}

StepChoice parse_step(const std::string& v) {
  if (v == "auto") return {true, 0.0};
  if (v == "default") return {false, 0.0};
  const double d = parse_double(v);
  if (!(d > 0.0)) throw Error(ErrorCode::kConfigParse, "step size must be positive or auto");
  return {false, d};
}

std::string_view init_name(InitMode m) {
  switch (m) {
    case InitMode::kDefault: return "default";
    case InitMode::kExplicit: return "explicit";
    case InitMode::kRandom: return "random";
  }
  return "default";
}

InitMode parse_init(const std::string& v) {
  for (auto m : {InitMode::kDefault, InitMode::kExplicit, InitMode::kRandom})
    if (init_name(m) == v) return m;
  throw Error(ErrorCode::kConfigParse, "unknown init mode '" + v + "'");
}

struct Key {
  const char* section;
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"run", "problem", [](const RunConfig& c) { return std::string(problem_kind_name(c.problem)); },
       [](RunConfig& c, const std::string& v) { c.problem = parse_problem_kind(v); }},
      {"run", "schemes",
       [](const RunConfig& c) {
         std::vector<std::string> p;
         for (auto s : c.schemes) p.emplace_back(scheme_name(s));
         return join(p);
       },
       [](RunConfig& c, const std::string& v) {
         c.schemes.clear();
         for (const auto& s : list_items(v)) c.schemes.push_back(parse_scheme(s));
       }},
      {"run", "seeds",
       [](const RunConfig& c) {
         std::vector<std::string> p;
         for (auto s : c.seeds) p.push_back(std::to_string(s));
         return join(p);
       },
       [](RunConfig& c, const std::string& v) {
         c.seeds.clear();
         for (const auto& s : list_items(v)) {
           const long long n = parse_int(s);
           if (n < 0) throw Error(ErrorCode::kConfigParse, "seeds must be non-negative");
           c.seeds.push_back(static_cast<std::uint64_t>(n));
         }
       }},
      {"run", "max_iter", [](const RunConfig& c) { return std::to_string(c.max_iter); },
       [](RunConfig& c, const std::string& v) {
         c.max_iter = parse_int(v);
         if (c.max_iter < 0) throw Error(ErrorCode::kConfigParse, "max_iter must be >= 0");
       }},
      {"run", "grad_tol",
       [](const RunConfig& c) { return c.grad_tol ? format_double(*c.grad_tol) : std::string("none"); },
       [](RunConfig& c, const std::string& v) {
         c.grad_tol = v == "none" ? std::nullopt : std::optional<double>(parse_double(v));
       }},
      {"run", "inner_tol", [](const RunConfig& c) { return format_double(c.inner_tol); },
       [](RunConfig& c, const std::string& v) {
         c.inner_tol = parse_double(v);
         if (!(c.inner_tol > 0.0)) throw Error(ErrorCode::kConfigParse, "inner_tol must be positive");
       }},
      {"run", "output_dir", [](const RunConfig& c) { return c.output_dir; },
       [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"run", "diagnostics", [](const RunConfig& c) { return join(c.diagnostics); },
       [](RunConfig& c, const std::string& v) {
         c.diagnostics = list_items(v);
         for (const auto& d : c.diagnostics)
           if (d != "trace" && d != "certificates" && d != "stationarity" && d != "margins")
             throw Error(ErrorCode::kConfigParse, "unknown diagnostic '" + d + "'");
       }},
      {"run", "epsilons", [](const RunConfig& c) { return fmt_doubles(c.epsilons); },
       [](RunConfig& c, const std::string& v) { c.epsilons = parse_doubles(v); }},
      {"run", "override_assumption4", [](const RunConfig& c) { return fmt_bool(c.override_assumption4); },
       [](RunConfig& c, const std::string& v) { c.override_assumption4 = parse_bool(v); }},
      {"run", "validate_trials", [](const RunConfig& c) { return std::to_string(c.validate_trials); },
       [](RunConfig& c, const std::string& v) { c.validate_trials = parse_int(v); }},
      {"steps", "eta_x", [](const RunConfig& c) { return fmt_step(c.eta_x); },
       [](RunConfig& c, const std::string& v) { c.eta_x = parse_step(v); }},
      {"steps", "eta_x_gdrga", [](const RunConfig& c) { return fmt_step(c.eta_x_gdrga); },
       [](RunConfig& c, const std::string& v) { c.eta_x_gdrga = parse_step(v); }},
      {"steps", "eta_x_pdrga", [](const RunConfig& c) { return fmt_step(c.eta_x_pdrga); },
       [](RunConfig& c, const std::string& v) { c.eta_x_pdrga = parse_step(v); }},
      {"steps", "eta_x_ppga", [](const RunConfig& c) { return fmt_step(c.eta_x_ppga); },
       [](RunConfig& c, const std::string& v) { c.eta_x_ppga = parse_step(v); }},
      {"steps", "eta_y", [](const RunConfig& c) { return fmt_step(c.eta_y); },
       [](RunConfig& c, const std::string& v) { c.eta_y = parse_step(v); }},
      {"steps", "auto_steps", [](const RunConfig& c) { return fmt_bool(c.auto_steps); },
       [](RunConfig& c, const std::string& v) { c.auto_steps = parse_bool(v); }},
      {"init", "mode", [](const RunConfig& c) { return std::string(init_name(c.init)); },
       [](RunConfig& c, const std::string& v) { c.init = parse_init(v); }},
      {"init", "x", [](const RunConfig& c) { return fmt_doubles(c.init_x); },
       [](RunConfig& c, const std::string& v) { c.init_x = parse_doubles(v); }},
      {"init", "y", [](const RunConfig& c) { return fmt_doubles(c.init_y); },
       [](RunConfig& c, const std::string& v) { c.init_y = parse_doubles(v); }},
      {"init", "scale", [](const RunConfig& c) { return format_double(c.init_scale); },
       [](RunConfig& c, const std::string& v) { c.init_scale = parse_double(v); }},
      {"quadratic", "a", [](const RunConfig& c) { return format_double(c.quad_a); },
       [](RunConfig& c, const std::string& v) { c.quad_a = parse_double(v); }},
      {"quadratic", "b", [](const RunConfig& c) { return format_double(c.quad_b); },
       [](RunConfig& c, const std::string& v) { c.quad_b = parse_double(v); }},
      {"quadratic", "c", [](const RunConfig& c) { return format_double(c.quad_c); },
       [](RunConfig& c, const std::string& v) { c.quad_c = parse_double(v); }},
      {"quadratic", "dim", [](const RunConfig& c) { return std::to_string(c.quad_dim); },
       [](RunConfig& c, const std::string& v) {
         c.quad_dim = parse_int(v);
         if (c.quad_dim < 1) throw Error(ErrorCode::kConfigParse, "quadratic.dim must be >= 1");
       }},
      {"imaging", "size", [](const RunConfig& c) { return std::to_string(c.image_size); },
       [](RunConfig& c, const std::string& v) {
         c.image_size = parse_int(v);
         if (c.image_size < 1) throw Error(ErrorCode::kConfigParse, "imaging.size must be >= 1");
       }},
      {"imaging", "factor", [](const RunConfig& c) { return std::to_string(c.factor); },
       [](RunConfig& c, const std::string& v) {
         c.factor = parse_int(v);
         if (c.factor < 1) throw Error(ErrorCode::kConfigParse, "imaging.factor must be >= 1");
       }},
      {"imaging", "kernel", [](const RunConfig& c) { return c.kernel; },
       [](RunConfig& c, const std::string& v) {
         parse_kernel(v);
         c.kernel = v;
       }},
      {"imaging", "sigma", [](const RunConfig& c) { return format_double(c.sigma); },
       [](RunConfig& c, const std::string& v) { c.sigma = parse_double(v); }},
      {"imaging", "noise",
       [](const RunConfig& c) { return c.noise_level ? format_double(*c.noise_level) : std::string("sigma"); },
       [](RunConfig& c, const std::string& v) {
         c.noise_level = v == "sigma" ? std::nullopt : std::optional<double>(parse_double(v));
       }},
      {"imaging", "lambda",
       [](const RunConfig& c) { return c.lambda ? format_double(*c.lambda) : std::string("cap"); },
       [](RunConfig& c, const std::string& v) {
         c.lambda = v == "cap" ? std::nullopt : std::optional<double>(parse_double(v));
       }},
      {"imaging", "g", [](const RunConfig& c) { return c.g.to_string(); },
       [](RunConfig& c, const std::string& v) { c.g = ProxSpec::parse(v); }},
      {"imaging", "enforce_lambda_cap", [](const RunConfig& c) { return fmt_bool(c.enforce_lambda_cap); },
       [](RunConfig& c, const std::string& v) { c.enforce_lambda_cap = parse_bool(v); }},
      {"custom", "path", [](const RunConfig& c) { return c.custom_path; },
       [](RunConfig& c, const std::string& v) { c.custom_path = v; }},
  };
  return k;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, const Key*> index;
  for (const auto& k : keys()) index[std::string(k.section) + "." + k.name] = &k;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line(trim(std::string_view(raw).substr(0, hash)));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      require(line.back() == ']' && line.size() > 2, ErrorCode::kConfigParse,
              where + "malformed section header");
      section = std::string(trim(std::string_view(line).substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::kConfigParse, where + "expected key = value");
    std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string value(trim(std::string_view(line).substr(eq + 1)));
    if (key.find('.') == std::string::npos) {
      require(!section.empty(), ErrorCode::kConfigParse, where + "key outside a section");
      key = section + "." + key;
    }
    const auto it = index.find(key);
    require(it != index.end(), ErrorCode::kConfigParse, where + "unknown key '" + key + "'");
    try {
      it->second->set(c, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigParse, where + key + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kConfigParse, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(c) + "\n";
  }
  return out;
}

Kernel2D parse_kernel(const std::string& spec) {
  const std::string s(trim(spec));
  if (s == "delta") return Kernel2D::delta();
  if (s == "triangle4") return Kernel2D::triangle4();
  const auto open = s.find('(');
  require(open != std::string::npos && s.back() == ')', ErrorCode::kConfigParse,
          "bad kernel '" + s + "'");
  const std::string name = s.substr(0, open);
  const auto args = parse_doubles(s.substr(open + 1, s.size() - open - 2));
  auto size_arg = [&](double v) {
    require(v >= 1.0 && v == static_cast<double>(static_cast<std::size_t>(v)),
            ErrorCode::kConfigParse, "kernel size must be a positive integer");
    return static_cast<std::size_t>(v);
  };
  if (name == "gaussian" && args.size() == 2) return Kernel2D::gaussian(size_arg(args[0]), args[1]);
  if (name == "uniform" && args.size() == 1) return Kernel2D::uniform(size_arg(args[0]));
  if (name == "separable" && !args.empty()) return Kernel2D::separable(args);
  throw Error(ErrorCode::kConfigParse, "bad kernel '" + s + "'");
}

namespace {

DenseMatrix json_matrix(const nlohmann::json& j, const std::string& name) {
  require(j.is_array() && !j.empty(), ErrorCode::kConfigParse, name + " must be a non-empty array");
  DenseMatrix m;
  m.rows = j.size();
  m.cols = j[0].size();
  for (const auto& row : j) {
    require(row.is_array() && row.size() == m.cols, ErrorCode::kConfigParse, name + " is ragged");
    for (const auto& v : row) m.data.push_back(v.get<double>());
  }
  return m;
}

}  // namespace

MinMaxProblem load_custom_problem(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kConfigParse, "cannot read problem file " + path);
  nlohmann::json j;
  try {
    in >> j;
    const auto& k = j.at("constants");
    const auto c = SmoothnessConstants::make(k.at("l_xx").get<double>(), k.at("l_xy").get<double>(),
                                             k.at("l_yx").get<double>(), k.at("l_yy").get<double>(),
                                             k.at("mu").get<double>(), k.value("rho", 0.0));
    const std::string conc = j.value("concavity", "coupling");
    require(conc == "coupling" || conc == "regularizer", ErrorCode::kConfigParse,
            "concavity must be coupling or regularizer");
    std::optional<double> lower;
    if (j.contains("phi_lower_bound")) lower = j["phi_lower_bound"].get<double>();
    return make_dense_quadratic_problem(
        json_matrix(j.at("P"), "P"), json_matrix(j.at("B"), "B"), json_matrix(j.at("Q"), "Q"),
        ProxSpec::parse(j.value("h", "zero")), c,
        conc == "coupling" ? ConcavitySource::kCouplingStronglyConcave
                           : ConcavitySource::kRegularizerStronglyConvex,
        lower);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigParse, path + ": " + e.what());
  }
}

}  // namespace minmax
