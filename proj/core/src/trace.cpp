#include "tkz/trace.hpp"

#include "key_value.hpp"
#include "tkz/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tkz {

using detail::format_double;

void write_trace(std::ostream& out, const RunTrace& trace) {
  const SolverConfig& cfg = trace.config;
  out << "# solver: " << trace.solver << "\n";
  out << "# dims: m=" << trace.m << " l=" << trace.l << " p=" << trace.p << " n=" << trace.n
      << "\n";
  out << "# seed: " << cfg.seed << "\n";
  out << "# max_iters: " << cfg.max_iters << "\n";
  out << "# log_stride: " << cfg.log_stride << "\n";
  out << "# residual_tol: " << format_double(cfg.residual_tol) << "\n";
  out << "# step_policy: ";
  if (!cfg.step) {
    out << "default\n";
  } else if (cfg.step->kind == StepPolicy::Kind::Coefficient) {
    out << "alpha=" << format_double(cfg.step->alpha) << "\n";
  } else {
    out << "explicit\n";
  }
  out << "# steps:";
  for (double t : trace.steps) out << ' ' << format_double(t);
  out << "\n# warnings: ";
  if (trace.warnings.empty()) {
    out << "none";
  } else {
    for (std::size_t i = 0; i < trace.warnings.size(); ++i) {
      if (i) out << "; ";
      out << trace.warnings[i];
    }
  }
  out << "\niteration,elapsed_seconds,residual\n";
  for (const TraceRow& r : trace.rows) {
    out << r.iteration << ',' << format_double(r.elapsed_seconds) << ','
        << format_double(r.residual) << "\n";
  }
}

void save_trace(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  write_trace(out, trace);
  if (!out) throw ParseError(path.string() + ": write failed");
}

namespace {

void read_meta(const std::string& key, const std::string& value, RunTrace& t,
               std::size_t line) {
  const detail::KeyValue kv{key, value, line};
  std::istringstream in(value);
  if (key == "solver") {
    t.solver = value;
  } else if (key == "dims") {
    std::string tok;
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::size_t v = detail::parse_size({tok.substr(0, eq), tok.substr(eq + 1), line});
      const std::string name = tok.substr(0, eq);
      if (name == "m") t.m = v;
      else if (name == "l") t.l = v;
      else if (name == "p") t.p = v;
      else if (name == "n") t.n = v;
    }
  } else if (key == "seed") {
    t.config.seed = detail::parse_u64(kv);
  } else if (key == "max_iters") {
    t.config.max_iters = detail::parse_size(kv);
  } else if (key == "log_stride") {
    t.config.log_stride = detail::parse_size(kv);
  } else if (key == "residual_tol") {
    t.config.residual_tol = detail::parse_double(kv);
  } else if (key == "steps") {
    if (!value.empty()) t.steps = detail::parse_doubles(kv);
  } else if (key == "warnings") {
    if (value != "none" && !value.empty()) t.warnings.push_back(value);
  }
}

}  // namespace

RunTrace read_trace(std::istream& in) {
  RunTrace t;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const auto colon = s.find(':');
      if (colon != std::string::npos) {
        read_meta(detail::trim(s.substr(1, colon - 1)), detail::trim(s.substr(colon + 1)), t,
                  number);
      }
      continue;
    }
    if (!header) {
      if (s != "iteration,elapsed_seconds,residual") {
        throw ParseError("trace line " + std::to_string(number) +
                         ": expected header 'iteration,elapsed_seconds,residual'");
      }
      header = true;
      continue;
    }
    std::istringstream row(s);
    std::string a, b, c, extra;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',') ||
        std::getline(row, extra, ',')) {
      throw ParseError("trace line " + std::to_string(number) + ": expected 3 fields");
    }
    TraceRow r;
    r.iteration = detail::parse_size({"iteration", detail::trim(a), number});
    r.elapsed_seconds = detail::parse_double({"elapsed_seconds", detail::trim(b), number});
    r.residual = detail::parse_double({"residual", detail::trim(c), number});
    if (!std::isfinite(r.residual)) {
      throw ParseError("trace line " + std::to_string(number) + ": residual is not finite");
    }
    if (!t.rows.empty() && r.iteration <= t.rows.back().iteration) {
      throw ParseError("trace line " + std::to_string(number) +
                       ": iterations must be strictly increasing");
    }
    t.rows.push_back(r);
  }
  if (!header) throw ParseError("trace: missing header 'iteration,elapsed_seconds,residual'");
  return t;
}

RunTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return read_trace(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace tkz
