#include "qmem/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qmem/csv.hpp"
#include "qmem/errors.hpp"

namespace qmem {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kernel: return "kernel";
    case Experiment::modes: return "modes";
    case Experiment::efficiency_curve: return "efficiency-curve";
    case Experiment::squeezing_spectra: return "squeezing-spectra";
    case Experiment::checks: return "checks";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, int last_line) : entries_(std::move(entries)), last_line_(last_line) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : last_line_; }

  const Entry& require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ParseError(last_line_, "missing required key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    const Entry& e = require(key);
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
      throw ParseError(e.line, "'" + key + "' expects a finite number, got '" + e.value + "'");
    return v;
  }

  int integer(const std::string& key) const {
    const Entry& e = require(key);
    int v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) throw ParseError(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
    return v;
  }

  template <typename T>
  T choice(const std::string& key, const std::map<std::string, T, std::less<>>& options) const {
    const Entry& e = require(key);
    auto it = options.find(e.value);
    if (it == options.end()) {
      std::string allowed;
      for (const auto& [name, _] : options) allowed += (allowed.empty() ? "" : ", ") + name;
      throw ParseError(e.line, "'" + key + "' must be one of {" + allowed + "}, got '" + e.value + "'");
    }
    return it->second;
  }

  void check(bool ok, const std::string& key, const std::string& what) const {
    if (!ok) throw ParseError(line(key), "'" + key + "' " + what);
  }

  void forbid(const std::string& key, const std::string& why) const {
    if (has(key)) throw ParseError(line(key), "'" + key + "' " + why);
  }

 private:
  std::map<std::string, Entry> entries_;
  int last_line_;
};

const char* const kKeys[] = {"regime",       "L",           "T_W",          "T_R",          "direction",    "n_t",
                             "n_tp",         "n_z",         "source.kind",  "source.kappa", "source.mu",    "source.p",
                             "source.s",     "sweep.start", "sweep.stop",   "sweep.count",  "experiment",   "outdir"};

bool known_key(std::string_view key) {
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (!known_key(key)) throw ParseError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                                          std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }
  const Reader r(std::move(entries), line_no);

  RunConfig c;
  ModelParams& m = c.model;
  m.regime = r.choice<Regime>("regime", {{"adiabatic", Regime::adiabatic}, {"high_speed", Regime::high_speed}});
  m.direction = r.choice<Direction>("direction", {{"forward", Direction::forward}, {"backward", Direction::backward}});
  c.experiment = r.choice<Experiment>("experiment", {{"kernel", Experiment::kernel},
                                                     {"modes", Experiment::modes},
                                                     {"efficiency-curve", Experiment::efficiency_curve},
                                                     {"squeezing-spectra", Experiment::squeezing_spectra},
                                                     {"checks", Experiment::checks}});
  m.length = r.number("L");
  r.check(m.length > 0.0, "L", "must be positive");
  m.write_time = r.number("T_W");
  r.check(m.write_time > 0.0, "T_W", "must be positive");
  m.read_time = r.has("T_R") ? r.number("T_R") : m.write_time;
  r.check(m.read_time > 0.0, "T_R", "must be positive");
  for (auto [key, field] : {std::pair{"n_t", &m.n_t}, std::pair{"n_tp", &m.n_tp}, std::pair{"n_z", &m.n_z}}) {
    if (!r.has(key)) continue;
    *field = r.integer(key);
    r.check(*field >= 16 && *field % 2 == 0, key, "must be an even integer >= 16");
  }
  if (r.has("outdir")) c.outdir = r.require("outdir").value;

  if (r.has("source.kind")) {
    SourceParams s;
    s.kind = r.choice<SourceKind>("source.kind", {{"laser", SourceKind::laser}, {"dopo", SourceKind::dopo}});
    s.kappa = r.number("source.kappa");
    r.check(s.kappa > 0.0, "source.kappa", "must be positive");
    if (s.kind == SourceKind::laser) {
      r.forbid("source.s", "applies only to source.kind=dopo");
      s.mu = r.number("source.mu");
      r.check(s.mu > 0.0 && s.mu <= kMuLimit, "source.mu", "must lie in (0, 0.2]");
      s.pump_order_p = r.number("source.p");
      r.check(s.pump_order_p >= 0.0 && s.pump_order_p <= 1.0, "source.p", "must lie in [0, 1]");
    } else {
      r.forbid("source.mu", "applies only to source.kind=laser");
      r.forbid("source.p", "applies only to source.kind=laser");
      s.s = r.number("source.s");
      r.check(s.s > 0.0 && s.s < 1.0, "source.s", "must lie in (0, 1)");
    }
    c.source = s;
  } else {
    for (const char* k : {"source.kappa", "source.mu", "source.p", "source.s"}) r.forbid(k, "requires source.kind");
  }

  const bool any_sweep = r.has("sweep.start") || r.has("sweep.stop") || r.has("sweep.count");
  if (any_sweep) {
    SweepRange s;
    s.start = r.number("sweep.start");
    s.stop = r.number("sweep.stop");
    s.count = r.integer("sweep.count");
    r.check(s.count >= 1, "sweep.count", "must be >= 1");
    r.check(s.start > 0.0, "sweep.start", "must be positive");
    r.check(s.stop >= s.start, "sweep.stop", "must not be below sweep.start");
    c.sweep = s;
  }

  const bool needs_source = c.experiment == Experiment::efficiency_curve ||
                            c.experiment == Experiment::squeezing_spectra || c.experiment == Experiment::checks;
  if (needs_source && !c.source) r.require("source.kind");
  if (c.experiment == Experiment::efficiency_curve && !c.sweep) r.require("sweep.start");
  if (c.experiment != Experiment::efficiency_curve && c.sweep)
    throw ParseError(r.line("sweep.start"), "sweep.* applies only to experiment=efficiency-curve");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream o;
  const ModelParams& m = c.model;
  o << "regime=" << to_string(m.regime) << "\n"
    << "L=" << format_number(m.length) << "\n"
    << "T_W=" << format_number(m.write_time) << "\n"
    << "T_R=" << format_number(m.read_time) << "\n"
    << "direction=" << to_string(m.direction) << "\n"
    << "n_t=" << m.n_t << "\nn_tp=" << m.n_tp << "\nn_z=" << m.n_z << "\n";
  if (c.source) {
    const SourceParams& s = *c.source;
    o << "source.kind=" << to_string(s.kind) << "\nsource.kappa=" << format_number(s.kappa) << "\n";
    if (s.kind == SourceKind::laser)
      o << "source.mu=" << format_number(s.mu) << "\nsource.p=" << format_number(s.pump_order_p) << "\n";
    else
      o << "source.s=" << format_number(s.s) << "\n";
  }
  if (c.sweep)
    o << "sweep.start=" << format_number(c.sweep->start) << "\nsweep.stop=" << format_number(c.sweep->stop)
      << "\nsweep.count=" << c.sweep->count << "\n";
  o << "experiment=" << to_string(c.experiment) << "\n";
  return o.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config(config))));
  return buf;
}

}  // namespace qmem
