#include "stftpr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stftpr::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0 ? 0.0 : x);  // no "-0"
  return buf;
}

double round12(double x) { return std::strtod(fmt(x).c_str(), nullptr); }

std::string fmt_complex(Complex z) {
  const double im = z.imag() == 0 ? 0.0 : z.imag();
  std::string s = fmt(z.real());
  s += std::signbit(im) ? "-" : "+";
  s += fmt(std::abs(im));
  s += "i";
  return s;
}

Complex parse_complex(const std::string& token) {
  std::string t;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(ErrorCode::MalformedInput, "empty complex token");
  if (t.back() != 'i') {
    char* end = nullptr;
    const double re = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end) throw Error(ErrorCode::MalformedInput, "bad number '" + token + "'");
    return {re, 0.0};
  }
  // split at the last sign that is not part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t p = t.size() - 1; p > 0; --p)
    if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') {
      cut = p;
      break;
    }
  std::string re_s = cut == std::string::npos ? "0" : t.substr(0, cut);
  std::string im_s = t.substr(cut == std::string::npos ? 0 : cut, t.size() - 1 - (cut == std::string::npos ? 0 : cut));
  if (im_s == "+" || im_s.empty()) im_s = "1";
  if (im_s == "-") im_s = "-1";
  char* e1 = nullptr;
  char* e2 = nullptr;
  const double re = std::strtod(re_s.c_str(), &e1);
  const double im = std::strtod(im_s.c_str(), &e2);
  if (*e1 || *e2) throw Error(ErrorCode::MalformedInput, "bad complex '" + token + "'");
  return {re, im};
}

json signal_to_json(const CyclicSignal& s) {
  json re = json::array(), im = json::array();
  for (auto v : s.entries()) {
    re.push_back(round12(v.real()));
    im.push_back(round12(v.imag()));
  }
  json j{{"d", s.dim()}, {"re", re}, {"im", im}};
  if (s.origin_offset()) j["origin_offset"] = *s.origin_offset();
  return j;
}

CyclicSignal signal_from_json(const json& j) {
  try {
    const std::size_t d = j.at("d").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(d, 0.0);
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    if (re.size() != d || im.size() != d) throw Error(ErrorCode::MalformedInput, "re/im length differs from d");
    std::vector<Complex> v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = {re[k], im[k]};
    std::optional<long> o;
    if (j.contains("origin_offset")) o = j.at("origin_offset").get<long>();
    return CyclicSignal(std::move(v), o);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("signal JSON: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
}

namespace {

std::vector<std::vector<std::string>> read_rows(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  const std::size_t d = rows.size();
  if (d < 2) throw Error(ErrorCode::MalformedInput, "matrix needs at least 2 rows");
  for (const auto& r : rows)
    if (r.size() != d) throw Error(ErrorCode::MalformedInput, "matrix is not square");
  return rows;
}

}  // namespace

void write_measurement_csv(std::ostream& os, const SpectrogramMeasurement& X) {
  for (std::size_t k = 0; k < X.dim(); ++k) {
    for (std::size_t l = 0; l < X.dim(); ++l) os << (l ? "," : "") << fmt(X(k, l));
    os << "\n";
  }
}

SpectrogramMeasurement read_measurement_csv(std::istream& is) {
  const auto rows = read_rows(is);
  const std::size_t d = rows.size();
  SpectrogramMeasurement X(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      const Complex v = parse_complex(rows[k][l]);
      if (v.imag() != 0 || v.real() < 0 || !std::isfinite(v.real()))
        throw Error(ErrorCode::MalformedInput, "measurement entries must be finite and nonnegative");
      X(k, l) = v.real();
    }
  return X;
}

json measurement_to_json(const SpectrogramMeasurement& X) {
  json rows = json::array();
  for (std::size_t k = 0; k < X.dim(); ++k) {
    json row = json::array();
    for (std::size_t l = 0; l < X.dim(); ++l) row.push_back(round12(X(k, l)));
    rows.push_back(row);
  }
  return {{"d", X.dim()}, {"X", rows}};
}

SpectrogramMeasurement measurement_from_json(const json& j) {
  try {
    const std::size_t d = j.at("d").get<std::size_t>();
    const auto rows = j.at("X").get<std::vector<std::vector<double>>>();
    if (d < 2 || rows.size() != d) throw Error(ErrorCode::MalformedInput, "measurement must be d x d with d >= 2");
    SpectrogramMeasurement X(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (rows[k].size() != d) throw Error(ErrorCode::MalformedInput, "measurement must be d x d");
      for (std::size_t l = 0; l < d; ++l) {
        if (!(rows[k][l] >= 0) || !std::isfinite(rows[k][l]))
          throw Error(ErrorCode::MalformedInput, "measurement entries must be finite and nonnegative");
        X(k, l) = rows[k][l];
      }
    }
    return X;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("measurement JSON: ") + e.what());
  }
}

void write_complex_csv(std::ostream& os, const ComplexTable& t) {
  for (std::size_t k = 0; k < t.dim(); ++k) {
    for (std::size_t l = 0; l < t.dim(); ++l) os << (l ? "," : "") << fmt_complex(t(k, l));
    os << "\n";
  }
}

ComplexTable read_complex_csv(std::istream& is) {
  const auto rows = read_rows(is);
  const std::size_t d = rows.size();
  ComplexTable t(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) t(k, l) = parse_complex(rows[k][l]);
  return t;
}

json mask_to_json(const OmegaMask& m) {
  json holes = json::array();
  for (const auto& [k, l] : m.holes()) holes.push_back({k, l});
  return {{"d", m.d},
          {"threshold_rule", to_string(m.rule)},
          {"parameter", round12(m.parameter)},
          {"cutoff", round12(m.cutoff)},
          {"mask_false", holes}};
}

json report_to_json(const WindowReport& r) {
  json j{{"window", signal_to_json(r.window)},
         {"support", r.support},
         {"shift", r.shift},
         {"omega", mask_to_json(r.omega)},
         {"dg", r.dg.members},
         {"is_generic_short", r.is_generic_short},
         {"is_full", r.is_full},
         {"real_valued", r.real_valued}};
  j["short_L"] = r.short_L ? json(*r.short_L) : json(nullptr);
  return j;
}

json partition_to_json(const ConnectivityPartition& p) {
  return {{"relation", p.describe()}, {"components", p.components}};
}

json outcome_to_json(const RecoveryOutcome& o) {
  json j{{"status", to_string(o.status)},
         {"method", o.method},
         {"residual", round12(o.residual)},
         {"measurement_residual", round12(o.measurement_residual)},
         {"free_phases", o.free_phases},
         {"components", partition_to_json(o.components)},
         {"thresholds",
          {{"tau_rel", o.tolerances.tau_rel},
           {"tau_supp", o.tolerances.tau_supp},
           {"phase_tol", o.tolerances.phase_tol},
           {"residual_tol", o.tolerances.residual_tol}}},
         {"notes", o.notes}};
  j["estimate"] = o.estimate ? signal_to_json(*o.estimate) : json(nullptr);
  return j;
}

json decision_to_json(const Decision& d) {
  json j{{"verdict", to_string(d.verdict)}, {"route", to_string(d.route)}, {"notes", d.notes}};
  j["partition"] = d.partition ? partition_to_json(*d.partition) : json(nullptr);
  if (d.witness) j["witness"] = {signal_to_json(d.witness->first), signal_to_json(d.witness->second)};
  return j;
}

json bundle_to_json(const CounterexampleBundle& b) {
  json sigs = json::array();
  for (const auto& s : b.signals) sigs.push_back(signal_to_json(s));
  return {{"family", b.family},
          {"window", signal_to_json(b.window)},
          {"signals", sigs},
          {"max_measurement_gap", round12(b.max_measurement_gap)},
          {"pairwise_phase_err", round12(b.pairwise_phase_err)},
          {"checks", b.checks},
          {"valid", b.valid()}};
}

CyclicSignal read_signal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  return signal_from_json(j);
}

SpectrogramMeasurement read_measurement_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
    }
    return measurement_from_json(j);
  }
  return read_measurement_csv(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace stftpr::io
