#pragma once

// CSV and SVG emission for decay tables, plus the CSV reader used for round trips.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fracres/decay.hpp"
#include "fracres/error.hpp"

namespace fracres {

inline constexpr std::string_view kDecayCsvHeader = "t,norm,bound_alpha_gamma,bound_gamma,local_exponent";

/// 17 significant digits, '.' decimal point, independent of the locale.
inline std::string format_double(double v, int digits = 17) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

inline std::string decay_csv(const DecayTable& table) {
  std::string out(kDecayCsvHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    out += format_double(r.t) + ',' + format_double(r.norm) + ',' + format_double(r.bound_alpha_gamma) + ',' +
           format_double(r.bound_gamma) + ',';
    if (r.local_exponent) out += format_double(*r.local_exponent);
    out += '\n';
  }
  return out;
}

inline DecayTable parse_decay_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDecayCsvHeader)
    throw ConfigError("diagnostics_cli", "CSV header does not match the decay table schema");
  DecayTable tab;
  int lineno = 1;
  auto number = [&](std::string_view f) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || p != f.data() + f.size())
      throw ConfigError("diagnostics_cli", "CSV line " + std::to_string(lineno) + ": bad number '" +
                                               std::string(f) + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      const auto c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest = rest.substr(c + 1);
    }
    if (f.size() != 5)
      throw ConfigError("diagnostics_cli", "CSV line " + std::to_string(lineno) + ": expected 5 fields");
    DecayRow r;
    r.t = number(f[0]);
    r.norm = number(f[1]);
    r.bound_alpha_gamma = number(f[2]);
    r.bound_gamma = number(f[3]);
    if (!f[4].empty()) r.local_exponent = number(f[4]);
    tab.rows.push_back(r);
  }
  return tab;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Log-log plot of the norm and both reference curves.
inline std::string decay_svg(const DecayTable& table, const std::string& title = "") {
  if (table.rows.empty()) throw ConfigError("diagnostics_cli", "cannot plot an empty table");
  constexpr double W = 640, H = 440, L = 70, R = 20, T = 40, B = 50;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
  for (const auto& r : table.rows) {
    xlo = std::min(xlo, std::log10(r.t));
    xhi = std::max(xhi, std::log10(r.t));
    for (double v : {r.norm, r.bound_alpha_gamma, r.bound_gamma}) {
      if (!(v > 0.0)) continue;
      ylo = std::min(ylo, std::log10(v));
      yhi = std::max(yhi, std::log10(v));
    }
  }
  xlo = std::floor(xlo);
  xhi = std::max(std::ceil(xhi), xlo + 1.0);
  if (!std::isfinite(ylo)) ylo = -1.0, yhi = 0.0;
  ylo = std::floor(ylo);
  yhi = std::max(std::ceil(yhi), ylo + 1.0);
  auto px = [&](double lx) { return L + (lx - xlo) / (xhi - xlo) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ylo) / (yhi - ylo) * (H - T - B); };
  auto f1 = [](double v) { return format_fixed(v, 1); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" viewBox=\"0 0 640 440\">\n";
  s += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (double d = xlo; d <= xhi + 1e-9; d += 1.0) {
    s += "<line x1=\"" + f1(px(d)) + "\" y1=\"" + f1(T) + "\" x2=\"" + f1(px(d)) + "\" y2=\"" + f1(H - B) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + f1(px(d)) + "\" y=\"" + f1(H - B + 18) + "\" text-anchor=\"middle\">1e" +
         std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  for (double d = ylo; d <= yhi + 1e-9; d += 1.0) {
    s += "<line x1=\"" + f1(L) + "\" y1=\"" + f1(py(d)) + "\" x2=\"" + f1(W - R) + "\" y2=\"" + f1(py(d)) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + f1(L - 6) + "\" y=\"" + f1(py(d) + 4) + "\" text-anchor=\"end\">1e" +
         std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  s += "<rect x=\"" + f1(L) + "\" y=\"" + f1(T) + "\" width=\"" + f1(W - L - R) + "\" height=\"" +
       f1(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + f1((L + W - R) / 2) + "\" y=\"" + f1(H - 12) + "\" text-anchor=\"middle\">t</text>\n";
  if (!title.empty())
    s += "<text x=\"" + f1((L + W - R) / 2) + "\" y=\"24\" text-anchor=\"middle\">" + title + "</text>\n";

  struct Curve {
    const char* label;
    const char* color;
    const char* dash;
    double DecayRow::*field;
  };
  const std::string ag = "t^-" + format_fixed(table.alpha * table.gamma, 3) + " reference";
  const std::string g = "t^-" + format_fixed(table.gamma, 3) + " reference";
  const Curve curves[] = {{"norm", "#1f4e9c", "", &DecayRow::norm},
                          {ag.c_str(), "#c0392b", "6,4", &DecayRow::bound_alpha_gamma},
                          {g.c_str(), "#7f8c8d", "2,3", &DecayRow::bound_gamma}};
  int idx = 0;
  for (const auto& c : curves) {
    s += "<polyline fill=\"none\" stroke=\"" + std::string(c.color) + "\" stroke-width=\"2\"";
    if (*c.dash) s += " stroke-dasharray=\"" + std::string(c.dash) + "\"";
    s += " points=\"";
    bool first = true;
    for (const auto& r : table.rows) {
      const double v = r.*c.field;
      if (!(v > 0.0)) continue;
      if (!first) s += ' ';
      first = false;
      s += f1(px(std::log10(r.t))) + ',' + f1(py(std::log10(v)));
    }
    s += "\"/>\n";
    const double ly = T + 16 + 18 * idx;
    s += "<line x1=\"" + f1(W - R - 200) + "\" y1=\"" + f1(ly) + "\" x2=\"" + f1(W - R - 170) + "\" y2=\"" +
         f1(ly) + "\" stroke=\"" + c.color + "\" stroke-width=\"2\"";
    if (*c.dash) s += " stroke-dasharray=\"" + std::string(c.dash) + "\"";
    s += "/>\n<text x=\"" + f1(W - R - 164) + "\" y=\"" + f1(ly + 4) + "\">" + c.label + "</text>\n";
    ++idx;
  }
  s += "</g>\n</svg>\n";
  return s;
}

/// CSV always; SVG only when a path is given.
inline void emit_outputs(const DecayTable& table, const std::filesystem::path& csv_path,
                         const std::optional<std::filesystem::path>& svg_path, const std::string& title = "") {
  if (table.rows.empty()) throw ConfigError("diagnostics_cli", "cannot emit an empty table");
  write_text(csv_path, decay_csv(table));
  if (svg_path) write_text(*svg_path, decay_svg(table, title));
}

}  // namespace fracres
