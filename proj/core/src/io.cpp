#include "hrtlab/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hrtlab/errors.hpp"
#include "hrtlab/expr.hpp"

namespace hrtlab {

std::string format_sig12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string csv_of_grid(const FieldGrid& grid) {
  std::string out = "a,b,F\n";
  for (std::size_t i = 0; i < grid.na; ++i)
    for (std::size_t j = 0; j < grid.nb; ++j) {
      out += format_sig12(grid.a_nodes[i]);
      out += ',';
      out += format_sig12(grid.b_nodes[j]);
      out += ',';
      out += format_sig12(grid.at(i, j));
      out += '\n';
    }
  return out;
}

namespace {

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string json_point(const TFPoint& p) {
  return "[" + format_sig12(p.a) + "," + format_sig12(p.b) + "]";
}

std::string json_points(const std::vector<TFPoint>& pts) {
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ",";
    out += json_point(pts[i]);
  }
  return out + "]";
}

const char* verdict_name(CertVerdict v) {
  switch (v) {
    case CertVerdict::AllMaximaAtBase:
      return "AllMaximaAtBase";
    case CertVerdict::ExtraMaximaFound:
      return "ExtraMaximaFound";
    case CertVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace

std::string json_of_gram(const HermitianGram& G) {
  const auto n = G.size();
  std::string re = "[", im = "[";
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k) {
      re += ",";
      im += ",";
    }
    re += "[";
    im += "[";
    for (Eigen::Index l = 0; l < n; ++l) {
      if (l) {
        re += ",";
        im += ",";
      }
      re += format_sig12(G.entries(k, l).real());
      im += format_sig12(G.entries(k, l).imag());
    }
    re += "]";
    im += "]";
  }
  re += "]";
  im += "]";
  std::string out = "{\"n\":" + std::to_string(n);
  out += ",\"re\":" + re;
  out += ",\"im\":" + im;
  out += ",\"window\":\"" + json_escape(G.window_id) + "\"";
  out += ",\"points\":" + json_points(G.points);
  out += ",\"build_tol\":" + format_sig12(G.build_tol);
  out += "}";
  return out;
}

std::string json_of_certificate(const Certificate& cert) {
  std::string out = "{";
  out += "\"window\":\"" + json_escape(cert.window_id) + "\"";
  out += ",\"base\":" + json_points(cert.base);
  out += ",\"rect\":[" + format_sig12(cert.rect.a_min) + "," +
         format_sig12(cert.rect.a_max) + "," + format_sig12(cert.rect.b_min) +
         "," + format_sig12(cert.rect.b_max) + "]";
  out += ",\"delta\":" + format_sig12(cert.delta);
  out += ",\"step\":" + format_sig12(cert.step);
  out += ",\"maximizer_clusters\":[";
  for (std::size_t i = 0; i < cert.maximizer_clusters.size(); ++i) {
    const Maximizer& m = cert.maximizer_clusters[i];
    if (i) out += ",";
    out += "{\"location\":" + json_point(m.location);
    out += ",\"value\":" + format_sig12(m.value);
    out += std::string(",\"refined\":") + (m.refined ? "true" : "false") + "}";
  }
  out += "]";
  out += ",\"escape_radius\":" + format_sig12(cert.escape_radius);
  out += std::string(",\"verdict\":\"") + verdict_name(cert.verdict) + "\"";
  out += ",\"extra_locations\":" + json_points(cert.extra_locations);
  out += ",\"tolerances\":{";
  out += "\"cluster_tol\":" + format_sig12(cert.cluster_tol);
  out += ",\"base_margin_tol\":" + format_sig12(cert.base_margin_tol);
  out += ",\"quad_abs_tol\":" + format_sig12(cert.quad_abs_tol);
  out += "}";
  out += ",\"base_margin\":" + format_sig12(cert.base_margin);
  if (!cert.inconclusive_reason.empty())
    out += ",\"inconclusive_reason\":\"" + json_escape(cert.inconclusive_reason) + "\"";
  out += "}";
  return out;
}

std::string json_of_classification(const Classification& cls) {
  std::string out = "{";
  switch (cls.kind) {
    case ConfigKind::Collinear:
      out += "\"kind\":\"Collinear\"";
      break;
    case ConfigKind::NMConfig:
      out += "\"kind\":\"NMConfig\",\"n\":" + std::to_string(cls.n) +
             ",\"m\":" + std::to_string(cls.m);
      break;
    case ConfigKind::General:
      out += "\"kind\":\"General\"";
      break;
  }
  if (cls.kind == ConfigKind::NMConfig) {
    auto idx_list = [](const std::vector<std::size_t>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
      }
      return s + "]";
    };
    out += ",\"line1\":" + idx_list(cls.line1);
    out += ",\"line2\":" + idx_list(cls.line2);
    out += ",\"offset1\":" + format_sig12(cls.offset1);
    out += ",\"offset2\":" + format_sig12(cls.offset2);
  }
  out += ",\"direction_angle\":" + format_sig12(cls.direction_angle);
  out += "}";
  return out;
}

std::string json_of_normal_form(const SymplecticMap& map,
                                const Configuration& image) {
  std::string out = "{\"map\":{\"linear\":[[";
  out += format_sig12(map.linear[0][0]) + "," + format_sig12(map.linear[0][1]);
  out += "],[";
  out += format_sig12(map.linear[1][0]) + "," + format_sig12(map.linear[1][1]);
  out += "]],\"shift\":[" + format_sig12(map.shift[0]) + "," +
         format_sig12(map.shift[1]) + "]";
  out += ",\"det\":" + format_sig12(map.det()) + "}";
  out += ",\"image\":" + json_points(image.points);
  out += "}";
  return out;
}

std::string json_of_report(const std::vector<CheckResult>& checks) {
  bool all = true;
  std::string body = "[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    all = all && c.pass;
    if (i) body += ",";
    body += "{\"check\":\"" + json_escape(c.name) + "\"";
    body += ",\"value\":" + format_sig12(c.value);
    body += ",\"tolerance\":" + format_sig12(c.tolerance);
    body += std::string(",\"pass\":") + (c.pass ? "true" : "false") + "}";
  }
  body += "]";
  return std::string("{\"pass\":") + (all ? "true" : "false") +
         ",\"checks\":" + body + "}";
}

std::string json_of_manifest(const RunManifest& m) {
  std::string out = "{\"command\":\"" + json_escape(m.command) + "\"";
  out += ",\"tool_version\":\"" + json_escape(m.tool_version) + "\"";
  out += ",\"started\":\"" + m.started + "\"";
  out += ",\"finished\":\"" + m.finished + "\"";
  out += ",\"inputs\":{";
  for (std::size_t i = 0; i < m.inputs.size(); ++i) {
    if (i) out += ",";
    out += "\"" + json_escape(m.inputs[i].first) + "\":\"" +
           json_escape(m.inputs[i].second) + "\"";
  }
  out += "},\"outputs\":[";
  for (std::size_t i = 0; i < m.outputs.size(); ++i) {
    if (i) out += ",";
    out += "{\"path\":\"" + json_escape(m.outputs[i].first) + "\",\"digest\":\"" +
           m.outputs[i].second + "\"}";
  }
  out += "]}";
  return out;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

WindowSpec parse_window_spec_text(std::string_view text) {
  WindowSpec spec;
  bool kind_seen = false;
  bool degree_seen = false;
  for (std::string_view raw_line : split(text, '\n')) {
    std::string_view line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidSpec("window file line has no '=': " + std::string(line));
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key == "kind") {
      const std::string v = lower(val);
      if (v == "gaussian")
        spec.kind = WindowKind::Gaussian;
      else if (v == "hermite" || v == "hermitegaussian")
        spec.kind = WindowKind::HermiteGaussian;
      else if (v == "twosidedexp" || v == "two_sided_exp" || v == "exp")
        spec.kind = WindowKind::TwoSidedExp;
      else if (v == "rational" || v == "rationaldecay")
        spec.kind = WindowKind::RationalDecay;
      else if (v == "sampled")
        spec.kind = WindowKind::Sampled;
      else
        throw InvalidSpec("unknown window kind '" + v + "'");
      kind_seen = true;
    } else if (key == "scale") {
      spec.scale = parse_real_expr(val);
    } else if (key == "degree") {
      spec.degree = static_cast<int>(parse_real_expr(val));
      degree_seen = true;
    } else if (key == "coeffs") {
      spec.coeffs.clear();
      for (auto tok : split(val, ','))
        if (!trim(tok).empty()) spec.coeffs.push_back(parse_real_expr(trim(tok)));
    } else if (key == "grid_start") {
      spec.grid_start = parse_real_expr(val);
    } else if (key == "grid_step") {
      spec.grid_step = parse_real_expr(val);
    } else if (key == "values") {
      spec.values.clear();
      for (auto tok : split(val, ',')) {
        const std::string_view entry = trim(tok);
        if (entry.empty()) continue;
        const auto colon = entry.find(':');
        if (colon == std::string_view::npos) {
          spec.values.emplace_back(parse_real_expr(entry), 0.0);
        } else {
          spec.values.emplace_back(parse_real_expr(trim(entry.substr(0, colon))),
                                   parse_real_expr(trim(entry.substr(colon + 1))));
        }
      }
    } else {
      throw InvalidSpec("unknown window file key '" + key + "'");
    }
  }
  if (!kind_seen) throw InvalidSpec("window file needs a 'kind' key");
  if (spec.kind == WindowKind::HermiteGaussian && !degree_seen)
    spec.degree = spec.coeffs.empty() ? 0 : static_cast<int>(spec.coeffs.size()) - 1;
  return spec;
}

std::vector<TFPoint> parse_points_text(std::string_view text) {
  std::vector<TFPoint> pts;
  for (std::string_view chunk : split(text, '\n')) {
    for (std::string_view raw : split(chunk, ';')) {
      std::string_view entry = raw;
      if (const auto hash = entry.find('#'); hash != std::string_view::npos)
        entry = entry.substr(0, hash);
      entry = trim(entry);
      if (entry.empty()) continue;
      const auto parts = split(entry, ',');
      if (parts.size() != 2)
        throw InvalidSpec("point entry needs exactly 'a,b': " + std::string(entry));
      pts.push_back({parse_real_expr(trim(parts[0])), parse_real_expr(trim(parts[1]))});
    }
  }
  return pts;
}

Window window_from_token(const std::string& token, double trunc_tol) {
  const std::string v = lower(token);
  if (v == "gaussian") return make_window(WindowSpec::gaussian(), trunc_tol);
  if (v == "twosidedexp" || v == "two_sided_exp" || v == "exp")
    return make_window(WindowSpec::two_sided_exp(), trunc_tol);
  if (v == "rational" || v == "rationaldecay")
    return make_window(WindowSpec::rational_decay(), trunc_tol);
  return make_window(parse_window_spec_text(read_file(token)), trunc_tol);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpec("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write: " + path);
}

}  // namespace hrtlab
