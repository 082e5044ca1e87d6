#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "lcts/errors.hpp"
#include "lcts/harness.hpp"

namespace lcts {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void append17(std::string& s, double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  s.append(buf, static_cast<std::size_t>(len));
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  std::string buf = "policy,run,t,arm,cum_regret\n";
  for (const auto& rec : table.runs) {
    if (!rec.ok) continue;
    const std::string prefix = rec.policy + "," + std::to_string(rec.run) + ",";
    for (std::size_t t = 0; t < rec.trace.cum_regret.size(); ++t) {
      buf += prefix;
      buf += std::to_string(t + 1);
      buf += ',';
      buf += std::to_string(rec.trace.chosen[t] + 1);
      buf += ',';
      append17(buf, rec.trace.cum_regret[t]);
      buf += '\n';
    }
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  finish(out, path);
}

void emit_summary_csv(const ResultTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  std::string buf = "policy,t,mean,ci_half_width,runs\n";
  for (const auto& name : table.policies) {
    const auto it = table.aggregates.find(name);
    if (it == table.aggregates.end()) continue;
    for (std::size_t t = 0; t < it->second.size(); ++t) {
      const auto& pt = it->second[t];
      buf += name + "," + std::to_string(t + 1) + ",";
      append17(buf, pt.mean);
      buf += ',';
      append17(buf, pt.ci_half_width);
      buf += "," + std::to_string(pt.runs) + "\n";
    }
  }
  out << buf;
  finish(out, path);
}

void emit_svg(const ResultTable& table, const std::filesystem::path& path) {
  std::size_t horizon = 0;
  double y_max = 0.0;
  for (const auto& [name, curve] : table.aggregates) {
    horizon = std::max(horizon, curve.size());
    for (const auto& p : curve) y_max = std::max(y_max, p.mean + p.ci_half_width);
  }
  if (horizon == 0) throw std::invalid_argument("no aggregates to plot");
  if (y_max <= 0.0) y_max = 1.0;

  const double width = 800, height = 500, left = 70, right = 170, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const double t_span = horizon > 1 ? static_cast<double>(horizon - 1) : 1.0;
  auto px = [&](std::size_t t) { return left + plot_w * static_cast<double>(t - 1) / t_span; };
  auto py = [&](double v) { return top + plot_h * (1.0 - v / y_max); };
  const std::size_t stride = std::max<std::size_t>(1, (horizon + 499) / 500);
  std::vector<std::size_t> ts;
  for (std::size_t t = 1; t <= horizon; t += stride) ts.push_back(t);
  if (ts.back() != horizon) ts.push_back(horizon);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
       "viewBox=\"0 0 800 500\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  s += "<text x=\"" + coord(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">Cumulative regret: " +
       xml_escape(table.instance_name) + "</text>\n";

  // Axes and ticks.
  s += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(top + plot_h) + "\" x2=\"" +
       coord(left + plot_w) + "\" y2=\"" + coord(top + plot_h) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(top) + "\" x2=\"" + coord(left) +
       "\" y2=\"" + coord(top + plot_h) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_max * i / 4.0;
    const auto t = static_cast<std::size_t>(1 + std::llround(t_span * i / 4.0));
    char label[32];
    std::snprintf(label, sizeof(label), "%.4g", v);
    s += "<text x=\"" + coord(left - 6) + "\" y=\"" + coord(py(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label +
         "</text>\n";
    s += "<text x=\"" + coord(px(t)) + "\" y=\"" + coord(top + plot_h + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(t) + "</text>\n";
  }
  s += "<text x=\"" + coord(left + plot_w / 2) + "\" y=\"" + coord(height - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">round t</text>\n";

  std::size_t color = 0;
  for (const auto& name : table.policies) {
    const auto it = table.aggregates.find(name);
    if (it == table.aggregates.end() || it->second.empty()) continue;
    const auto& curve = it->second;
    const std::string col = kPalette[color % std::size(kPalette)];
    std::vector<std::size_t> pts;
    for (auto t : ts) if (t <= curve.size()) pts.push_back(t);

    std::string band;
    for (auto t : pts) {
      band += coord(px(t)) + "," + coord(py(curve[t - 1].mean + curve[t - 1].ci_half_width)) + " ";
    }
    for (auto it2 = pts.rbegin(); it2 != pts.rend(); ++it2) {
      const auto& p = curve[*it2 - 1];
      band += coord(px(*it2)) + "," + coord(py(p.mean - p.ci_half_width)) + " ";
    }
    band.pop_back();
    s += "<polygon points=\"" + band + "\" fill=\"" + col +
         "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";

    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d += (i == 0 ? "M" : " L") + coord(px(pts[i])) + " " + coord(py(curve[pts[i] - 1].mean));
    }
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + col + "\" stroke-width=\"1.5\"/>\n";

    const double ly = top + 10 + 20.0 * static_cast<double>(color);
    s += "<rect x=\"" + coord(left + plot_w + 15) + "\" y=\"" + coord(ly - 8) +
         "\" width=\"14\" height=\"4\" fill=\"" + col + "\"/>\n";
    s += "<text x=\"" + coord(left + plot_w + 35) + "\" y=\"" + coord(ly - 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(name) + "</text>\n";
    ++color;
  }
  s += "</svg>\n";

  auto out = open_out(path);
  out << s;
  finish(out, path);
}

}  // namespace lcts
