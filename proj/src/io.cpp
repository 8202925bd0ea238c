#include "zollfins/io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <unistd.h>

#include "zollfins/errors.hpp"

namespace zollfins {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", value);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}: {}", dir.string(), ec.message()));
  const fs::path tmp = dir / fmt::format(".{}.tmp{}", path.filename().string(), static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError(fmt::format("write to {} failed", tmp.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot move output into place at {}", path.string()));
  }
}

std::string curvature_csv(const ZollProfile& profile, int points) {
  if (points < 2) throw DomainError("curvature scan needs at least 2 points");
  std::string out = "x,G\n";
  for (int i = 0; i < points; ++i) {
    const double x = i == points - 1 ? 1.0 : -1.0 + 2.0 * i / (points - 1);
    out += fmt::format("{},{}\n", format_number(x), format_number(profile.curvature_at_x(x)));
  }
  return out;
}

std::string indicatrix_csv(const IndicatrixCurve& curve) {
  std::string out = "R,Theta,branch,r,v1,v2\n";
  for (const auto& s : curve.samples) {
    out += fmt::format("{},{},{},{},{},{}\n", format_number(s.R), format_number(s.Theta), s.branch,
                       format_number(s.r), format_number(s.v1), format_number(s.v2));
  }
  return out;
}

std::string indicatrix_file_name(double R) { return fmt::format("indicatrix_R{}.csv", R == 0.0 ? 0.0 : R); }

std::string zoll_trace_csv(const GeodesicTrace& trace) {
  std::string out = "t,r,theta,c,sign\n";
  for (const auto& s : trace.samples) {
    out += fmt::format("{},{},{},{},{}\n", format_number(s.t), format_number(s.r), format_number(s.theta),
                       format_number(trace.c), s.sign);
  }
  return out;
}

std::string finsler_trace_csv(const FinslerTrace& trace) {
  std::string out = "t,R,Theta,vR,vTheta,F\n";
  for (const auto& s : trace.samples) {
    out += fmt::format("{},{},{},{},{},{}\n", format_number(s.t), format_number(s.R), format_number(s.Theta),
                       format_number(s.vR), format_number(s.vTheta), format_number(s.F));
  }
  return out;
}

std::string indicatrices_svg(const std::vector<IndicatrixCurve>& curves, const PlotOptions& options) {
  static constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  const double w = options.width;
  const double h = options.height;
  const double margin = 40.0;

  double extent = 0.0;
  for (const auto& c : curves) {
    for (const auto& s : c.samples) extent = std::max({extent, std::abs(s.v1), std::abs(s.v2)});
  }
  extent = extent > 0.0 ? std::ceil(extent * 2.0) / 2.0 : 1.0;  // round up to a half unit
  const double scale = std::min(w, h) / 2.0 - margin;
  auto px = [&](double v) { return w / 2.0 + v / extent * scale; };
  auto py = [&](double v) { return h / 2.0 - v / extent * scale; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      options.width, options.height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", options.width,
                     options.height);
  if (!options.title.empty()) {
    out += fmt::format("<text x=\"{:.2f}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       w / 2.0, options.title);
  }
  // axes with ticks at half units
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#888\"/>\n", px(-extent),
                     py(0), px(extent), py(0));
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#888\"/>\n", px(0),
                     py(-extent), px(0), py(extent));
  const int ticks = static_cast<int>(std::lround(extent * 2.0));
  for (int i = -ticks; i <= ticks; ++i) {
    if (i == 0) continue;
    const double v = 0.5 * i;
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#888\"/>\n",
                       px(v), py(0) - 3.0, py(0) + 3.0);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#888\"/>\n",
                       px(0) - 3.0, py(v), px(0) + 3.0);
    if (i % 2 == 0) {
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
                         "text-anchor=\"middle\">{:g}</text>\n",
                         px(v), py(0) + 14.0, v);
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
                         "text-anchor=\"end\">{:g}</text>\n",
                         px(0) - 5.0, py(v) + 3.0, v);
    }
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">v1</text>\n",
                     px(extent) - 14.0, py(0) - 6.0);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">v2</text>\n",
                     px(0) + 6.0, py(extent) + 12.0);

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    std::string points;
    for (const auto& s : curves[k].samples) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.3f},{:.3f}", px(s.v1), py(s.v2));
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                       points);
    const double ly = margin + 16.0 * static_cast<double>(k);
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                       "stroke-width=\"2\"/>\n",
                       w - 130.0, ly, w - 110.0, ly, color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">R = {}</text>\n",
                       w - 104.0, ly + 4.0, curves[k].R);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace zollfins
