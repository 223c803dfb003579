#include "svg.hpp"

#include <cstdio>
#include <sstream>

#include "fdhomog/depth.hpp"

namespace fdhomog::cli {
namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 56.0;
constexpr double kPlot = kSize - 2.0 * kMargin;

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double px(double depth) { return kMargin + depth * kPlot; }
double py(double depth) { return kSize - kMargin - depth * kPlot; }

}  // namespace

std::string render_ddplot_svg(const DDPlot& dd, const std::string& name_f, const std::string& name_g) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
     << "  <title>DD-plot (" << to_string(dd.method) << " depth), n=" << dd.n << ", m=" << dd.m << "</title>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n"
     << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot << "\" height=\"" << kPlot
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "  <line class=\"diagonal\" x1=\"" << fixed6(px(0)) << "\" y1=\"" << fixed6(py(0)) << "\" x2=\""
     << fixed6(px(1)) << "\" y2=\"" << fixed6(py(1)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick / 4.0;
    os << "  <text x=\"" << fixed6(px(v)) << "\" y=\"" << fixed6(kSize - kMargin + 16)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << v << "</text>\n"
       << "  <text x=\"" << fixed6(kMargin - 8) << "\" y=\"" << fixed6(py(v) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << v << "</text>\n";
  }
  os << "  <text class=\"xlabel\" x=\"" << fixed6(kSize / 2) << "\" y=\"" << fixed6(kSize - 14)
     << "\" font-size=\"13\" text-anchor=\"middle\">depth w.r.t. " << escape(name_f) << "</text>\n"
     << "  <text class=\"ylabel\" x=\"16\" y=\"" << fixed6(kSize / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 16 " << fixed6(kSize / 2) << ")\">depth w.r.t. " << escape(name_g) << "</text>\n";

  for (std::size_t i = 0; i < dd.points.size(); ++i) {
    const auto& p = dd.points[i];
    const bool from_f = i < dd.n;
    os << "  <circle class=\"" << (from_f ? 'f' : 'g') << "\" cx=\"" << fixed6(px(p.depth_f)) << "\" cy=\""
       << fixed6(py(p.depth_g)) << "\" r=\"3\" fill=\"" << (from_f ? "#d62728" : "#2ca02c")
       << "\" fill-opacity=\"0.7\" data-df=\"" << fixed6(p.depth_f) << "\" data-dg=\"" << fixed6(p.depth_g)
       << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fdhomog::cli
