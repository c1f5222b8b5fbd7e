#include "nql/cli/svg_plot.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace nql::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginX = 0.05 * kWidth;
constexpr double kMarginY = 0.05 * kHeight;

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span() const { return hi > lo ? hi - lo : 1.0; }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    Range xr, yr;
    for (const auto& p : spec.points) {
        xr.include(p.x);
        yr.include(p.y);
    }
    for (const auto& [x, y] : spec.curve) {
        xr.include(x);
        yr.include(y);
    }
    auto sx = [&](double x) { return kMarginX + (x - xr.lo) / xr.span() * (kWidth - 2 * kMarginX); };
    auto sy = [&](double y) { return kHeight - kMarginY - (y - yr.lo) / yr.span() * (kHeight - 2 * kMarginY); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {0} {1}\" width=\"{0}\" height=\"{1}\">\n",
                       kWidth, kHeight);
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#888\"/>\n", kMarginX,
                       kHeight - kMarginY, kWidth - kMarginX);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#888\"/>\n", kMarginX,
                       kHeight - kMarginY, kMarginY);

    out += "<g fill=\"#3366aa\" fill-opacity=\"0.7\">\n";
    for (const auto& p : spec.points) {
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"><title>{}</title></circle>\n", sx(p.x), sy(p.y),
                           xml_escape(p.label));
    }
    out += "</g>\n";

    out += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < spec.curve.size(); ++i) {
        out += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "" : " ", sx(spec.curve[i].first), sy(spec.curve[i].second));
    }
    out += "\"/>\n";

    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kWidth / 2, kHeight - kMarginY / 4, xml_escape(spec.x_label));
    out += fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 {0:.2f} "
        "{1:.2f})\">{2}</text>\n",
        kMarginX / 2, kHeight / 2, xml_escape(spec.y_label));
    out += "</svg>\n";
    return out;
}

}  // namespace nql::cli
