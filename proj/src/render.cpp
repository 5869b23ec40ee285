#include "rmpd/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rmpd {

namespace {

constexpr double kCanvas = 800.0;
constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

class Canvas {
public:
    explicit Canvas(const SpaceBounds& b)
        : x0_(b.lower()[0]), y1_(b.upper()[1]), scale_(kCanvas / std::max(b.extent(0), b.extent(1))) {}

    [[nodiscard]] double x(double wx) const { return (wx - x0_) * scale_; }
    [[nodiscard]] double y(double wy) const { return (y1_ - wy) * scale_; }
    [[nodiscard]] double len(double w) const { return w * scale_; }

    [[nodiscard]] std::string rect(double lx, double ly, double ux, double uy, const std::string& attrs) const {
        return "<rect x=\"" + num(x(lx)) + "\" y=\"" + num(y(uy)) + "\" width=\"" + num(len(ux - lx)) +
               "\" height=\"" + num(len(uy - ly)) + "\" " + attrs + "/>\n";
    }

private:
    double x0_;
    double y1_;
    double scale_;
};

// Blue for free space fading to white at the boundary, red inside obstacles.
std::string heat_color(double v, double span) {
    const double t = std::clamp(std::abs(v) / span, 0.0, 1.0);
    const int fade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    char buf[16];
    if (v > 0.0) std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
    else std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const World& world, const SignedDistanceField* sdf, const std::vector<LabeledPath>& paths) {
    if (world.dim() != 2) {
        throw std::invalid_argument("render_svg: unsupported dimension " + std::to_string(world.dim()));
    }
    if (sdf != nullptr && sdf->dim() != 2) throw std::invalid_argument("render_svg: field is not 2-D");
    const SpaceBounds& b = world.bounds();
    const Canvas c(b);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(c.len(b.extent(0))) + "\" height=\"" +
           num(c.len(b.extent(1))) + "\" viewBox=\"0 0 " + num(c.len(b.extent(0))) + " " +
           num(c.len(b.extent(1))) + "\">\n";
    out += c.rect(b.lower()[0], b.lower()[1], b.upper()[0], b.upper()[1],
                  "class=\"bounds\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\"");

    if (sdf != nullptr) {
        double span = 0.0;
        for (double v : sdf->values()) span = std::max(span, std::abs(v));
        if (span == 0.0) span = 1.0;
        out += "<g class=\"sdf-layer\" opacity=\"0.6\">\n";
        const double r = sdf->resolution();
        for (std::size_t i = 0; i < sdf->cell_count(); ++i) {
            const auto cell = sdf->cell_of_flat(i);
            const double lx = sdf->origin()[0] + static_cast<double>(cell[0]) * r;
            const double ly = sdf->origin()[1] + static_cast<double>(cell[1]) * r;
            out += c.rect(lx, ly, lx + r, ly + r, "class=\"sdf\" fill=\"" + heat_color(sdf->values()[i], span) + "\"");
        }
        out += "</g>\n";
    }

    out += "<g class=\"obstacles\" fill=\"#404040\">\n";
    if (const auto* bitmap = dynamic_cast<const BitmapWorld*>(&world)) {
        // Horizontal runs of occupied cells, one rect each.
        const double cs = bitmap->cell_size();
        const State& o = bitmap->origin();
        for (std::size_t iy = 0; iy < bitmap->height(); ++iy) {
            std::size_t ix = 0;
            while (ix < bitmap->width()) {
                if (!bitmap->occupied(ix, iy)) {
                    ++ix;
                    continue;
                }
                const std::size_t start = ix;
                while (ix < bitmap->width() && bitmap->occupied(ix, iy)) ++ix;
                out += c.rect(o[0] + static_cast<double>(start) * cs, o[1] + static_cast<double>(iy) * cs,
                              o[0] + static_cast<double>(ix) * cs, o[1] + static_cast<double>(iy + 1) * cs,
                              "class=\"obstacle\"");
            }
        }
    } else if (const auto* geo = dynamic_cast<const GeometricWorld*>(&world)) {
        for (const Obstacle& ob : geo->obstacles()) {
            if (const auto* box = std::get_if<BoxObstacle>(&ob)) {
                const double lx = std::max(box->lower[0], b.lower()[0]);
                const double ly = std::max(box->lower[1], b.lower()[1]);
                const double ux = std::min(box->upper[0], b.upper()[0]);
                const double uy = std::min(box->upper[1], b.upper()[1]);
                out += c.rect(lx, ly, ux, uy, "class=\"obstacle\"");
            } else {
                const auto& s = std::get<SphereObstacle>(ob);
                out += "<circle class=\"obstacle\" cx=\"" + num(c.x(s.center[0])) + "\" cy=\"" +
                       num(c.y(s.center[1])) + "\" r=\"" + num(c.len(s.radius)) + "\"/>\n";
            }
        }
    }
    out += "</g>\n";

    for (std::size_t k = 0; k < paths.size(); ++k) {
        const auto& [label, path] = paths[k];
        if (!path.empty() && path.front().dim() != 2) throw std::invalid_argument("render_svg: path is not 2-D");
        const char* color = kPalette[k % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < path.size(); ++i) {
            points += (i ? " " : "") + num(c.x(path.waypoints[i][0])) + "," + num(c.y(path.waypoints[i][1]));
        }
        out += "<polyline class=\"path\" fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        out += "<text class=\"label\" x=\"8\" y=\"" + num(20.0 + 18.0 * static_cast<double>(k)) + "\" fill=\"" +
               color + "\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace rmpd
