#pragma once

#include <sstream>
#include <string>

#include "esdlab/esd.hpp"
#include "esdlab/util.hpp"

namespace esdlab {

/// Square-aspect eigenvalue scatter, axis range fixed to [-1.5, 1.5].
///
/// ViewBox math: the frame is 360x360 user units; a point (re, im) maps
/// to px = (re + 1.5) * 120, py = (1.5 - im) * 120 (y flips so the
/// upper half-plane draws on top). The unit circle is then the circle
/// of radius 120 at (180, 180). Markers are circles of radius 1.5.
inline std::string scatter_svg(const ESD& atoms, bool overlay_unit_circle) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 360 360\" "
           "width=\"360\" height=\"360\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"360\" height=\"360\" fill=\"white\"/>\n";
    // axes through the origin
    out << "<line x1=\"0\" y1=\"180\" x2=\"360\" y2=\"180\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"180\" y1=\"0\" x2=\"180\" y2=\"360\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (overlay_unit_circle) {
        out << "<circle cx=\"180\" cy=\"180\" r=\"120\" fill=\"none\" stroke=\"#d62728\" "
               "stroke-width=\"1\"/>\n";
    }
    for (const Complex& a : atoms.atoms) {
        const double px = (a.real() + 1.5) * 120.0;
        const double py = (1.5 - a.imag()) * 120.0;
        out << "<circle cx=\"" << fmt_double(px, "%.6g") << "\" cy=\"" << fmt_double(py, "%.6g")
            << "\" r=\"1.5\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline void render_scatter(const ESD& atoms, bool overlay_unit_circle, const std::string& path) {
    write_text_file(path, scatter_svg(atoms, overlay_unit_circle));
}

}  // namespace esdlab
