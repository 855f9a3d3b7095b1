#include "simons/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "simons/errors.hpp"

namespace simons {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ValidationError("cannot open for writing: " + path);
}

void CsvWriter::header(const std::vector<std::string>& names) { raw_row(names); }

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_g17(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

SvgCanvas::SvgCanvas(double x0, double y0, double x1, double y1, int width_px, int height_px)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1), w_(width_px), h_(height_px) {}

double SvgCanvas::sx(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
double SvgCanvas::sy(double y) const { return (y1_ - y) / (y1_ - y0_) * h_; }

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}
} // namespace

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double width_px) {
    body_ += "<line x1=\"" + num(sx(x1)) + "\" y1=\"" + num(sy(y1)) + "\" x2=\"" + num(sx(x2)) +
             "\" y2=\"" + num(sy(y2)) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(width_px) + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::array<double, 2>>& pts, const std::string& stroke,
                         double width_px) {
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width_px) +
             "\" points=\"";
    for (const auto& p : pts) body_ += num(sx(p[0])) + "," + num(sy(p[1])) + " ";
    body_ += "\"/>\n";
}

void SvgCanvas::arrow(double x, double y, double dx, double dy, const std::string& stroke) {
    const double ax = sx(x), ay = sy(y);
    const double bx = sx(x + dx), by = sy(y + dy);
    body_ += "<line x1=\"" + num(ax) + "\" y1=\"" + num(ay) + "\" x2=\"" + num(bx) + "\" y2=\"" +
             num(by) + "\" stroke=\"" + stroke + "\" stroke-width=\"1\"/>\n";
    // Head: two short strokes at 30 degrees off the shaft, in screen space.
    const double vx = bx - ax, vy = by - ay;
    const double len = std::max(1e-12, std::sqrt(vx * vx + vy * vy));
    const double ux = vx / len, uy = vy / len;
    const double head = std::min(6.0, 0.4 * len);
    const double c = 0.866, s = 0.5;
    body_ += "<line x1=\"" + num(bx) + "\" y1=\"" + num(by) + "\" x2=\"" +
             num(bx - head * (c * ux - s * uy)) + "\" y2=\"" + num(by - head * (s * ux + c * uy)) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"1\"/>\n";
    body_ += "<line x1=\"" + num(bx) + "\" y1=\"" + num(by) + "\" x2=\"" +
             num(bx - head * (c * ux + s * uy)) + "\" y2=\"" + num(by - head * (-s * ux + c * uy)) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"1\"/>\n";
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) + "\" r=\"" + num(radius_px) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& label, int font_px) {
    body_ += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(sy(y)) + "\" font-size=\"" +
             std::to_string(font_px) + "\" font-family=\"sans-serif\">" + label + "</text>\n";
}

std::string SvgCanvas::str() const {
    std::string doc = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
                      "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " +
                      std::to_string(w_) + " " + std::to_string(h_) + "\">\n";
    doc += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    doc += body_;
    doc += "</svg>\n";
    return doc;
}

void SvgCanvas::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << str();
}

void write_obj_grid(const std::string& path, const std::vector<std::array<double, 3>>& vertices,
                    int rows, int cols, bool wrap_cols,
                    const std::vector<std::string>& comments) {
    if (rows < 2 || cols < 2 || vertices.size() != std::size_t(rows) * cols)
        throw ValidationError("write_obj_grid: vertex count does not match grid");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    for (const auto& c : comments) out << "# " << c << '\n';
    for (const auto& v : vertices)
        out << "v " << format_g17(v[0]) << ' ' << format_g17(v[1]) << ' ' << format_g17(v[2])
            << '\n';
    const int jmax = wrap_cols ? cols : cols - 1;
    for (int i = 0; i + 1 < rows; ++i)
        for (int j = 0; j < jmax; ++j) {
            const int jn = (j + 1) % cols;
            const int v00 = i * cols + j + 1, v01 = i * cols + jn + 1;
            const int v10 = (i + 1) * cols + j + 1, v11 = (i + 1) * cols + jn + 1;
            out << "f " << v00 << ' ' << v01 << ' ' << v11 << ' ' << v10 << '\n';
        }
}

} // namespace simons
