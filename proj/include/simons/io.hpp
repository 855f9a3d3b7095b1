#pragma once

#include <array>
#include <fstream>
#include <string>
#include <vector>

namespace simons {

// %.17g rendering; round-trips doubles exactly.
std::string format_g17(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

// Minimal SVG document over a fixed world rectangle; y increases upward in
// world coordinates and is flipped for screen output.
class SvgCanvas {
public:
    SvgCanvas(double x0, double y0, double x1, double y1, int width_px, int height_px);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width_px = 1.0);
    void polyline(const std::vector<std::array<double, 2>>& pts, const std::string& stroke,
                  double width_px = 1.5);
    // Arrow with screen-space head; (dx, dy) in world units.
    void arrow(double x, double y, double dx, double dy, const std::string& stroke);
    void circle(double x, double y, double radius_px, const std::string& fill);
    void text(double x, double y, const std::string& label, int font_px = 12);

    std::string str() const;
    void write(const std::string& path) const;

private:
    double sx(double x) const;
    double sy(double y) const;

    double x0_, y0_, x1_, y1_;
    int w_, h_;
    std::string body_;
};

// OBJ with quad faces over a structured (rows x cols) vertex grid; comments
// go into the file header.  Faces reference 1-based vertex indices.
void write_obj_grid(const std::string& path, const std::vector<std::array<double, 3>>& vertices,
                    int rows, int cols, bool wrap_cols,
                    const std::vector<std::string>& comments);

} // namespace simons
