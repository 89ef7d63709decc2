#ifndef TOPOVOL_SVG_HPP
#define TOPOVOL_SVG_HPP

#include <string>
#include <vector>

namespace topovol {

// Minimal static SVG chart writer for the pipeline figures. Data-driven
// and deterministic: no timestamps, fixed float formatting, provenance
// carried as an XML comment.
class SvgFigure {
public:
    SvgFigure(std::string title, int width = 960, int height = 380);

    // x values are date serial numbers; tick labels render as ISO dates.
    void use_date_axis(bool on) { date_axis_ = on; }

    void add_line(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, const std::string& label = "");
    void add_band(const std::vector<double>& x, const std::vector<double>& lo,
                  const std::vector<double>& hi, const std::string& fill,
                  const std::string& label = "");
    void add_vline(double x, const std::string& color, const std::string& label = "");
    void add_hline(double y, const std::string& color, bool dashed = true);
    // Vertical stems from y=0, for autocorrelation plots.
    void add_stems(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& color);
    // One box of a box plot at slot `pos` (0,1,2,...); categorical x axis.
    void add_box(double pos, double lo_whisker, double q1, double median,
                 double q3, double hi_whisker, const std::string& label);

    std::string render(const std::string& provenance) const;
    void save(const std::string& path, const std::string& provenance) const;

private:
    struct Line { std::vector<double> x, y; std::string color, label; };
    struct Band { std::vector<double> x, lo, hi; std::string fill, label; };
    struct VLine { double x; std::string color, label; };
    struct HLine { double y; std::string color; bool dashed; };
    struct Stems { std::vector<double> x, y; std::string color; };
    struct Box {
        double pos, lo, q1, med, q3, hi;
        std::string label;
    };

    std::string title_;
    int width_, height_;
    bool date_axis_ = false;
    std::vector<Line> lines_;
    std::vector<Band> bands_;
    std::vector<VLine> vlines_;
    std::vector<HLine> hlines_;
    std::vector<Stems> stems_;
    std::vector<Box> boxes_;
};

} // namespace topovol

#endif
