#include "evorf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "evorf/error.hpp"

namespace evorf {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open_svg(const std::string& path, int width, int height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<style>text{font:12px sans-serif;fill:#222}.t{font-size:14px;font-weight:bold}"
           "</style>\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#fff\"/>\n";
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

// Median-of-halves quartiles over a sorted copy.
struct Box {
    double lo, q1, med, q3, hi;
};

Box box_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    auto med = [&](std::size_t a, std::size_t b) {  // inclusive range
        const std::size_t m = b - a + 1;
        return m % 2 ? xs[a + m / 2] : (xs[a + m / 2 - 1] + xs[a + m / 2]) / 2.0;
    };
    Box box{};
    box.lo = xs.front();
    box.hi = xs.back();
    box.med = med(0, n - 1);
    if (n < 2) {
        box.q1 = box.q3 = box.med;
        return box;
    }
    box.q1 = med(0, n / 2 - 1);
    box.q3 = med(n % 2 ? n / 2 + 1 : n / 2, n - 1);
    return box;
}

}  // namespace

void svg_directionality(const ImportanceReport& report, const std::string& path,
                        std::size_t top_n) {
    std::vector<const FeatureImportance*> picked;
    for (const auto& f : report.features) picked.push_back(&f);
    std::stable_sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) {
        return std::abs(a->importance) > std::abs(b->importance);
    });
    if (picked.size() > top_n) picked.resize(top_n);
    if (picked.empty()) throw ValidationError("no features to draw");

    double max_mean = 0.0;
    for (const auto* f : picked) max_mean = std::max({max_mean, f->pre_mean, f->post_mean});
    if (max_mean <= 0.0) max_mean = 1.0;

    const int row_h = 34, left = 110, top = 46;
    const int plot_w = 420;
    const int height = top + row_h * static_cast<int>(picked.size()) + 30;
    auto out = open_svg(path, left + plot_w + 110, height);
    out << "<text class=\"t\" x=\"12\" y=\"22\">Mean count per name, by class</text>\n";
    out << "<rect x=\"" << left << "\" y=\"28\" width=\"10\" height=\"10\" fill=\"#4878a8\"/>"
        << "<text x=\"" << left + 14 << "\" y=\"37\">pre</text>\n";
    out << "<rect x=\"" << left + 60 << "\" y=\"28\" width=\"10\" height=\"10\" "
        << "fill=\"#c2503c\"/><text x=\"" << left + 74 << "\" y=\"37\">post</text>\n";

    for (std::size_t i = 0; i < picked.size(); ++i) {
        const auto* f = picked[i];
        const int y = top + static_cast<int>(i) * row_h;
        const double wp = f->pre_mean / max_mean * plot_w;
        const double wq = f->post_mean / max_mean * plot_w;
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 18
            << "\" text-anchor=\"end\">" << xml_escape(f->feature) << "</text>\n";
        out << "<rect x=\"" << left << "\" y=\"" << y + 4 << "\" width=\"" << fmt(wp)
            << "\" height=\"11\" fill=\"#4878a8\"/>\n";
        out << "<rect x=\"" << left << "\" y=\"" << y + 17 << "\" width=\"" << fmt(wq)
            << "\" height=\"11\" fill=\"#c2503c\"/>\n";
        out << "<text x=\"" << fmt(left + std::max(wp, wq) + 6) << "\" y=\"" << y + 19
            << "\">" << fmt(f->pre_mean) << " / " << fmt(f->post_mean) << "</text>\n";
    }
    out << "</svg>\n";
}

void svg_lengths(const LengthStats& ls, const std::string& path) {
    const Box pre = box_of(ls.pre_lengths);
    const Box post = box_of(ls.post_lengths);
    const double lo = std::min(pre.lo, post.lo);
    const double hi = std::max(pre.hi, post.hi);
    const double span = hi > lo ? hi - lo : 1.0;

    const int width = 460, height = 320, top = 50, bottom = 40;
    const int plot_h = height - top - bottom;
    auto y_of = [&](double v) { return top + (hi - v) / span * plot_h; };

    auto out = open_svg(path, width, height);
    out << "<text class=\"t\" x=\"12\" y=\"24\">Name length (phoneme count) by class"
        << "</text>\n";

    const struct {
        const char* name;
        const Box* box;
        int cx;
    } arms[2] = {{"pre", &pre, 140}, {"post", &post, 320}};

    for (const auto& arm : arms) {
        const Box& b = *arm.box;
        const int x0 = arm.cx - 45, x1 = arm.cx + 45;
        out << "<line x1=\"" << arm.cx << "\" y1=\"" << fmt(y_of(b.lo)) << "\" x2=\""
            << arm.cx << "\" y2=\"" << fmt(y_of(b.hi))
            << "\" stroke=\"#444\" stroke-dasharray=\"3 3\"/>\n";
        for (const double whisker : {b.lo, b.hi})
            out << "<line x1=\"" << arm.cx - 20 << "\" y1=\"" << fmt(y_of(whisker))
                << "\" x2=\"" << arm.cx + 20 << "\" y2=\"" << fmt(y_of(whisker))
                << "\" stroke=\"#444\"/>\n";
        out << "<rect x=\"" << x0 << "\" y=\"" << fmt(y_of(b.q3)) << "\" width=\"" << x1 - x0
            << "\" height=\"" << fmt(y_of(b.q1) - y_of(b.q3))
            << "\" fill=\"#dce6f0\" stroke=\"#4878a8\"/>\n";
        out << "<line x1=\"" << x0 << "\" y1=\"" << fmt(y_of(b.med)) << "\" x2=\"" << x1
            << "\" y2=\"" << fmt(y_of(b.med)) << "\" stroke=\"#c2503c\" stroke-width=\"2\"/>"
            << "\n";
        out << "<text x=\"" << arm.cx << "\" y=\"" << height - 14
            << "\" text-anchor=\"middle\">" << arm.name << " (median " << fmt(b.med)
            << ")</text>\n";
    }
    for (const double tick : {lo, (lo + hi) / 2.0, hi})
        out << "<text x=\"40\" y=\"" << fmt(y_of(tick) + 4) << "\" text-anchor=\"end\">"
            << fmt(tick) << "</text>\n";
    out << "</svg>\n";
}

void svg_regression(std::span<const double> x, std::span<const double> y,
                    const stats::Ols& ols, const std::string& path) {
    if (x.size() != y.size() || x.empty())
        throw ValidationError("regression plot needs matching non-empty x and y");
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ypad = (ymax > ymin ? ymax - ymin : 1.0) * 0.1;
    ymin -= ypad;
    ymax += ypad;

    const int width = 520, height = 360, left = 70, top = 50, right = 30, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

    auto out = open_svg(path, width, height);
    out << "<text class=\"t\" x=\"12\" y=\"24\">Test error vs post-class share of the test "
           "subset</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
        << "\" y2=\"" << top + ph << "\" stroke=\"#444\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + ph << "\" stroke=\"#444\"/>\n";

    out << "<line x1=\"" << fmt(px(xmin)) << "\" y1=\"" << fmt(py(ols.intercept + ols.slope * xmin))
        << "\" x2=\"" << fmt(px(xmax)) << "\" y2=\""
        << fmt(py(ols.intercept + ols.slope * xmax))
        << "\" stroke=\"#c2503c\" stroke-width=\"2\"/>\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << "<circle cx=\"" << fmt(px(x[i])) << "\" cy=\"" << fmt(py(y[i]))
            << "\" r=\"4\" fill=\"#4878a8\" fill-opacity=\"0.8\"/>\n";

    out << "<text x=\"" << left << "\" y=\"" << height - 12 << "\">x: " << fmt(xmin)
        << " .. " << fmt(xmax) << "   y: " << fmt(ymin + ypad) << " .. " << fmt(ymax - ypad)
        << "</text>\n";
    out << "<text x=\"" << left + pw - 4 << "\" y=\"" << top + 14
        << "\" text-anchor=\"end\">R\xC2\xB2 = " << fmt(ols.r_squared) << ", F("
        << ols.df1 << ',' << ols.df2 << ") = " << fmt(ols.f_statistic) << ", p = "
        << fmt(ols.p_value) << "</text>\n";
    out << "</svg>\n";
}

}  // namespace evorf
