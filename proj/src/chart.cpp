#include "mhh/chart.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace mhh {

namespace {

const char* page_color(int r)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    int k = 0;
    while ((1 << (k + 2)) <= r && k < 6)
        ++k;
    return colors[k];
}

std::string escape(const std::string& s)
{
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

}  // namespace

std::string emit_chart(const Page& page, const std::vector<LogEntry>& log, const ChartSpec& spec)
{
    const E2Context& ctx = *page.ctx;
    const int width = 2 * spec.margin + spec.s_max * spec.cell;
    const int height = 2 * spec.margin + spec.t_max * spec.cell;
    auto x_of = [&](int s) { return spec.margin + s * spec.cell; };
    auto y_of = [&](int t, int k) { return spec.margin + (spec.t_max - t) * spec.cell - k * spec.stack; };
    auto drawn = [&](int s, int t) { return s <= spec.s_max && t <= spec.t_max && ctx.slot_id(s, t) >= 0; };

    std::string svg;
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\">\n",
                       width, height, width, height);
    svg += "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>\n";
    svg += fmt::format("<text class=\"title\" x=\"{}\" y=\"{}\" font-size=\"12\">E{} p={}</text>\n", spec.margin,
                       spec.margin / 2, page.r, ctx.algebra.prime().value());
    for (int s = 0; s <= spec.s_max; ++s)
        svg += fmt::format("<text class=\"axis\" x=\"{}\" y=\"{}\" font-size=\"9\">{}</text>\n", x_of(s) - 3,
                           height - spec.margin / 3, s);
    for (int t = 0; t <= spec.t_max; ++t)
        svg += fmt::format("<text class=\"axis\" x=\"{}\" y=\"{}\" font-size=\"9\">{}</text>\n", spec.margin / 4,
                           y_of(t, 0) + 3, t);

    for (const auto& e : log) {
        if (spec.max_page && e.page > spec.max_page)
            continue;
        const int ts = e.s - e.page;
        const int tt = e.t + e.page - 1;
        if (!drawn(e.s, e.t) || !drawn(ts, tt) || !e.source_monomial)
            continue;
        const auto& src = ctx.slot(e.s, e.t);
        const auto& tgt = ctx.slot(ts, tt);
        auto si = src.index.find(e.source_monomial->exps);
        auto ti = tgt.index.find(e.target.terms().front().exps);
        if (si == src.index.end() || ti == tgt.index.end())
            continue;
        svg += fmt::format("<line class=\"arrow\" data-page=\"{}\" data-source=\"{}\" data-target=\"{}\" x1=\"{}\" "
                           "y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1\" marker-end=\"url(#head)\"/>\n",
                           e.page, escape(e.source), escape(tgt.labels[ti->second]), x_of(e.s), y_of(e.t, si->second),
                           x_of(ts), y_of(tt, ti->second), page_color(e.page));
    }

    for (int s = 0; s <= spec.s_max; ++s) {
        for (int t = 0; t <= spec.t_max; ++t) {
            const int id = ctx.slot_id(s, t);
            if (id < 0)
                continue;
            const Subquotient& sq = page.slots[id];
            for (int k = 0; k < sq.dim(); ++k) {
                const std::string label = page.label(id, k);
                const int pos = sq.reps()[k].unit ? *sq.reps()[k].unit : k;
                svg += fmt::format("<circle class=\"dot\" data-s=\"{}\" data-t=\"{}\" data-label=\"{}\" cx=\"{}\" "
                                   "cy=\"{}\" r=\"3\"/>\n",
                                   s, t, escape(label), x_of(s), y_of(t, pos));
                if (s == 0)
                    svg += fmt::format("<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"7\">{}</text>\n",
                                       x_of(s) + 5, y_of(t, pos) + 2, escape(label));
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace mhh
