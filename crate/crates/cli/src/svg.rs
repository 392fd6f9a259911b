//! Static SVG bar chart with an optional analytic curve overlaid, in the
//! style of eigenvalue-density figures: bars are the normalized histogram
//! rescaled to density units, the curve is a polyline.

use gram_recur_core::gram::Histogram;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 65.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

pub fn histogram_svg(hist: &Histogram, curve: &[(f64, f64)], title: &str) -> String {
    let edges = hist.edges();
    let x_max = edges[edges.len() - 1];
    let densities: Vec<f64> = hist
        .masses()
        .iter()
        .enumerate()
        .map(|(i, m)| m / (edges[i + 1] - edges[i]))
        .collect();
    let bar_peak = densities.iter().cloned().fold(0.0, f64::max);
    let curve_peak = curve.iter().map(|&(_, y)| y).fold(0.0, f64::max);
    let y_max = (bar_peak.max(curve_peak) * 1.08).max(1e-12);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_pos = |x: f64| MARGIN_LEFT + x / x_max * plot_w;
    let y_pos = |y: f64| MARGIN_TOP + (1.0 - y / y_max) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    // bars
    for (i, d) in densities.iter().enumerate() {
        let x0 = x_pos(edges[i]);
        let x1 = x_pos(edges[i + 1]);
        let y = y_pos(*d);
        let h = y_pos(0.0) - y;
        if h > 0.0 {
            svg.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#9ecbdf\" stroke=\"#4a7f99\" stroke-width=\"0.5\"/>\n",
                x0,
                y,
                (x1 - x0).max(0.1),
                h
            ));
        }
    }

    // analytic curve
    if curve.len() > 1 {
        let points: Vec<String> = curve
            .iter()
            .filter(|&&(x, _)| x <= x_max)
            .map(|&(x, y)| format!("{:.2},{:.2}", x_pos(x), y_pos(y.min(y_max))))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.6\"/>\n",
            points.join(" ")
        ));
    }

    // axes
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        MARGIN_LEFT,
        y_pos(0.0),
        WIDTH - MARGIN_RIGHT,
        y_pos(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        y_pos(0.0)
    ));

    for i in 0..=6 {
        let x = x_max * i as f64 / 6.0;
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            x_pos(x),
            y_pos(0.0),
            y_pos(0.0) + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>\n",
            x_pos(x),
            y_pos(0.0) + 18.0,
            x
        ));
    }
    for i in 0..=5 {
        let y = y_max * i as f64 / 5.0;
        svg.push_str(&format!(
            "<line x1=\"{1:.2}\" y1=\"{0:.2}\" x2=\"{2:.2}\" y2=\"{0:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            y_pos(y),
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n",
            MARGIN_LEFT - 8.0,
            y_pos(y) + 4.0,
            y
        ));
    }

    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">eigenvalue</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">density</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
