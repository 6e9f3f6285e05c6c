//! Minimal SVG emission: axes, scatter points, polylines, and histogram
//! bars. Fixed palette keyed by rank: 0 blue, 1 red, 2 green, 3 yellow.

pub const WIDTH: f64 = 900.0;
pub const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 55.0;

pub fn rank_color(rank: u32) -> &'static str {
    match rank {
        0 => "#1f4fd8",
        1 => "#d0342c",
        2 => "#1e8c3a",
        3 => "#e0b020",
        _ => "#777777",
    }
}

pub struct Series<'a> {
    pub name: String,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
    pub polyline: bool,
}

fn bounds(all: impl Iterator<Item = (f64, f64)>) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (x, y) in all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if xmin >= xmax {
        xmax = xmin + 1.0;
    }
    if ymin >= ymax {
        ymax = ymin + 1.0;
    }
    (xmin, xmax, ymin, ymax)
}

/// Scatter/line chart of one or more series with simple axes and labels.
pub fn chart(title: &str, series: &[Series]) -> String {
    let (xmin, xmax, ymin, ymax) =
        bounds(series.iter().flat_map(|s| s.points.iter().copied()));
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));
    // Axes.
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    ));
    // Zero line when the range crosses it.
    if ymin < 0.0 && ymax > 0.0 {
        out.push_str(&format!(
            "<line x1=\"{m}\" y1=\"{z}\" x2=\"{r}\" y2=\"{z}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n",
            m = MARGIN,
            r = WIDTH - MARGIN,
            z = sy(0.0)
        ));
    }
    for (label, x) in [(xmin, MARGIN), (xmax, WIDTH - MARGIN)] {
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{label}</text>\n",
            HEIGHT - MARGIN + 18.0
        ));
    }
    for (label, y) in [(ymin, HEIGHT - MARGIN), (ymax, MARGIN)] {
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\" font-size=\"11\">{label:.4}</text>\n",
            MARGIN - 6.0
        ));
    }

    for (si, s) in series.iter().enumerate() {
        if s.polyline {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                s.color,
                pts.join(" ")
            ));
        } else {
            for &(x, y) in &s.points {
                out.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.6\" fill=\"{}\"/>\n",
                    sx(x),
                    sy(y),
                    s.color
                ));
            }
        }
        // Legend swatch.
        let ly = 40.0 + 16.0 * si as f64;
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
            WIDTH - MARGIN - 150.0,
            ly - 9.0,
            s.color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{ly}\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN - 135.0,
            xml_escape(&s.name)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Histogram as filled bars.
pub fn histogram_chart(title: &str, edges: &[f64], counts: &[u64], color: &str) -> String {
    let ymax = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let xmin = edges[0];
    let xmax = edges[edges.len() - 1];
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / ymax * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    ));
    for (i, &c) in counts.iter().enumerate() {
        let x0 = sx(edges[i]);
        let x1 = sx(edges[i + 1]);
        let top = sy(c as f64);
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\" fill-opacity=\"0.7\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
            x0,
            top,
            (x1 - x0).max(0.5),
            HEIGHT - MARGIN - top,
            color
        ));
    }
    for (label, x) in [(xmin, MARGIN), (xmax, WIDTH - MARGIN)] {
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{label}</text>\n",
            HEIGHT - MARGIN + 18.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
