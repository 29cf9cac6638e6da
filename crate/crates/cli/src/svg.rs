//! Minimal SVG figures: line plots and contour outlines.

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn bounds<'a>(pts: impl Iterator<Item = &'a [f64; 2]>) -> Option<([f64; 2], [f64; 2])> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut any = false;
    for p in pts {
        if p[0].is_finite() && p[1].is_finite() {
            any = true;
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    if !any {
        return None;
    }
    for k in 0..2 {
        if hi[k] - lo[k] < 1e-300 {
            lo[k] -= 0.5;
            hi[k] += 0.5;
        }
    }
    Some((lo, hi))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        escape(title)
    )
}

/// Line plot of several named series. `log_x`/`log_y` plot log10 of the coordinate.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<[f64; 2]>)], log_x: bool, log_y: bool) -> String {
    let tr = |p: &[f64; 2]| {
        [if log_x { p[0].abs().log10() } else { p[0] }, if log_y { p[1].abs().log10() } else { p[1] }]
    };
    let data: Vec<(String, Vec<[f64; 2]>)> = series.iter().map(|(n, v)| (n.clone(), v.iter().map(tr).collect())).collect();
    let mut out = header(title);
    let Some((lo, hi)) = bounds(data.iter().flat_map(|(_, v)| v.iter())) else {
        out += "</svg>\n";
        return out;
    };
    let sx = |x: f64| PAD + (x - lo[0]) / (hi[0] - lo[0]) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - lo[1]) / (hi[1] - lo[1]) * (H - 2.0 * PAD);
    out += &format!(
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let lx = if log_x { format!("log10 {xlabel}") } else { xlabel.to_string() };
    let ly = if log_y { format!("log10 {ylabel}") } else { ylabel.to_string() };
    out += &format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        escape(&lx)
    );
    out += &format!(
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        escape(&ly)
    );
    for (k, (x, y)) in [(lo[0], lo[1]), (hi[0], hi[1])].iter().enumerate() {
        let anchor = if k == 0 { "start" } else { "end" };
        out += &format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"{anchor}\">{:.4e}</text>\n",
            sx(*x),
            H - PAD + 14.0,
            x
        );
        out += &format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">{:.4e}</text>\n",
            PAD - 4.0,
            sy(*y) + 4.0,
            y
        );
    }
    for (i, (name, v)) in data.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> =
            v.iter().filter(|p| p[0].is_finite() && p[1].is_finite()).map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
        out += &format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n", pts.join(" "));
        out += &format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            W - PAD - 4.0 - 120.0,
            PAD + 14.0 * (i + 1) as f64,
            escape(name)
        );
    }
    out += "</svg>\n";
    out
}

/// Closed outlines with equal axis scaling; later groups are drawn on top.
pub fn outlines(title: &str, groups: &[(String, Vec<Vec<[f64; 2]>>)]) -> String {
    let mut out = header(title);
    let Some((lo, hi)) = bounds(groups.iter().flat_map(|(_, l)| l.iter().flatten())) else {
        out += "</svg>\n";
        return out;
    };
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = (W - 2.0 * PAD).min(H - 2.0 * PAD) / span;
    let cx = 0.5 * (lo[0] + hi[0]);
    let cy = 0.5 * (lo[1] + hi[1]);
    let sx = |x: f64| W / 2.0 + (x - cx) * scale;
    let sy = |y: f64| H / 2.0 - (y - cy) * scale;
    for (i, (name, loops)) in groups.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for l in loops {
            let pts: Vec<String> = l.iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
            out += &format!("<polygon fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{}\"/>\n", pts.join(" "));
        }
        out += &format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            PAD,
            PAD + 14.0 * i as f64,
            escape(name)
        );
    }
    out += "</svg>\n";
    out
}
