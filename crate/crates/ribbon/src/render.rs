//! Drawings of canonical diagrams, bottom to top.

use std::fmt::Write as _;

use ribbon_core::{Cell, Diagram, Gen};

const STEP_X: f64 = 48.0;
const STEP_Y: f64 = 56.0;
const MARGIN: f64 = 24.0;

/// One row per layer, top layer first, boxes as `[name]` and wires as `|`.
pub fn text(d: &Diagram) -> String {
    let mut out = format!("{} -> {}\n", d.dom(), d.cod());
    for layer in d.layers().iter().rev() {
        let cells: Vec<String> = layer
            .iter()
            .map(|c| match c {
                Cell::Wire => "|".to_string(),
                Cell::Box(g) => format!("[{}]", g.name()),
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

struct Canvas {
    width: usize,
    height: f64,
    body: String,
}

impl Canvas {
    /// x coordinate of wire `k` at a cut `n` wires wide.
    fn x(&self, k: usize, n: usize) -> f64 {
        let slack = (self.width as f64 - n as f64) * STEP_X / 2.0;
        MARGIN + slack + k as f64 * STEP_X + STEP_X / 2.0
    }

    /// y coordinate of cut `c`, counted from the bottom.
    fn y(&self, c: usize) -> f64 {
        self.height - MARGIN - c as f64 * STEP_Y
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64)) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    /// A strand with a gap around its midpoint, passing under another.
    fn under(&mut self, a: (f64, f64), b: (f64, f64)) {
        let t = 0.35;
        let lerp = |s: f64| (a.0 + (b.0 - a.0) * s, a.1 + (b.1 - a.1) * s);
        self.line(a, lerp(t));
        self.line(lerp(1.0 - t), b);
    }
}

pub fn svg(d: &Diagram) -> String {
    let mut widths = vec![d.dom()];
    for layer in d.layers() {
        widths.push(layer.iter().map(|c| c.outs()).sum());
    }
    let width = widths.iter().copied().max().unwrap_or(0).max(1);
    let height = 2.0 * MARGIN + d.layers().len() as f64 * STEP_Y;
    let mut cv = Canvas {
        width,
        height,
        body: String::new(),
    };
    for (l, layer) in d.layers().iter().enumerate() {
        let (lo, hi) = (widths[l], widths[l + 1]);
        let (y0, y1) = (cv.y(l), cv.y(l + 1));
        let (mut i, mut o) = (0, 0);
        for cell in layer {
            let (k, q) = (cell.ins(), cell.outs());
            match cell {
                Cell::Wire => {
                    let (a, b) = ((cv.x(i, lo), y0), (cv.x(o, hi), y1));
                    cv.line(a, b);
                }
                Cell::Box(g @ (Gen::Br | Gen::BrInv)) => {
                    let left = ((cv.x(i, lo), y0), (cv.x(o + 1, hi), y1));
                    let right = ((cv.x(i + 1, lo), y0), (cv.x(o, hi), y1));
                    // the strand starting on the left passes over for br
                    let (over, under) = if *g == Gen::Br {
                        (left, right)
                    } else {
                        (right, left)
                    };
                    cv.line(over.0, over.1);
                    cv.under(under.0, under.1);
                }
                Cell::Box(g) => {
                    let xs_in: Vec<f64> = (i..i + k).map(|j| cv.x(j, lo)).collect();
                    let xs_out: Vec<f64> = (o..o + q).map(|j| cv.x(j, hi)).collect();
                    let all: Vec<f64> = xs_in.iter().chain(&xs_out).copied().collect();
                    let centre = if all.is_empty() {
                        cv.x(i, lo.max(1))
                    } else {
                        all.iter().sum::<f64>() / all.len() as f64
                    };
                    let half = (k.max(q).max(1) as f64 * STEP_X) / 2.0 - 8.0;
                    let (bot, top) = (y0 - STEP_Y * 0.3, y1 + STEP_Y * 0.3);
                    for x in &xs_in {
                        cv.line((*x, y0), (*x, bot));
                    }
                    for x in &xs_out {
                        cv.line((*x, top), (*x, y1));
                    }
                    let _ = writeln!(
                        cv.body,
                        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="white" stroke="black"/>"#,
                        centre - half,
                        top,
                        2.0 * half,
                        bot - top
                    );
                    let _ = writeln!(
                        cv.body,
                        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="monospace" font-size="12">{}</text>"#,
                        centre,
                        (top + bot) / 2.0 + 4.0,
                        g.name()
                    );
                }
            }
            i += k;
            o += q;
        }
    }
    let total_w = 2.0 * MARGIN + width as f64 * STEP_X;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {total_w:.0} {height:.0}\">\n{}</svg>\n",
        cv.body
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ribbon_core::{canonicalize, parse};

    fn d(s: &str) -> Diagram {
        canonicalize(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn text_rows() {
        assert_eq!(text(&d("mul * ant")), "3 -> 2\n[mul] [ant]\n");
        assert_eq!(text(&d("id[2]")), "2 -> 2\n");
    }

    #[test]
    fn svg_has_boxes_and_crossings() {
        let s = svg(&d("(cou * id[1]) . br . cop"));
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<rect").count(), 2);
        // the crossing: one whole strand and one split in two
        assert!(s.matches("<line").count() >= 3 + 3);
        assert_eq!(svg(&d("br")), svg(&d("br")));
        assert_ne!(svg(&d("br")), svg(&d("br_inv")));
    }
}
