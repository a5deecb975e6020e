//! Static SVG rendering of a point set with an optional box outline.
//!
//! The drawing space is the coordinate grid itself (viewBox 0..den), so every
//! point lands on integer coordinates and repeated runs are byte-identical.
//! The y axis is flipped to put the origin at the bottom-left.

use dispnet::rational::{rat_int, to_f64};
use dispnet::{BoxReport, GridPointSet, Rational};

fn scaled(value: &Rational, den: u64) -> String {
    // Witness edges live on the grid, so this is exact in practice; anything
    // else falls back to a fixed-precision decimal.
    let scaled = value * rat_int(den);
    if scaled.is_integer() {
        scaled.numer().to_string()
    } else {
        format!("{:.6}", to_f64(&scaled))
    }
}

/// Renders dots (and one rectangle, when given) into an SVG string.
pub fn render_svg(points: &GridPointSet, witness: Option<&BoxReport>) -> String {
    let den = points.den();
    let radius = (den / 256).max(1);
    let stroke = (den / 512).max(1);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{m} {m} {s} {s}\" \
         width=\"640\" height=\"640\">\n",
        m = -(radius as i64) * 2,
        s = den + 4 * radius,
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{den}\" height=\"{den}\" fill=\"white\" \
         stroke=\"black\" stroke-width=\"{stroke}\"/>\n"
    ));
    if let Some(bx) = witness {
        let x = scaled(&bx.x_lo, den);
        let w = scaled(&(&bx.x_hi - &bx.x_lo), den);
        let h = scaled(&(&bx.y_hi - &bx.y_lo), den);
        // Flip y: the rect's top edge is den - y_hi.
        let y = scaled(&(rat_int(1) - &bx.y_hi), den);
        svg.push_str(&format!(
            "  <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" \
             fill=\"#ffcc66\" fill-opacity=\"0.5\" stroke=\"#cc6600\" \
             stroke-width=\"{stroke}\"/>\n"
        ));
    }
    for &(x, y) in points.points() {
        svg.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{}\" r=\"{radius}\" fill=\"#1f3b73\"/>\n",
            den - y
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
