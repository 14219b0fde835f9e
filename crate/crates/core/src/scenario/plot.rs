//! Minimal SVG line chart of a normalized cut (dB against degrees).

use std::fmt::Write;

use super::config::PlotConfig;
use crate::radiation::FieldCut;

struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    theta: (f64, f64),
    db: (f64, f64),
}

impl Frame {
    fn px(&self, theta: f64) -> f64 {
        self.x + (theta - self.theta.0) / (self.theta.1 - self.theta.0) * self.w
    }

    fn py(&self, db: f64) -> f64 {
        let db = db.clamp(self.db.0, self.db.1);
        self.y + (self.db.1 - db) / (self.db.1 - self.db.0) * self.h
    }
}

fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn decimals(step: f64) -> usize {
    (-step.log10().floor()).max(0.0) as usize
}

fn draw_panel(
    svg: &mut String,
    f: &Frame,
    theta: &[f64],
    db: &[f64],
    ticks: bool,
    label_size: u32,
) {
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="#333" stroke-width="1"/>"##,
        f.x, f.y, f.w, f.h
    );
    let xstep = nice_step(f.theta.1 - f.theta.0, 5.0);
    let xd = decimals(xstep);
    let mut t = (f.theta.0 / xstep).ceil() * xstep;
    while t <= f.theta.1 + 1e-9 * xstep {
        let x = f.px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##,
            f.y,
            f.y + f.h
        );
        if ticks {
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.2}" font-size="{label_size}" text-anchor="middle">{:.*}</text>"#,
                f.y + f.h + label_size as f64 + 4.0,
                xd,
                t + 0.0
            );
        }
        t += xstep;
    }
    let ystep = nice_step(f.db.1 - f.db.0, 6.0);
    let mut d = (f.db.0 / ystep).ceil() * ystep;
    while d <= f.db.1 + 1e-9 {
        let y = f.py(d);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            f.x,
            f.x + f.w
        );
        if ticks {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="{label_size}" text-anchor="end">{:.0}</text>"#,
                f.x - 6.0,
                y + label_size as f64 / 3.0,
                d + 0.0
            );
        }
        d += ystep;
    }
    let mut points = String::new();
    for (t, v) in theta.iter().zip(db) {
        if *t < f.theta.0 || *t > f.theta.1 {
            continue;
        }
        let _ = write!(points, "{:.2},{:.2} ", f.px(*t), f.py(*v));
    }
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1" points="{}"/>"##,
        points.trim_end()
    );
}

/// Render `field` over its whole range, plus a zoomed inset when enabled and
/// the zoom window overlaps the cut.
pub fn render_cut_svg(field: &FieldCut, opts: &PlotConfig, title: &str) -> String {
    let (w, h) = (opts.width_px as f64, opts.height_px as f64);
    let theta = field.theta();
    let db = field.magnitude_db();
    let main = Frame {
        x: 70.0,
        y: 40.0,
        w: w - 100.0,
        h: h - 100.0,
        theta: (theta[0], theta[theta.len() - 1]),
        db: (opts.floor_db, 0.0),
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif">"#,
        opts.width_px, opts.height_px, opts.width_px, opts.height_px
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    draw_panel(&mut svg, &main, theta, &db, true, 12);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">θ (deg), φ = {}°</text>"#,
        main.x + main.w / 2.0,
        h - 12.0,
        field.cut.phi_deg
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">normalized pattern (dB)</text>"#,
        main.y + main.h / 2.0,
        main.y + main.h / 2.0
    );
    let lo = opts.zoom_theta_min_deg.max(main.theta.0);
    let hi = opts.zoom_theta_max_deg.min(main.theta.1);
    if opts.zoom && lo < hi {
        let inset = Frame {
            x: main.x + main.w * 0.62,
            y: main.y + 12.0,
            w: main.w * 0.35,
            h: main.h * 0.38,
            theta: (lo, hi),
            db: (opts.floor_db, 0.0),
        };
        draw_panel(&mut svg, &inset, theta, &db, true, 9);
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
