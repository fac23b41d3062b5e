use num_complex::Complex64;
use std::fmt::Write;

use crate::construction::{CheeseConfig, Deletion, Provenance};
use crate::geometry::{Disc, Square};

/// Part of the plane to draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Zoom {
    /// All of `Q` with a small margin.
    Full,
    /// The square of half width `half_width` about `center`.
    Window { center: Complex64, half_width: f64 },
    /// Discs whose centers lie at distance `inner..=outer` from `center`,
    /// framed by the outer circle.
    Annulus { center: Complex64, inner: f64, outer: f64 },
    /// The discs transplanted into `D_l`, drawn in the unit coordinates of
    /// that disc, optionally restricted to one level.
    Family { l: usize, level: Option<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub zoom: Zoom,
    pub color_by_provenance: bool,
    /// Width and height of the picture in pixels.
    pub size: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { zoom: Zoom::Full, color_by_provenance: true, size: 800 }
    }
}

const LEVEL_COLORS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];
const WERMER_COLOR: &str = "#a6761d";
const PLAIN_COLOR: &str = "#555555";

fn color(p: &Provenance, by_provenance: bool) -> &'static str {
    if !by_provenance {
        return PLAIN_COLOR;
    }
    match p {
        Provenance::McKissick { level, .. } => LEVEL_COLORS[(*level as usize) % LEVEL_COLORS.len()],
        Provenance::Wermer { .. } => WERMER_COLOR,
    }
}

fn family_frame(cfg: &CheeseConfig, l: usize) -> Option<Disc> {
    cfg.ledger.entries.iter().find(|e| e.l == l).map(|e| e.disc)
}

/// Selected deletions mapped into the drawing plane, and the drawing window.
fn select(cfg: &CheeseConfig, zoom: Zoom) -> (Vec<(Disc, &Deletion)>, Complex64, f64) {
    let all = cfg.deletions.iter().map(|d| (d.disc, d));
    match zoom {
        Zoom::Full => (all.collect(), cfg.square.center, cfg.square.half_width * 1.05),
        Zoom::Window { center, half_width } => {
            let w = Square { center, half_width };
            let v = all
                .filter(|(d, _)| w.point_distance_to_boundary(d.center) < d.radius || w.contains(d.center))
                .collect();
            (v, center, half_width)
        }
        Zoom::Annulus { center, inner, outer } => {
            let v = all
                .filter(|(d, _)| {
                    let m = (d.center - center).norm();
                    m >= inner && m <= outer
                })
                .collect();
            (v, center, outer * 1.05)
        }
        Zoom::Family { l, level } => {
            let Some(frame) = family_frame(cfg, l) else {
                return (Vec::new(), Complex64::new(0.0, 0.0), 1.05);
            };
            let v = cfg
                .deletions
                .iter()
                .filter(|d| match d.provenance {
                    Provenance::McKissick { l: dl, level: dv } => dl == l && level.is_none_or(|x| x == dv),
                    _ => false,
                })
                .map(|d| {
                    let unit = Disc {
                        center: (d.disc.center - frame.center) / frame.radius,
                        radius: d.disc.radius / frame.radius,
                    };
                    (unit, d)
                })
                .collect();
            (v, Complex64::new(0.0, 0.0), 1.05)
        }
    }
}

/// SVG picture of a configuration: the outline of `Q` as one `rect` and one
/// filled `circle` per selected deleted disc. Output depends only on the
/// configuration and the options.
pub fn render_svg(cfg: &CheeseConfig, opts: &RenderOptions) -> String {
    let (discs, center, half) = select(cfg, opts.zoom);
    let size = opts.size as f64;
    let scale = size / (2.0 * half);
    let to_screen = |z: Complex64| ((z.re - center.re + half) * scale, (center.im + half - z.im) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        opts.size
    );
    let sq = match opts.zoom {
        Zoom::Family { l, .. } => family_frame(cfg, l)
            .map(|f| Square { center: (cfg.square.center - f.center) / f.radius, half_width: cfg.square.half_width / f.radius })
            .unwrap_or(cfg.square),
        _ => cfg.square,
    };
    let (x, y) = to_screen(sq.center + Complex64::new(-sq.half_width, sq.half_width));
    let w = 2.0 * sq.half_width * scale;
    let _ = writeln!(
        s,
        "<rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    );
    for (d, del) in discs {
        let (cx, cy) = to_screen(d.center);
        let r = d.radius * scale;
        let _ = writeln!(
            s,
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"{}\"/>",
            color(&del.provenance, opts.color_by_provenance)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{assemble_cheese, build_regular_cheese, Caps, EmptyWermer};
    use std::f64::consts::PI;

    fn count(svg: &str, tag: &str) -> usize {
        svg.matches(&format!("<{tag} ")).count()
    }

    #[test]
    fn full_view_structure() {
        let cfg = build_regular_cheese(64.0, 6, 5, 1 << 22).unwrap();
        let svg = render_svg(&cfg, &RenderOptions::default());
        assert_eq!(count(&svg, "rect"), 1);
        assert_eq!(count(&svg, "circle"), cfg.deletions.len());
        assert_eq!(svg, render_svg(&cfg, &RenderOptions::default()));
    }

    #[test]
    fn empty_config_is_just_the_square() {
        let cfg = assemble_cheese(4.0 * PI, 1, 0, &EmptyWermer, Caps::default()).unwrap();
        let svg = render_svg(&cfg, &RenderOptions::default());
        assert_eq!(count(&svg, "rect"), 1);
        assert_eq!(count(&svg, "circle"), 0);
    }

    #[test]
    fn family_zoom_shows_one_ring() {
        let (cfg, l) = [64.0, 256.0, 1024.0, 4096.0, 16384.0]
            .iter()
            .find_map(|&c0| {
                let cfg = build_regular_cheese(c0, 6, 4, 1 << 22).unwrap();
                let l = cfg.ledger.entries.iter().find(|e| e.m == 4 && e.discarded == 0 && e.retained > 0)?.l;
                Some((cfg, l))
            })
            .unwrap();
        let opts = RenderOptions { zoom: Zoom::Family { l, level: Some(4) }, ..Default::default() };
        let svg = render_svg(&cfg, &opts);
        assert_eq!(count(&svg, "circle"), 1024);
        let (sel, _, _) = select(&cfg, opts.zoom);
        for (d, _) in sel {
            assert!((d.center.norm() - (1.0 - 2f64.powi(-8))).abs() < 1e-12);
        }
    }
}
