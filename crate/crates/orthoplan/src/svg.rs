//! Deterministic SVG rendering of plans.

use std::fmt::Write;

use orthoplan_core::layout::{OrthoPlan, ShapeClass};
use orthoplan_core::verify::polygon_rects;
use orthoplan_core::PlanarGraph;

/// Pixels per grid unit.
pub const SCALE: i64 = 40;

fn fill(shape: Option<ShapeClass>, designated: bool) -> &'static str {
    if designated {
        return "#f4a261";
    }
    match shape {
        Some(ShapeClass::Rectangle) => "#e9f1f7",
        Some(ShapeClass::L) | Some(ShapeClass::T) => "#cde6d0",
        _ => "#f2e3c6",
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(ch),
        }
    }
    out
}

/// One path per module with its label at the area centroid. Grid y grows
/// upwards, so it is mirrored into SVG space.
pub fn render_svg(plan: &OrthoPlan, g: Option<&PlanarGraph>) -> String {
    let b = plan.bbox;
    let (w, h) = (b.width() * SCALE, b.height() * SCALE);
    let px = |x: i64| (x - b.x1) * SCALE;
    let py = |y: i64| (b.y2 - y) * SCALE;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#
    )
    .unwrap();
    s.push_str(
        "<g stroke=\"#222\" stroke-width=\"2\" font-family=\"sans-serif\" font-size=\"14\">\n",
    );
    for (&v, p) in &plan.modules {
        let designated = plan.designated == Some(v);
        let mut d = String::new();
        for (i, &(x, y)) in p.points().iter().enumerate() {
            write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, px(x), py(y)).unwrap();
        }
        d.push_str(" Z");
        let class = if designated {
            "module designated"
        } else {
            "module"
        };
        let extra = if designated {
            r#" stroke-width="4""#
        } else {
            ""
        };
        writeln!(
            s,
            r#"<path class="{class}" data-id="{v}" data-shape="{}" fill="{}"{extra} d="{d}"/>"#,
            plan.shape_of(v).map_or("Other", |c| c.name()),
            fill(plan.shape_of(v), designated),
        )
        .unwrap();
    }
    for (&v, p) in &plan.modules {
        // twice the centroid times the area, kept integral
        let (mut ax, mut ay, mut area) = (0i64, 0i64, 0i64);
        for r in polygon_rects(p) {
            ax += r.area() * (r.x1 + r.x2);
            ay += r.area() * (r.y1 + r.y2);
            area += r.area();
        }
        if area == 0 {
            continue;
        }
        let cx = (ax * SCALE - 2 * b.x1 * SCALE * area) as f64 / (2 * area) as f64;
        let cy = (2 * b.y2 * SCALE * area - ay * SCALE) as f64 / (2 * area) as f64;
        let label = g
            .and_then(|g| g.label(v))
            .map_or_else(|| v.to_string(), str::to_string);
        writeln!(
            s,
            r#"<text x="{cx:.1}" y="{cy:.1}" stroke="none" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            escape(&label)
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use orthoplan_core::layout::{Rect, RectPlan};
    use std::collections::BTreeMap;

    #[test]
    fn empty_plan_is_an_empty_group() {
        let plan = OrthoPlan::from_rects(&RectPlan {
            modules: BTreeMap::new(),
            bbox: Rect::new(0, 0, 0, 0),
        });
        let svg = render_svg(&plan, None);
        assert!(svg.contains("<g "));
        assert!(!svg.contains("<path"));
    }

    #[test]
    fn paths_and_labels() {
        let mut modules = BTreeMap::new();
        modules.insert(1, Rect::new(0, 0, 1, 2));
        modules.insert(2, Rect::new(1, 0, 3, 2));
        let mut plan = OrthoPlan::from_rects(&RectPlan {
            modules,
            bbox: Rect::new(0, 0, 3, 2),
        });
        plan.designated = Some(2);
        let svg = render_svg(&plan, None);
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches("designated").count(), 1);
        assert!(svg.contains(r#"viewBox="0 0 120 80""#));
        // module 1 spans x 0..40, y 0..80 in pixels
        assert!(svg.contains(r#"<text x="20.0" y="40.0""#));
        assert!(svg.contains("M0 80 L40 80 L40 0 L0 0 Z"));
        assert_eq!(svg, render_svg(&plan, None));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }
}
