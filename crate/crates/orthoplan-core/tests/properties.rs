use std::collections::BTreeMap;

use orthoplan_core::layout::{
    canonicalize_polygon, classify_shape, union_outline, OrthoPlan, Point, Rect, RectPlan,
    ShapeClass,
};
use orthoplan_core::verify::{check_tiling, plan_adjacency};
use proptest::prelude::*;

/// L outline: a w×h box with a cx×cy notch cut from its top-right corner.
fn l_outline(x: i64, y: i64, w: i64, h: i64, cx: i64, cy: i64) -> Vec<Point> {
    vec![
        (x, y),
        (x + w, y),
        (x + w, y + h - cy),
        (x + w - cx, y + h - cy),
        (x + w - cx, y + h),
        (x, y + h),
    ]
}

fn rotate(p: &[Point]) -> Vec<Point> {
    p.iter().map(|&(x, y)| (-y, x)).collect()
}

fn mirror(p: &[Point]) -> Vec<Point> {
    p.iter().map(|&(x, y)| (-x, y)).collect()
}

/// Guillotine partition of `r` into at most `depth`-deep cuts.
fn guillotine(r: Rect, cuts: &[(bool, u8)], out: &mut Vec<Rect>) {
    let Some((&(vertical, at), rest)) = cuts.split_first() else {
        out.push(r);
        return;
    };
    let span = if vertical { r.width() } else { r.height() };
    if span < 2 {
        out.push(r);
        return;
    }
    let k = 1 + (at as i64) % (span - 1);
    let (a, b) = if vertical {
        (
            Rect::new(r.x1, r.y1, r.x1 + k, r.y2),
            Rect::new(r.x1 + k, r.y1, r.x2, r.y2),
        )
    } else {
        (
            Rect::new(r.x1, r.y1, r.x2, r.y1 + k),
            Rect::new(r.x1, r.y1 + k, r.x2, r.y2),
        )
    };
    let half = rest.len() / 2;
    guillotine(a, &rest[..half], out);
    guillotine(b, &rest[half..], out);
}

fn plan_of(rects: &[Rect], bbox: Rect) -> OrthoPlan {
    let modules: BTreeMap<u32, Rect> = rects
        .iter()
        .enumerate()
        .map(|(i, r)| (i as u32 + 1, *r))
        .collect();
    OrthoPlan::from_rects(&RectPlan { modules, bbox })
}

proptest! {
    #[test]
    fn l_shapes_survive_rotation_and_mirroring(
        x in -20i64..20, y in -20i64..20, w in 2i64..30, h in 2i64..30, cx in 1i64..29, cy in 1i64..29, turns in 0usize..4, flip: bool
    ) {
        prop_assume!(cx < w && cy < h);
        let mut p = l_outline(x, y, w, h, cx, cy);
        for _ in 0..turns {
            p = rotate(&p);
        }
        if flip {
            p = mirror(&p);
        }
        let c = canonicalize_polygon(&p).unwrap();
        prop_assert_eq!(classify_shape(&c).unwrap(), ShapeClass::L);
        prop_assert_eq!(c.area(), w * h - cx * cy);
    }

    #[test]
    fn canonical_form_ignores_start_direction_and_midpoints(
        w in 2i64..30, h in 2i64..30, cx in 1i64..29, cy in 1i64..29, start in 0usize..6, rev: bool
    ) {
        prop_assume!(cx < w && cy < h);
        let base = canonicalize_polygon(&l_outline(0, 0, w, h, cx, cy)).unwrap();
        let mut p = l_outline(0, 0, w, h, cx, cy);
        p.rotate_left(start);
        // a collinear point on the first edge
        let (a, b) = (p[0], p[1]);
        p.insert(1, ((a.0 + b.0) / 2, (a.1 + b.1) / 2));
        if rev {
            p.reverse();
        }
        let c = canonicalize_polygon(&p).unwrap();
        prop_assert_eq!(c, base);
    }

    #[test]
    fn guillotine_partitions_tile(w in 1i64..40, h in 1i64..40, cuts in prop::collection::vec((any::<bool>(), any::<u8>()), 0..12)) {
        let bbox = Rect::new(0, 0, w, h);
        let mut rects = Vec::new();
        guillotine(bbox, &cuts, &mut rects);
        let plan = plan_of(&rects, bbox);
        prop_assert!(check_tiling(&plan).verdict());
        prop_assert_eq!(union_outline(&rects).unwrap().corners(), 4);
        // adjacency agrees with a direct pairwise wall test
        let mut want = Vec::new();
        for (i, r) in rects.iter().enumerate() {
            for (j, s) in rects.iter().enumerate() {
                if i < j && r.shared_wall(s) > 0 {
                    want.push((i as u32 + 1, j as u32 + 1));
                }
            }
        }
        prop_assert_eq!(plan_adjacency(&plan), want);
    }

    #[test]
    fn shifted_module_breaks_tiling(
        w in 2i64..40, h in 2i64..40, cuts in prop::collection::vec((any::<bool>(), any::<u8>()), 1..12), pick: usize, right: bool
    ) {
        let bbox = Rect::new(0, 0, w, h);
        let mut rects = Vec::new();
        guillotine(bbox, &cuts, &mut rects);
        let k = pick % rects.len();
        rects[k] = if right { rects[k].translate(1, 0) } else { rects[k].translate(0, -1) };
        prop_assert!(!check_tiling(&plan_of(&rects, bbox)).verdict());
    }
}
