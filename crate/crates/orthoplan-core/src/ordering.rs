//! Canonical orderings of completed graphs: the plain smallest-id ordering and
//! the prioritized ordering that fixes the relative order of a, d, u and C1.
//!
//! Vertices are ranked from the top: N first, then repeatedly an eligible
//! vertex of the current contour, which runs from W to S.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::completion::CompletedGraph;
use crate::graph::VertexId;
use crate::report::ValidationReport;
use crate::triangles::SiteL;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("the (N,S) edge must be present")]
    MissingNsEdge,
    #[error("no eligible vertex with {remaining} vertices left: {dump}")]
    Stuck { remaining: usize, dump: String },
    #[error("direction vertex {0} cannot be frozen")]
    FrozenDirection(VertexId),
    #[error("priority list must be a permutation of a, d, u, C1")]
    BadPriorityList,
    #[error("no priority category yields a canonical ordering")]
    NoCategory,
    #[error("site has no inserted vertex u")]
    SiteNotModified,
}

/// The six priority categories, each a rank-descending sequence of
/// {a, d, u, C1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::A,
        Category::B,
        Category::C,
        Category::D,
        Category::E,
        Category::F,
    ];

    pub fn sequence(self, site: &SiteL) -> Option<[VertexId; 4]> {
        let (a, d, c1) = (site.a, site.d, site.c1);
        let u = site.u?;
        Some(match self {
            Category::A => [c1, u, d, a],
            Category::B => [d, u, a, c1],
            Category::C => [d, u, c1, a],
            Category::D => [a, d, u, c1],
            Category::E => [c1, a, u, d],
            Category::F => [a, c1, u, d],
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::A => "A",
            Category::B => "B",
            Category::C => "C",
            Category::D => "D",
            Category::E => "E",
            Category::F => "F",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalOrdering {
    /// `rank[v]` in 1..=n, 0 for ids that are not vertices.
    pub rank: Vec<u32>,
    /// `order[i]` is the vertex of rank i+1.
    pub order: Vec<VertexId>,
    pub category: Option<Category>,
    /// Vertices in the order they were ranked, from rank n down.
    pub trace: Vec<VertexId>,
}

impl CanonicalOrdering {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank_of(&self, v: VertexId) -> u32 {
        self.rank.get(v as usize).copied().unwrap_or(0)
    }

    /// The vertex of rank `j` (1-based).
    pub fn vertex(&self, j: u32) -> VertexId {
        self.order[j as usize - 1]
    }

    /// Build from a rank-ascending vertex list.
    pub fn from_order(order: Vec<VertexId>, id_bound: usize) -> Self {
        let mut rank = vec![0; id_bound];
        for (i, &v) in order.iter().enumerate() {
            rank[v as usize] = i as u32 + 1;
        }
        let trace = order.iter().rev().copied().collect();
        CanonicalOrdering {
            rank,
            order,
            category: None,
            trace,
        }
    }
}

/// Rotation of `v` with the (N,S) edge placed: S follows E around N, and N
/// follows W around S.
pub(crate) fn extended_rotation(cg: &CompletedGraph, v: VertexId) -> Vec<VertexId> {
    let mut r = cg.graph.neighbors(v).to_vec();
    if cg.ns_edge_present {
        let d = cg.dirs;
        let (anchor, extra) = if v == d.n {
            (d.e, d.s)
        } else if v == d.s {
            (d.w, d.n)
        } else {
            return r;
        };
        let i = r.iter().position(|&x| x == anchor).expect("direction ring");
        r.insert(i + 1, extra);
    }
    r
}

/// Labeling state of the top-down ranking: ranked flags, visited and chord
/// counters, and the current contour as a linked list from W to S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderState {
    pub ch: Vec<i32>,
    pub vi: Vec<u32>,
    pub st: Vec<bool>,
    pub frozen: BTreeSet<VertexId>,
    pub next_rank: u32,
    pub rank: Vec<u32>,
    pub trace: Vec<VertexId>,
    on_contour: Vec<bool>,
    prev: Vec<VertexId>,
    next: Vec<VertexId>,
    eligible: BTreeSet<VertexId>,
    w: VertexId,
    s: VertexId,
}

const NONE: VertexId = VertexId::MAX;

impl OrderState {
    fn new(cg: &CompletedGraph) -> Self {
        let size = cg.graph.id_bound();
        let d = cg.dirs;
        let n = cg.graph.vertex_count() as u32;
        let mut st = OrderState {
            ch: vec![0; size],
            vi: vec![0; size],
            st: vec![false; size],
            frozen: BTreeSet::new(),
            next_rank: n,
            rank: vec![0; size],
            trace: Vec::new(),
            on_contour: vec![false; size],
            prev: vec![NONE; size],
            next: vec![NONE; size],
            eligible: BTreeSet::new(),
            w: d.w,
            s: d.s,
        };
        st.st[d.w as usize] = true;
        st.st[d.s as usize] = true;
        st.rank[d.w as usize] = 1;
        st.rank[d.s as usize] = 2;
        // N has no higher neighbor and E only N; the seeds stand in for them
        st.vi[d.n as usize] = 2;
        st.vi[d.e as usize] = 1;
        for (a, b) in [(d.w, d.n), (d.n, d.s)] {
            st.next[a as usize] = b;
            st.prev[b as usize] = a;
        }
        for v in [d.w, d.n, d.s] {
            st.on_contour[v as usize] = true;
        }
        st.refresh(d.n);
        st
    }

    pub fn remaining(&self) -> u32 {
        self.next_rank.saturating_sub(2)
    }

    pub fn is_complete(&self) -> bool {
        self.remaining() == 0
    }

    pub fn is_eligible(&self, v: VertexId) -> bool {
        let i = v as usize;
        v != self.w
            && v != self.s
            && i < self.st.len()
            && !self.st[i]
            && self.on_contour[i]
            && self.ch[i] == 0
            && self.vi[i] >= 2
    }

    /// Current contour from W to S.
    pub fn contour(&self) -> Vec<VertexId> {
        let mut out = vec![self.w];
        let mut cur = self.w;
        while cur != self.s {
            cur = self.next[cur as usize];
            out.push(cur);
        }
        out
    }

    fn refresh(&mut self, v: VertexId) {
        if self.is_eligible(v) {
            self.eligible.insert(v);
        } else {
            self.eligible.remove(&v);
        }
    }

    fn adjacent_on_contour(&self, x: VertexId, y: VertexId) -> bool {
        self.next[x as usize] == y || self.prev[x as usize] == y
    }

    fn is_ws(&self, x: VertexId, y: VertexId) -> bool {
        (x == self.w && y == self.s) || (x == self.s && y == self.w)
    }

    /// Rank `v` next and expose the neighbors between its contour neighbors.
    fn take(&mut self, cg: &CompletedGraph, v: VertexId) {
        debug_assert!(self.is_eligible(v));
        let vi_ = v as usize;
        self.st[vi_] = true;
        self.rank[vi_] = self.next_rank;
        self.next_rank -= 1;
        self.trace.push(v);
        self.eligible.remove(&v);
        let (p, q) = (self.prev[vi_], self.next[vi_]);
        self.on_contour[vi_] = false;
        self.prev[vi_] = NONE;
        self.next[vi_] = NONE;

        let rot = extended_rotation(cg, v);
        let k = rot.len();
        let ip = rot.iter().position(|&x| x == p).expect("contour neighbor");
        let mut segment = Vec::new();
        for off in 1..k {
            let x = rot[(ip + off) % k];
            if x == q {
                break;
            }
            segment.push(x);
        }

        let mut last = p;
        for &x in &segment {
            self.on_contour[x as usize] = true;
            self.next[last as usize] = x;
            self.prev[x as usize] = last;
            last = x;
        }
        self.next[last as usize] = q;
        self.prev[q as usize] = last;

        let mut touched: Vec<VertexId> = Vec::with_capacity(k + 2);
        for &x in &rot {
            if !self.st[x as usize] {
                self.vi[x as usize] += 1;
                touched.push(x);
            }
        }
        if segment.is_empty() {
            if !self.is_ws(p, q) {
                self.ch[p as usize] -= 1;
                self.ch[q as usize] -= 1;
            }
        } else {
            let fresh: BTreeSet<VertexId> = segment.iter().copied().collect();
            for &w in &segment {
                for x in extended_rotation(cg, w) {
                    if !self.on_contour[x as usize] || self.adjacent_on_contour(w, x) {
                        continue;
                    }
                    self.ch[w as usize] += 1;
                    if !fresh.contains(&x) {
                        self.ch[x as usize] += 1;
                        touched.push(x);
                    }
                }
            }
        }
        touched.extend([p, q]);
        for x in touched {
            self.refresh(x);
        }
    }

    /// Recount chords from scratch; used to cross-check the incremental counts.
    pub fn recount_chords(&self, cg: &CompletedGraph) -> Vec<i32> {
        let mut ch = vec![0; self.ch.len()];
        for v in self.contour() {
            for x in extended_rotation(cg, v) {
                if self.on_contour[x as usize]
                    && !self.adjacent_on_contour(v, x)
                    && !self.is_ws(v, x)
                {
                    ch[v as usize] += 1;
                }
            }
        }
        ch
    }

    fn dump(&self) -> String {
        let c = self.contour();
        let info: Vec<String> = c
            .iter()
            .map(|&v| format!("{v}(ch={},vi={})", self.ch[v as usize], self.vi[v as usize]))
            .collect();
        format!("contour [{}]", info.join(" "))
    }

    fn finish(&self, cg: &CompletedGraph, category: Option<Category>) -> CanonicalOrdering {
        let n = cg.graph.vertex_count();
        let mut order = vec![0; n];
        for v in cg.graph.vertices() {
            order[self.rank[v as usize] as usize - 1] = v;
        }
        CanonicalOrdering {
            rank: self.rank.clone(),
            order,
            category,
            trace: self.trace.clone(),
        }
    }
}

fn start(cg: &CompletedGraph) -> Result<OrderState, OrderError> {
    if !cg.ns_edge_present {
        return Err(OrderError::MissingNsEdge);
    }
    Ok(OrderState::new(cg))
}

/// Rank every vertex, always taking the eligible vertex with the smallest id.
pub fn canonical_order(cg: &CompletedGraph) -> Result<CanonicalOrdering, OrderError> {
    let st = canon_label_partial(cg, &BTreeSet::new())?;
    if !st.is_complete() {
        return Err(OrderError::Stuck {
            remaining: st.remaining() as usize,
            dump: st.dump(),
        });
    }
    Ok(st.finish(cg, None))
}

/// Rank vertices outside `frozen` (smallest id first) until only frozen
/// vertices are eligible, and return the paused state.
pub fn canon_label_partial(
    cg: &CompletedGraph,
    frozen: &BTreeSet<VertexId>,
) -> Result<OrderState, OrderError> {
    if let Some(&v) = frozen.iter().find(|&&v| cg.dirs.contains(v)) {
        return Err(OrderError::FrozenDirection(v));
    }
    let mut st = start(cg)?;
    st.frozen = frozen.clone();
    loop {
        let pick = st.eligible.iter().copied().find(|v| !frozen.contains(v));
        match pick {
            Some(v) => st.take(cg, v),
            None => break,
        }
    }
    Ok(st)
}

/// Resume a paused state: the next unranked vertex of `pl` is taken as soon as
/// it is eligible, otherwise the smallest eligible vertex outside `pl`.
pub fn try_category(
    cg: &CompletedGraph,
    state: &OrderState,
    pl: &[VertexId; 4],
) -> Option<CanonicalOrdering> {
    let mut st = state.clone();
    while !st.is_complete() {
        let want = pl.iter().copied().find(|&v| !st.st[v as usize]);
        let pick = match want {
            Some(v) if st.is_eligible(v) => Some(v),
            _ => st.eligible.iter().copied().find(|v| !pl.contains(v)),
        };
        st.take(cg, pick?);
    }
    Some(st.finish(cg, None))
}

/// Like [`try_category`], checking that `pl` is a permutation of {a,d,u,C1}.
pub fn try_category_for_site(
    cg: &CompletedGraph,
    state: &OrderState,
    site: &SiteL,
    pl: &[VertexId; 4],
) -> Result<Option<CanonicalOrdering>, OrderError> {
    let u = site.u.ok_or(OrderError::SiteNotModified)?;
    let mut want = [site.a, site.d, u, site.c1];
    let mut got = *pl;
    want.sort_unstable();
    got.sort_unstable();
    if want != got {
        return Err(OrderError::BadPriorityList);
    }
    Ok(try_category(cg, state, pl))
}

pub fn site_frozen_set(site: &SiteL) -> BTreeSet<VertexId> {
    let mut s: BTreeSet<VertexId> = [site.a, site.b, site.c, site.d, site.c1].into();
    if let Some(u) = site.u {
        s.insert(u);
    }
    s
}

/// Try categories A to F on the state paused before the site's vertices and
/// return the first that completes.
pub fn prioritized_order(
    cg: &CompletedGraph,
    site: &SiteL,
) -> Result<(CanonicalOrdering, Category), OrderError> {
    site.u.ok_or(OrderError::SiteNotModified)?;
    let state = canon_label_partial(cg, &site_frozen_set(site))?;
    for cat in Category::ALL {
        let pl = cat.sequence(site).expect("u is set");
        if let Some(mut ord) = try_category(cg, &state, &pl) {
            ord.category = Some(cat);
            return Ok((ord, cat));
        }
    }
    Err(OrderError::NoCategory)
}

/// Check the ordering conditions prefix by prefix: W, S and N at ranks 1, 2
/// and n; each v_j attaches to at least two consecutive vertices of the
/// contour of the vertices below it; every v_j with j <= n-2 has at least two
/// neighbors above it.
pub fn validate_ordering(cg: &CompletedGraph, ord: &CanonicalOrdering) -> ValidationReport {
    let mut r = ValidationReport::new();
    let g = &cg.graph;
    let n = g.vertex_count();
    let d = cg.dirs;

    let mut bijective = ord.order.len() == n;
    let mut seen = vec![false; g.id_bound()];
    for (i, &v) in ord.order.iter().enumerate() {
        if !g.contains(v) || seen[v as usize] || ord.rank_of(v) as usize != i + 1 {
            bijective = false;
            break;
        }
        seen[v as usize] = true;
    }
    if !bijective {
        r.fail(
            "ranks form a bijection",
            "order and rank disagree or skip a vertex",
        );
        return r;
    }
    r.pass("ranks form a bijection");

    let ends_ok = n >= 3 && ord.order[0] == d.w && ord.order[1] == d.s && ord.order[n - 1] == d.n;
    if ends_ok {
        r.pass("v1 = W, v2 = S, vn = N");
    } else {
        r.fail(
            "v1 = W, v2 = S, vn = N",
            format!(
                "v1={}, v2={}, vn={}",
                ord.order.first().copied().unwrap_or(0),
                ord.order.get(1).copied().unwrap_or(0),
                ord.order.last().copied().unwrap_or(0)
            ),
        );
        return r;
    }

    let size = g.id_bound();
    let mut next = vec![NONE; size];
    let mut prev = vec![NONE; size];
    next[d.w as usize] = d.s;
    prev[d.s as usize] = d.w;
    let mut contour_fail: Option<String> = None;
    let mut above_fail: Option<String> = None;
    for j in 3..=n {
        let v = ord.order[j - 1];
        let rj = j as u32;
        let rot = extended_rotation(cg, v);
        let k = rot.len();
        let low: Vec<bool> = rot.iter().map(|&x| ord.rank_of(x) < rj).collect();
        let lows = low.iter().filter(|&&b| b).count();
        if j <= n - 2 && k - lows < 2 && above_fail.is_none() {
            above_fail = Some(format!("v{j} = {v} has {} higher neighbors", k - lows));
        }
        if contour_fail.is_some() {
            continue;
        }
        if lows < 2 {
            contour_fail = Some(format!("v{j} = {v} has {lows} lower neighbors"));
            continue;
        }
        // block start: a lower neighbor whose predecessor is higher, or W
        let start = (0..k)
            .find(|&i| low[i] && !low[(i + k - 1) % k])
            .or_else(|| rot.iter().position(|&x| x == d.w));
        let Some(start) = start else {
            contour_fail = Some(format!("v{j} = {v}: lower neighbors wrap without W"));
            continue;
        };
        let block: Vec<VertexId> = (0..lows).map(|o| rot[(start + o) % k]).collect();
        if (0..lows).any(|o| !low[(start + o) % k]) {
            contour_fail = Some(format!(
                "v{j} = {v}: lower neighbors are not consecutive around it"
            ));
            continue;
        }
        if let Some(w) = block.windows(2).find(|w| next[w[0] as usize] != w[1]) {
            contour_fail = Some(format!(
                "v{j} = {v}: {} and {} are not consecutive on the contour",
                w[0], w[1]
            ));
            continue;
        }
        let (lp, rp) = (block[0], block[lows - 1]);
        next[lp as usize] = v;
        prev[v as usize] = lp;
        next[v as usize] = rp;
        prev[rp as usize] = v;
    }
    match contour_fail {
        None => r.pass("lower neighbors consecutive on the contour"),
        Some(m) => r.fail("lower neighbors consecutive on the contour", m),
    }
    match above_fail {
        None => r.pass("two higher neighbors below rank n-1"),
        Some(m) => r.fail("two higher neighbors below rank n-1", m),
    }
    r
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::completion::{add_ns_edge, find_boundary_arcs, four_complete};
    use crate::graph::fixtures::*;
    use crate::graph::PlanarGraph;
    use crate::triangles::{
        find_kl, find_kt, find_separating_triangles, modify_kl, modify_kt, open_outer_face,
    };

    pub(crate) fn completed(g: &PlanarGraph) -> CompletedGraph {
        let keep = find_separating_triangles(g);
        let h = open_outer_face(g, &keep, &[], &[]).unwrap().0;
        let cg = four_complete(&h, &find_boundary_arcs(&h).unwrap()).unwrap();
        add_ns_edge(&cg).unwrap()
    }

    pub(crate) fn g5_site() -> (CompletedGraph, SiteL) {
        let g = g5();
        let (h, site) = modify_kl(&g, &find_kl(&g)[0]).unwrap();
        let keep = [site.triangle()];
        let h = open_outer_face(&h, &keep, &[(site.a, site.c1), (site.b, site.c1)], &[])
            .unwrap()
            .0;
        let cg = four_complete(&h, &find_boundary_arcs(&h).unwrap()).unwrap();
        (add_ns_edge(&cg).unwrap(), site)
    }

    fn g6_completed() -> CompletedGraph {
        let g = g6();
        let (h, _) = modify_kt(&g, &find_kt(&g)[0]).unwrap();
        completed(&h)
    }

    #[test]
    fn plain_ordering_of_oct() {
        let cg = completed(&oct());
        let ord = canonical_order(&cg).unwrap();
        let n = cg.graph.vertex_count() as u32;
        assert_eq!(ord.rank_of(cg.dirs.w), 1);
        assert_eq!(ord.rank_of(cg.dirs.s), 2);
        assert_eq!(ord.rank_of(cg.dirs.n), n);
        assert_eq!(ord.rank_of(cg.dirs.e), n - 1);
        let rep = validate_ordering(&cg, &ord);
        assert!(rep.verdict(), "{rep}");
    }

    #[test]
    fn plain_ordering_of_g6() {
        let cg = g6_completed();
        assert_eq!(cg.graph.vertex_count(), 12);
        let ord = canonical_order(&cg).unwrap();
        assert!(validate_ordering(&cg, &ord).verdict());
    }

    #[test]
    fn missing_ns_edge() {
        let g = oct();
        let keep = find_separating_triangles(&g);
        let h = open_outer_face(&g, &keep, &[], &[]).unwrap().0;
        let cg = four_complete(&h, &find_boundary_arcs(&h).unwrap()).unwrap();
        assert_eq!(canonical_order(&cg), Err(OrderError::MissingNsEdge));
    }

    #[test]
    fn incremental_chords_match_recount() {
        for cg in [completed(&oct()), g6_completed(), g5_site().0] {
            let mut st = start(&cg).unwrap();
            while let Some(&v) = st.eligible.iter().next() {
                st.take(&cg, v);
                let fresh = st.recount_chords(&cg);
                for x in st.contour() {
                    assert_eq!(st.ch[x as usize], fresh[x as usize], "vertex {x}");
                }
            }
            assert!(st.is_complete());
        }
    }

    #[test]
    fn partial_labeling_pauses_on_frozen() {
        let (cg, site) = g5_site();
        let frozen = site_frozen_set(&site);
        let st = canon_label_partial(&cg, &frozen).unwrap();
        assert!(!st.is_complete());
        assert!(st.eligible.iter().all(|v| frozen.contains(v)));
        for v in [cg.dirs.n, cg.dirs.e] {
            assert!(st.st[v as usize]);
        }
        let empty = canon_label_partial(&cg, &BTreeSet::new()).unwrap();
        assert_eq!(empty.finish(&cg, None), canonical_order(&cg).unwrap());
        let bad: BTreeSet<VertexId> = [cg.dirs.w].into();
        assert_eq!(
            canon_label_partial(&cg, &bad).unwrap_err(),
            OrderError::FrozenDirection(cg.dirs.w)
        );
    }

    #[test]
    fn prioritized_ordering_of_g5() {
        let (cg, site) = g5_site();
        let (ord, cat) = prioritized_order(&cg, &site).unwrap();
        assert!(
            validate_ordering(&cg, &ord).verdict(),
            "{}",
            validate_ordering(&cg, &ord)
        );
        let seq = cat.sequence(&site).unwrap();
        let mut by_rank = seq.to_vec();
        by_rank.sort_by_key(|&v| core::cmp::Reverse(ord.rank_of(v)));
        assert_eq!(by_rank, seq.to_vec());
        assert_ne!(by_rank[0], site.u.unwrap());
    }

    #[test]
    fn category_a_on_g5() {
        let (cg, site) = g5_site();
        let st = canon_label_partial(&cg, &site_frozen_set(&site)).unwrap();
        let pl = Category::A.sequence(&site).unwrap();
        assert_eq!(pl, [3, 6, 5, 1]);
        if let Some(ord) = try_category_for_site(&cg, &st, &site, &pl).unwrap() {
            assert!(validate_ordering(&cg, &ord).verdict());
        }
        assert_eq!(
            try_category_for_site(&cg, &st, &site, &[3, 6, 5, 2]),
            Err(OrderError::BadPriorityList)
        );
    }

    #[test]
    fn complete_state_is_returned_unchanged() {
        let cg = completed(&oct());
        let st = canon_label_partial(&cg, &BTreeSet::new()).unwrap();
        let done = try_category(&cg, &st, &[1, 2, 3, 4]).unwrap();
        assert_eq!(done, canonical_order(&cg).unwrap());
    }

    #[test]
    fn t_graph_has_no_l_priority() {
        let site = SiteL {
            a: 1,
            b: 4,
            c: 2,
            d: 5,
            c1: 3,
            u: None,
        };
        let cg = g6_completed();
        assert_eq!(
            prioritized_order(&cg, &site),
            Err(OrderError::SiteNotModified)
        );
    }

    #[test]
    fn swapped_first_two_fail() {
        let cg = completed(&oct());
        let ord = canonical_order(&cg).unwrap();
        let mut order = ord.order.clone();
        order.swap(0, 1);
        let bad = CanonicalOrdering::from_order(order, cg.graph.id_bound());
        let rep = validate_ordering(&cg, &bad);
        assert_eq!(rep.first_failure().unwrap().name, "v1 = W, v2 = S, vn = N");
    }

    #[test]
    fn shuffled_interior_names_a_prefix() {
        let cg = completed(&oct());
        let ord = canonical_order(&cg).unwrap();
        let n = ord.len();
        let mut order = ord.order.clone();
        // keep W, S, E, N in place and reverse the interior
        order[2..n - 2].reverse();
        let bad = CanonicalOrdering::from_order(order, cg.graph.id_bound());
        let rep = validate_ordering(&cg, &bad);
        assert!(!rep.verdict());
        assert!(rep.first_failure().unwrap().detail.starts_with('v'));
    }
}
