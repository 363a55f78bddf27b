//! Planarity testing and embedding by fragment insertion (Demoucron, Malgrange
//! and Pertuiset). Quadratic, deterministic, and only used for inputs that
//! arrive without a rotation system.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{GraphError, VertexId};

/// Rotation system for a connected graph given by sorted adjacency lists.
/// With `outer` given, the block holding that cycle is embedded with the cycle
/// kept as a face when possible.
pub(crate) fn planar_rotation(
    adj: &[Vec<VertexId>],
    present: &[bool],
    outer: Option<&[VertexId]>,
) -> Result<Vec<Vec<VertexId>>, GraphError> {
    if outer.is_some() {
        if let Ok(rot) = rotation_with(adj, present, outer) {
            return Ok(rot);
        }
    }
    rotation_with(adj, present, None)
}

fn rotation_with(
    adj: &[Vec<VertexId>],
    present: &[bool],
    outer: Option<&[VertexId]>,
) -> Result<Vec<Vec<VertexId>>, GraphError> {
    let mut rot: Vec<Vec<VertexId>> = vec![Vec::new(); adj.len()];
    for block in blocks(adj, present) {
        let local = if block.len() == 1 {
            let (u, v) = block[0];
            let mut m = BTreeMap::new();
            m.insert(u, vec![v]);
            m.insert(v, vec![u]);
            m
        } else {
            let keep = outer.filter(|c| cycle_in_block(c, &block));
            embed_block(&block, keep)?
        };
        for (v, list) in local {
            rot[v as usize].extend(list);
        }
    }
    Ok(rot)
}

/// Biconnected components as edge lists, in discovery order.
fn blocks(adj: &[Vec<VertexId>], present: &[bool]) -> Vec<Vec<(VertexId, VertexId)>> {
    let n = adj.len();
    let mut out = Vec::new();
    let Some(root) = present.iter().position(|&p| p) else {
        return out;
    };
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut time = 0;
    let mut edge_stack: Vec<(VertexId, VertexId)> = Vec::new();
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    disc[root] = 0;
    while let Some(top) = stack.last_mut() {
        let (v, parent) = (top.0, top.1);
        if top.2 < adj[v].len() {
            let w = adj[v][top.2] as usize;
            top.2 += 1;
            if disc[w] == u32::MAX {
                time += 1;
                disc[w] = time;
                low[w] = time;
                edge_stack.push((v as VertexId, w as VertexId));
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                low[v] = low[v].min(disc[w]);
                edge_stack.push((v as VertexId, w as VertexId));
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        block.push((e.0.min(e.1), e.0.max(e.1)));
                        if e == (p as VertexId, v as VertexId) {
                            break;
                        }
                    }
                    block.sort_unstable();
                    out.push(block);
                }
            }
        }
    }
    out
}

struct Fragment {
    attachments: Vec<VertexId>,
    // for single-edge fragments the edge endpoints, otherwise the inner vertices
    inner: Vec<VertexId>,
}

fn cycle_in_block(cycle: &[VertexId], block: &[(VertexId, VertexId)]) -> bool {
    let k = cycle.len();
    let distinct: BTreeSet<VertexId> = cycle.iter().copied().collect();
    k >= 3
        && distinct.len() == k
        && (0..k).all(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            block.binary_search(&(a.min(b), a.max(b))).is_ok()
        })
}

fn embed_block(
    edges: &[(VertexId, VertexId)],
    keep: Option<&[VertexId]>,
) -> Result<BTreeMap<VertexId, Vec<VertexId>>, GraphError> {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let v_count = adj.len();
    if edges.len() > 3 * v_count - 6 {
        return Err(GraphError::NonPlanar);
    }

    let mut embedded_v: BTreeSet<VertexId> = BTreeSet::new();
    let mut embedded_e: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let cycle = keep.map_or_else(|| initial_cycle(&adj), <[VertexId]>::to_vec);
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded_v.insert(a);
        embedded_e.insert((a.min(b), a.max(b)));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces: Vec<Vec<VertexId>> = vec![cycle, rev];
    // the kept cycle stays empty on one side
    let mut locked = vec![keep.is_some(), false];

    while embedded_e.len() < edges.len() {
        let fragments = find_fragments(&adj, &embedded_v, &embedded_e);
        let face_sets: Vec<BTreeSet<VertexId>> =
            faces.iter().map(|f| f.iter().copied().collect()).collect();
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = face_sets
                .iter()
                .enumerate()
                .filter(|&(i, s)| !locked[i] && frag.attachments.iter().all(|a| s.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return Err(GraphError::NonPlanar),
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_i) = choice.expect("at least one fragment remains");
        let frag = &fragments[fi];
        let path = fragment_path(&adj, frag, &embedded_v);
        for w in path.windows(2) {
            embedded_e.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            embedded_v.insert(v);
        }
        let face = faces.swap_remove(face_i);
        locked.swap_remove(face_i);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
        locked.extend([false, false]);
    }
    rotation_from_faces(&faces, &adj)
}

fn initial_cycle(adj: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<VertexId> {
    let (&s, nbrs) = adj.iter().next().expect("nonempty block");
    let t = nbrs[0];
    // shortest path t -> s avoiding the edge (s,t)
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(t);
    parent.insert(t, t);
    while let Some(x) = queue.pop_front() {
        if x == s {
            break;
        }
        for &y in &adj[&x] {
            if (x == t && y == s) || parent.contains_key(&y) {
                continue;
            }
            parent.insert(y, x);
            queue.push_back(y);
        }
    }
    let mut path = vec![s];
    let mut cur = s;
    while cur != t {
        cur = parent[&cur];
        path.push(cur);
    }
    // path runs s .. t; closing edge t-s completes the cycle
    path
}

fn find_fragments(
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    emb_v: &BTreeSet<VertexId>,
    emb_e: &BTreeSet<(VertexId, VertexId)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (&u, nbrs) in adj {
        if !emb_v.contains(&u) {
            continue;
        }
        for &v in nbrs {
            if u < v && emb_v.contains(&v) && !emb_e.contains(&(u, v)) {
                out.push(Fragment {
                    attachments: vec![u, v],
                    inner: vec![u, v],
                });
            }
        }
    }
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for &start in adj.keys() {
        if emb_v.contains(&start) || seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        let mut att = BTreeSet::new();
        seen.insert(start);
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &y in &adj[&x] {
                if emb_v.contains(&y) {
                    att.insert(y);
                } else if seen.insert(y) {
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(Fragment {
            attachments: att.into_iter().collect(),
            inner: comp,
        });
    }
    out
}

fn fragment_path(
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    frag: &Fragment,
    emb_v: &BTreeSet<VertexId>,
) -> Vec<VertexId> {
    if frag.inner.len() == 2 && emb_v.contains(&frag.inner[0]) {
        return frag.inner.clone();
    }
    let x = frag.attachments[0];
    let y = frag.attachments[1];
    let inside: BTreeSet<VertexId> = frag.inner.iter().copied().collect();
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = alloc::collections::VecDeque::new();
    for &w in &adj[&x] {
        if inside.contains(&w) && !parent.contains_key(&w) {
            parent.insert(w, x);
            queue.push_back(w);
        }
    }
    let mut last = None;
    while let Some(w) = queue.pop_front() {
        if adj[&w].contains(&y) {
            last = Some(w);
            break;
        }
        for &z in &adj[&w] {
            if inside.contains(&z) && !parent.contains_key(&z) {
                parent.insert(z, w);
                queue.push_back(z);
            }
        }
    }
    let mut path = vec![y];
    let mut cur = last.expect("fragment connects its attachments");
    while cur != x {
        path.push(cur);
        cur = parent[&cur];
    }
    path.push(x);
    path.reverse();
    path
}

/// Split a face walk along a path whose endpoints lie on it.
fn split_face(face: &[VertexId], path: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let x = path[0];
    let y = *path.last().unwrap();
    let k = face.len();
    let ix = face.iter().position(|&v| v == x).unwrap();
    let iy = face.iter().position(|&v| v == y).unwrap();
    let interior = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut i = ix;
    loop {
        f1.push(face[i]);
        if i == iy {
            break;
        }
        i = (i + 1) % k;
    }
    f1.extend(interior.iter().rev());
    let mut f2 = Vec::new();
    let mut i = iy;
    loop {
        f2.push(face[i]);
        if i == ix {
            break;
        }
        i = (i + 1) % k;
    }
    f2.extend(interior.iter());
    (f1, f2)
}

fn rotation_from_faces(
    faces: &[Vec<VertexId>],
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
) -> Result<BTreeMap<VertexId, Vec<VertexId>>, GraphError> {
    // For consecutive darts u->v->w of a face, w immediately precedes u around v.
    let mut succ: BTreeMap<(VertexId, VertexId), VertexId> = BTreeMap::new();
    for f in faces {
        let k = f.len();
        for i in 0..k {
            let u = f[i];
            let v = f[(i + 1) % k];
            let w = f[(i + 2) % k];
            succ.insert((v, w), u);
        }
    }
    let mut rot = BTreeMap::new();
    for (&v, nbrs) in adj {
        let start = nbrs[0];
        let mut list = vec![start];
        let mut cur = start;
        loop {
            let nxt = *succ.get(&(v, cur)).ok_or(GraphError::NonPlanar)?;
            if nxt == start {
                break;
            }
            list.push(nxt);
            cur = nxt;
            if list.len() > nbrs.len() {
                return Err(GraphError::NonPlanar);
            }
        }
        if list.len() != nbrs.len() {
            return Err(GraphError::NonPlanar);
        }
        rot.insert(v, list);
    }
    Ok(rot)
}
