//! Graph isomorphism for typed graphs.
//!
//! Used to compare instances "up to isomorphism". Graphs here are small, so
//! a refinement-ordered backtracking search is plenty.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use crate::graph::{EdgeId, GraphMap, TypedGraph, VertexClass, VertexId};

/// Per-vertex invariant: class, kind and in/out degree split by the class
/// of the other endpoint.
type Profile = (VertexClass, [usize; 3], [usize; 3]);

struct Dense<'a> {
    ids: Vec<&'a VertexId>,
    profiles: Vec<Profile>,
    neighbours: Vec<Vec<usize>>,
    // (src, tgt) -> edges, sorted by id.
    between: HashMap<(usize, usize), Vec<&'a EdgeId>>,
}

impl<'a> Dense<'a> {
    fn new(g: &'a TypedGraph) -> Self {
        let ids: Vec<&VertexId> = g.vertex_ids().collect();
        let index: HashMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut profiles: Vec<Profile> =
            ids.iter().map(|v| (g.vertex(v).expect("present").clone(), [0; 3], [0; 3])).collect();
        let mut neighbours = vec![Vec::new(); ids.len()];
        let mut between: HashMap<(usize, usize), Vec<&EdgeId>> = HashMap::new();
        for (id, e) in g.edges() {
            let (s, t) = (index[&e.src], index[&e.tgt]);
            let st = profiles[s].0.tag() as usize;
            let tt = profiles[t].0.tag() as usize;
            profiles[s].2[tt] += 1;
            profiles[t].1[st] += 1;
            neighbours[s].push(t);
            neighbours[t].push(s);
            between.entry((s, t)).or_default().push(id);
        }
        for n in &mut neighbours {
            n.sort_unstable();
            n.dedup();
        }
        Self { ids, profiles, neighbours, between }
    }

    fn count(&self, s: usize, t: usize) -> usize {
        self.between.get(&(s, t)).map_or(0, Vec::len)
    }
}

/// A hash that agrees on isomorphic graphs. Cheap prefilter for
/// deduplication; equal hashes do not imply isomorphism.
pub fn invariant_hash(g: &TypedGraph) -> u64 {
    let d = Dense::new(g);
    let mut profiles = d.profiles.clone();
    profiles.sort();
    let mut h = DefaultHasher::new();
    profiles.hash(&mut h);
    g.edge_count().hash(&mut h);
    h.finish()
}

/// A class- and kind-preserving isomorphism `g -> h`, if one exists. The
/// search is deterministic, so the same witness is returned every time.
pub fn find_isomorphism(g: &TypedGraph, h: &TypedGraph) -> Option<GraphMap> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let dg = Dense::new(g);
    let dh = Dense::new(h);
    let mut pg = dg.profiles.clone();
    let mut ph = dh.profiles.clone();
    pg.sort();
    ph.sort();
    if pg != ph {
        return None;
    }

    // Candidate lists per profile.
    let mut by_profile: BTreeMap<&Profile, Vec<usize>> = BTreeMap::new();
    for (i, p) in dh.profiles.iter().enumerate() {
        by_profile.entry(p).or_default().push(i);
    }

    // Visit order: connected expansion starting from the rarest profiles.
    let n = dg.ids.len();
    let rarity = |i: usize| by_profile[&dg.profiles[i]].len();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n).filter(|&i| !placed[i]).min_by_key(|&i| (rarity(i), i)).expect("unplaced");
        placed[start] = true;
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            order.push(v);
            let mut next: Vec<usize> = dg.neighbours[v].iter().copied().filter(|&u| !placed[u]).collect();
            next.sort_by_key(|&u| std::cmp::Reverse((rarity(u), u)));
            for u in next {
                if !placed[u] {
                    placed[u] = true;
                    frontier.push(u);
                }
            }
        }
    }

    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    if !search(&dg, &dh, &by_profile, &order, 0, &mut assign, &mut used) {
        return None;
    }

    let mut map = GraphMap::default();
    for (i, a) in assign.iter().enumerate() {
        map.vertices.insert(dg.ids[i].clone(), dh.ids[a.expect("complete")].clone());
    }
    for (&(s, t), edges) in &dg.between {
        let images = &dh.between[&(assign[s].unwrap(), assign[t].unwrap())];
        for (e, f) in edges.iter().zip(images) {
            map.edges.insert((*e).clone(), (*f).clone());
        }
    }
    Some(map)
}

fn search(
    dg: &Dense<'_>,
    dh: &Dense<'_>,
    by_profile: &BTreeMap<&Profile, Vec<usize>>,
    order: &[usize],
    depth: usize,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for &c in &by_profile[&dg.profiles[v]] {
        if used[c] {
            continue;
        }
        if dg.count(v, v) != dh.count(c, c) {
            continue;
        }
        let consistent = dg.neighbours[v].iter().all(|&u| match assign[u] {
            Some(cu) => dg.count(v, u) == dh.count(c, cu) && dg.count(u, v) == dh.count(cu, c),
            None => true,
        });
        if !consistent {
            continue;
        }
        assign[v] = Some(c);
        used[c] = true;
        if search(dg, dh, by_profile, order, depth + 1, assign, used) {
            return true;
        }
        assign[v] = None;
        used[c] = false;
    }
    false
}

pub fn isomorphic(g: &TypedGraph, h: &TypedGraph) -> bool {
    find_isomorphism(g, h).is_some()
}
