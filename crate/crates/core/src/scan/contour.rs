//! Zero-level marching squares.
//!
//! A corner is "inside" when `f < 0`; zero counts as outside. A vertex is
//! placed on every edge whose endpoints are classified differently, at the
//! linear zero of `f` along it, so each such edge carries exactly one vertex
//! shared by the segments of its two cells. Cells with a non-finite corner
//! emit nothing.

use std::collections::BTreeMap;

use super::grid::Axis;

/// Polyline in axis coordinates `(axis1, axis2)`.
pub type Polyline = Vec<[f64; 2]>;

/// Edge identity: `(vertical, i, j)`. A horizontal edge joins `(i, j)` and
/// `(i + 1, j)`; a vertical one joins `(i, j)` and `(i, j + 1)`.
type EdgeKey = (bool, usize, usize);

fn inside(f: f64) -> bool {
    f < 0.0
}

/// Zero contours of `f`, stored row-major with `axis1` as the slow index.
pub fn zero_contours(f: &[f64], axis1: &Axis, axis2: &Axis) -> Vec<Polyline> {
    let (n1, n2) = (axis1.steps, axis2.steps);
    let at = |i: usize, j: usize| f[i * n2 + j];
    let mut vertices: BTreeMap<EdgeKey, [f64; 2]> = BTreeMap::new();
    let mut links: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();

    let mut crossing = |key: EdgeKey| -> Option<EdgeKey> {
        let (vertical, i, j) = key;
        let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
        let (fa, fb) = (at(i, j), at(i2, j2));
        if inside(fa) == inside(fb) {
            return None;
        }
        vertices.entry(key).or_insert_with(|| {
            let s = fa / (fa - fb);
            let a1 = axis1.value(i) + s * (axis1.value(i2) - axis1.value(i));
            let a2 = axis2.value(j) + s * (axis2.value(j2) - axis2.value(j));
            [a1, a2]
        });
        Some(key)
    };

    for i in 0..n1.saturating_sub(1) {
        for j in 0..n2.saturating_sub(1) {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if corners.iter().any(|v| !v.is_finite()) {
                continue;
            }
            // Edges in cyclic order: a-b, b-c, c-d, d-a.
            let edges = [
                (false, i, j),
                (true, i + 1, j),
                (false, i, j + 1),
                (true, i, j),
            ];
            let hits: Vec<EdgeKey> = edges.iter().filter_map(|&e| crossing(e)).collect();
            let pairs: Vec<(EdgeKey, EdgeKey)> = match hits.len() {
                2 => vec![(hits[0], hits[1])],
                4 => {
                    let center = 0.25 * corners.iter().sum::<f64>();
                    if inside(center) == inside(corners[0]) {
                        // a and c connect through the center; cut off b and d.
                        vec![(hits[0], hits[1]), (hits[2], hits[3])]
                    } else {
                        vec![(hits[3], hits[0]), (hits[1], hits[2])]
                    }
                }
                _ => Vec::new(),
            };
            for (p, q) in pairs {
                links.entry(p).or_default().push(q);
                links.entry(q).or_default().push(p);
            }
        }
    }
    chain(&vertices, links)
}

/// Joins segments into maximal polylines: open chains first, starting from
/// their smallest end, then closed loops, which repeat their first vertex.
fn chain(
    vertices: &BTreeMap<EdgeKey, [f64; 2]>,
    mut links: BTreeMap<EdgeKey, Vec<EdgeKey>>,
) -> Vec<Polyline> {
    let mut out = Vec::new();
    let starts: Vec<EdgeKey> = links
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .chain(links.keys().copied())
        .collect();
    for start in starts {
        if links.get(&start).is_none_or(|v| v.is_empty()) {
            continue;
        }
        let mut line = vec![vertices[&start]];
        let mut current = start;
        while let Some(next) = links.get_mut(&current).and_then(|v| v.pop()) {
            if let Some(back) = links.get_mut(&next) {
                if let Some(pos) = back.iter().position(|k| *k == current) {
                    back.remove(pos);
                }
            }
            line.push(vertices[&next]);
            current = next;
        }
        out.push(line);
    }
    out
}
