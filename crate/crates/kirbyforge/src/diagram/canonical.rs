//! Canonical arc relabeling.

use std::collections::BTreeMap;

use super::{ArcId, Crossing, Diagram};

/// Renumber arcs 1,2,... in traversal order, walking components in ascending
/// id order and rotating each cycle to start at its smallest original arc id.
/// Crossing and component ids are preserved, so two inputs that differ only in
/// arc labels (but not in cycle starting points) canonicalize identically,
/// while a rotated cycle listing canonicalizes to the rotation anchored at its
/// own minimum — stable, diffable output either way.
pub fn canonicalize(d: &Diagram) -> Diagram {
    let mut rename: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let mut next = 1u32;
    let mut comps = Vec::new();
    for c in d.components() {
        let mut c2 = c.clone();
        if !c.arcs.is_empty() {
            let min_pos = c
                .arcs
                .iter()
                .enumerate()
                .min_by_key(|(_, a)| a.0)
                .map(|(i, _)| i)
                .unwrap();
            let rotated: Vec<ArcId> = c
                .arcs
                .iter()
                .cycle()
                .skip(min_pos)
                .take(c.arcs.len())
                .copied()
                .collect();
            let mut new_arcs = Vec::with_capacity(rotated.len());
            for a in rotated {
                let id = ArcId(next);
                next += 1;
                rename.insert(a, id);
                new_arcs.push(id);
            }
            c2.arcs = new_arcs;
        }
        comps.push(c2);
    }
    let crossings: Vec<Crossing> = d
        .crossings()
        .map(|x| Crossing::new(x.id, [rename[&x.slots[0]], rename[&x.slots[1]], rename[&x.slots[2]], rename[&x.slots[3]]]))
        .collect();
    Diagram::new(comps, crossings, d.metadata().clone())
        .expect("canonical relabeling preserves validity")
}
