//! Low-level diagram surgery.
//!
//! Every move bottoms out here: new crossings are declared against points on
//! existing arcs (which get subdivided) or against freshly allocated arcs,
//! and the builder reassembles component cycles, fixes up slot references,
//! and revalidates.  Slot arrays follow one normalization: with the under
//! strand entering at slot 0 and "pointing north", the incoming over arc sits
//! at slot 3 for a positive crossing and slot 1 for a negative one.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram, Framing, Role};
use crate::error::{Error, Result};

/// A point on an existing arc; `rank` orders the points inserted on the same
/// arc along its orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcPoint {
    pub arc: ArcId,
    pub rank: i64,
}

/// One strand of a new crossing: either it runs through a point of an
/// existing arc, or it is new material with explicit in/out arcs.
#[derive(Debug, Clone, Copy)]
pub enum StrandEnd {
    At(ArcPoint),
    New { in_arc: ArcId, out_arc: ArcId },
}

#[derive(Debug, Clone)]
pub struct NewCrossing {
    pub id: CrossingId,
    pub under: StrandEnd,
    pub over: StrandEnd,
    /// 1 or 3: the slot the incoming over-arc occupies (3 = positive sign).
    pub over_in_slot: u8,
}

pub struct Builder {
    comps: BTreeMap<ComponentId, Component>,
    crossings: BTreeMap<CrossingId, Crossing>,
    meta: BTreeMap<String, String>,
    head_ref: BTreeMap<ArcId, (CrossingId, u8)>,
    next_arc: u32,
    next_comp: u32,
    next_cross: u32,
    points: BTreeMap<ArcId, Vec<(i64, usize)>>, // (rank, new-crossing index)
    new_crossings: Vec<NewCrossing>,
    /// piece provenance: new sub-arc -> the original arc it subdivides
    provenance: BTreeMap<ArcId, ArcId>,
}

impl Builder {
    pub fn from(d: &Diagram) -> Self {
        let topo = d.topology();
        let mut head_ref = BTreeMap::new();
        for c in d.components() {
            for &a in &c.arcs {
                if let Some(h) = topo.head(a) {
                    head_ref.insert(a, h);
                }
            }
        }
        Builder {
            comps: d.components().cloned().map(|c| (c.id, c)).collect(),
            crossings: d.crossings().cloned().map(|x| (x.id, x)).collect(),
            meta: d.metadata().clone(),
            head_ref,
            next_arc: d.fresh_arc_id(),
            next_comp: d.fresh_component_id(),
            next_cross: d.fresh_crossing_id(),
            points: BTreeMap::new(),
            new_crossings: Vec::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn fresh_arc(&mut self) -> ArcId {
        let a = ArcId(self.next_arc);
        self.next_arc += 1;
        a
    }

    pub fn fresh_component(&mut self) -> ComponentId {
        let c = ComponentId(self.next_comp);
        self.next_comp += 1;
        c
    }

    pub fn fresh_crossing(&mut self) -> CrossingId {
        let c = CrossingId(self.next_cross);
        self.next_cross += 1;
        c
    }

    /// Declare a new crossing.  Points on existing arcs are collected and
    /// materialized at `finish` time.
    pub fn add_crossing(&mut self, x: NewCrossing) {
        let idx = self.new_crossings.len();
        for end in [&x.under, &x.over] {
            if let StrandEnd::At(p) = end {
                self.points.entry(p.arc).or_default().push((p.rank, idx));
            }
        }
        self.new_crossings.push(x);
    }

    /// Register a brand-new closed component; `arcs` must be fresh ids wired
    /// into the declared crossings.
    pub fn add_component(
        &mut self,
        id: ComponentId,
        role: Role,
        framing: Framing,
        arcs: Vec<ArcId>,
    ) {
        self.comps.insert(id, Component::new(id, role, framing, arcs));
    }

    pub fn set_framing(&mut self, comp: ComponentId, framing: Framing) {
        if let Some(c) = self.comps.get_mut(&comp) {
            c.framing = framing;
        }
    }

    /// Consumes the builder: subdivides arcs at the declared points, fills in
    /// all slot arrays, splices cycles, and validates the result.
    pub fn finish(mut self) -> Result<(Diagram, BTreeMap<ArcId, ArcId>)> {
        // Subdivide: per arc, sorted by rank, pieces[i] is before point i.
        let mut pieces: BTreeMap<ArcId, Vec<ArcId>> = BTreeMap::new();
        let point_arcs: Vec<ArcId> = self.points.keys().copied().collect();
        for arc in point_arcs {
            let mut pts = self.points.remove(&arc).unwrap();
            pts.sort();
            for w in pts.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::invariant(format!(
                        "two insertion points share rank {} on arc {arc}",
                        w[0].0
                    )));
                }
            }
            // An arc that already meets a crossing splits into k+1 pieces,
            // the last inheriting the old head reference.  A crossingless
            // loop splits into exactly k pieces that close up cyclically.
            let has_head = self.head_ref.contains_key(&arc);
            let n_new = if has_head { pts.len() } else { pts.len() - 1 };
            let mut chain = vec![arc];
            for _ in 0..n_new {
                let n = ArcId(self.next_arc);
                self.next_arc += 1;
                self.provenance.insert(n, arc);
                chain.push(n);
            }
            if has_head {
                let (xid, slot) = self.head_ref[&arc];
                if let Some(x) = self.crossings.get_mut(&xid) {
                    x.slots[slot as usize] = *chain.last().unwrap();
                }
            }
            // Record which piece pair each point resolves to.
            for (i, &(_, idx)) in pts.iter().enumerate() {
                let before = chain[i];
                let after = chain[(i + 1) % chain.len()];
                let nx = &mut self.new_crossings[idx];
                for end in [&mut nx.under, &mut nx.over] {
                    if let StrandEnd::At(p) = end {
                        if p.arc == arc {
                            *end = StrandEnd::New { in_arc: before, out_arc: after };
                        }
                    }
                }
            }
            pieces.insert(arc, chain);
        }

        // Splice subdivided chains into their component cycles.
        for c in self.comps.values_mut() {
            if c.arcs.iter().any(|a| pieces.contains_key(a)) {
                let mut out = Vec::new();
                for &a in &c.arcs {
                    match pieces.get(&a) {
                        Some(chain) => out.extend(chain.iter().copied()),
                        None => out.push(a),
                    }
                }
                c.arcs = out;
            }
        }

        // Materialize new crossings.
        for nx in &self.new_crossings {
            let (u_in, u_out) = match nx.under {
                StrandEnd::New { in_arc, out_arc } => (in_arc, out_arc),
                StrandEnd::At(p) => {
                    return Err(Error::invariant(format!(
                        "unresolved under point on arc {}",
                        p.arc
                    )))
                }
            };
            let (o_in, o_out) = match nx.over {
                StrandEnd::New { in_arc, out_arc } => (in_arc, out_arc),
                StrandEnd::At(p) => {
                    return Err(Error::invariant(format!(
                        "unresolved over point on arc {}",
                        p.arc
                    )))
                }
            };
            let slots = match nx.over_in_slot {
                1 => [u_in, o_in, u_out, o_out],
                3 => [u_in, o_out, u_out, o_in],
                s => return Err(Error::invariant(format!("over_in_slot {s} not 1 or 3"))),
            };
            self.crossings.insert(nx.id, Crossing::new(nx.id, slots));
        }

        let d = Diagram::new(
            self.comps.into_values().collect(),
            self.crossings.into_values().collect(),
            self.meta,
        )?;
        Ok((d, self.provenance))
    }
}

/// Replace a component's cycle wholesale (used by splices).  The caller is
/// responsible for arc bookkeeping; validation happens on rebuild.
pub fn rebuild_with_cycles(
    d: &Diagram,
    cycles: BTreeMap<ComponentId, Vec<ArcId>>,
    drop: &[ComponentId],
) -> Result<Diagram> {
    let comps: Vec<Component> = d
        .components()
        .filter(|c| !drop.contains(&c.id))
        .map(|c| {
            let mut c2 = c.clone();
            if let Some(cyc) = cycles.get(&c.id) {
                c2.arcs = cyc.clone();
            }
            c2
        })
        .collect();
    Diagram::new(comps, d.crossings().cloned().collect(), d.metadata().clone())
}

/// Delete components, dissolving every crossing they pass through; the other
/// strand's arcs merge across each dissolved crossing.  Returns the new
/// diagram and the arc-merge map (absorbed arc -> surviving arc).
pub fn delete_components(
    d: &Diagram,
    gone: &[ComponentId],
) -> Result<(Diagram, BTreeMap<ArcId, ArcId>)> {
    let topo = d.topology();
    let mut parent: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for c in d.components() {
        for &a in &c.arcs {
            parent.insert(a, a);
        }
    }
    fn find(parent: &mut BTreeMap<ArcId, ArcId>, x: ArcId) -> ArcId {
        let p = parent[&x];
        if p == x {
            x
        } else {
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
    }

    let mut kept_crossings = Vec::new();
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        let under_gone = gone.contains(&under);
        let over_gone = gone.contains(&over);
        if !under_gone && !over_gone {
            kept_crossings.push(x.clone());
            continue;
        }
        if !under_gone {
            // surviving under strand passes straight through: merge out into in
            let (u_in, u_out) = (x.slots[0], x.slots[2]);
            let (ri, ro) = (find(&mut parent, u_in), find(&mut parent, u_out));
            if ri != ro {
                parent.insert(ro, ri);
            }
        }
        if !over_gone {
            let oi_slot = topo.over_in_slot(x.id).unwrap() as usize;
            let (o_in, o_out) = (x.slots[oi_slot], x.slots[(oi_slot + 2) % 4]);
            let (ri, ro) = (find(&mut parent, o_in), find(&mut parent, o_out));
            if ri != ro {
                parent.insert(ro, ri);
            }
        }
    }

    // The union-find parent pointer always points backwards along the strand,
    // so each class's representative is the earliest surviving arc.
    let mut merge_map = BTreeMap::new();
    let arcs: Vec<ArcId> = parent.keys().copied().collect();
    for a in arcs {
        let r = find(&mut parent, a);
        if r != a {
            merge_map.insert(a, r);
        }
    }

    let mut comps = Vec::new();
    for c in d.components() {
        if gone.contains(&c.id) {
            continue;
        }
        let mut cycle: Vec<ArcId> = Vec::new();
        for &a in &c.arcs {
            let r = merge_map.get(&a).copied().unwrap_or(a);
            if !cycle.contains(&r) {
                cycle.push(r);
            }
        }
        let mut c2 = c.clone();
        c2.arcs = cycle;
        comps.push(c2);
    }
    let mut kept2 = Vec::new();
    for mut x in kept_crossings {
        for s in &mut x.slots {
            if let Some(&r) = merge_map.get(s) {
                *s = r;
            }
        }
        kept2.push(x);
    }
    let d2 = Diagram::new(comps, kept2, d.metadata().clone())?;
    Ok((d2, merge_map))
}

/// Exchange which strand is over at a crossing: the slot array rotates so the
/// old incoming over-arc becomes the incoming under-arc.  The sign negates.
pub fn flip_crossing(d: &Diagram, xid: CrossingId) -> Result<Diagram> {
    let topo = d.topology();
    let o = topo
        .over_in_slot(xid)
        .ok_or_else(|| Error::precondition(format!("unknown crossing {xid}")))? as usize;
    let comps: Vec<Component> = d.components().cloned().collect();
    let crossings: Vec<Crossing> = d
        .crossings()
        .map(|x| {
            if x.id == xid {
                let s = x.slots;
                Crossing::new(x.id, [s[o], s[(o + 1) % 4], s[(o + 2) % 4], s[(o + 3) % 4]])
            } else {
                x.clone()
            }
        })
        .collect();
    Diagram::new(comps, crossings, d.metadata().clone())
}

/// Reverse a component's orientation.  Its cycle reverses, and at every
/// crossing where it is the under strand the slot array rotates by two so the
/// old under-out becomes the new under-in.
pub fn reverse_component(d: &Diagram, comp: ComponentId) -> Result<Diagram> {
    if d.component(comp).is_none() {
        return Err(Error::precondition(format!("unknown component {comp}")));
    }
    let comps: Vec<Component> = d
        .components()
        .cloned()
        .map(|mut c| {
            if c.id == comp {
                c.arcs.reverse();
            }
            c
        })
        .collect();
    let crossings: Vec<Crossing> = d
        .crossings()
        .map(|x| {
            let (under, _) = d.strands(x);
            if under == comp {
                let s = x.slots;
                Crossing::new(x.id, [s[2], s[3], s[0], s[1]])
            } else {
                x.clone()
            }
        })
        .collect();
    Diagram::new(comps, crossings, d.metadata().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::homology::linking_number;

    #[test]
    fn flip_negates_sign_and_preserves_planarity() {
        let d = catalog::trefoil();
        let xid = d.crossings().next().unwrap().id;
        let d2 = flip_crossing(&d, xid).unwrap();
        assert_eq!(d2.sign(xid).unwrap(), -d.sign(xid).unwrap());
        assert_eq!(d2.genus(), 0);
        // flipping twice restores
        let d3 = flip_crossing(&d2, xid).unwrap();
        assert_eq!(d3.serialize(), d.serialize());
    }

    #[test]
    fn reverse_preserves_structure() {
        let d = catalog::hopf_positive();
        let r = reverse_component(&d, ComponentId(1)).unwrap();
        assert_eq!(r.genus(), 0);
        // reversing one component of the Hopf link negates linking number
        assert_eq!(
            linking_number(&r, ComponentId(1), ComponentId(2)).unwrap(),
            -linking_number(&d, ComponentId(1), ComponentId(2)).unwrap()
        );
        // reversing twice restores
        let rr = reverse_component(&r, ComponentId(1)).unwrap();
        assert_eq!(rr.serialize(), d.serialize());
    }

    #[test]
    fn delete_component_merges_arcs() {
        let d = catalog::hopf_positive();
        let (d2, _) = delete_components(&d, &[ComponentId(2)]).unwrap();
        assert_eq!(d2.components().count(), 1);
        assert_eq!(d2.crossings().count(), 0);
        let c = d2.components().next().unwrap();
        assert_eq!(c.arcs.len(), 1, "two arcs merge into one closed loop");
        assert_eq!(d2.genus(), 0);
    }

    #[test]
    fn delete_over_strand_of_trefoil_plus_circle() {
        // deleting the trefoil from trefoil+distant circle keeps the circle
        let text = "\
component 1 role=pattern framing=none arcs=1,2,3,4,5,6
component 2 role=surgery framing=0 arcs=7
crossing 1 slots=1,5,2,4 under_in=1
crossing 2 slots=3,1,4,6 under_in=3
crossing 3 slots=5,3,6,2 under_in=5
";
        let d = Diagram::parse(text).unwrap();
        let (d2, _) = delete_components(&d, &[ComponentId(1)]).unwrap();
        assert_eq!(d2.components().count(), 1);
        assert_eq!(d2.crossings().count(), 0);
    }
}
