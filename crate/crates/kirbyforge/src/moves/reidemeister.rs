//! The third Reidemeister move.  R1 and R2 live in `ops` (kinks and
//! detours); R3 slides the all-over strand of a triangle across the crossing
//! of the other two, which at the passage level is a swap of two adjacent
//! passages on each of those strands.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct Pass {
    pub crossing: CrossingId,
    pub under: bool,
}

pub(super) fn passage_list(d: &Diagram, comp: &Component) -> Vec<Pass> {
    d.topology()
        .passages_of(comp)
        .into_iter()
        .map(|p| Pass { crossing: p.crossing, under: !p.is_over })
        .collect()
}

/// Rebuild the diagram with new passage lists for the given components; all
/// other components and crossings are untouched.  Crossing ids are preserved;
/// their slot arrays are refilled from the new arc allocation, keeping each
/// crossing's over-in side.
pub(super) fn rebuild_passages(
    d: &Diagram,
    lists: &BTreeMap<ComponentId, Vec<Pass>>,
) -> Result<Diagram> {
    let topo = d.topology();
    let mut next_arc = d.fresh_arc_id();
    let mut comps: Vec<Component> = Vec::new();
    let mut under_ends: BTreeMap<CrossingId, (ArcId, ArcId)> = BTreeMap::new();
    let mut over_ends: BTreeMap<CrossingId, (ArcId, ArcId)> = BTreeMap::new();
    for c in d.components() {
        let Some(list) = lists.get(&c.id) else {
            comps.push(c.clone());
            continue;
        };
        let k = list.len();
        let arcs: Vec<ArcId> = (0..k)
            .map(|_| {
                let a = ArcId(next_arc);
                next_arc += 1;
                a
            })
            .collect();
        for (j, p) in list.iter().enumerate() {
            let in_arc = arcs[j];
            let out_arc = arcs[(j + 1) % k];
            if p.under {
                under_ends.insert(p.crossing, (in_arc, out_arc));
            } else {
                over_ends.insert(p.crossing, (in_arc, out_arc));
            }
        }
        let mut c2 = c.clone();
        c2.arcs = arcs;
        comps.push(c2);
    }
    let mut crossings: Vec<Crossing> = Vec::new();
    for x in d.crossings() {
        let touched = under_ends.contains_key(&x.id) || over_ends.contains_key(&x.id);
        if !touched {
            crossings.push(x.clone());
            continue;
        }
        let over_in = topo.over_in_slot(x.id).unwrap();
        let (u_in, u_out) =
            under_ends.get(&x.id).copied().unwrap_or((x.slots[0], x.slots[2]));
        let (o_in, o_out) = over_ends.get(&x.id).copied().unwrap_or_else(|| {
            if over_in == 3 {
                (x.slots[3], x.slots[1])
            } else {
                (x.slots[1], x.slots[3])
            }
        });
        let slots = if over_in == 3 {
            [u_in, o_out, u_out, o_in]
        } else {
            [u_in, o_in, u_out, o_out]
        };
        crossings.push(Crossing::new(x.id, slots));
    }
    Diagram::new(comps, crossings, d.metadata().clone())
}

/// Apply an R3 move at the triangle bounded by the three given crossings.
pub fn r3(d: &Diagram, site: [CrossingId; 3]) -> Result<Diagram> {
    for &x in &site {
        if d.crossing(x).is_none() {
            return Err(Error::precondition(format!("unknown crossing {x}")));
        }
    }
    let topo = d.topology();
    let faces = d.faces();
    // locate a triangle face whose dart ends are exactly the site crossings
    let mut tri: Option<Vec<(ArcId, bool)>> = None;
    for cyc in &faces.faces {
        if cyc.len() != 3 {
            continue;
        }
        let mut ends: Vec<CrossingId> = cyc
            .iter()
            .map(|&(a, fwd)| if fwd { topo.head(a).unwrap().0 } else { topo.tail(a).unwrap().0 })
            .collect();
        ends.sort();
        let mut want = site.to_vec();
        want.sort();
        if ends == want {
            tri = Some(cyc.clone());
            break;
        }
    }
    let Some(tri) = tri else {
        return Err(Error::precondition(
            "the three crossings do not bound a triangular face",
        ));
    };

    // classify the triangle arcs: over/under at each end
    let mut mixed_arcs: Vec<ArcId> = Vec::new();
    let mut all_over = 0;
    let mut all_under = 0;
    for &(a, _) in &tri {
        let (hx, hs) = topo.head(a).unwrap();
        let (tx, ts) = topo.tail(a).unwrap();
        debug_assert!(site.contains(&hx) && site.contains(&tx));
        let over_h = hs % 2 == 1;
        let over_t = ts % 2 == 1;
        match (over_h, over_t) {
            (true, true) => all_over += 1,
            (false, false) => all_under += 1,
            _ => mixed_arcs.push(a),
        }
    }
    if all_over != 1 || all_under != 1 || mixed_arcs.len() != 1 {
        return Err(Error::precondition(
            "triangle is not in Reidemeister-3 position (needs one all-over and one all-under edge)",
        ));
    }

    // the strands to reorder: owners of the mixed arc and of the all-under arc
    let mut lists: BTreeMap<ComponentId, Vec<Pass>> = BTreeMap::new();
    let swap_for = |a: ArcId, lists: &mut BTreeMap<ComponentId, Vec<Pass>>| -> Result<()> {
        let comp = d.arc_component(a).unwrap();
        let c = d.component(comp).unwrap();
        let list = lists.entry(comp).or_insert_with(|| passage_list(d, c));
        // the arc joins the passage it exits (tail) to the one it enters
        let (tx, _) = topo.tail(a).unwrap();
        let (hx, _) = topo.head(a).unwrap();
        let k = list.len();
        let pos = c.arcs.iter().position(|&b| b == a).unwrap();
        // passage j has out-arc = arcs[(j+1) % k], so the tail passage of
        // arcs[pos] is at index (pos + k - 1) % k and the head at pos.
        let j_tail = (pos + k - 1) % k;
        let j_head = pos;
        if list[j_tail].crossing != tx || list[j_head].crossing != hx {
            return Err(Error::invariant("triangle passage bookkeeping mismatch"));
        }
        list.swap(j_tail, j_head);
        Ok(())
    };

    // The triangle contracts through its opposite side: every strand's two
    // triangle passages swap order.
    let mut tri_arcs: Vec<ArcId> = tri.iter().map(|&(a, _)| a).collect();
    tri_arcs.sort();
    for a in tri_arcs {
        swap_for(a, &mut lists)?;
    }

    let d2 = rebuild_passages(d, &lists)?;
    if d2.genus() != d.genus() {
        return Err(Error::invariant("R3 produced a non-planar rewiring"));
    }
    Ok(d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::homology::linking_number;

    /// closure of the 3-strand braid s1 s2 s1: two components, a triangle in
    /// the middle.
    fn braid_331() -> Diagram {
        catalog::braid_closure(3, &[1, 2, 1])
    }

    #[test]
    fn r3_on_braid_preserves_invariants() {
        let d = braid_331();
        assert_eq!(d.genus(), 0);
        let comps: Vec<ComponentId> = d.components().map(|c| c.id).collect();
        let site = [CrossingId(1), CrossingId(2), CrossingId(3)];
        let d2 = r3(&d, site).unwrap();
        assert_eq!(d2.genus(), 0);
        assert_eq!(d2.crossings().count(), 3);
        // signs preserved crossing by crossing
        for x in d.crossings() {
            assert_eq!(d.sign(x.id).unwrap(), d2.sign(x.id).unwrap());
        }
        // mutual crossing multiset between distinct components unchanged
        if comps.len() == 2 {
            assert_eq!(
                linking_number(&d, comps[0], comps[1]).unwrap(),
                linking_number(&d2, comps[0], comps[1]).unwrap()
            );
        }
        let mutual = |dd: &Diagram| {
            let mut v: Vec<(bool, i8)> = dd
                .crossings()
                .filter(|x| {
                    let (u, o) = dd.strands(x);
                    u != o
                })
                .map(|x| (true, dd.sign(x.id).unwrap()))
                .collect();
            v.sort();
            v
        };
        assert_eq!(mutual(&d), mutual(&d2));
    }

    #[test]
    fn r3_rejects_non_triangle() {
        let d = catalog::trefoil();
        let e = r3(&d, [CrossingId(1), CrossingId(2), CrossingId(3)]);
        // the trefoil has no R3 triangle in this diagram
        assert!(e.is_err());
    }
}
