//! Mid-level rewriting primitives: routed circles, strand detours (pushes and
//! clasps), and kinks.  These are the building blocks for the Reidemeister
//! moves, the gadget, and the oracle's diagram generator.

use super::builder::{ArcPoint, Builder, NewCrossing, StrandEnd};
use crate::diagram::{ArcId, ComponentId, CrossingId, Diagram, Framing, Role};
use crate::error::{Error, Result};

/// Whether the new/moving strand passes over the host arc, and from which of
/// the host's sides it enters.  With the host pointing north, a strand
/// entering from the west is `from_left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossed {
    pub over: bool,
    pub from_left: bool,
}

impl Crossed {
    /// Slot index (1 or 3) the incoming over-arc takes; 3 means sign +1.
    pub fn over_in_slot(self) -> u8 {
        match (self.over, self.from_left) {
            (false, true) | (true, false) => 1,
            (false, false) | (true, true) => 3,
        }
    }

    pub fn sign(self) -> i8 {
        if self.over_in_slot() == 3 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RouteStep {
    pub arc: ArcId,
    pub rank: i64,
    pub how: Crossed,
}

/// Insert a new closed component crossing the listed arcs in route order.
/// Returns the new diagram, the component id, the crossing ids created (one
/// per step), and the subdivision provenance (new piece -> host arc).
pub fn route_component(
    d: &Diagram,
    role: Role,
    framing: Framing,
    steps: &[RouteStep],
) -> Result<(
    Diagram,
    ComponentId,
    Vec<CrossingId>,
    std::collections::BTreeMap<ArcId, ArcId>,
)> {
    if steps.is_empty() {
        return Err(Error::precondition("a routed component must cross something"));
    }
    let mut b = Builder::from(d);
    let comp = b.fresh_component();
    let arcs: Vec<ArcId> = steps.iter().map(|_| b.fresh_arc()).collect();
    let mut xids = Vec::new();
    for (i, s) in steps.iter().enumerate() {
        let xid = b.fresh_crossing();
        xids.push(xid);
        let new_in = arcs[(i + steps.len() - 1) % steps.len()];
        let new_out = arcs[i];
        let host = StrandEnd::At(ArcPoint { arc: s.arc, rank: s.rank });
        let me = StrandEnd::New { in_arc: new_in, out_arc: new_out };
        let (under, over) = if s.how.over { (host, me) } else { (me, host) };
        b.add_crossing(NewCrossing { id: xid, under, over, over_in_slot: s.how.over_in_slot() });
    }
    b.add_component(comp, role, framing, arcs);
    let (d2, prov) = b.finish()?;
    Ok((d2, comp, xids, prov))
}

/// One geometric realization of a detour: the pass and entry side of the
/// first crossing along the moving strand, and whether the bulge meets the
/// host against its orientation.
#[derive(Debug, Clone, Copy)]
struct DetourShape {
    first_over: bool,
    second_over: bool,
    first_from_left: bool,
    host_reversed: bool,
}

fn detour_once(
    d: &Diagram,
    moving: ArcId,
    host: ArcId,
    shape: DetourShape,
) -> Result<(Diagram, (CrossingId, CrossingId))> {
    let mut b = Builder::from(d);
    let x1 = b.fresh_crossing();
    let x2 = b.fresh_crossing();
    let (hr1, hr2) = if shape.host_reversed { (1, 0) } else { (0, 1) };
    for (xid, pass, hr, mr, from_left) in [
        (x1, shape.first_over, hr1, 0, shape.first_from_left),
        (x2, shape.second_over, hr2, 1, !shape.first_from_left),
    ] {
        let how = Crossed { over: pass, from_left };
        let host_end = StrandEnd::At(ArcPoint { arc: host, rank: hr });
        let move_end = StrandEnd::At(ArcPoint { arc: moving, rank: mr });
        let (under, over) = if pass { (host_end, move_end) } else { (move_end, host_end) };
        b.add_crossing(NewCrossing { id: xid, under, over, over_in_slot: how.over_in_slot() });
    }
    let (d2, _) = b.finish()?;
    Ok((d2, (x1, x2)))
}

/// Detour: a strand of `moving` bulges across the host arc and comes back,
/// crossing it twice.  The bulge has several planar realizations; the first
/// one that keeps the genus unchanged wins, deterministically, and the shape
/// list is filtered up front so the crossing signs come out as requested.
fn detour(
    d: &Diagram,
    moving: ArcId,
    host: ArcId,
    shapes: &[DetourShape],
) -> Result<(Diagram, (CrossingId, CrossingId))> {
    if moving == host {
        return Err(Error::precondition("detour needs two distinct arcs"));
    }
    if d.arc_component(moving).is_none() || d.arc_component(host).is_none() {
        return Err(Error::precondition("detour arcs must exist"));
    }
    let g0 = d.genus();
    for &shape in shapes {
        let (d2, xs) = detour_once(d, moving, host, shape)?;
        if d2.genus() == g0 {
            return Ok((d2, xs));
        }
    }
    Err(Error::precondition(format!(
        "arcs {moving} and {host} admit no planar detour (no shared face)"
    )))
}

/// Reidemeister-2 push of `moving` across `host`, both new crossings with the
/// moving strand on the same side.  Net linking change: zero.
pub fn r2_push(
    d: &Diagram,
    moving: ArcId,
    host: ArcId,
    moving_over: bool,
) -> Result<(Diagram, (CrossingId, CrossingId))> {
    let mut shapes = Vec::new();
    for from_left in [true, false] {
        for host_reversed in [false, true] {
            shapes.push(DetourShape {
                first_over: moving_over,
                second_over: moving_over,
                first_from_left: from_left,
                host_reversed,
            });
        }
    }
    detour(d, moving, host, &shapes)
}

/// Clasp of `moving` around `host`: two crossings of equal sign, changing
/// the pairwise linking number by `sign`.
pub fn clasp(
    d: &Diagram,
    moving: ArcId,
    host: ArcId,
    sign: i8,
) -> Result<(Diagram, (CrossingId, CrossingId))> {
    // (over, from-left) and (under, from-right) both sign +1; mirrored
    // entries give -1.  The return crossing flips both and keeps the sign.
    let mut shapes = Vec::new();
    for host_reversed in [false, true] {
        for &(first_over, first_from_left) in
            if sign > 0 { &[(true, true), (false, false)] } else { &[(false, true), (true, false)] }
        {
            shapes.push(DetourShape {
                first_over,
                second_over: !first_over,
                first_from_left,
                host_reversed,
            });
        }
    }
    detour(d, moving, host, &shapes)
}

/// Insert a kink (Reidemeister 1) on an arc.  `positive` selects the sign of
/// the new self-crossing.  Stored framings are untouched.  Built by hand
/// rather than through [`Builder`] points, since the strand does not pass
/// straight through a kink crossing.
pub fn r1_insert(d: &Diagram, arc: ArcId, positive: bool) -> Result<(Diagram, CrossingId)> {
    let comp = d
        .arc_component(arc)
        .ok_or_else(|| Error::precondition(format!("unknown arc {arc}")))?;
    let topo = d.topology();
    let head = topo.head(arc);
    let mut next_arc = d.fresh_arc_id();
    let loop_arc = ArcId(next_arc);
    next_arc += 1;
    // On a crossingless loop the strand closes straight back into `arc`;
    // otherwise a fresh tail piece carries the old head reference.
    let after = if head.is_some() { ArcId(next_arc) } else { arc };
    let xid = CrossingId(d.fresh_crossing_id());

    // Traversal: arc -> (under) -> loop_arc -> (over) -> after.
    // Positive kink: over-in at slot 3; negative: over-in at slot 1.
    let slots = if positive {
        [arc, after, loop_arc, loop_arc]
    } else {
        [arc, loop_arc, loop_arc, after]
    };

    let mut comps: Vec<_> = d.components().cloned().collect();
    for c in &mut comps {
        if c.id == comp {
            let pos = c.arcs.iter().position(|&a| a == arc).unwrap();
            if after == arc {
                c.arcs.splice(pos + 1..pos + 1, [loop_arc]);
            } else {
                c.arcs.splice(pos + 1..pos + 1, [loop_arc, after]);
            }
        }
    }
    let mut crossings: Vec<_> = d.crossings().cloned().collect();
    if let Some((hx, hs)) = head {
        for x in &mut crossings {
            if x.id == hx {
                x.slots[hs as usize] = after;
            }
        }
    }
    crossings.push(crate::diagram::Crossing::new(xid, slots));
    let d2 = Diagram::new(comps, crossings, d.metadata().clone())?;
    Ok((d2, xid))
}

/// Remove a kink.  The crossing must be a self-crossing whose loop arc runs
/// directly from one of its slots back into another.
pub fn r1_remove(d: &Diagram, xid: CrossingId) -> Result<Diagram> {
    let x = d
        .crossing(xid)
        .ok_or_else(|| Error::precondition(format!("unknown crossing {xid}")))?
        .clone();
    let topo = d.topology();
    let o_in = topo.over_in_slot(xid).unwrap() as usize;
    let o_out = (o_in + 2) % 4;
    let (u_in, u_out) = (x.slots[0], x.slots[2]);
    let (ov_in, ov_out) = (x.slots[o_in], x.slots[o_out]);
    // loop arc: under-out feeding straight back as over-in, or over-out as under-in
    let (first, lp, last) = if u_out == ov_in {
        (u_in, u_out, ov_out)
    } else if ov_out == u_in {
        (ov_in, ov_out, u_out)
    } else {
        return Err(Error::precondition(format!("crossing {xid} is not a kink")));
    };
    if first == lp || last == lp {
        return Err(Error::precondition(format!(
            "crossing {xid} loop arc is not removable"
        )));
    }
    let comp = d.arc_component(first).unwrap();
    // splice first-lp-last into first; on a crossingless result last == first
    let head_of_last = topo.head(last);
    let mut comps: Vec<_> = d.components().cloned().collect();
    for c in &mut comps {
        if c.id == comp {
            c.arcs.retain(|&a| a != lp && (a != last || last == first));
        }
    }
    let mut crossings: Vec<_> = d.crossings().filter(|c| c.id != xid).cloned().collect();
    if let Some((hx, hs)) = head_of_last {
        if hx != xid {
            for cx in &mut crossings {
                if cx.id == hx {
                    cx.slots[hs as usize] = first;
                }
            }
        }
    }
    Diagram::new(comps, crossings, d.metadata().clone())
}

/// Remove an empty bigon: two crossings between the same two strands with the
/// same strand over at both, bounding a two-sided face with nothing inside.
pub fn r2_remove(d: &Diagram, x1: CrossingId, x2: CrossingId) -> Result<Diagram> {
    let faces = d.faces();
    // find a face of length 2 whose darts' arcs connect x1 and x2
    let mut found = false;
    for cyc in &faces.faces {
        if cyc.len() != 2 {
            continue;
        }
        let ends: Vec<CrossingId> = cyc
            .iter()
            .filter_map(|&(a, fwd)| {
                let t = d.topology();
                if fwd { t.head(a) } else { t.tail(a) }.map(|(x, _)| x)
            })
            .collect();
        if ends.len() == 2
            && ((ends[0] == x1 && ends[1] == x2) || (ends[0] == x2 && ends[1] == x1))
        {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::precondition(format!(
            "crossings {x1},{x2} do not bound an empty bigon"
        )));
    }
    // both crossings must have the same component over, same under
    let (u1, o1) = d.strands(d.crossing(x1).unwrap());
    let (u2, o2) = d.strands(d.crossing(x2).unwrap());
    if u1 != u2 || o1 != o2 {
        return Err(Error::precondition(
            "bigon crossings do not have a consistent over strand",
        ));
    }
    dissolve_crossing_pair(d, x1, x2)
}

/// Remove two crossings, merging strands straight through both.
fn dissolve_crossing_pair(d: &Diagram, x1: CrossingId, x2: CrossingId) -> Result<Diagram> {
    use std::collections::BTreeMap;
    let topo = d.topology();
    let mut merge: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let add = |a: ArcId, b: ArcId, merge: &mut BTreeMap<ArcId, ArcId>| {
        // b absorbed into a
        merge.insert(b, a);
    };
    for &xid in &[x1, x2] {
        let x = d.crossing(xid).unwrap();
        let o_in = topo.over_in_slot(xid).unwrap() as usize;
        add(x.slots[0], x.slots[2], &mut merge);
        add(x.slots[o_in], x.slots[(o_in + 2) % 4], &mut merge);
    }
    let resolve = |mut a: ArcId, merge: &BTreeMap<ArcId, ArcId>| {
        let mut guard = 0;
        while let Some(&b) = merge.get(&a) {
            a = b;
            guard += 1;
            if guard > merge.len() + 1 {
                break; // full circle: caller's cycle logic keeps one arc
            }
        }
        a
    };
    let mut comps: Vec<_> = d.components().cloned().collect();
    for c in &mut comps {
        let mut out: Vec<ArcId> = Vec::new();
        for &a in &c.arcs {
            let r = resolve(a, &merge);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        if out.is_empty() {
            out.push(resolve(c.arcs[0], &merge));
        }
        c.arcs = out;
    }
    let mut crossings: Vec<_> = d.crossings().filter(|c| c.id != x1 && c.id != x2).cloned().collect();
    for x in &mut crossings {
        for s in &mut x.slots {
            *s = resolve(*s, &merge);
        }
    }
    Diagram::new(comps, crossings, d.metadata().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::diagram::ComponentId;
    use crate::homology::linking_number;

    #[test]
    fn clasp_changes_linking_by_sign() {
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=0 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        for sign in [1i8, -1] {
            let (d2, (a, b)) = clasp(&d, ArcId(1), ArcId(2), sign).unwrap();
            assert_eq!(d2.genus(), 0, "clasp stays planar");
            assert_eq!(
                linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(),
                sign as i64
            );
            assert_eq!(d2.sign(a).unwrap(), sign);
            assert_eq!(d2.sign(b).unwrap(), sign);
        }
    }

    #[test]
    fn r2_push_preserves_linking() {
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=0 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        for over in [true, false] {
            let (d2, (a, b)) = r2_push(&d, ArcId(1), ArcId(2), over).unwrap();
            assert_eq!(d2.genus(), 0);
            assert_eq!(linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(), 0);
            assert_eq!(
                d2.sign(a).unwrap() + d2.sign(b).unwrap(),
                0,
                "push crossings cancel"
            );
            let (u1, o1) = d2.strands(d2.crossing(a).unwrap());
            let (u2, o2) = d2.strands(d2.crossing(b).unwrap());
            assert_eq!((u1, o1), (u2, o2));
            if over {
                assert_eq!(o1, ComponentId(1));
            } else {
                assert_eq!(u1, ComponentId(1));
            }
        }
    }

    #[test]
    fn r2_push_then_remove_roundtrip() {
        let d = catalog::trefoil();
        let arcs: Vec<ArcId> = d.component(ComponentId(1)).unwrap().arcs.clone();
        let before = d.serialize();
        let (d2, (x1, x2)) = r2_push(&d, arcs[0], arcs[3], true).unwrap();
        assert_eq!(d2.genus(), 0);
        assert_eq!(d2.crossings().count(), 5);
        let d3 = r2_remove(&d2, x1, x2).unwrap();
        assert_eq!(d3.genus(), 0);
        assert_eq!(d3.crossings().count(), 3);
        assert_eq!(d3.serialize(), before, "push then remove is the identity");
    }

    #[test]
    fn r1_insert_remove_roundtrip() {
        let d = catalog::trefoil();
        let before = d.serialize();
        let arc = d.component(ComponentId(1)).unwrap().arcs[2];
        for positive in [true, false] {
            let (d2, x) = r1_insert(&d, arc, positive).unwrap();
            assert_eq!(d2.genus(), 0);
            assert_eq!(d2.sign(x).unwrap(), if positive { 1 } else { -1 });
            assert_eq!(
                d2.writhe(ComponentId(1)),
                3 + if positive { 1 } else { -1 }
            );
            let d3 = r1_remove(&d2, x).unwrap();
            assert_eq!(d3.serialize(), before);
        }
    }

    #[test]
    fn kink_on_crossingless_unknot() {
        let d = catalog::unknot(Role::Pattern, Framing::Unframed);
        let (d2, x) = r1_insert(&d, ArcId(1), true).unwrap();
        assert_eq!(d2.crossings().count(), 1);
        assert_eq!(d2.genus(), 0);
        assert_eq!(d2.sign(x).unwrap(), 1);
        assert_eq!(d2.writhe(ComponentId(1)), 1);
        let d3 = r1_remove(&d2, x).unwrap();
        assert_eq!(d3.serialize(), d.serialize());
    }

    #[test]
    fn routed_circle_around_strand_is_meridian() {
        // a circle crossing one arc twice (once over, once under) links it +-1
        let d = catalog::unknot(Role::Surgery, Framing::Framed(0));
        let steps = [
            RouteStep { arc: ArcId(1), rank: 0, how: Crossed { over: false, from_left: true } },
            RouteStep { arc: ArcId(1), rank: 1, how: Crossed { over: true, from_left: false } },
        ];
        let (d2, comp, xs, _) = route_component(&d, Role::Pattern, Framing::Unframed, &steps).unwrap();
        assert_eq!(d2.genus(), 0, "meridian circle is planar");
        assert_eq!(xs.len(), 2);
        let lk = linking_number(&d2, comp, ComponentId(1)).unwrap();
        assert_eq!(lk.abs(), 1, "meridian links once, lk = {lk}");
    }
}
