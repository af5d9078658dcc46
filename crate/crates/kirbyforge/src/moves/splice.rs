//! Band splice: the final step of a handle slide.  Joins the sliding
//! component to the pushoff through a band whose two edges pass under every
//! arc on the chosen face path.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram};
use crate::error::{Error, Result};

use super::ops::Crossed;

fn slots_from(
    id: CrossingId,
    u_in: ArcId,
    u_out: ArcId,
    o_in: ArcId,
    o_out: ArcId,
    over_in: u8,
) -> Crossing {
    let slots = if over_in == 3 {
        [u_in, o_out, u_out, o_in]
    } else {
        [u_in, o_in, u_out, o_out]
    };
    Crossing::new(id, slots)
}

/// Splice `copy` into `slid` along a band from `from_arc` (on slid) to
/// `to_arc` (on copy) crossing the arcs in `crossed` (both edges, under).
/// `edge_left` and `rank_swap` pick one of the four planar realizations.
pub(super) fn splice(
    d: &Diagram,
    slid: ComponentId,
    copy: ComponentId,
    from_arc: ArcId,
    to_arc: ArcId,
    crossed: &[(ArcId, bool)],
    edge_left: bool,
    rank_swap: bool,
) -> Result<(Diagram, BTreeMap<ArcId, ArcId>)> {
    let mut prov: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let topo = d.topology();
    let m = crossed.len();
    let s_cycle = d.component(slid).unwrap().arcs.clone();
    let c_cycle = d.component(copy).unwrap().arcs.clone();
    let from_head = topo.head(from_arc);
    let to_head = topo.head(to_arc);
    let slid_loop = from_head.is_none();
    let copy_loop = to_head.is_none();

    let mut next_arc = d.fresh_arc_id();
    let mut next_x = d.fresh_crossing_id();
    let mut fresh_arc = || {
        let a = ArcId(next_arc);
        next_arc += 1;
        a
    };

    let mut crossings: Vec<Crossing> = d.crossings().cloned().collect();
    let mut comps: Vec<Component> = d.components().cloned().collect();
    let set_slot = |crossings: &mut Vec<Crossing>, at: (CrossingId, u8), val: ArcId| {
        for x in crossings.iter_mut() {
            if x.id == at.0 {
                x.slots[at.1 as usize] = val;
            }
        }
    };

    let mut cycle: Vec<ArcId> = Vec::new();

    if m == 0 {
        match (slid_loop, copy_loop) {
            (false, false) => {
                // from_arc extends to to_arc's old head; to_arc to from_arc's.
                set_slot(&mut crossings, to_head.unwrap(), from_arc);
                set_slot(&mut crossings, from_head.unwrap(), to_arc);
                let sp = s_cycle.iter().position(|&a| a == from_arc).unwrap();
                let cp = c_cycle.iter().position(|&a| a == to_arc).unwrap();
                for i in 0..s_cycle.len() {
                    cycle.push(s_cycle[(sp + 1 + i) % s_cycle.len()]);
                }
                for i in 0..c_cycle.len() {
                    cycle.push(c_cycle[(cp + 1 + i) % c_cycle.len()]);
                }
            }
            (false, true) => {
                // the crossingless copy melts into from_arc
                let sp = s_cycle.iter().position(|&a| a == from_arc).unwrap();
                for i in 0..s_cycle.len() {
                    cycle.push(s_cycle[(sp + 1 + i) % s_cycle.len()]);
                }
            }
            (true, false) => {
                // the crossingless slid circle melts into to_arc
                let cp = c_cycle.iter().position(|&a| a == to_arc).unwrap();
                for i in 0..c_cycle.len() {
                    cycle.push(c_cycle[(cp + 1 + i) % c_cycle.len()]);
                }
            }
            (true, true) => {
                cycle.push(from_arc);
            }
        }
    } else {
        // Band edges: chain1 runs from slid to copy, chain2 back; each has
        // m crossings and m+1 segments, the outer segments merging with the
        // attach arcs and with fresh terminal arcs (or wrapping straight
        // into a crossingless attach circle).
        let e1_interior: Vec<ArcId> = (1..m).map(|_| fresh_arc()).collect();
        let e2_interior: Vec<ArcId> = (1..m).map(|_| fresh_arc()).collect();
        let e1_last = if copy_loop { to_arc } else { fresh_arc() };
        let e2_last = if slid_loop { from_arc } else { fresh_arc() };
        for &a in e1_interior.iter().chain(e2_interior.iter()) {
            prov.insert(a, from_arc);
        }
        if !copy_loop {
            prov.insert(e1_last, from_arc);
        }
        if !slid_loop {
            prov.insert(e2_last, from_arc);
        }
        let chain1: Vec<ArcId> = std::iter::once(from_arc)
            .chain(e1_interior.iter().copied())
            .chain(std::iter::once(e1_last))
            .collect();
        let chain2: Vec<ArcId> = std::iter::once(to_arc)
            .chain(e2_interior.iter().copied())
            .chain(std::iter::once(e2_last))
            .collect();
        if let Some(h) = to_head {
            set_slot(&mut crossings, h, e1_last);
        }
        if let Some(h) = from_head {
            set_slot(&mut crossings, h, e2_last);
        }

        struct Point {
            rank: i64,
            xid: CrossingId,
            band_in: ArcId,
            band_out: ArcId,
            from_left: bool,
        }
        let mut points: BTreeMap<ArcId, Vec<Point>> = BTreeMap::new();
        for (i, &(h, enter_fwd)) in crossed.iter().enumerate() {
            let x1 = CrossingId(next_x);
            next_x += 1;
            let x2 = CrossingId(next_x);
            next_x += 1;
            // per-arc side: the face path fixes which side the band enters
            // from, up to the global dart-face-side convention (edge_left)
            let fl = edge_left == enter_fwd;
            let (r1, r2) = if rank_swap == fl { (1, 0) } else { (0, 1) };
            points.entry(h).or_default().push(Point {
                rank: r1,
                xid: x1,
                band_in: chain1[i],
                band_out: chain1[i + 1],
                from_left: fl,
            });
            points.entry(h).or_default().push(Point {
                rank: r2,
                xid: x2,
                band_in: chain2[m - 1 - i],
                band_out: chain2[m - i],
                from_left: !fl,
            });
        }
        for (host, mut pts) in points {
            pts.sort_by_key(|p| p.rank);
            let piece1 = fresh_arc();
            let piece2 = fresh_arc();
            prov.insert(piece1, host);
            prov.insert(piece2, host);
            let chain = [host, piece1, piece2];
            let Some(hh) = topo.head(host) else {
                return Err(Error::invariant("band crossed a crossingless loop"));
            };
            set_slot(&mut crossings, hh, piece2);
            for (k, p) in pts.iter().enumerate() {
                let (h_in, h_out) = (chain[k], chain[k + 1]);
                let how = Crossed { over: false, from_left: p.from_left };
                crossings.push(slots_from(
                    p.xid,
                    p.band_in,
                    p.band_out,
                    h_in,
                    h_out,
                    how.over_in_slot(),
                ));
            }
            for comp in &mut comps {
                if let Some(pos) = comp.arcs.iter().position(|&a| a == host) {
                    comp.arcs.splice(pos + 1..pos + 1, [piece1, piece2]);
                }
            }
        }

        // Assemble: slid run ending at from_arc, edge 1 out, the copy run,
        // edge 2 back.  Terminal arcs that merged with a crossingless attach
        // circle are already in place and must not repeat.
        let sp = s_cycle.iter().position(|&a| a == from_arc).unwrap();
        for i in 0..s_cycle.len() {
            cycle.push(s_cycle[(sp + 1 + i) % s_cycle.len()]);
        }
        cycle.extend(e1_interior.iter().copied());
        if !copy_loop {
            cycle.push(e1_last);
            let cp = c_cycle.iter().position(|&a| a == to_arc).unwrap();
            for i in 0..c_cycle.len() {
                cycle.push(c_cycle[(cp + 1 + i) % c_cycle.len()]);
            }
        } else {
            cycle.push(to_arc);
        }
        cycle.extend(e2_interior.iter().copied());
        if !slid_loop {
            cycle.push(e2_last);
        }
    }

    for comp in &mut comps {
        if comp.id == slid {
            comp.arcs = cycle.clone();
        }
    }
    comps.retain(|c| c.id != copy);

    let d2 = Diagram::new(comps, crossings, d.metadata().clone())?;
    Ok((d2, prov))
}

/// Band merge with a half twist: the band's two edges cross each other once.
/// Needed when the attach arcs run parallel along their shared face, so the
/// oriented crossing-free merge does not embed.
pub(super) fn splice_twisted(
    d: &Diagram,
    slid: ComponentId,
    copy: ComponentId,
    from_arc: ArcId,
    to_arc: ArcId,
    edge1_over: bool,
    from_left: bool,
) -> Result<(Diagram, BTreeMap<ArcId, ArcId>)> {
    let mut prov: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let topo = d.topology();
    let s_cycle = d.component(slid).unwrap().arcs.clone();
    let c_cycle = d.component(copy).unwrap().arcs.clone();
    let from_head = topo.head(from_arc);
    let to_head = topo.head(to_arc);
    let slid_loop = from_head.is_none();
    let copy_loop = to_head.is_none();

    let mut next_arc = d.fresh_arc_id();
    let mut fresh_arc = || {
        let a = ArcId(next_arc);
        next_arc += 1;
        a
    };
    let t = CrossingId(d.fresh_crossing_id());

    // traversal: from_arc -> T -> w1 -> (copy from after to_arc) -> to_arc
    //            -> T -> w2 -> (rest of slid)
    let w1 = if copy_loop { to_arc } else { fresh_arc() };
    let w2 = if slid_loop { from_arc } else { fresh_arc() };
    if !copy_loop {
        prov.insert(w1, from_arc);
    }
    if !slid_loop {
        prov.insert(w2, from_arc);
    }

    let mut crossings: Vec<Crossing> = d.crossings().cloned().collect();
    let mut comps: Vec<Component> = d.components().cloned().collect();
    let set_slot = |crossings: &mut Vec<Crossing>, at: (CrossingId, u8), val: ArcId| {
        for x in crossings.iter_mut() {
            if x.id == at.0 {
                x.slots[at.1 as usize] = val;
            }
        }
    };
    if let Some(h) = to_head {
        set_slot(&mut crossings, h, w1);
    }
    if let Some(h) = from_head {
        set_slot(&mut crossings, h, w2);
    }

    // edge1 strand: from_arc -> w1; edge2 strand: to_arc -> w2
    let how = super::ops::Crossed { over: edge1_over, from_left };
    let (u, o) = if edge1_over {
        ((to_arc, w2), (from_arc, w1))
    } else {
        ((from_arc, w1), (to_arc, w2))
    };
    let slots = if how.over_in_slot() == 3 {
        [u.0, o.1, u.1, o.0]
    } else {
        [u.0, o.0, u.1, o.1]
    };
    crossings.push(Crossing::new(t, slots));

    let mut cycle: Vec<ArcId> = Vec::new();
    if slid_loop {
        cycle.push(from_arc);
    } else {
        let sp = s_cycle.iter().position(|&a| a == from_arc).unwrap();
        for i in 0..s_cycle.len() {
            cycle.push(s_cycle[(sp + 1 + i) % s_cycle.len()]);
        }
    }
    if copy_loop {
        cycle.push(to_arc);
    } else {
        cycle.push(w1);
        let cp = c_cycle.iter().position(|&a| a == to_arc).unwrap();
        for i in 0..c_cycle.len() {
            cycle.push(c_cycle[(cp + 1 + i) % c_cycle.len()]);
        }
    }
    if !slid_loop {
        cycle.push(w2);
    }

    for comp in &mut comps {
        if comp.id == slid {
            comp.arcs = cycle.clone();
        }
    }
    comps.retain(|c| c.id != copy);

    let d2 = Diagram::new(comps, crossings, d.metadata().clone())?;
    Ok((d2, prov))
}
