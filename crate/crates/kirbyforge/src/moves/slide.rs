//! Handle slides: replace a component by its band sum with a framing-parallel
//! pushoff of a surgery component.
//!
//! The pushoff is built passage by passage.  Where the original curve passes
//! a crossing, the copy picks up a mirror crossing on a parallel track; a
//! self-crossing of the original blows up into the familiar 2x2 grid of four
//! crossings.  Clasps then correct the blackboard framing (= writhe) to the
//! stored framing, and a band joins the sliding component to the copy through
//! a shortest face path.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram, Framing, Role};
use crate::error::{Error, Result};
use crate::homology::linking_number;

use super::ops::clasp;
use super::splice::splice;

/// A passage of a component through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pass {
    crossing: CrossingId,
    under: bool,
}

fn passage_list(d: &Diagram, comp: &Component) -> Vec<Pass> {
    d.topology()
        .passages_of(comp)
        .into_iter()
        .map(|p| Pass { crossing: p.crossing, under: !p.is_over })
        .collect()
}

/// Output of [`parallel_copy`]: arc-level provenance for downstream
/// bookkeeping.  `arc_origin` maps every reallocated arc of a pre-existing
/// component to the arc it subdivides; `copy_parallel` maps each arc of the
/// copy to the arc of the original it runs alongside.
#[derive(Debug, Clone, Default)]
pub struct CopyInfo {
    pub arc_origin: BTreeMap<ArcId, ArcId>,
    pub copy_parallel: BTreeMap<ArcId, ArcId>,
}

/// Blackboard-parallel copy of `o`, on its left side.  lk(o, copy) equals
/// writhe(o).
pub fn parallel_copy(d: &Diagram, o: ComponentId) -> Result<(Diagram, ComponentId, CopyInfo)> {
    let oc = d
        .component(o)
        .ok_or_else(|| Error::precondition(format!("unknown component {o}")))?
        .clone();
    let topo = d.topology();

    let mut next_cross = d.fresh_crossing_id();
    let mut fresh_x = || {
        let x = CrossingId(next_cross);
        next_cross += 1;
        x
    };

    // Plan replacement crossings around every crossing o meets.
    // For a non-self crossing: one mirror crossing.
    // For a self crossing: p1 = copy-under/orig-over, p2 = orig-under/copy-over,
    // p3 = copy-under/copy-over.
    #[derive(Debug, Clone, Copy)]
    struct SelfPlan {
        p1: CrossingId,
        p2: CrossingId,
        p3: CrossingId,
    }
    let mut mirror: BTreeMap<CrossingId, CrossingId> = BTreeMap::new();
    let mut selfplan: BTreeMap<CrossingId, SelfPlan> = BTreeMap::new();
    let mut over_in_of: BTreeMap<CrossingId, u8> = BTreeMap::new();
    for x in d.crossings() {
        let (u, v) = d.strands(x);
        let oi = topo.over_in_slot(x.id).unwrap();
        over_in_of.insert(x.id, oi);
        if u == o && v == o {
            let plan = SelfPlan { p1: fresh_x(), p2: fresh_x(), p3: fresh_x() };
            selfplan.insert(x.id, plan);
            over_in_of.insert(plan.p1, oi);
            over_in_of.insert(plan.p2, oi);
            over_in_of.insert(plan.p3, oi);
        } else if u == o || v == o {
            let m = fresh_x();
            mirror.insert(x.id, m);
            over_in_of.insert(m, oi);
        }
    }

    let copy_id = ComponentId(d.fresh_component_id());
    if mirror.is_empty() && selfplan.is_empty() {
        // crossingless circle: the copy is a disjoint crossingless circle
        let copy_arc = ArcId(d.fresh_arc_id());
        let mut comps: Vec<Component> = d.components().cloned().collect();
        comps.push(Component::new(copy_id, oc.role, oc.framing, vec![copy_arc]));
        let d2 = Diagram::new(comps, d.crossings().cloned().collect(), d.metadata().clone())?;
        let mut info = CopyInfo::default();
        info.copy_parallel.insert(copy_arc, oc.arcs[0]);
        return Ok((d2, copy_id, info));
    }

    // Rebuild passage lists; alongside each passage, note the old arc that
    // the arc entering it descends from.
    type AnnotatedList = Vec<(Pass, ArcId)>;
    let mut lists: BTreeMap<ComponentId, AnnotatedList> = BTreeMap::new();
    for c in d.components() {
        let old = passage_list(d, c);
        let k = old.len();
        if c.id == o {
            let mut out: AnnotatedList = Vec::new();
            for (i, p) in old.iter().enumerate() {
                let in_arc = c.arcs[i];
                let out_arc = c.arcs[(i + 1) % k];
                match (selfplan.get(&p.crossing), over_in_of[&p.crossing]) {
                    (None, _) => out.push((*p, in_arc)),
                    (Some(plan), oi) => {
                        let (mate, mate_after) = if p.under {
                            (Pass { crossing: plan.p2, under: true }, oi == 3)
                        } else {
                            (Pass { crossing: plan.p1, under: false }, oi != 3)
                        };
                        // mate_after false: the companion track comes first
                        if mate_after {
                            out.push((*p, in_arc));
                            out.push((mate, out_arc));
                        } else {
                            out.push((mate, in_arc));
                            out.push((*p, in_arc));
                        }
                    }
                }
            }
            lists.insert(c.id, out);
        } else {
            let mut out: AnnotatedList = Vec::new();
            let mut touched = false;
            for (i, p) in old.iter().enumerate() {
                let in_arc = c.arcs[i];
                let out_arc = c.arcs[(i + 1) % k];
                match mirror.get(&p.crossing) {
                    None => out.push((*p, in_arc)),
                    Some(&m) => {
                        touched = true;
                        let x = d.crossing(p.crossing).unwrap();
                        let (_, over_comp) = d.strands(x);
                        let oi = over_in_of[&p.crossing];
                        let mp = Pass { crossing: m, under: p.under };
                        // where the mirror track sits along this strand
                        let after = if over_comp == o { oi == 3 } else { oi == 1 };
                        if after {
                            out.push((*p, in_arc));
                            out.push((mp, out_arc));
                        } else {
                            out.push((mp, in_arc));
                            out.push((*p, in_arc));
                        }
                    }
                }
            }
            if touched {
                lists.insert(c.id, out);
            }
        }
    }

    // The copy's own passage list, parallel to o's; annotations are the
    // o-arcs each copy arc runs alongside.
    {
        let old = passage_list(d, &oc);
        let k = old.len();
        let mut out: AnnotatedList = Vec::new();
        for (i, p) in old.iter().enumerate() {
            let in_arc = oc.arcs[i];
            let out_arc = oc.arcs[(i + 1) % k];
            match (selfplan.get(&p.crossing), mirror.get(&p.crossing)) {
                (Some(plan), _) => {
                    let oi = over_in_of[&p.crossing];
                    if p.under {
                        let (first, second) = if oi == 3 {
                            (plan.p1, plan.p3)
                        } else {
                            (plan.p3, plan.p1)
                        };
                        out.push((Pass { crossing: first, under: true }, in_arc));
                        out.push((Pass { crossing: second, under: true }, in_arc));
                    } else {
                        let (first, second) = if oi == 3 {
                            (plan.p3, plan.p2)
                        } else {
                            (plan.p2, plan.p3)
                        };
                        out.push((Pass { crossing: first, under: false }, in_arc));
                        out.push((Pass { crossing: second, under: false }, in_arc));
                    }
                    // the arc leaving the second passage parallels out_arc
                    let _ = out_arc;
                }
                (None, Some(&m)) => out.push((Pass { crossing: m, under: p.under }, in_arc)),
                (None, None) => unreachable!("o passes an unplanned crossing"),
            }
        }
        lists.insert(copy_id, out);
    }

    // Allocate fresh arcs for every rebuilt component and fill the slots.
    let mut info = CopyInfo::default();
    let mut next_arc = d.fresh_arc_id();
    let mut comps: Vec<Component> = Vec::new();
    let mut under_ends: BTreeMap<CrossingId, (ArcId, ArcId)> = BTreeMap::new();
    let mut over_ends: BTreeMap<CrossingId, (ArcId, ArcId)> = BTreeMap::new();
    let register =
        |list: &AnnotatedList,
         next_arc: &mut u32,
         under_ends: &mut BTreeMap<CrossingId, (ArcId, ArcId)>,
         over_ends: &mut BTreeMap<CrossingId, (ArcId, ArcId)>| {
            let k = list.len();
            let arcs: Vec<ArcId> = (0..k)
                .map(|_| {
                    let a = ArcId(*next_arc);
                    *next_arc += 1;
                    a
                })
                .collect();
            for (j, (p, _)) in list.iter().enumerate() {
                let in_arc = arcs[j];
                let out_arc = arcs[(j + 1) % k];
                if p.under {
                    under_ends.insert(p.crossing, (in_arc, out_arc));
                } else {
                    over_ends.insert(p.crossing, (in_arc, out_arc));
                }
            }
            arcs
        };
    for c in d.components() {
        let Some(list) = lists.get(&c.id) else {
            comps.push(c.clone());
            continue;
        };
        let arcs = register(list, &mut next_arc, &mut under_ends, &mut over_ends);
        for (j, (_, anchor)) in list.iter().enumerate() {
            info.arc_origin.insert(arcs[j], *anchor);
        }
        let mut c2 = c.clone();
        c2.arcs = arcs;
        comps.push(c2);
    }
    {
        let list = &lists[&copy_id];
        let arcs = register(list, &mut next_arc, &mut under_ends, &mut over_ends);
        for (j, (_, anchor)) in list.iter().enumerate() {
            info.copy_parallel.insert(arcs[j], *anchor);
        }
        comps.push(Component::new(copy_id, oc.role, oc.framing, arcs));
    }

    let mut crossings: Vec<Crossing> = Vec::new();
    for x in d.crossings() {
        let touched = under_ends.contains_key(&x.id) || over_ends.contains_key(&x.id);
        if !touched {
            crossings.push(x.clone());
            continue;
        }
        crossings.push(assemble(x.id, &under_ends, &over_ends, over_in_of[&x.id], Some(x))?);
    }
    for (&old, &m) in &mirror {
        let x = d.crossing(old).unwrap();
        crossings.push(assemble(m, &under_ends, &over_ends, over_in_of[&m], Some(x))?);
    }
    for plan in selfplan.values() {
        for xid in [plan.p1, plan.p2, plan.p3] {
            crossings.push(assemble(xid, &under_ends, &over_ends, over_in_of[&xid], None)?);
        }
    }

    let d2 = Diagram::new(comps, crossings, d.metadata().clone())?;
    Ok((d2, copy_id, info))
}

fn assemble(
    id: CrossingId,
    under_ends: &BTreeMap<CrossingId, (ArcId, ArcId)>,
    over_ends: &BTreeMap<CrossingId, (ArcId, ArcId)>,
    over_in: u8,
    old: Option<&Crossing>,
) -> Result<Crossing> {
    let fallback_under = || -> Result<(ArcId, ArcId)> {
        let x = old.ok_or_else(|| Error::invariant(format!("crossing {id} missing under strand")))?;
        Ok((x.slots[0], x.slots[2]))
    };
    let fallback_over = || -> Result<(ArcId, ArcId)> {
        let x = old.ok_or_else(|| Error::invariant(format!("crossing {id} missing over strand")))?;
        Ok(if over_in == 3 {
            (x.slots[3], x.slots[1])
        } else {
            (x.slots[1], x.slots[3])
        })
    };
    let (u_in, u_out) = match under_ends.get(&id) {
        Some(&e) => e,
        None => fallback_under()?,
    };
    let (o_in, o_out) = match over_ends.get(&id) {
        Some(&e) => e,
        None => fallback_over()?,
    };
    let slots = if over_in == 3 {
        [u_in, o_out, u_out, o_in]
    } else {
        [u_in, o_in, u_out, o_out]
    };
    Ok(Crossing::new(id, slots))
}

/// Framing-parallel pushoff: blackboard parallel plus enough clasps to bring
/// lk(o, copy) from writhe(o) to framing(o).
pub fn framed_pushoff(d: &Diagram, o: ComponentId) -> Result<(Diagram, ComponentId, CopyInfo)> {
    let framing = d
        .component(o)
        .ok_or_else(|| Error::precondition(format!("unknown component {o}")))?
        .framing
        .as_int()
        .ok_or_else(|| Error::precondition(format!("component {o} is unframed")))?;
    let w = d.writhe(o);
    let (mut d2, copy, mut info) = parallel_copy(d, o)?;
    let t = framing - w;
    let s: i8 = if t >= 0 { 1 } else { -1 };
    for _ in 0..t.unsigned_abs() {
        let oa = d2.component(o).unwrap().arcs[0];
        let ca = d2.component(copy).unwrap().arcs[0];
        let (next, _) = clasp(&d2, ca, oa, s)?;
        // clasp subdivides oa and ca; map the new pieces home
        let ca_anchor = info.copy_parallel.get(&ca).copied().unwrap_or(ca);
        for comp in next.components() {
            for &a in &comp.arcs {
                if d2.component(comp.id).map(|c| c.arcs.contains(&a)) == Some(false) {
                    if comp.id == copy {
                        info.copy_parallel.entry(a).or_insert(ca_anchor);
                    } else {
                        info.arc_origin.entry(a).or_insert(oa);
                    }
                }
            }
        }
        d2 = next;
    }
    let got = linking_number(&d2, o, copy)?;
    if got != framing {
        return Err(Error::invariant(format!(
            "framed pushoff of {o}: lk = {got}, framing = {framing}"
        )));
    }
    Ok((d2, copy, info))
}

/// All candidate band routes between two components, shortest first: for each
/// pair of attach arcs and each side of the target arc, the arcs a band
/// between them must cross.  Reaching both sides of the target matters: the
/// attach orientation differs, and only one of the two admits a flat merge.
pub(super) fn band_route_candidates(
    d: &Diagram,
    from: ComponentId,
    to: ComponentId,
) -> Vec<(ArcId, ArcId, Vec<(ArcId, bool)>)> {
    let from_arcs: Vec<ArcId> = d.component(from).unwrap().arcs.clone();
    let mut cands = Vec::new();
    for &fa in &from_arcs {
        for (fa2, ta, crossed) in band_routes_from(d, fa, to) {
            cands.push((crossed.len(), fa2, ta, crossed));
        }
    }
    cands.sort_by(|a, b| (a.0, a.1, a.2, a.3.clone()).cmp(&(b.0, b.1, b.2, b.3.clone())));
    cands.dedup();
    cands.into_iter().map(|(_, fa, ta, c)| (fa, ta, c)).collect()
}

/// All shortest routes from one arc to each reachable (target arc, side).
fn band_routes_from(
    d: &Diagram,
    fa: ArcId,
    to: ComponentId,
) -> Vec<(ArcId, ArcId, Vec<(ArcId, bool)>)> {
    let faces = d.faces();
    let to_arcs: std::collections::BTreeSet<ArcId> =
        d.component(to).unwrap().arcs.iter().copied().collect();

    const OUTER: usize = usize::MAX;
    let node_of_arc = |a: ArcId| -> Vec<usize> {
        match faces.sides_of_arc(a) {
            Some((f, g)) => vec![f, g],
            None => vec![OUTER],
        }
    };
    let mut bridges: Vec<usize> = Vec::new();
    for p in 0..faces.pieces() {
        if let Some(f) = faces.outer_face(p) {
            bridges.push(f);
        }
    }

    use std::collections::{BTreeMap as Map, VecDeque};
    let mut parent: Map<usize, Option<(usize, Option<(ArcId, bool)>)>> = Map::new();
    let mut queue = VecDeque::new();
    for n in node_of_arc(fa) {
        if !parent.contains_key(&n) {
            parent.insert(n, None);
            queue.push_back(n);
        }
    }
    // full exploration
    while let Some(n) = queue.pop_front() {
        let mut neighbors: Vec<(usize, Option<(ArcId, bool)>)> = Vec::new();
        if n == OUTER {
            for &f in &bridges {
                neighbors.push((f, None));
            }
        } else {
            if bridges.contains(&n) {
                neighbors.push((OUTER, None));
            }
            for cyc in &faces.faces[n] {
                let a = cyc.0;
                if let Some((f, g)) = faces.sides_of_arc(a) {
                    let other = if f == n { g } else { f };
                    if !to_arcs.contains(&a) && a != fa {
                        neighbors.push((other, Some((a, f == n))));
                    }
                }
            }
        }
        for (m, via) in neighbors {
            if !parent.contains_key(&m) {
                parent.insert(m, Some((n, via)));
                queue.push_back(m);
            }
        }
    }
    let walk_back = |end: usize| -> Vec<(ArcId, bool)> {
        let mut crossed = Vec::new();
        let mut cur = end;
        loop {
            match parent[&cur] {
                None => break,
                Some((prev, via)) => {
                    if let Some(av) = via {
                        crossed.push(av);
                    }
                    cur = prev;
                }
            }
        }
        crossed.reverse();
        crossed
    };
    let mut out = Vec::new();
    for &ta in &to_arcs {
        for n in node_of_arc(ta) {
            if parent.contains_key(&n) {
                out.push((fa, ta, walk_back(n)));
            }
        }
    }
    out
}

/// Find a band route from a component to another: the pair of attach arcs and
/// the arcs the band must cross, walking the face graph (faces of different
/// connected pieces are bridged through their lowest faces, since a planar
/// embedding may put any face outside).
pub fn band_route(
    d: &Diagram,
    from: ComponentId,
    to: ComponentId,
) -> Result<(ArcId, ArcId, Vec<(ArcId, bool)>)> {
    let from_arcs: Vec<ArcId> = d.component(from).unwrap().arcs.clone();
    band_route_impl(d, &from_arcs, to)
}

fn band_route_impl(
    d: &Diagram,
    from_arcs: &[ArcId],
    to: ComponentId,
) -> Result<(ArcId, ArcId, Vec<(ArcId, bool)>)> {
    let faces = d.faces();
    let to_arcs: std::collections::BTreeSet<ArcId> =
        d.component(to).unwrap().arcs.iter().copied().collect();

    const OUTER: usize = usize::MAX;
    let node_of_arc = |a: ArcId| -> Vec<usize> {
        match faces.sides_of_arc(a) {
            Some((f, g)) => vec![f, g],
            None => vec![OUTER],
        }
    };

    let mut bridges: Vec<usize> = Vec::new();
    for p in 0..faces.pieces() {
        if let Some(f) = faces.outer_face(p) {
            bridges.push(f);
        }
    }

    use std::collections::{BTreeMap as Map, VecDeque};
    let mut parent: Map<usize, Option<(usize, Option<(ArcId, bool)>)>> = Map::new();
    let mut queue = VecDeque::new();
    let mut start_arc: Map<usize, ArcId> = Map::new();
    for &a in from_arcs {
        for n in node_of_arc(a) {
            if !parent.contains_key(&n) {
                parent.insert(n, None);
                start_arc.insert(n, a);
                queue.push_back(n);
            }
        }
    }
    let mut goal: Option<(usize, ArcId)> = None;
    'bfs: while let Some(n) = queue.pop_front() {
        for &a in &to_arcs {
            if node_of_arc(a).contains(&n) {
                goal = Some((n, a));
                break 'bfs;
            }
        }
        let mut neighbors: Vec<(usize, Option<(ArcId, bool)>)> = Vec::new();
        if n == OUTER {
            for &f in &bridges {
                neighbors.push((f, None));
            }
        } else {
            if bridges.contains(&n) {
                neighbors.push((OUTER, None));
            }
            for cyc in &faces.faces[n] {
                let a = cyc.0;
                if let Some((f, g)) = faces.sides_of_arc(a) {
                    let other = if f == n { g } else { f };
                    if !to_arcs.contains(&a) && !from_arcs.contains(&a) {
                        // record whether we enter from the forward-dart side
                        neighbors.push((other, Some((a, f == n))));
                    }
                }
            }
        }
        for (m, via) in neighbors {
            if !parent.contains_key(&m) {
                parent.insert(m, Some((n, via)));
                queue.push_back(m);
            }
        }
    }
    let Some((end, to_arc)) = goal else {
        return Err(Error::precondition(format!(
            "no band route to component {to}"
        )));
    };
    let mut crossed: Vec<(ArcId, bool)> = Vec::new();
    let mut cur = end;
    loop {
        match parent[&cur] {
            None => break,
            Some((prev, via)) => {
                if let Some(av) = via {
                    crossed.push(av);
                }
                cur = prev;
            }
        }
    }
    crossed.reverse();
    let from_arc = start_arc[&cur];
    Ok((from_arc, to_arc, crossed))
}

/// Record of a performed slide, enough to audit the matrix congruence.
#[derive(Debug, Clone)]
pub struct SlideRecord {
    pub slid: ComponentId,
    pub over: ComponentId,
    pub sign: i8,
    pub lk_before: i64,
    /// Arc provenance: arcs of the result that descend from arcs of the
    /// input (absent arcs persist unchanged).  Slid material (the pushoff
    /// and the band) anchors to the band attachment arc.
    pub arc_origin: BTreeMap<ArcId, ArcId>,
}

/// Slide `slid` over the surgery component `over`: replace `slid` by its band
/// sum with a framing-parallel pushoff of `over`.  Linking numbers update by
/// lk'(slid, x) = lk(slid, x) + sign * lk(over, x); a framed slid component's
/// framing becomes framing(slid) + framing(over) + 2 * sign * lk(slid, over).
pub fn handle_slide(
    d: &Diagram,
    slid: ComponentId,
    over: ComponentId,
    sign: i8,
) -> Result<(Diagram, SlideRecord)> {
    if slid == over {
        return Err(Error::precondition("cannot slide a component over itself"));
    }
    let over_comp = d
        .component(over)
        .ok_or_else(|| Error::precondition(format!("unknown component {over}")))?;
    if over_comp.role != Role::Surgery {
        return Err(Error::precondition(format!(
            "slides go over surgery components; component {over} has role {}",
            over_comp.role.as_str()
        )));
    }
    let slid_comp = d
        .component(slid)
        .ok_or_else(|| Error::precondition(format!("unknown component {slid}")))?
        .clone();
    let lk_before = linking_number(d, slid, over)?;
    let g0 = d.genus();

    let (mut d1, copy, mut info) = framed_pushoff(d, over)?;
    if sign < 0 {
        d1 = super::builder::reverse_component(&d1, copy)?;
    }

    // Enumerate attach-pair candidates by band length; for each, try the
    // planar realizations, including the half-twisted merge for attach arcs
    // that run parallel along their shared face.  If every candidate is one
    // half-twist off, a kink on the pushoff (an isotopy; framings are
    // stored) flips the available attach parity.
    let mut out = None;
    let mut from_arc = ArcId(0);
    'kinks: for _kink_round in 0..3 {
        'candidates: for (fa, ta, crossed) in band_route_candidates(&d1, slid, copy) {
            for edge_left in [true, false] {
                for rank_swap in [false, true] {
                    let cand = splice(&d1, slid, copy, fa, ta, &crossed, edge_left, rank_swap);
                    if let Ok((c, prov)) = cand {
                        if c.genus() == g0 {
                            out = Some((c, prov));
                            from_arc = fa;
                            break 'candidates;
                        }
                    }
                }
            }
            if crossed.is_empty() {
                for edge1_over in [true, false] {
                    for from_left in [true, false] {
                        let cand = super::splice::splice_twisted(
                            &d1, slid, copy, fa, ta, edge1_over, from_left,
                        );
                        if let Ok((c, prov)) = cand {
                            if c.genus() == g0 {
                                out = Some((c, prov));
                                from_arc = fa;
                                break 'candidates;
                            }
                        }
                    }
                }
            }
        }
        if out.is_some() {
            break 'kinks;
        }
        let ka = d1.component(copy).unwrap().arcs[0];
        let (kinked, _) = super::ops::r1_insert(&d1, ka, true)?;
        // the kink's new arcs are copy material too
        let ka_anchor = info.copy_parallel.get(&ka).copied().unwrap_or(ka);
        let old_arcs: std::collections::BTreeSet<ArcId> =
            d1.component(copy).unwrap().arcs.iter().copied().collect();
        for &a in &kinked.component(copy).unwrap().arcs {
            if !old_arcs.contains(&a) {
                info.copy_parallel.insert(a, ka_anchor);
            }
        }
        d1 = kinked;
    }
    let (mut d2, splice_prov) = out.ok_or_else(|| {
        Error::invariant(format!("no planar band splice joining {slid} to the pushoff"))
    })?;

    // Compose provenance: result arc -> d1 arc -> d arc.  Pushoff material
    // anchors to the band attachment on the slid component.
    let mut arc_origin: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let anchor_in_d = {
        let mut a = from_arc;
        while let Some(&b) = info.arc_origin.get(&a) {
            if b == a {
                break;
            }
            a = b;
        }
        a
    };
    let resolve_d1 = |a: ArcId| -> ArcId {
        if info.copy_parallel.contains_key(&a) {
            anchor_in_d
        } else {
            let mut cur = a;
            let mut guard = 0;
            while let Some(&b) = info.arc_origin.get(&cur) {
                if b == cur || guard > info.arc_origin.len() {
                    break;
                }
                cur = b;
                guard += 1;
            }
            cur
        }
    };
    for c in d2.components() {
        for &a in &c.arcs {
            let in_d1 = splice_prov.get(&a).copied().unwrap_or(a);
            let in_d = resolve_d1(in_d1);
            if in_d != a {
                arc_origin.insert(a, in_d);
            }
        }
    }

    // framing update for a framed slid component
    if let Some(f) = slid_comp.framing.as_int() {
        let over_f = over_comp.framing.as_int().unwrap();
        let nf = f + over_f + 2 * sign as i64 * lk_before;
        let comps: Vec<Component> = d2
            .components()
            .cloned()
            .map(|mut c| {
                if c.id == slid {
                    c.framing = Framing::Framed(nf);
                }
                c
            })
            .collect();
        d2 = Diagram::new(comps, d2.crossings().cloned().collect(), d2.metadata().clone())?;
    }

    Ok((d2, SlideRecord { slid, over, sign, lk_before, arc_origin }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::homology::{is_homology_sphere, linking_framing_matrix, RoleFilter};

    #[test]
    fn parallel_copy_of_crossingless_unknot() {
        let d = catalog::unknot(Role::Surgery, Framing::Framed(0));
        let (d2, copy, _) = parallel_copy(&d, ComponentId(1)).unwrap();
        assert_eq!(d2.components().count(), 2);
        assert_eq!(linking_number(&d2, ComponentId(1), copy).unwrap(), 0);
    }

    #[test]
    fn framed_pushoff_has_framing_linking() {
        for f in [-2i64, 0, 1, 3] {
            let d = catalog::unknot(Role::Surgery, Framing::Framed(f));
            let (d2, copy, _) = framed_pushoff(&d, ComponentId(1)).unwrap();
            assert_eq!(linking_number(&d2, ComponentId(1), copy).unwrap(), f);
            assert_eq!(d2.genus(), 0, "framing clasps stay planar");
        }
    }

    #[test]
    fn parallel_copy_of_trefoil() {
        let d = catalog::set_role(
            &catalog::trefoil(),
            ComponentId(1),
            Role::Surgery,
            Framing::Framed(1),
        );
        let (d2, copy, info) = parallel_copy(&d, ComponentId(1)).unwrap();
        assert_eq!(d2.crossings().count(), 12);
        assert_eq!(d2.genus(), 0, "parallel copy stays planar");
        assert_eq!(linking_number(&d2, ComponentId(1), copy).unwrap(), 3);
        assert_eq!(d2.writhe(copy), 3);
        // provenance: every rebuilt arc of the original maps to an old arc
        let orig = d2.component(ComponentId(1)).unwrap();
        for &a in &orig.arcs {
            let root = info.arc_origin.get(&a).copied().unwrap_or(a);
            assert!(root.0 <= 6, "arc {a} should anchor to an original arc");
        }
    }

    #[test]
    fn framed_pushoff_of_poincare_trefoil() {
        let d = catalog::poincare_sphere();
        let (d2, copy, _) = framed_pushoff(&d, ComponentId(1)).unwrap();
        assert_eq!(linking_number(&d2, ComponentId(1), copy).unwrap(), 1);
        assert_eq!(d2.genus(), 0);
    }

    #[test]
    fn slide_zero_framed_split_unknots() {
        let text = "\
component 1 role=surgery framing=0 arcs=1
component 2 role=surgery framing=0 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        let (d2, _) = handle_slide(&d, ComponentId(1), ComponentId(2), 1).unwrap();
        assert_eq!(d2.components().count(), 2);
        let c1 = d2.component(ComponentId(1)).unwrap();
        assert_eq!(c1.framing.as_int(), Some(0));
        assert_eq!(d2.genus(), 0);
        assert_eq!(linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(), 0);
    }

    #[test]
    fn slide_over_hopf_partner_updates_framing() {
        let mut d = catalog::hopf_positive();
        d = catalog::set_role(&d, ComponentId(1), Role::Surgery, Framing::Framed(0));
        d = catalog::set_role(&d, ComponentId(2), Role::Surgery, Framing::Framed(0));
        let (d2, _) = handle_slide(&d, ComponentId(1), ComponentId(2), 1).unwrap();
        assert_eq!(d2.component(ComponentId(1)).unwrap().framing.as_int(), Some(2));
        assert_eq!(linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(), 1);
        assert_eq!(d2.genus(), 0);
    }

    #[test]
    fn slide_preserves_homology_sphere() {
        let tre = catalog::poincare_sphere();
        let mut text = tre.serialize();
        text.push_str("component 9 role=surgery framing=1 arcs=99\n");
        let d = Diagram::parse(&text).unwrap();
        assert!(is_homology_sphere(&d).unwrap());
        let before = linking_framing_matrix(&d, RoleFilter::Framed).unwrap();
        let (d2, _) = handle_slide(&d, ComponentId(9), ComponentId(1), 1).unwrap();
        assert!(is_homology_sphere(&d2).unwrap(), "slides preserve |det|");
        let after = linking_framing_matrix(&d2, RoleFilter::Framed).unwrap();
        assert_eq!(before.rows, after.rows);
        assert_eq!(d2.genus(), 0);
    }

    #[test]
    fn slide_updates_third_party_linking() {
        // chain: 1 - 2 - 3 with lk(1,2)=1, lk(2,3)=1, lk(1,3)=0;
        // sliding 1 over 2 adds lk(2,x) to lk(1,x).
        let text = "\
component 1 role=surgery framing=0 arcs=1
component 2 role=surgery framing=0 arcs=2
component 3 role=surgery framing=0 arcs=3
";
        let mut d = Diagram::parse(text).unwrap();
        let a1 = d.component(ComponentId(1)).unwrap().arcs[0];
        let a2 = d.component(ComponentId(2)).unwrap().arcs[0];
        (d, _) = clasp(&d, a1, a2, 1).unwrap();
        let a2 = d.component(ComponentId(2)).unwrap().arcs[0];
        let a3 = d.component(ComponentId(3)).unwrap().arcs[0];
        (d, _) = clasp(&d, a3, a2, 1).unwrap();
        assert_eq!(linking_number(&d, ComponentId(1), ComponentId(2)).unwrap(), 1);
        assert_eq!(linking_number(&d, ComponentId(2), ComponentId(3)).unwrap(), 1);
        assert_eq!(linking_number(&d, ComponentId(1), ComponentId(3)).unwrap(), 0);

        for sign in [1i8, -1] {
            let (d2, _) = handle_slide(&d, ComponentId(1), ComponentId(2), sign).unwrap();
            assert_eq!(
                linking_number(&d2, ComponentId(1), ComponentId(3)).unwrap(),
                sign as i64,
                "lk(1,3) picks up sign * lk(2,3)"
            );
            assert_eq!(
                linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(),
                1 + sign as i64 * 0, // + sign * framing(2)
            );
            assert_eq!(d2.genus(), 0);
        }
    }
}
