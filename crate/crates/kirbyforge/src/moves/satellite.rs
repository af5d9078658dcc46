//! The satellite construction: thread a pattern drawn in an annulus along a
//! 0-framed parallel family of a companion knot.
//!
//! The pattern file is an ordinary diagram whose single pattern component
//! carries an `annulus_cut` metadata entry: the ordered, signed list of arcs
//! crossing the annulus' meridian cut, e.g. `+3,-7`.  The signed count is the
//! winding number.  Gluing replaces each cut arc by a full pass along one
//! strand of the cable; the cable is built from 0-framed pushoffs so that the
//! companion's framing does not leak into the satellite.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, ComponentId, Diagram, Framing, Role};
use crate::error::{Error, Result};

use super::builder::reverse_component;
use super::splice::splice;

/// Parsed annulus-cut marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusCut {
    /// (arc, direction): +1 runs with the annulus core, -1 against.
    pub strands: Vec<(ArcId, i8)>,
}

impl AnnulusCut {
    pub fn winding(&self) -> i64 {
        self.strands.iter().map(|&(_, s)| s as i64).sum()
    }

    pub fn parse(s: &str) -> Result<AnnulusCut> {
        let mut strands = Vec::new();
        if s.trim().is_empty() {
            return Ok(AnnulusCut { strands });
        }
        for tok in s.split(',') {
            let tok = tok.trim();
            let (sign, num) = match tok.as_bytes().first() {
                Some(b'+') => (1i8, &tok[1..]),
                Some(b'-') => (-1i8, &tok[1..]),
                _ => (1i8, tok),
            };
            let id: u32 = num
                .parse()
                .map_err(|_| Error::precondition(format!("bad annulus_cut entry `{tok}`")))?;
            strands.push((ArcId(id), sign));
        }
        Ok(AnnulusCut { strands })
    }

    pub fn to_string(&self) -> String {
        self.strands
            .iter()
            .map(|&(a, s)| format!("{}{}", if s >= 0 { "+" } else { "-" }, a))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Read the cut marking off a pattern diagram.
pub fn annulus_cut(pattern: &Diagram) -> Result<AnnulusCut> {
    let Some(raw) = pattern.metadata().get("annulus_cut") else {
        return Ok(AnnulusCut { strands: Vec::new() });
    };
    let cut = AnnulusCut::parse(raw)?;
    for &(a, _) in &cut.strands {
        if pattern.arc_component(a).is_none() {
            return Err(Error::precondition(format!(
                "annulus_cut references unknown arc {a}"
            )));
        }
    }
    Ok(cut)
}

/// Satellite of `companion` with the given pattern.  Returns the satellite
/// diagram (a single pattern component) and the winding number.
pub fn satellite(pattern: &Diagram, companion: &Diagram) -> Result<(Diagram, i64)> {
    let pat_comps = pattern.components_with_role(Role::Pattern);
    if pat_comps.len() != 1 || pattern.components().count() != 1 {
        return Err(Error::precondition(
            "pattern must be a single pattern component drawn in an annulus",
        ));
    }
    let pat_id = pat_comps[0];
    if companion.components().count() != 1 {
        return Err(Error::precondition("companion must have exactly one component"));
    }
    let comp_id = companion.component_ids()[0];
    let cut = annulus_cut(pattern)?;
    let winding = cut.winding();
    let s = cut.strands.len();

    if s == 0 {
        // the pattern lies in a disk inside the annulus: the companion is
        // irrelevant and the satellite is the pattern itself as a knot
        let mut out = pattern.clone();
        out.metadata_mut().remove("annulus_cut");
        return Ok((out.canonicalize(), winding));
    }

    // Assemble the combined diagram: pattern plus a 0-framed companion,
    // relabeled apart.  The companion core and its pushoffs become the cable.
    let combined = merge_disjoint(pattern, companion, pat_id, comp_id)?;
    let cable_core = combined.1;
    let mut d = combined.0;
    // the cable is built on a 0-framed surgery-role scaffold
    d = crate::diagram::catalog::set_role(&d, cable_core, Role::Surgery, Framing::Framed(0));

    // cable strands, aligned at the image of the companion's first arc
    let mut strands: Vec<ComponentId> = vec![cable_core];
    let mut attach: BTreeMap<ComponentId, ArcId> = BTreeMap::new();
    attach.insert(cable_core, combined.2);
    for _ in 1..s {
        let prev = *strands.last().unwrap();
        let (d2, copy, info) = super::slide::framed_pushoff(&d, prev)?;
        d = d2;
        // track the attach point through the copy
        let prev_attach = attach[&prev];
        let resolved_prev = resolve_attach(&d, prev, prev_attach, &info.arc_origin);
        attach.insert(prev, resolved_prev);
        let mut copy_attach = None;
        for (&ca, &oa) in &info.copy_parallel {
            if oa == resolved_prev && d.component(copy).map(|c| c.arcs.contains(&ca)) == Some(true)
            {
                copy_attach = Some(ca);
                break;
            }
        }
        let copy_attach = copy_attach
            .unwrap_or_else(|| d.component(copy).unwrap().arcs[0]);
        attach.insert(copy, copy_attach);
        strands.push(copy);
    }

    // splice each cut strand of the pattern into a cable strand, trying the
    // two across-cable orders
    for order_rev in [false, true] {
        let mut trial = d.clone();
        let mut ok = true;
        let order: Vec<ComponentId> = if order_rev {
            strands.iter().rev().copied().collect()
        } else {
            strands.clone()
        };
        for (i, &(cut_arc, dir)) in cut.strands.iter().enumerate() {
            let target = order[i];
            let mut t = trial.clone();
            if dir < 0 {
                t = match reverse_component(&t, target) {
                    Ok(x) => x,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                };
            }
            let to_arc = {
                let c = t.component(target).unwrap();
                let a = attach.get(&target).copied().unwrap_or(c.arcs[0]);
                if c.arcs.contains(&a) {
                    a
                } else {
                    c.arcs[0]
                }
            };
            let mut merged = None;
            for (fa, ta) in [(cut_arc, to_arc)] {
                if let Ok((m, _)) = splice(&t, pat_id, target, fa, ta, &[], true, false) {
                    if m.genus() == 0 {
                        merged = Some(m);
                        break;
                    }
                }
                // parallel attach orientation: try the twisted merge
                for e1o in [true, false] {
                    for fl in [true, false] {
                        if let Ok((m, _)) =
                            super::splice::splice_twisted(&t, pat_id, target, fa, ta, e1o, fl)
                        {
                            if m.genus() == 0 {
                                merged = Some(m);
                                break;
                            }
                        }
                    }
                    if merged.is_some() {
                        break;
                    }
                }
            }
            match merged {
                Some(m) => trial = m,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && trial.genus() == 0 {
            let mut out = trial;
            out.metadata_mut().remove("annulus_cut");
            // the satellite is a fresh diagram: an unframed pattern knot
            // with crossings numbered from 1
            out = crate::diagram::catalog::set_role(&out, pat_id, Role::Pattern, Framing::Unframed);
            out = renumber_crossings(&out)?;
            return Ok((out.canonicalize(), winding));
        }
    }
    Err(Error::invariant("no planar cable gluing found for the pattern"))
}

fn renumber_crossings(d: &Diagram) -> Result<Diagram> {
    let mut next = 1u32;
    let mut crossings = Vec::new();
    for x in d.crossings() {
        let mut x2 = x.clone();
        x2.id = crate::diagram::CrossingId(next);
        next += 1;
        crossings.push(x2);
    }
    Diagram::new(d.components().cloned().collect(), crossings, d.metadata().clone())
}

fn resolve_attach(
    d: &Diagram,
    comp: ComponentId,
    attach: ArcId,
    origin: &BTreeMap<ArcId, ArcId>,
) -> ArcId {
    let arcs = &d.component(comp).unwrap().arcs;
    if arcs.contains(&attach) {
        return attach;
    }
    // find a new arc whose origin chain reaches the old attach arc
    for &a in arcs {
        let mut cur = a;
        let mut guard = 0;
        loop {
            if cur == attach {
                return a;
            }
            match origin.get(&cur) {
                Some(&b) if b != cur && guard < origin.len() => {
                    cur = b;
                    guard += 1;
                }
                _ => break,
            }
        }
    }
    arcs[0]
}

/// Put two diagrams side by side with disjoint ids; returns the combined
/// diagram, the second diagram's component id after relabeling, and the image
/// of the second diagram's first arc.
fn merge_disjoint(
    a: &Diagram,
    b: &Diagram,
    _a_comp: ComponentId,
    b_comp: ComponentId,
) -> Result<(Diagram, ComponentId, ArcId)> {
    let arc_off = a.fresh_arc_id();
    let comp_off = a.fresh_component_id();
    let cross_off = a.fresh_crossing_id();
    let mut comps: Vec<_> = a.components().cloned().collect();
    let mut new_b_comp = None;
    let mut first_arc = None;
    for c in b.components() {
        let mut c2 = c.clone();
        c2.id = ComponentId(c.id.0 + comp_off);
        c2.arcs = c.arcs.iter().map(|x| ArcId(x.0 + arc_off)).collect();
        if c.id == b_comp {
            new_b_comp = Some(c2.id);
            first_arc = c2.arcs.first().copied();
        }
        comps.push(c2);
    }
    let mut crossings: Vec<_> = a.crossings().cloned().collect();
    for x in b.crossings() {
        let mut x2 = x.clone();
        x2.id = crate::diagram::CrossingId(x.id.0 + cross_off);
        for s in &mut x2.slots {
            *s = ArcId(s.0 + arc_off);
        }
        crossings.push(x2);
    }
    let d = Diagram::new(comps, crossings, a.metadata().clone())?;
    Ok((
        d,
        new_b_comp.ok_or_else(|| Error::precondition("companion component missing"))?,
        first_arc.ok_or_else(|| Error::precondition("companion has no arcs"))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;

    fn core_pattern() -> Diagram {
        let mut d = catalog::unknot(Role::Pattern, Framing::Unframed);
        d.metadata_mut().insert("annulus_cut".into(), "+1".into());
        d
    }

    #[test]
    fn winding_numbers() {
        assert_eq!(annulus_cut(&core_pattern()).unwrap().winding(), 1);
        let mut disk = catalog::trefoil();
        disk.metadata_mut().remove("annulus_cut");
        assert_eq!(annulus_cut(&disk).unwrap().winding(), 0);
    }

    #[test]
    fn core_pattern_gives_companion_back() {
        let p = core_pattern();
        let k = catalog::trefoil();
        let (sat, w) = satellite(&p, &k).unwrap();
        assert_eq!(w, 1);
        // canonically equal to the companion as a pattern knot
        assert_eq!(sat.serialize(), k.canonicalize().serialize());
    }

    #[test]
    fn disk_pattern_ignores_companion() {
        let mut p = catalog::trefoil();
        p.metadata_mut().insert("annulus_cut".into(), "".into());
        let k = catalog::figure_eight();
        let (sat, w) = satellite(&p, &k).unwrap();
        assert_eq!(w, 0);
        assert_eq!(sat.serialize(), catalog::trefoil().canonicalize().serialize());
    }

    #[test]
    fn reversed_core_still_threads() {
        let mut p = catalog::unknot(Role::Pattern, Framing::Unframed);
        p.metadata_mut().insert("annulus_cut".into(), "-1".into());
        let k = catalog::trefoil();
        let (sat, w) = satellite(&p, &k).unwrap();
        assert_eq!(w, -1);
        assert_eq!(sat.components().count(), 1);
        assert_eq!(sat.genus(), 0);
        assert_eq!(sat.crossings().count(), 3, "still a trefoil diagram");
    }

    #[test]
    fn torus_pattern_on_unknot_is_its_underlying_knot() {
        // the trefoil drawn as the (2,3) torus pattern: the braid closure's
        // two wrap-around arcs cross the annulus cut with winding 2, and
        // filling the annulus with an unknot gives the trefoil back
        let mut p = catalog::braid_closure(2, &[1, 1, 1]);
        p.metadata_mut().insert("annulus_cut".into(), "+1,+2".into());
        let k = catalog::unknot(Role::Pattern, Framing::Unframed);
        let (sat, w) = satellite(&p, &k).unwrap();
        assert_eq!(w, 2);
        assert_eq!(sat.components().count(), 1);
        assert_eq!(sat.genus(), 0);
        assert_eq!(sat.crossings().count(), 3);
        assert_eq!(
            sat.serialize(),
            catalog::trefoil().canonicalize().serialize()
        );
    }
}
