//! Stock diagrams and a braid-closure builder, used by tests, docs, and the
//! oracle harness.

use std::collections::BTreeMap;

use super::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram, Framing, Role};

/// Close an `n`-strand braid word into a diagram.  Letters are `+i` / `-i`
/// for a crossing between strand positions `i` and `i+1` (1-based); a positive
/// letter produces a crossing of sign `+1`.  Components come out with role
/// `pattern` and no framing; use [`set_role`] to retag them.
pub fn braid_closure(strands: u32, word: &[i32]) -> Diagram {
    assert!(strands >= 1);
    let mut next_arc = 1u32;
    let mut fresh = || {
        let a = ArcId(next_arc);
        next_arc += 1;
        a
    };
    let init: Vec<ArcId> = (0..strands).map(|_| fresh()).collect();
    let mut cur = init.clone();
    let mut succ: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let mut crossings = Vec::new();
    for (k, &letter) in word.iter().enumerate() {
        let i = letter.unsigned_abs() as usize;
        assert!(i >= 1 && (i as u32) < strands, "letter out of range");
        let u = cur[i - 1];
        let v = cur[i];
        let u2 = fresh();
        let v2 = fresh();
        succ.insert(u, u2);
        succ.insert(v, v2);
        let slots = if letter > 0 {
            // strand from the right passes over: positive crossing
            [u, v2, u2, v]
        } else {
            [v, u, v2, u2]
        };
        crossings.push(Crossing::new(CrossingId(k as u32 + 1), slots));
        cur[i - 1] = v2;
        cur[i] = u2;
    }
    // Closure: the final arc at each position is the initial one.
    let mut subst: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for p in 0..strands as usize {
        if cur[p] != init[p] {
            subst.insert(cur[p], init[p]);
        }
    }
    let sub = |a: ArcId| subst.get(&a).copied().unwrap_or(a);
    for x in &mut crossings {
        for s in &mut x.slots {
            *s = sub(*s);
        }
    }
    let succ: BTreeMap<ArcId, ArcId> =
        succ.into_iter().map(|(a, b)| (sub(a), sub(b))).collect();

    // Partition arcs into cycles.
    let mut comps = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut all_arcs: Vec<ArcId> = init.clone();
    all_arcs.extend(succ.keys().copied());
    all_arcs.sort();
    all_arcs.dedup();
    let mut cid = 1u32;
    for &start in &all_arcs {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut a = start;
        loop {
            seen.insert(a);
            cycle.push(a);
            a = succ.get(&a).copied().unwrap_or(a);
            if a == start {
                break;
            }
        }
        comps.push(Component::new(ComponentId(cid), Role::Pattern, Framing::Unframed, cycle));
        cid += 1;
    }
    Diagram::new(comps, crossings, BTreeMap::new()).expect("braid closure is always valid")
}

/// Rebuild a diagram with one component's role/framing changed.
pub fn set_role(d: &Diagram, comp: ComponentId, role: Role, framing: Framing) -> Diagram {
    let comps = d
        .components()
        .map(|c| {
            let mut c2 = c.clone();
            if c.id == comp {
                c2.role = role;
                c2.framing = framing;
            }
            c2
        })
        .collect();
    Diagram::new(comps, d.crossings().cloned().collect(), d.metadata().clone())
        .expect("role change preserves validity")
}

/// A crossingless unknot.
pub fn unknot(role: Role, framing: Framing) -> Diagram {
    let c = Component::new(ComponentId(1), role, framing, vec![ArcId(1)]);
    Diagram::new(vec![c], vec![], BTreeMap::new()).unwrap()
}

/// Right-handed trefoil (all crossings +1), as a pattern knot.
pub fn trefoil() -> Diagram {
    braid_closure(2, &[1, 1, 1])
}

/// Left-handed trefoil (all crossings -1).
pub fn trefoil_left() -> Diagram {
    braid_closure(2, &[-1, -1, -1])
}

/// The standard 4-crossing figure-eight diagram.
pub fn figure_eight() -> Diagram {
    braid_closure(3, &[1, -2, 1, -2])
}

/// Positive Hopf link (two components, both crossings +1).
pub fn hopf_positive() -> Diagram {
    braid_closure(2, &[1, 1])
}

/// Negative (mirror) Hopf link.
pub fn hopf_negative() -> Diagram {
    braid_closure(2, &[-1, -1])
}

/// The (2, 2k) torus link: 2k crossings, linking number k.
pub fn torus_2_2k(k: u32) -> Diagram {
    braid_closure(2, &vec![1; 2 * k as usize])
}

/// Surgery presentation of the Poincare sphere: +1-framed right trefoil.
pub fn poincare_sphere() -> Diagram {
    set_role(&trefoil(), ComponentId(1), Role::Surgery, Framing::Framed(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_signs() {
        let d = trefoil();
        assert_eq!(d.components().count(), 1);
        assert_eq!(d.crossings().count(), 3);
        for x in d.crossings() {
            assert_eq!(d.sign(x.id).unwrap(), 1);
        }
        assert_eq!(d.writhe(ComponentId(1)), 3);
    }

    #[test]
    fn trefoil_matches_hand_pd() {
        // Hand-traced standard PD of the right trefoil, arcs 1..6 in traversal
        // order, slots counterclockwise from the incoming under-strand.
        let text = "\
component 1 role=pattern framing=none arcs=1,2,3,4,5,6
crossing 1 slots=1,5,2,4 under_in=1
crossing 2 slots=3,1,4,6 under_in=3
crossing 3 slots=5,3,6,2 under_in=5
";
        let d = Diagram::parse(text).unwrap();
        assert_eq!(d.crossings().count(), 3);
        for x in d.crossings() {
            assert_eq!(d.sign(x.id).unwrap(), 1, "crossing {} sign", x.id);
        }
        assert_eq!(d.genus(), 0);
    }

    #[test]
    fn mirror_negates_signs() {
        let d = trefoil_left();
        for x in d.crossings() {
            assert_eq!(d.sign(x.id).unwrap(), -1);
        }
    }

    #[test]
    fn hopf_signs() {
        let d = hopf_positive();
        assert_eq!(d.components().count(), 2);
        let signs: Vec<i8> = d.crossings().map(|x| d.sign(x.id).unwrap()).collect();
        assert_eq!(signs, vec![1, 1]);
        let m = hopf_negative();
        let signs: Vec<i8> = m.crossings().map(|x| m.sign(x.id).unwrap()).collect();
        assert_eq!(signs, vec![-1, -1]);
    }

    #[test]
    fn figure_eight_writhe_zero() {
        let d = figure_eight();
        assert_eq!(d.components().count(), 1);
        assert_eq!(d.crossings().count(), 4);
        assert_eq!(d.writhe(ComponentId(1)), 0);
        assert_eq!(d.genus(), 0);
    }

    #[test]
    fn diagrams_are_planar() {
        for d in [trefoil(), figure_eight(), hopf_positive(), torus_2_2k(2)] {
            assert_eq!(d.genus(), 0);
        }
    }

    #[test]
    fn roundtrip_identity() {
        for d in [trefoil(), figure_eight(), hopf_positive()] {
            let text = d.serialize();
            let d2 = Diagram::parse(&text).unwrap();
            assert_eq!(d2.serialize(), text);
            assert_eq!(d2.hash(), d.hash());
        }
    }

    #[test]
    fn nonrealizable_gauss_sequence_has_positive_genus() {
        // The passage sequence 1,2,1,3,2,3 violates the Gauss parity
        // criterion (crossing 1 interlaces only crossing 2), so no rotation
        // system for it embeds in the plane.
        let text = "\
component 1 role=pattern framing=none arcs=1,2,3,4,5,6
crossing 1 slots=2,6,3,1 under_in=2
crossing 2 slots=4,1,5,2 under_in=4
crossing 3 slots=5,3,6,4 under_in=5
";
        let d = Diagram::parse(text).unwrap();
        assert!(d.genus() >= 1, "genus = {}", d.genus());
    }

    #[test]
    fn alternating_123123_sequence_is_the_trefoil() {
        // The alternating sequence on passages 1,2,3,1,2,3 is a trefoil
        // diagram, so its rotation system is planar.
        let d = trefoil();
        let code = d.gauss_code(ComponentId(1));
        let overs: Vec<bool> = code.iter().map(|&(_, o, _)| o).collect();
        assert_eq!(overs, vec![false, true, false, true, false, true]);
        assert_eq!(d.genus(), 0);
    }
}
