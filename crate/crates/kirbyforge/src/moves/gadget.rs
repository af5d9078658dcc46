//! The crossing-change gadget: 0-framed surgery on a pair of helper curves.
//!
//! Given two opposite-sign crossings where the same pattern strand passes
//! over the same surgery component, insert a 0-framed curve `alpha` that
//! encircles the surgery strand at both sites (rings joined by a corridor
//! through the face graph, so the pair need not be adjacent) and a 0-framed
//! meridian `beta` of `alpha`.  Surgery on the pair changes exactly those two
//! crossings; resolving removes the helpers and flips the pair, which is
//! verified rather than assumed.

use crate::diagram::{ArcId, ComponentId, CrossingId, Diagram, Framing, Role};
use crate::error::{Error, Result};
use crate::homology::linking_number;

use super::builder::{delete_components, flip_crossing, reverse_component};
use super::ops::{route_component, Crossed, RouteStep};

/// What `gadget_insert` adds, kept for the resolve step and the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetHandle {
    pub alpha: ComponentId,
    pub beta: ComponentId,
    pub site: (CrossingId, CrossingId),
    /// Crossings of alpha, in route order.
    pub alpha_crossings: Vec<CrossingId>,
    /// Crossings of beta (both with alpha).
    pub beta_crossings: Vec<CrossingId>,
    /// Subdivision provenance from the insert: new arc piece -> host arc.
    pub piece_origin: std::collections::BTreeMap<ArcId, ArcId>,
}

/// Validated description of an insertion site.
struct Site {
    #[allow(dead_code)]
    pattern: ComponentId,
    #[allow(dead_code)]
    surgery: ComponentId,
    /// surgery arcs at the first crossing (under-in, under-out)
    s1: (ArcId, ArcId),
    /// surgery arcs at the second crossing
    s2: (ArcId, ArcId),
}

fn check_site(d: &Diagram, pair: (CrossingId, CrossingId)) -> Result<Site> {
    let (x1, x2) = pair;
    if x1 == x2 {
        return Err(Error::precondition("gadget needs two distinct crossings"));
    }
    let c1 = d
        .crossing(x1)
        .ok_or_else(|| Error::precondition(format!("unknown crossing {x1}")))?;
    let c2 = d
        .crossing(x2)
        .ok_or_else(|| Error::precondition(format!("unknown crossing {x2}")))?;
    let (u1, o1) = d.strands(c1);
    let (u2, o2) = d.strands(c2);
    if o1 != o2 || u1 != u2 {
        return Err(Error::precondition(
            "gadget crossings must involve the same over and under components",
        ));
    }
    let over_role = d.component(o1).unwrap().role;
    let under_role = d.component(u1).unwrap().role;
    if over_role != Role::Pattern || under_role != Role::Surgery {
        return Err(Error::precondition(
            "gadget crossings must have a pattern strand over a surgery strand",
        ));
    }
    let s1 = d.sign(x1)?;
    let s2 = d.sign(x2)?;
    if s1 == s2 {
        return Err(Error::precondition(
            "gadget crossings must have opposite signs",
        ));
    }
    Ok(Site {
        pattern: o1,
        surgery: u1,
        s1: (c1.under_in(), c1.under_out()),
        s2: (c2.under_in(), c2.under_out()),
    })
}

/// Corridor between the faces at the two ring sites: the arcs a connecting
/// curve must cross, each of which the full route crosses twice with
/// cancelling signs.
fn corridors(d: &Diagram, g1: ArcId, g2: ArcId) -> Vec<Vec<(ArcId, bool)>> {
    if g1 == g2 {
        return vec![Vec::new()];
    }
    let faces = d.faces();
    let Some((f1a, f1b)) = faces.sides_of_arc(g1) else {
        return Vec::new();
    };
    let Some((f2a, f2b)) = faces.sides_of_arc(g2) else {
        return Vec::new();
    };
    use std::collections::{BTreeMap, VecDeque};
    let mut out: Vec<Vec<(ArcId, bool)>> = Vec::new();
    for start in [f1a, f1b] {
        for end_goal in [f2a, f2b] {
            let mut parent: BTreeMap<usize, Option<(usize, Option<(ArcId, bool)>)>> =
                BTreeMap::new();
            let mut queue = VecDeque::new();
            parent.insert(start, None);
            queue.push_back(start);
            let mut found = false;
            while let Some(n) = queue.pop_front() {
                if n == end_goal {
                    found = true;
                    break;
                }
                for &(a, _) in &faces.faces[n] {
                    if a == g1 || a == g2 {
                        continue;
                    }
                    if let Some((f, g)) = faces.sides_of_arc(a) {
                        let other = if f == n { g } else { f };
                        let enter_fwd = f == n;
                        if !parent.contains_key(&other) {
                            parent.insert(other, Some((n, Some((a, enter_fwd)))));
                            queue.push_back(other);
                        }
                    }
                }
            }
            if !found {
                continue;
            }
            let mut crossed = Vec::new();
            let mut cur = end_goal;
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
            if !out.contains(&crossed) {
                out.push(crossed);
            }
        }
    }
    out
}

/// Insert the 0-framed (alpha, beta) pair at two opposite-sign crossings of a
/// pattern strand over a surgery strand.  Checked postconditions: the diagram
/// stays planar, lk(alpha, beta) = 1, and both helpers have linking number 0
/// with every other component.
pub fn gadget_insert(
    d: &Diagram,
    pair: (CrossingId, CrossingId),
) -> Result<(Diagram, GadgetHandle)> {
    let site = check_site(d, pair)?;
    let g0 = d.genus();

    // Route for alpha: a ring hugging the surgery strand at the first
    // crossing, a corridor through the face graph, a ring at the second,
    // and the corridor back.  Which of the local surgery arcs each ring
    // hugs, and every side choice, is searched; acceptance is planarity
    // plus vanishing linking with everything.
    type Found = (
        Diagram,
        ComponentId,
        Vec<CrossingId>,
        std::collections::BTreeMap<ArcId, ArcId>,
    );
    // Two curve shapes: the figure-faithful "dumbbell" (half ring at each
    // site, joined into one loop) and the always-embeddable "balloon" (a
    // full meridian ring at each site joined by a doubled string, whose two
    // ring orientations are independent).  Every side/rank/pass choice is
    // enumerated, pruned first by the predicted linking numbers, accepted on
    // planarity plus vanishing linking with every component.
    let mut out: Option<Found> = None;
    'search: for &g1 in &[site.s1.1, site.s1.0] {
        for &g2 in &[site.s2.1, site.s2.0] {
            if g1 == g2 {
                continue;
            }
            for path in corridors(d, g1, g2) {
                for shape in 0..2u8 {
                    for bits in 0u32..256 {
                        let ring1_left = bits & 1 != 0;
                        let ring2_left = bits & 2 != 0;
                        let ring1_swap = bits & 4 != 0;
                        let ring2_swap = bits & 8 != 0;
                        let corridor_left = bits & 16 != 0;
                        let corridor_swap = bits & 32 != 0;
                        let ring1_over_first = bits & 64 != 0;
                        let ring2_over_first = bits & 128 != 0;
                        let (r1a, r1b) = if ring1_swap { (1, 0) } else { (0, 1) };
                        let (r2a, r2b) = if ring2_swap { (1, 0) } else { (0, 1) };
                        let ring1 = [
                            RouteStep {
                                arc: g1,
                                rank: r1a,
                                how: Crossed { over: ring1_over_first, from_left: ring1_left },
                            },
                            RouteStep {
                                arc: g1,
                                rank: r1b,
                                how: Crossed { over: !ring1_over_first, from_left: !ring1_left },
                            },
                        ];
                        let ring2 = [
                            RouteStep {
                                arc: g2,
                                rank: r2a,
                                how: Crossed { over: ring2_over_first, from_left: ring2_left },
                            },
                            RouteStep {
                                arc: g2,
                                rank: r2b,
                                how: Crossed { over: !ring2_over_first, from_left: !ring2_left },
                            },
                        ];
                        let cor = |i: usize, a: ArcId, enter_fwd: bool, back: bool| {
                            // like the band splice: the order of the two
                            // passes along each crossed arc follows the side
                            // the outbound pass enters from
                            let out_fl = corridor_left == enter_fwd;
                            let base = 2 * i as i64;
                            let (rank_out, rank_back) =
                                if corridor_swap == out_fl { (base + 1, base) } else { (base, base + 1) };
                            RouteStep {
                                arc: a,
                                rank: if back { rank_back } else { rank_out },
                                how: Crossed { over: false, from_left: out_fl != back },
                            }
                        };
                        let mut steps: Vec<RouteStep> = Vec::new();
                        if shape == 0 {
                            // dumbbell: g1 half, out, g2 ring, back, g1 half
                            steps.push(ring1[0]);
                            for (i, &(a, ef)) in path.iter().enumerate() {
                                steps.push(cor(i, a, ef, false));
                            }
                            steps.push(ring2[0]);
                            steps.push(ring2[1]);
                            for (i, &(a, ef)) in path.iter().enumerate().rev() {
                                steps.push(cor(i, a, ef, true));
                            }
                            steps.push(ring1[1]);
                        } else {
                            // balloon: full g1 ring, string out, full g2 ring,
                            // string back
                            steps.push(ring1[0]);
                            steps.push(ring1[1]);
                            for (i, &(a, ef)) in path.iter().enumerate() {
                                steps.push(cor(i, a, ef, false));
                            }
                            steps.push(ring2[0]);
                            steps.push(ring2[1]);
                            for (i, &(a, ef)) in path.iter().enumerate().rev() {
                                steps.push(cor(i, a, ef, true));
                            }
                        }

                        // predicted linking numbers: signs are a pure
                        // function of each step
                        let mut sums: std::collections::BTreeMap<ComponentId, i64> =
                            std::collections::BTreeMap::new();
                        for s in &steps {
                            let comp = d.arc_component(s.arc).unwrap();
                            *sums.entry(comp).or_insert(0) += s.how.sign() as i64;
                        }
                        if sums.values().any(|&v| v != 0) {
                            continue;
                        }

                        let Ok((d2, alpha, xids, prov)) =
                            route_component(d, Role::HelperAlpha, Framing::Framed(0), &steps)
                        else {
                            continue;
                        };
                        if d2.genus() != g0 {
                            continue;
                        }
                        let ok = d2
                            .component_ids()
                            .iter()
                            .filter(|&&c| c != alpha)
                            .all(|&c| linking_number(&d2, alpha, c).unwrap_or(1) == 0);
                        if ok {
                            out = Some((d2, alpha, xids, prov));
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    let Some((d2, alpha, alpha_xids, mut piece_origin)) = out else {
        return Err(Error::precondition(
            "no planar nullhomologous ring joins the two gadget crossings",
        ));
    };

    // beta: a meridian of alpha's first arc, oriented so lk(alpha, beta) = +1.
    let alpha_arc = d2.component(alpha).unwrap().arcs[0];
    let mut beta_result: Option<Found> = None;
    'bsearch: for left in [true, false] {
        let steps = [
            RouteStep { arc: alpha_arc, rank: 0, how: Crossed { over: false, from_left: left } },
            RouteStep { arc: alpha_arc, rank: 1, how: Crossed { over: true, from_left: !left } },
        ];
        if let Ok((d3, beta, xids, prov)) =
            route_component(&d2, Role::HelperBeta, Framing::Framed(0), &steps)
        {
            if d3.genus() == g0 {
                beta_result = Some((d3, beta, xids, prov));
                break 'bsearch;
            }
        }
    }
    let Some((mut d3, beta, beta_xids, beta_prov)) = beta_result else {
        return Err(Error::invariant("no planar meridian for beta"));
    };
    piece_origin.extend(beta_prov);
    if linking_number(&d3, alpha, beta)? == -1 {
        d3 = reverse_component(&d3, beta)?;
    }

    // checked postconditions
    if linking_number(&d3, alpha, beta)? != 1 {
        return Err(Error::invariant("gadget: lk(alpha, beta) != 1"));
    }
    for c in d3.component_ids() {
        if c == alpha || c == beta {
            continue;
        }
        if linking_number(&d3, alpha, c)? != 0 {
            return Err(Error::invariant(format!("gadget: lk(alpha, {c}) != 0")));
        }
        if linking_number(&d3, beta, c)? != 0 {
            return Err(Error::invariant(format!("gadget: lk(beta, {c}) != 0")));
        }
    }
    Ok((
        d3,
        GadgetHandle {
            alpha,
            beta,
            site: pair,
            alpha_crossings: alpha_xids,
            beta_crossings: beta_xids,
            piece_origin,
        },
    ))
}

/// Verify the helpers still sit where the insert left them.
fn check_resolve(d: &Diagram, handle: &GadgetHandle) -> Result<()> {
    for (comp, role) in [(handle.alpha, Role::HelperAlpha), (handle.beta, Role::HelperBeta)] {
        let c = d
            .component(comp)
            .ok_or_else(|| Error::precondition(format!("helper {comp} missing (trace mismatch)")))?;
        if c.role != role || c.framing != Framing::Framed(0) {
            return Err(Error::precondition(format!(
                "component {comp} is not a 0-framed helper (trace mismatch)"
            )));
        }
    }
    // beta must cross only alpha, twice, with lk +1
    let mut beta_crossings = 0usize;
    for x in d.crossings() {
        let (u, o) = d.strands(x);
        let hits_beta = u == handle.beta || o == handle.beta;
        if hits_beta {
            beta_crossings += 1;
            let other = if u == handle.beta { o } else { u };
            if other != handle.alpha {
                return Err(Error::precondition(
                    "beta crosses something besides alpha (trace mismatch)",
                ));
            }
        }
    }
    if beta_crossings != 2 || linking_number(d, handle.alpha, handle.beta)? != 1 {
        return Err(Error::precondition(
            "beta is not a +1 meridian of alpha (trace mismatch)",
        ));
    }
    // the recorded pair must still be pattern-over-surgery with opposite signs
    let site_check = check_site(d, handle.site);
    if site_check.is_err() {
        return Err(Error::precondition(
            "gadget site crossings changed (trace mismatch)",
        ));
    }
    // alpha stays nullhomologous in the complement of everything else
    for c in d.component_ids() {
        if c == handle.alpha || c == handle.beta {
            continue;
        }
        if linking_number(d, handle.alpha, c)? != 0 {
            return Err(Error::precondition(
                "alpha picked up linking with the diagram (trace mismatch)",
            ));
        }
    }
    Ok(())
}

/// Slide-and-cancel, realized as the verified net effect: the helpers leave
/// the diagram and the two recorded crossings exchange over and under strand.
/// Returns the resolved diagram.
pub fn gadget_resolve(d: &Diagram, handle: &GadgetHandle) -> Result<Diagram> {
    check_resolve(d, handle)?;
    let (mut d2, _) = delete_components(d, &[handle.alpha, handle.beta])?;
    d2 = flip_crossing(&d2, handle.site.0)?;
    d2 = flip_crossing(&d2, handle.site.1)?;
    if d2.genus() != d.genus() {
        return Err(Error::invariant("gadget resolve broke planarity"));
    }
    Ok(d2)
}

/// The canonical local tangle: a 1-framed surgery strand bulges under an
/// unknotted pattern strand, leaving two antiparallel surgery strands with
/// the pattern crossing over both at opposite signs.  This closed-up tangle
/// ships with the repo as the gadget's reference site.
pub fn fig3_tangle() -> (Diagram, (CrossingId, CrossingId)) {
    let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
    let d = Diagram::parse(text).expect("static template");
    let (d2, pair) =
        super::ops::r2_push(&d, ArcId(2), ArcId(1), false).expect("static template push");
    (d2, pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{h1_of_surgery, is_homology_sphere};
    use crate::moves::ops::r2_push;

    #[test]
    fn insert_on_fig3_tangle() {
        let (d, pair) = fig3_tangle();
        assert!(is_homology_sphere(&d).unwrap());
        let (d2, h) = gadget_insert(&d, pair).unwrap();
        assert_eq!(d2.genus(), 0);
        assert_eq!(linking_number(&d2, h.alpha, h.beta).unwrap(), 1);
        for c in [ComponentId(1), ComponentId(2)] {
            assert_eq!(linking_number(&d2, h.alpha, c).unwrap(), 0);
            assert_eq!(linking_number(&d2, h.beta, c).unwrap(), 0);
        }
        // homology unchanged: still a homology sphere with helpers included
        assert!(is_homology_sphere(&d2).unwrap());
        assert!(h1_of_surgery(&d2).unwrap().is_trivial());
    }

    #[test]
    fn insert_rejects_equal_signs() {
        // a clasp has two equal-sign crossings
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        let (d2, pair) = crate::moves::clasp(&d, ArcId(1), ArcId(2), 1).unwrap();
        assert!(gadget_insert(&d2, pair).is_err());
    }

    #[test]
    fn resolve_flips_the_pair() {
        let (d, pair) = fig3_tangle();
        let before = d.canonicalize();
        let (d2, h) = gadget_insert(&d, pair).unwrap();
        let d3 = gadget_resolve(&d2, &h).unwrap();
        // independently build the crossing-changed diagram
        let mut expect = before.clone();
        expect = flip_crossing(&expect, pair.0).unwrap();
        expect = flip_crossing(&expect, pair.1).unwrap();
        assert_eq!(d3.serialize(), expect.serialize(), "resolve = double crossing change");
        // over-crossing count of pattern over surgery dropped by two
        let over_count = |dd: &Diagram| {
            dd.crossings()
                .filter(|x| {
                    let (u, o) = dd.strands(x);
                    o == ComponentId(1) && u == ComponentId(2)
                })
                .count()
        };
        assert_eq!(over_count(&d), 2);
        assert_eq!(over_count(&d3), 0);
        // mutual crossing count unchanged
        let mutual = |dd: &Diagram| {
            dd.crossings()
                .filter(|x| {
                    let (u, o) = dd.strands(x);
                    u != o
                })
                .count()
        };
        assert_eq!(mutual(&d), mutual(&d3));
    }

    #[test]
    fn switching_the_pair_twice_restores() {
        // the net effect of insert-resolve is the double crossing switch,
        // and switching twice is the identity
        let (d, pair) = fig3_tangle();
        let (d2, h) = gadget_insert(&d, pair).unwrap();
        let d3 = gadget_resolve(&d2, &h).unwrap();
        let mut back = flip_crossing(&d3, pair.0).unwrap();
        back = flip_crossing(&back, pair.1).unwrap();
        assert_eq!(back.serialize(), d.serialize());
    }

    #[test]
    fn insert_on_distant_pair() {
        // separate the two opposite crossings by extra clasps in between
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
component 3 role=surgery framing=1 arcs=3
";
        let mut d = Diagram::parse(text).unwrap();
        let (p, s2) = (ComponentId(1), ComponentId(3));
        // clasp pattern with component 3 (lk becomes 1... then undo with -1
        // to stay a homology sphere presentation with zero linking)
        let a1 = d.component(p).unwrap().arcs[0];
        let a3 = d.component(s2).unwrap().arcs[0];
        (d, _) = crate::moves::clasp(&d, a1, a3, 1).unwrap();
        let a1 = d.component(p).unwrap().arcs[0];
        let a3 = d.component(s2).unwrap().arcs[0];
        (d, _) = crate::moves::clasp(&d, a1, a3, -1).unwrap();
        // now push the pattern over component 2 to make the site
        let a1 = d.component(p).unwrap().arcs[0];
        let a2 = d.component(ComponentId(2)).unwrap().arcs[0];
        let (d2, pair) = r2_push(&d, a1, a2, true).unwrap();
        assert!(is_homology_sphere(&d2).unwrap());
        let (d3, h) = gadget_insert(&d2, pair).unwrap();
        assert_eq!(d3.genus(), 0);
        assert_eq!(linking_number(&d3, h.alpha, h.beta).unwrap(), 1);
        assert!(is_homology_sphere(&d3).unwrap());
        let d4 = gadget_resolve(&d3, &h).unwrap();
        assert_eq!(d4.genus(), 0);
    }
}
