//! Splitting a sub-link off a diagram once it passes under everything else.

use crate::diagram::{ComponentId, Diagram};
use crate::error::{Error, Result};

use super::builder::delete_components;

/// Check that every crossing between the chosen components and the rest has
/// the chosen strand under.
pub fn splits_under(d: &Diagram, comps: &[ComponentId]) -> Result<bool> {
    for &c in comps {
        if d.component(c).is_none() {
            return Err(Error::precondition(format!("unknown component {c}")));
        }
    }
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        let u_in = comps.contains(&under);
        let o_in = comps.contains(&over);
        if o_in && !u_in {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Split the chosen components off: they keep their self-crossings, the rest
/// keeps everything else.  Requires every mutual crossing to have the chosen
/// strand under; both halves are re-verified planar.
pub fn split_off(d: &Diagram, comps: &[ComponentId]) -> Result<(Diagram, Diagram)> {
    if !splits_under(d, comps)? {
        return Err(Error::precondition(
            "split not justified: some chosen strand passes over the rest",
        ));
    }
    let rest: Vec<ComponentId> =
        d.component_ids().into_iter().filter(|c| !comps.contains(c)).collect();
    let (sub, _) = delete_components(d, &rest)?;
    let (remainder, _) = delete_components(d, comps)?;
    if sub.genus() != 0 || remainder.genus() != 0 {
        return Err(Error::invariant("split halves are not planar"));
    }
    Ok((sub, remainder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::diagram::{ArcId, Role};
    use crate::moves::ops::r2_push;

    #[test]
    fn already_split() {
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        let (sub, rest) = split_off(&d, &[crate::diagram::ComponentId(1)]).unwrap();
        assert_eq!(sub.components().count(), 1);
        assert_eq!(rest.components().count(), 1);
    }

    #[test]
    fn under_passes_split_cleanly() {
        // pattern pushed UNDER the surgery strand twice: split allowed
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        let (d2, _) = r2_push(&d, ArcId(1), ArcId(2), false).unwrap();
        let (sub, rest) = split_off(&d2, &[crate::diagram::ComponentId(1)]).unwrap();
        assert_eq!(sub.crossings().count(), 0, "pattern comes out unknotted");
        assert_eq!(rest.crossings().count(), 0);
    }

    #[test]
    fn over_pass_blocks_split() {
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
        let d = Diagram::parse(text).unwrap();
        let (d2, _) = r2_push(&d, ArcId(1), ArcId(2), true).unwrap();
        assert!(split_off(&d2, &[crate::diagram::ComponentId(1)]).is_err());
    }

    #[test]
    fn self_knotting_survives_split() {
        // a trefoil pattern under a distant circle keeps its crossings
        let tre = catalog::trefoil();
        let mut text = tre.serialize();
        text.push_str("component 7 role=surgery framing=1 arcs=70\n");
        let d = Diagram::parse(&text).unwrap();
        let (sub, rest) = split_off(&d, &[crate::diagram::ComponentId(1)]).unwrap();
        assert_eq!(sub.crossings().count(), 3);
        assert_eq!(sub.writhe(crate::diagram::ComponentId(1)), 3);
        assert_eq!(rest.components().count(), 1);
        let _ = Role::Pattern;
    }
}
