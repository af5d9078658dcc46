//! Closure validation and orientation resolution.
//!
//! The stored data gives, for each crossing, the incoming under-arc (slot 0)
//! but not which of slots 1/3 is the incoming over-arc.  That direction is
//! recovered from the component traversals: the over passage must step from an
//! arc to its successor in the owning cycle.  In the one genuinely symmetric
//! corner (a two-arc component whose both passages are over-passages against
//! the same partner arcs) the text format is ambiguous and we reject the input
//! rather than guess.

use std::collections::BTreeMap;

use super::{ArcId, Component, ComponentId, Crossing, CrossingId};
use crate::error::{Error, Result};

/// One passage of a strand through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Passage {
    pub crossing: CrossingId,
    pub in_slot: u8,
    pub out_slot: u8,
    pub is_over: bool,
}

/// Where an arc end sits: (crossing, slot).
pub type SlotRef = (CrossingId, u8);

#[derive(Debug, Clone, Default)]
pub struct Topology {
    arc_comp: BTreeMap<ArcId, ComponentId>,
    succ: BTreeMap<ArcId, ArcId>,
    /// Arc end where the arc leaves a crossing (its tail), if any.
    out_occ: BTreeMap<ArcId, SlotRef>,
    /// Arc end where the arc enters a crossing (its head), if any.
    in_occ: BTreeMap<ArcId, SlotRef>,
    /// Incoming over slot per crossing: 1 or 3.
    over_in: BTreeMap<CrossingId, u8>,
    signs: BTreeMap<CrossingId, i8>,
}

impl Topology {
    pub fn build(
        components: &BTreeMap<ComponentId, Component>,
        crossings: &BTreeMap<CrossingId, Crossing>,
    ) -> Result<Self> {
        let mut arc_comp = BTreeMap::new();
        let mut succ = BTreeMap::new();
        for c in components.values() {
            for (i, &a) in c.arcs.iter().enumerate() {
                if arc_comp.insert(a, c.id).is_some() {
                    return Err(Error::invariant(format!("duplicate arc id {a}")));
                }
                let next = c.arcs[(i + 1) % c.arcs.len()];
                succ.insert(a, next);
            }
        }

        // Count slot occurrences per arc.
        let mut occs: BTreeMap<ArcId, Vec<SlotRef>> = BTreeMap::new();
        for x in crossings.values() {
            for (s, &a) in x.slots.iter().enumerate() {
                if !arc_comp.contains_key(&a) {
                    return Err(Error::invariant(format!(
                        "crossing {} references arc {} not on any component",
                        x.id, a
                    )));
                }
                occs.entry(a).or_default().push((x.id, s as u8));
            }
        }
        for (&a, v) in &occs {
            if v.len() != 2 {
                return Err(Error::invariant(format!(
                    "arc {} appears {} times in crossing slots (expected 2)",
                    a,
                    v.len()
                )));
            }
        }
        for c in components.values() {
            let on_crossings = c.arcs.iter().filter(|a| occs.contains_key(a)).count();
            if on_crossings != c.arcs.len() && c.arcs.len() > 1 {
                return Err(Error::invariant(format!(
                    "component {} mixes crossing arcs with free arcs",
                    c.id
                )));
            }
            if c.arcs.len() == 1 && !occs.contains_key(&c.arcs[0]) {
                continue; // crossingless closed loop
            }
        }

        // Under passages are forced: slot0 -> slot2 must follow the cycle.
        for x in crossings.values() {
            let (u_in, u_out) = (x.slots[0], x.slots[2]);
            if succ.get(&u_in) != Some(&u_out) {
                return Err(Error::invariant(format!(
                    "crossing {}: under passage {} -> {} does not follow its component cycle",
                    x.id, u_in, u_out
                )));
            }
            let cu = arc_comp[&u_in];
            if arc_comp[&u_out] != cu {
                return Err(Error::invariant(format!(
                    "crossing {}: under strand switches components",
                    x.id
                )));
            }
            let co = arc_comp[&x.slots[1]];
            if arc_comp[&x.slots[3]] != co {
                return Err(Error::invariant(format!(
                    "crossing {}: over strand switches components",
                    x.id
                )));
            }
        }

        // Resolve over directions.  in_dir[x] = Some(1) means over passage
        // slot1 -> slot3 (incoming over at slot 1); Some(3) the reverse.
        let mut over_in: BTreeMap<CrossingId, u8> = BTreeMap::new();
        let mut pending: Vec<CrossingId> = Vec::new();
        // in/out assignment per arc occurrence, grown as directions resolve.
        let mut in_of: BTreeMap<ArcId, SlotRef> = BTreeMap::new();
        let mut out_of: BTreeMap<ArcId, SlotRef> = BTreeMap::new();

        let assign = |arc: ArcId,
                          slot: SlotRef,
                          incoming: bool,
                          in_of: &mut BTreeMap<ArcId, SlotRef>,
                          out_of: &mut BTreeMap<ArcId, SlotRef>|
         -> Result<()> {
            let m = if incoming { in_of } else { out_of };
            if let Some(prev) = m.insert(arc, slot) {
                if prev != slot {
                    return Err(Error::invariant(format!(
                        "arc {} has two {} ends",
                        arc,
                        if incoming { "incoming" } else { "outgoing" }
                    )));
                }
            }
            Ok(())
        };

        for x in crossings.values() {
            assign(x.slots[0], (x.id, 0), true, &mut in_of, &mut out_of)?;
            assign(x.slots[2], (x.id, 2), false, &mut in_of, &mut out_of)?;
            let (a1, a3) = (x.slots[1], x.slots[3]);
            let d13 = succ.get(&a1) == Some(&a3);
            let d31 = succ.get(&a3) == Some(&a1);
            match (d13, d31) {
                (false, false) => {
                    return Err(Error::invariant(format!(
                        "crossing {}: over passage matches no component cycle",
                        x.id
                    )));
                }
                (true, false) => {
                    over_in.insert(x.id, 1);
                    assign(a1, (x.id, 1), true, &mut in_of, &mut out_of)?;
                    assign(a3, (x.id, 3), false, &mut in_of, &mut out_of)?;
                }
                (false, true) => {
                    over_in.insert(x.id, 3);
                    assign(a3, (x.id, 3), true, &mut in_of, &mut out_of)?;
                    assign(a1, (x.id, 1), false, &mut in_of, &mut out_of)?;
                }
                (true, true) => pending.push(x.id),
            }
        }

        // Constraint propagation for the two-arc over components.  A two-arc
        // circle whose both passages are over-passages is reversal-symmetric
        // in the stored data (the two readings are the same diagram with the
        // circle reversed), so when propagation stalls we pin the smallest
        // pending crossing by convention: the arc listed first in the cycle
        // comes in there.
        loop {
            let mut progressed = true;
            while progressed && !pending.is_empty() {
                progressed = false;
                let mut still = Vec::new();
                for &xid in &pending {
                    let x = &crossings[&xid];
                    let (a1, a3) = (x.slots[1], x.slots[3]);
                    let a1_in_here = in_of.get(&a1) == Some(&(xid, 1));
                    let a1_in_elsewhere = in_of.get(&a1).is_some_and(|&s| s != (xid, 1));
                    let a3_in_elsewhere = in_of.get(&a3).is_some_and(|&s| s != (xid, 3));
                    let a1_out_elsewhere = out_of.get(&a1).is_some_and(|&s| s != (xid, 1));
                    let a3_out_elsewhere = out_of.get(&a3).is_some_and(|&s| s != (xid, 3));
                    let dir = if a1_in_here {
                        Some(1)
                    } else if a1_in_elsewhere || a3_out_elsewhere {
                        // a1 already enters elsewhere, so here it must leave.
                        Some(3)
                    } else if a3_in_elsewhere || a1_out_elsewhere {
                        Some(1)
                    } else {
                        None
                    };
                    match dir {
                        Some(1) => {
                            over_in.insert(xid, 1);
                            assign(a1, (xid, 1), true, &mut in_of, &mut out_of)?;
                            assign(a3, (xid, 3), false, &mut in_of, &mut out_of)?;
                            progressed = true;
                        }
                        Some(_) => {
                            over_in.insert(xid, 3);
                            assign(a3, (xid, 3), true, &mut in_of, &mut out_of)?;
                            assign(a1, (xid, 1), false, &mut in_of, &mut out_of)?;
                            progressed = true;
                        }
                        None => still.push(xid),
                    }
                }
                pending = still;
            }
            let Some(&xid) = pending.first() else {
                break;
            };
            pending.remove(0);
            let x = &crossings[&xid];
            let (a1, a3) = (x.slots[1], x.slots[3]);
            let comp = &components[&arc_comp[&a1]];
            let first = comp.arcs[0];
            if a1 == first {
                over_in.insert(xid, 1);
                assign(a1, (xid, 1), true, &mut in_of, &mut out_of)?;
                assign(a3, (xid, 3), false, &mut in_of, &mut out_of)?;
            } else if a3 == first {
                over_in.insert(xid, 3);
                assign(a3, (xid, 3), true, &mut in_of, &mut out_of)?;
                assign(a1, (xid, 1), false, &mut in_of, &mut out_of)?;
            } else {
                return Err(Error::invariant(format!(
                    "crossing {}: over-strand orientation is ambiguous",
                    xid
                )));
            }
        }

        // Every arc on a crossing must have both ends placed.
        for (&a, v) in &occs {
            debug_assert_eq!(v.len(), 2);
            if !in_of.contains_key(&a) || !out_of.contains_key(&a) {
                return Err(Error::invariant(format!(
                    "arc {} lacks a consistent in/out end assignment",
                    a
                )));
            }
        }

        // Signs.  With the under strand entering at slot 0 (pointing "north"),
        // the crossing is positive exactly when the over strand enters at
        // slot 3 (pointing "east").
        let mut signs = BTreeMap::new();
        for x in crossings.values() {
            let s = if over_in[&x.id] == 3 { 1i8 } else { -1i8 };
            signs.insert(x.id, s);
        }

        Ok(Topology { arc_comp, succ, out_occ: out_of, in_occ: in_of, over_in, signs })
    }

    pub fn arc_component(&self, a: ArcId) -> Option<ComponentId> {
        self.arc_comp.get(&a).copied()
    }

    pub fn succ(&self, a: ArcId) -> Option<ArcId> {
        self.succ.get(&a).copied()
    }

    pub fn sign(&self, c: CrossingId) -> Option<i8> {
        self.signs.get(&c).copied()
    }

    /// Incoming over slot (1 or 3).
    pub fn over_in_slot(&self, c: CrossingId) -> Option<u8> {
        self.over_in.get(&c).copied()
    }

    /// Arc end where `a` enters a crossing, if it meets one.
    pub fn head(&self, a: ArcId) -> Option<SlotRef> {
        self.in_occ.get(&a).copied()
    }

    /// Arc end where `a` leaves a crossing, if it meets one.
    pub fn tail(&self, a: ArcId) -> Option<SlotRef> {
        self.out_occ.get(&a).copied()
    }

    /// Passages of a component in traversal order, starting from its first
    /// listed arc.  Each consecutive arc pair contributes one passage.
    pub fn passages_of(&self, comp: &Component) -> Vec<Passage> {
        let mut out = Vec::new();
        for &a in &comp.arcs {
            if let Some((xid, slot)) = self.in_occ.get(&a).copied() {
                let is_over = slot == 1 || slot == 3;
                let out_slot = (slot + 2) % 4;
                out.push(Passage { crossing: xid, in_slot: slot, out_slot, is_over });
            }
        }
        out
    }

}
