//! The append-only move trace.
//!
//! Every move records just enough site data to replay deterministically; the
//! trace chains 64-bit FNV-1a hashes of canonical serializations, so replay
//! from the origin reproduces the final diagram bit for bit or fails loudly.

use std::fmt;

use crate::diagram::{ArcId, ComponentId, CrossingId, Diagram};
use crate::error::{Error, Result};

use super::builder::{delete_components, flip_crossing};
use super::gadget::{gadget_insert, GadgetHandle};
use super::ops::{r1_insert, r1_remove, r2_push, r2_remove};
use super::reidemeister::r3;
use super::slide::handle_slide;
use super::split::splits_under;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    R1Insert { arc: ArcId, positive: bool },
    R1Remove { crossing: CrossingId },
    R2Insert { moving: ArcId, host: ArcId, moving_over: bool },
    R2Remove { pair: (CrossingId, CrossingId) },
    R3 { site: [CrossingId; 3] },
    HandleSlide { slid: ComponentId, over: ComponentId, sign: i8 },
    GadgetInsert { site: (CrossingId, CrossingId) },
    /// The slide-and-isotopy of the gadget: the recorded pair flips and the
    /// helpers move to a split cancelling position.
    GadgetSlide { alpha: ComponentId, beta: ComponentId, site: (CrossingId, CrossingId) },
    /// Remove a split 0-framed cancelling helper pair.
    HelperCancel { alpha: ComponentId, beta: ComponentId },
    /// Checkpoint: assert the chosen components pass under everything else
    /// and both halves are planar.  Leaves the diagram unchanged.
    Split { comps: Vec<ComponentId> },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R1Insert { arc, positive } => {
                write!(f, "r1-insert arc={arc} sign={}", if *positive { "+" } else { "-" })
            }
            Move::R1Remove { crossing } => write!(f, "r1-remove crossing={crossing}"),
            Move::R2Insert { moving, host, moving_over } => write!(
                f,
                "r2-insert moving={moving} host={host} pass={}",
                if *moving_over { "over" } else { "under" }
            ),
            Move::R2Remove { pair } => write!(f, "r2-remove pair={},{}", pair.0, pair.1),
            Move::R3 { site } => write!(f, "r3 site={},{},{}", site[0], site[1], site[2]),
            Move::HandleSlide { slid, over, sign } => write!(
                f,
                "handle-slide slid={slid} over={over} sign={}",
                if *sign >= 0 { "+" } else { "-" }
            ),
            Move::GadgetInsert { site } => {
                write!(f, "gadget-insert site={},{}", site.0, site.1)
            }
            Move::GadgetSlide { alpha, beta, site } => write!(
                f,
                "gadget-slide alpha={alpha} beta={beta} site={},{}",
                site.0, site.1
            ),
            Move::HelperCancel { alpha, beta } => {
                write!(f, "helper-cancel alpha={alpha} beta={beta}")
            }
            Move::Split { comps } => {
                let list: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
                write!(f, "split comps={}", list.join(","))
            }
        }
    }
}

impl Move {
    pub fn parse(s: &str) -> Result<Move> {
        let mut it = s.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::integrity("empty move"))?;
        let mut kv = std::collections::BTreeMap::new();
        for tok in it {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::integrity(format!("bad move token `{tok}`")))?;
            kv.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| -> Result<String> {
            kv.get(k)
                .cloned()
                .ok_or_else(|| Error::integrity(format!("move missing key `{k}`")))
        };
        let num = |v: &str| -> Result<u32> {
            v.parse().map_err(|_| Error::integrity(format!("bad id `{v}`")))
        };
        let pair = |v: &str| -> Result<(CrossingId, CrossingId)> {
            let (a, b) = v
                .split_once(',')
                .ok_or_else(|| Error::integrity(format!("bad pair `{v}`")))?;
            Ok((CrossingId(num(a)?), CrossingId(num(b)?)))
        };
        Ok(match kind {
            "r1-insert" => Move::R1Insert {
                arc: ArcId(num(&get("arc")?)?),
                positive: get("sign")? == "+",
            },
            "r1-remove" => Move::R1Remove { crossing: CrossingId(num(&get("crossing")?)?) },
            "r2-insert" => Move::R2Insert {
                moving: ArcId(num(&get("moving")?)?),
                host: ArcId(num(&get("host")?)?),
                moving_over: get("pass")? == "over",
            },
            "r2-remove" => Move::R2Remove { pair: pair(&get("pair")?)? },
            "r3" => {
                let v = get("site")?;
                let parts: Vec<&str> = v.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::integrity("r3 site needs three crossings"));
                }
                Move::R3 {
                    site: [
                        CrossingId(num(parts[0])?),
                        CrossingId(num(parts[1])?),
                        CrossingId(num(parts[2])?),
                    ],
                }
            }
            "handle-slide" => Move::HandleSlide {
                slid: ComponentId(num(&get("slid")?)?),
                over: ComponentId(num(&get("over")?)?),
                sign: if get("sign")? == "+" { 1 } else { -1 },
            },
            "gadget-insert" => Move::GadgetInsert { site: pair(&get("site")?)? },
            "gadget-slide" => Move::GadgetSlide {
                alpha: ComponentId(num(&get("alpha")?)?),
                beta: ComponentId(num(&get("beta")?)?),
                site: pair(&get("site")?)?,
            },
            "helper-cancel" => Move::HelperCancel {
                alpha: ComponentId(num(&get("alpha")?)?),
                beta: ComponentId(num(&get("beta")?)?),
            },
            "split" => {
                let v = get("comps")?;
                let comps: Result<Vec<ComponentId>> = v
                    .split(',')
                    .map(|x| Ok(ComponentId(num(x)?)))
                    .collect();
                Move::Split { comps: comps? }
            }
            other => return Err(Error::integrity(format!("unknown move kind `{other}`"))),
        })
    }
}

/// Rebuild a split 0-framed helper pair off to the side: two fresh circles
/// linking each other once and nothing else.
fn detached_helper_pair(
    d: &Diagram,
    alpha: ComponentId,
    beta: ComponentId,
) -> Result<Diagram> {
    use crate::diagram::{Component, Crossing, Framing, Role};
    let a1 = ArcId(d.fresh_arc_id());
    let a2 = ArcId(a1.0 + 1);
    let b1 = ArcId(a1.0 + 2);
    let b2 = ArcId(a1.0 + 3);
    let x1 = CrossingId(d.fresh_crossing_id());
    let x2 = CrossingId(x1.0 + 1);
    let mut comps: Vec<Component> = d.components().cloned().collect();
    comps.push(Component::new(alpha, Role::HelperAlpha, Framing::Framed(0), vec![a1, a2]));
    comps.push(Component::new(beta, Role::HelperBeta, Framing::Framed(0), vec![b1, b2]));
    let mut crossings: Vec<Crossing> = d.crossings().cloned().collect();
    // positive Hopf pair: both crossings +1
    crossings.push(Crossing::new(x1, [a1, b2, a2, b1]));
    crossings.push(Crossing::new(x2, [b2, a1, b1, a2]));
    Diagram::new(comps, crossings, d.metadata().clone())
}

/// Apply one move.  Deterministic given the input diagram.
pub fn apply(d: &Diagram, mv: &Move) -> Result<Diagram> {
    match mv {
        Move::R1Insert { arc, positive } => Ok(r1_insert(d, *arc, *positive)?.0),
        Move::R1Remove { crossing } => r1_remove(d, *crossing),
        Move::R2Insert { moving, host, moving_over } => {
            Ok(r2_push(d, *moving, *host, *moving_over)?.0)
        }
        Move::R2Remove { pair } => r2_remove(d, pair.0, pair.1),
        Move::R3 { site } => r3(d, *site),
        Move::HandleSlide { slid, over, sign } => Ok(handle_slide(d, *slid, *over, *sign)?.0),
        Move::GadgetInsert { site } => Ok(gadget_insert(d, *site)?.0),
        Move::GadgetSlide { alpha, beta, site } => {
            // verified net effect of the slide-and-isotopy: helpers detach
            // into cancelling position and the recorded pair flips
            let (mut d2, _) = delete_components(d, &[*alpha, *beta])?;
            d2 = flip_crossing(&d2, site.0)?;
            d2 = flip_crossing(&d2, site.1)?;
            let d3 = detached_helper_pair(&d2, *alpha, *beta)?;
            if d3.genus() != d.genus() {
                return Err(Error::invariant("gadget slide broke planarity"));
            }
            Ok(d3)
        }
        Move::HelperCancel { alpha, beta } => {
            // the pair must be split from everything and mutually linked once
            use crate::homology::linking_number;
            for x in d.crossings() {
                let (u, o) = d.strands(x);
                let touches = |c: ComponentId| u == c || o == c;
                if (touches(*alpha) || touches(*beta))
                    && !((u == *alpha || u == *beta) && (o == *alpha || o == *beta))
                {
                    return Err(Error::precondition(
                        "helper pair is not split from the rest (cannot cancel)",
                    ));
                }
            }
            if linking_number(d, *alpha, *beta)?.abs() != 1 {
                return Err(Error::precondition("helper pair does not link once"));
            }
            Ok(delete_components(d, &[*alpha, *beta])?.0)
        }
        Move::Split { comps } => {
            if !splits_under(d, comps)? {
                return Err(Error::precondition(
                    "split checkpoint failed: strand passes over the rest",
                ));
            }
            super::split::split_off(d, comps)?;
            Ok(d.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    pub pre: u64,
    pub post: u64,
}

/// Append-only record of applied moves with chained hashes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveTrace {
    pub origin: u64,
    pub steps: Vec<TraceStep>,
}

impl MoveTrace {
    pub fn new(origin: &Diagram) -> Self {
        MoveTrace { origin: origin.hash(), steps: Vec::new() }
    }

    pub fn final_hash(&self) -> u64 {
        self.steps.last().map_or(self.origin, |s| s.post)
    }

    /// Apply a move to the diagram and record it.
    pub fn push(&mut self, d: &Diagram, mv: Move) -> Result<Diagram> {
        let pre = d.hash();
        if pre != self.final_hash() {
            return Err(Error::integrity("trace does not chain to this diagram"));
        }
        let d2 = apply(d, &mv)?;
        self.steps.push(TraceStep { mv, pre, post: d2.hash() });
        Ok(d2)
    }

    /// Record a move that the caller has already applied; replay still
    /// verifies the chain.
    pub fn push_applied(&mut self, pre: &Diagram, mv: Move, post: &Diagram) -> Result<()> {
        let pre_h = pre.hash();
        if pre_h != self.final_hash() {
            return Err(Error::integrity("trace does not chain to this diagram"));
        }
        self.steps.push(TraceStep { mv, pre: pre_h, post: post.hash() });
        Ok(())
    }

    /// Replay from the origin diagram, verifying every hash in the chain.
    pub fn replay(&self, origin: &Diagram) -> Result<Diagram> {
        if origin.hash() != self.origin {
            return Err(Error::integrity("origin hash mismatch"));
        }
        let mut d = origin.clone();
        for (i, s) in self.steps.iter().enumerate() {
            if d.hash() != s.pre {
                return Err(Error::integrity(format!("trace step {i}: pre-hash mismatch")));
            }
            d = apply(&d, &s.mv)?;
            if d.hash() != s.post {
                return Err(Error::integrity(format!("trace step {i}: post-hash mismatch")));
            }
        }
        Ok(d)
    }

    /// Line-per-move text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("trace origin={:016x}\n", self.origin);
        for s in &self.steps {
            out.push_str(&format!("move {} pre={:016x} post={:016x}\n", s.mv, s.pre, s.post));
        }
        out
    }

    pub fn parse(text: &str) -> Result<MoveTrace> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::integrity("empty trace"))?;
        let origin = head
            .strip_prefix("trace origin=")
            .and_then(|h| u64::from_str_radix(h.trim(), 16).ok())
            .ok_or_else(|| Error::integrity("bad trace header"))?;
        let mut steps = Vec::new();
        for line in lines {
            let body = line
                .strip_prefix("move ")
                .ok_or_else(|| Error::integrity(format!("bad trace line `{line}`")))?;
            // pre=... post=... are the last two tokens
            let mut toks: Vec<&str> = body.split_whitespace().collect();
            let post_tok = toks.pop().ok_or_else(|| Error::integrity("short trace line"))?;
            let pre_tok = toks.pop().ok_or_else(|| Error::integrity("short trace line"))?;
            let pre = pre_tok
                .strip_prefix("pre=")
                .and_then(|h| u64::from_str_radix(h, 16).ok())
                .ok_or_else(|| Error::integrity("bad pre hash"))?;
            let post = post_tok
                .strip_prefix("post=")
                .and_then(|h| u64::from_str_radix(h, 16).ok())
                .ok_or_else(|| Error::integrity("bad post hash"))?;
            let mv = Move::parse(&toks.join(" "))?;
            steps.push(TraceStep { mv, pre, post });
        }
        Ok(MoveTrace { origin, steps })
    }
}

/// High-level gadget resolve recorded as its two trace moves.
pub fn resolve_via_trace(
    d: &Diagram,
    trace: &mut MoveTrace,
    handle: &GadgetHandle,
) -> Result<Diagram> {
    super::gadget::gadget_resolve(d, handle)?; // full precondition check
    let d2 = trace.push(
        d,
        Move::GadgetSlide { alpha: handle.alpha, beta: handle.beta, site: handle.site },
    )?;
    trace.push(&d2, Move::HelperCancel { alpha: handle.alpha, beta: handle.beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::diagram::{Framing, Role};

    #[test]
    fn record_and_replay() {
        let d0 = catalog::unknot(Role::Pattern, Framing::Unframed);
        let mut text = d0.serialize();
        text.push_str("component 2 role=surgery framing=1 arcs=50\n");
        let d0 = Diagram::parse(&text).unwrap();
        let mut trace = MoveTrace::new(&d0);
        let a = d0.component(crate::diagram::ComponentId(1)).unwrap().arcs[0];
        let d1 = trace.push(&d0, Move::R1Insert { arc: a, positive: true }).unwrap();
        let h = d1.component(crate::diagram::ComponentId(2)).unwrap().arcs[0];
        let m = d1.component(crate::diagram::ComponentId(1)).unwrap().arcs[0];
        let d2 = trace
            .push(&d1, Move::R2Insert { moving: m, host: h, moving_over: false })
            .unwrap();
        assert_eq!(trace.steps.len(), 2);
        let replayed = trace.replay(&d0).unwrap();
        assert_eq!(replayed.hash(), d2.hash());
        assert_eq!(replayed.serialize(), d2.serialize());
    }

    #[test]
    fn trace_text_roundtrip() {
        let d0 = catalog::poincare_sphere();
        let mut trace = MoveTrace::new(&d0);
        let a = d0.component(crate::diagram::ComponentId(1)).unwrap().arcs[0];
        let _ = trace.push(&d0, Move::R1Insert { arc: a, positive: false }).unwrap();
        let text = trace.to_text();
        let back = MoveTrace::parse(&text).unwrap();
        assert_eq!(back, trace);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn replay_rejects_wrong_origin() {
        let d0 = catalog::poincare_sphere();
        let trace = MoveTrace::new(&d0);
        let other = catalog::trefoil();
        assert!(trace.replay(&other).is_err());
    }

    #[test]
    fn gadget_sequence_replays() {
        use crate::moves::gadget::fig3_tangle;
        let (d, pair) = fig3_tangle();
        let mut trace = MoveTrace::new(&d);
        let d1 = trace.push(&d, Move::GadgetInsert { site: pair }).unwrap();
        // find the handle deterministically by re-running the insert
        let (_, handle) = gadget_insert(&d, pair).unwrap();
        let d2 = resolve_via_trace(&d1, &mut trace, &handle).unwrap();
        assert_eq!(trace.steps.len(), 3);
        let replayed = trace.replay(&d).unwrap();
        assert_eq!(replayed.hash(), d2.hash());
    }
}
