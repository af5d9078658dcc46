//! The line-oriented diagram text format.
//!
//! ```text
//! # comments run to end of line
//! component <id> role=<pattern|surgery|alpha|beta> framing=<int|none> arcs=<a1,a2,...> [level=<n>]
//! crossing <id> slots=<a,b,c,d> under_in=<a>
//! meta <key> <value>
//! ```
//!
//! Slots are counterclockwise and must start at the incoming under-arc, which
//! `under_in` names redundantly (and is checked).  Canonical serialization
//! relabels arcs (see [`super::canonical`]) and sorts lines by kind —
//! `component`, then `crossing`, then `meta` — and by id/key within a kind.

use std::collections::BTreeMap;

use super::{ArcId, Component, ComponentId, Crossing, CrossingId, Diagram, Framing, Role};
use crate::error::{Error, Result};

pub fn serialize(d: &Diagram) -> String {
    let d = d.canonicalize();
    let mut out = String::new();
    for c in d.components() {
        let framing = match c.framing {
            Framing::Unframed => "none".to_string(),
            Framing::Framed(n) => n.to_string(),
        };
        let arcs: Vec<String> = c.arcs.iter().map(|a| a.0.to_string()).collect();
        out.push_str(&format!(
            "component {} role={} framing={} arcs={}",
            c.id,
            c.role.as_str(),
            framing,
            arcs.join(",")
        ));
        if let Some(l) = c.level {
            out.push_str(&format!(" level={l}"));
        }
        out.push('\n');
    }
    for x in d.crossings() {
        out.push_str(&format!(
            "crossing {} slots={},{},{},{} under_in={}\n",
            x.id, x.slots[0], x.slots[1], x.slots[2], x.slots[3], x.slots[0]
        ));
    }
    for (k, v) in d.metadata() {
        out.push_str(&format!("meta {k} {v}\n"));
    }
    out
}

struct Cursor<'a> {
    line: &'a str,
    lineno: usize,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.lineno, self.pos + 1, msg)
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn skip_ws(&mut self) {
        let n = self.rest().len() - self.rest().trim_start().len();
        self.pos += n;
    }

    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        if self.rest().is_empty() {
            return None;
        }
        let end = self
            .rest()
            .find(char::is_whitespace)
            .unwrap_or(self.rest().len());
        let w = &self.rest()[..end];
        self.pos += end;
        Some(w)
    }
}

fn parse_u32(cur: &Cursor, s: &str, what: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|_| cur.err(format!("invalid {what}: `{s}`")))
}

fn split_kv<'a>(cur: &Cursor, w: &'a str, key: &str) -> Result<&'a str> {
    let (k, v) = w
        .split_once('=')
        .ok_or_else(|| cur.err(format!("expected {key}=<...>, got `{w}`")))?;
    if k != key {
        return Err(cur.err(format!("expected key `{key}`, got `{k}`")));
    }
    Ok(v)
}

pub fn parse(input: &str) -> Result<Diagram> {
    let mut components: Vec<Component> = Vec::new();
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut seen_comp_ids = BTreeMap::new();
    let mut seen_arc_ids: BTreeMap<u32, usize> = BTreeMap::new();

    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor { line, lineno, pos: 0 };
        let kind = cur.word().unwrap();
        match kind {
            "component" => {
                let id = cur.word().ok_or_else(|| cur.err("missing component id"))?;
                let id = ComponentId(parse_u32(&cur, id, "component id")?);
                let role_w = cur.word().ok_or_else(|| cur.err("missing role"))?;
                let role = match split_kv(&cur, role_w, "role")? {
                    "pattern" => Role::Pattern,
                    "surgery" => Role::Surgery,
                    "alpha" => Role::HelperAlpha,
                    "beta" => Role::HelperBeta,
                    other => return Err(cur.err(format!("unknown role `{other}`"))),
                };
                let fr_w = cur.word().ok_or_else(|| cur.err("missing framing"))?;
                let framing = match split_kv(&cur, fr_w, "framing")? {
                    "none" => Framing::Unframed,
                    n => Framing::Framed(
                        n.parse::<i64>()
                            .map_err(|_| cur.err(format!("invalid framing `{n}`")))?,
                    ),
                };
                if role == Role::Pattern && framing != Framing::Unframed {
                    return Err(cur.err("framing on a pattern component"));
                }
                let arcs_w = cur.word().ok_or_else(|| cur.err("missing arcs"))?;
                let arcs_s = split_kv(&cur, arcs_w, "arcs")?;
                let mut arcs = Vec::new();
                for tok in arcs_s.split(',') {
                    if tok.is_empty() {
                        return Err(cur.err("empty arc id in arcs list"));
                    }
                    let a = parse_u32(&cur, tok, "arc id")?;
                    if let Some(prev) = seen_arc_ids.insert(a, lineno) {
                        return Err(cur.err(format!(
                            "duplicate arc id {a} (first used on line {prev})"
                        )));
                    }
                    arcs.push(ArcId(a));
                }
                let mut level = None;
                if let Some(w) = cur.word() {
                    let v = split_kv(&cur, w, "level")?;
                    level = Some(parse_u32(&cur, v, "level")?);
                }
                if cur.word().is_some() {
                    return Err(cur.err("trailing tokens on component line"));
                }
                if let Some(prev) = seen_comp_ids.insert(id, lineno) {
                    return Err(cur.err(format!(
                        "duplicate component id {id} (first used on line {prev})"
                    )));
                }
                let mut comp = Component::new(id, role, framing, arcs);
                comp.level = level;
                components.push(comp);
            }
            "crossing" => {
                let id = cur.word().ok_or_else(|| cur.err("missing crossing id"))?;
                let id = CrossingId(parse_u32(&cur, id, "crossing id")?);
                let slots_w = cur.word().ok_or_else(|| cur.err("missing slots"))?;
                let slots_s = split_kv(&cur, slots_w, "slots")?;
                let parts: Vec<&str> = slots_s.split(',').collect();
                if parts.len() != 4 {
                    return Err(cur.err("slots must list exactly four arcs"));
                }
                let mut slots = [ArcId(0); 4];
                for (k, p) in parts.iter().enumerate() {
                    slots[k] = ArcId(parse_u32(&cur, p, "arc id")?);
                }
                let ui_w = cur.word().ok_or_else(|| cur.err("missing under_in"))?;
                let ui = ArcId(parse_u32(&cur, split_kv(&cur, ui_w, "under_in")?, "under_in")?);
                if ui != slots[0] {
                    return Err(cur.err(format!(
                        "under_in={} must name the first slot ({})",
                        ui, slots[0]
                    )));
                }
                if cur.word().is_some() {
                    return Err(cur.err("trailing tokens on crossing line"));
                }
                crossings.push(Crossing::new(id, slots));
            }
            "meta" => {
                let key = cur.word().ok_or_else(|| cur.err("missing meta key"))?;
                cur.skip_ws();
                let value = cur.rest().trim_end();
                metadata.insert(key.to_string(), value.to_string());
            }
            other => {
                return Err(cur.err(format!("unknown line kind `{other}`")));
            }
        }
    }

    Diagram::new(components, crossings, metadata)
}

#[cfg(test)]
mod tests {
    use super::super::Diagram;

    #[test]
    fn empty_input() {
        let d = Diagram::parse("").unwrap();
        assert_eq!(d.components().count(), 0);
        assert_eq!(d.serialize(), "");
    }

    #[test]
    fn crossingless_unknot() {
        let d = Diagram::parse("component 1 role=surgery framing=1 arcs=7\n").unwrap();
        assert_eq!(d.components().count(), 1);
        assert_eq!(d.crossings().count(), 0);
        let c = d.components().next().unwrap();
        assert_eq!(c.framing.as_int(), Some(1));
        // canonical form renumbers the arc
        assert_eq!(
            d.serialize(),
            "component 1 role=surgery framing=1 arcs=1\n"
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = Diagram::parse("# a comment\n\ncomponent 2 role=pattern framing=none arcs=3 # tail\n").unwrap();
        assert_eq!(d.components().count(), 1);
    }

    #[test]
    fn framing_on_pattern_rejected() {
        let e = Diagram::parse("component 1 role=pattern framing=2 arcs=1\n").unwrap_err();
        let msg = format!("{e}");
        assert!(msg.contains("framing on a pattern"), "{msg}");
    }

    #[test]
    fn duplicate_arc_rejected() {
        let e = Diagram::parse(
            "component 1 role=pattern framing=none arcs=1\ncomponent 2 role=pattern framing=none arcs=1\n",
        )
        .unwrap_err();
        assert!(format!("{e}").contains("duplicate arc id"));
    }

    #[test]
    fn under_in_must_match_first_slot() {
        let text = "\
component 1 role=pattern framing=none arcs=1,2
crossing 1 slots=1,2,2,1 under_in=2
";
        let e = Diagram::parse(text).unwrap_err();
        assert!(format!("{e}").contains("under_in"));
    }
}
