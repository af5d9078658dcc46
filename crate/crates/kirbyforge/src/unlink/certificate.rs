//! The unlinking certificate: recorded helper curves, the final diagram, and
//! a report every entry of which can be recomputed from the certificate plus
//! the origin diagram alone.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{ArcId, ComponentId, Diagram};
use crate::error::{Error, Result};

/// One crossing along a recorded curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveStep {
    /// Crossing an arc of the origin diagram.
    Arc { arc: ArcId, over: bool, sign: i8 },
    /// Crossing the partner curve of the same pair.
    Mate { over: bool, sign: i8 },
}

impl fmt::Display for CurveStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveStep::Arc { arc, over, sign } => write!(
                f,
                "{}:{}:{}",
                arc,
                if *over { "o" } else { "u" },
                if *sign > 0 { "+" } else { "-" }
            ),
            CurveStep::Mate { over, sign } => write!(
                f,
                "m:{}:{}",
                if *over { "o" } else { "u" },
                if *sign > 0 { "+" } else { "-" }
            ),
        }
    }
}

impl CurveStep {
    fn parse(s: &str) -> Result<CurveStep> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::integrity(format!("malformed curve step `{s}`")));
        }
        let over = match parts[1] {
            "o" => true,
            "u" => false,
            _ => return Err(Error::integrity(format!("malformed pass in `{s}`"))),
        };
        let sign = match parts[2] {
            "+" => 1i8,
            "-" => -1,
            _ => return Err(Error::integrity(format!("malformed sign in `{s}`"))),
        };
        if parts[0] == "m" {
            Ok(CurveStep::Mate { over, sign })
        } else {
            let id: u32 = parts[0]
                .parse()
                .map_err(|_| Error::integrity(format!("malformed arc in `{s}`")))?;
            Ok(CurveStep::Arc { arc: ArcId(id), over, sign })
        }
    }
}

/// A closed curve in the origin diagram's complement, as the ordered list of
/// strands it crosses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveRecord {
    pub steps: Vec<CurveStep>,
}

impl CurveRecord {
    /// Signed crossing sum against one component of the origin diagram.
    pub fn crossing_sum(&self, d: &Diagram, comp: ComponentId) -> i64 {
        self.steps
            .iter()
            .filter_map(|s| match s {
                CurveStep::Arc { arc, sign, .. } if d.arc_component(*arc) == Some(comp) => {
                    Some(*sign as i64)
                }
                _ => None,
            })
            .sum()
    }

    /// Linking number with a component: half the signed crossing sum.
    pub fn linking_with(&self, d: &Diagram, comp: ComponentId) -> Result<i64> {
        let s = self.crossing_sum(d, comp);
        if s % 2 != 0 {
            return Err(Error::integrity(
                "malformed curve route: odd crossing sum against a closed component",
            ));
        }
        Ok(s / 2)
    }

    pub fn mate_signs(&self) -> Vec<i8> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                CurveStep::Mate { sign, .. } => Some(*sign),
                _ => None,
            })
            .collect()
    }

    pub fn validate(&self, origin: &Diagram) -> Result<()> {
        for s in &self.steps {
            if let CurveStep::Arc { arc, .. } = s {
                if origin.arc_component(*arc).is_none() {
                    return Err(Error::integrity(format!(
                        "malformed curve route: unknown origin arc {arc}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One recorded (alpha, beta) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub alpha: CurveRecord,
    pub beta: CurveRecord,
    /// The components whose mutual crossings this pair changed.
    pub pattern: ComponentId,
    pub surgery: ComponentId,
}

pub type Report = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlinkCertificate {
    pub origin_hash: u64,
    pub check_level: String,
    pub pairs: Vec<PairRecord>,
    pub final_diagram: Diagram,
    pub report: Report,
}

impl UnlinkCertificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("certificate v1\n");
        out.push_str(&format!("origin {:016x}\n", self.origin_hash));
        out.push_str(&format!("check-level {}\n", self.check_level));
        out.push_str(&format!("pairs {}\n", self.pairs.len()));
        for (i, p) in self.pairs.iter().enumerate() {
            out.push_str(&format!(
                "pair {} pattern={} surgery={}\n",
                i + 1,
                p.pattern,
                p.surgery
            ));
            for (name, curve) in [("alpha", &p.alpha), ("beta", &p.beta)] {
                let steps: Vec<String> = curve.steps.iter().map(|s| s.to_string()).collect();
                out.push_str(&format!(
                    "curve {} {} steps={}\n",
                    name,
                    i + 1,
                    if steps.is_empty() { "-".to_string() } else { steps.join(",") }
                ));
            }
        }
        out.push_str("final\n");
        for line in self.final_diagram.serialize().lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("report\n");
        for (k, v) in &self.report {
            out.push_str(&format!("  {k} {v}\n"));
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<UnlinkCertificate> {
        let mut lines = text.lines().peekable();
        let expect = |got: Option<&str>, want: &str| -> Result<()> {
            match got {
                Some(l) if l.trim() == want => Ok(()),
                other => Err(Error::integrity(format!(
                    "certificate: expected `{want}`, got `{}`",
                    other.unwrap_or("<eof>")
                ))),
            }
        };
        expect(lines.next(), "certificate v1")?;
        let origin_line = lines.next().unwrap_or_default();
        let origin_hash = origin_line
            .strip_prefix("origin ")
            .and_then(|h| u64::from_str_radix(h.trim(), 16).ok())
            .ok_or_else(|| Error::integrity("certificate: bad origin line"))?;
        let level_line = lines.next().unwrap_or_default();
        let check_level = level_line
            .strip_prefix("check-level ")
            .ok_or_else(|| Error::integrity("certificate: bad check-level line"))?
            .trim()
            .to_string();
        let pairs_line = lines.next().unwrap_or_default();
        let k: usize = pairs_line
            .strip_prefix("pairs ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::integrity("certificate: bad pairs line"))?;
        let mut pairs = Vec::with_capacity(k);
        for i in 0..k {
            let head = lines.next().unwrap_or_default();
            let rest = head
                .strip_prefix(&format!("pair {} ", i + 1))
                .ok_or_else(|| Error::integrity(format!("certificate: bad pair {} line", i + 1)))?;
            let mut pattern = None;
            let mut surgery = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("pattern=") {
                    pattern = v.parse().ok().map(ComponentId);
                }
                if let Some(v) = tok.strip_prefix("surgery=") {
                    surgery = v.parse().ok().map(ComponentId);
                }
            }
            let (pattern, surgery) = match (pattern, surgery) {
                (Some(p), Some(s)) => (p, s),
                _ => return Err(Error::integrity("certificate: pair line missing components")),
            };
            let mut curves = Vec::new();
            for name in ["alpha", "beta"] {
                let line = lines.next().unwrap_or_default();
                let want = format!("curve {} {} steps=", name, i + 1);
                let body = line
                    .strip_prefix(&want)
                    .ok_or_else(|| Error::integrity(format!("certificate: bad {name} curve line")))?;
                let mut steps = Vec::new();
                if body.trim() != "-" {
                    for tok in body.trim().split(',') {
                        steps.push(CurveStep::parse(tok)?);
                    }
                }
                curves.push(CurveRecord { steps });
            }
            let beta = curves.pop().unwrap();
            let alpha = curves.pop().unwrap();
            pairs.push(PairRecord { alpha, beta, pattern, surgery });
        }
        expect(lines.next(), "final")?;
        let mut final_text = String::new();
        while let Some(&l) = lines.peek() {
            if l.trim() == "report" {
                break;
            }
            let l = lines.next().unwrap();
            final_text.push_str(l.strip_prefix("  ").unwrap_or(l));
            final_text.push('\n');
        }
        expect(lines.next(), "report")?;
        let mut report = Report::new();
        loop {
            let Some(l) = lines.next() else {
                return Err(Error::integrity("certificate: missing end"));
            };
            if l.trim() == "end" {
                break;
            }
            let body = l.trim();
            let (key, value) = body
                .split_once(' ')
                .ok_or_else(|| Error::integrity(format!("certificate: bad report line `{l}`")))?;
            report.insert(key.to_string(), value.trim().to_string());
        }
        let final_diagram = Diagram::parse(&final_text)?;
        Ok(UnlinkCertificate { origin_hash, check_level, pairs, final_diagram, report })
    }
}
