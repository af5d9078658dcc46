//! Seeded random homology-sphere presentations and the batch harness that
//! unlinks and verifies each one.  Everything is a pure function of the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{catalog, ArcId, ComponentId, Diagram};
use crate::error::{Error, Result};
use crate::homology::is_homology_sphere;
use crate::moves::{clasp, ops::r2_push, r1_insert};
use crate::unlink::{self, CheckLevel};

/// Knobs for the generator; defaults match the acceptance suite.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_surgery: u32,
    pub max_crossings: usize,
    /// patterndirected over-pushes (gadget sites) to attempt
    pub max_sites: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_surgery: 4, max_crossings: 12, max_sites: 3 }
    }
}

fn random_arc(rng: &mut ChaCha8Rng, d: &Diagram, comp: ComponentId) -> ArcId {
    let arcs = &d.component(comp).unwrap().arcs;
    arcs[rng.gen_range(0..arcs.len())]
}

/// One random homology-sphere presentation with a marked pattern circle:
/// disjoint framed unknots tangled by clasps, rejected until the linking-
/// framing matrix is unimodular, then decorated with pattern features.
pub fn generate(seed: u64, cfg: &GenConfig) -> Result<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..400 {
        let n_surgery = rng.gen_range(1..=cfg.max_surgery);
        let mut text = String::from("component 1 role=pattern framing=none arcs=1\n");
        let mut next_arc = 2;
        for i in 0..n_surgery {
            let f = rng.gen_range(-2i64..=2);
            text.push_str(&format!(
                "component {} role=surgery framing={} arcs={}\n",
                i + 2,
                f,
                next_arc
            ));
            next_arc += 1;
        }
        let mut d = Diagram::parse(&text)?;

        // tangle the surgery curves
        let n_clasps = rng.gen_range(0..=2.min(cfg.max_crossings / 4));
        for _ in 0..n_clasps {
            let a = ComponentId(rng.gen_range(2..=n_surgery + 1));
            let b = ComponentId(rng.gen_range(2..=n_surgery + 1));
            if a == b {
                continue;
            }
            let sign = if rng.gen() { 1 } else { -1 };
            let (aa, ba) = (random_arc(&mut rng, &d, a), random_arc(&mut rng, &d, b));
            if let Ok((d2, _)) = clasp(&d, aa, ba, sign) {
                d = d2;
            }
        }
        if !is_homology_sphere(&d).unwrap_or(false) {
            continue;
        }

        // pattern decorations: linking clasps, kinks, gadget sites
        let n_lk = rng.gen_range(0..=2);
        for _ in 0..n_lk {
            if d.crossings().count() + 2 > cfg.max_crossings {
                break;
            }
            let g = ComponentId(rng.gen_range(2..=n_surgery + 1));
            let sign = if rng.gen() { 1 } else { -1 };
            let (pa, ga) = (
                random_arc(&mut rng, &d, ComponentId(1)),
                random_arc(&mut rng, &d, g),
            );
            if let Ok((d2, _)) = clasp(&d, pa, ga, sign) {
                d = d2;
            }
        }
        if rng.gen_bool(0.4) && d.crossings().count() + 1 <= cfg.max_crossings {
            let pa = random_arc(&mut rng, &d, ComponentId(1));
            if let Ok((d2, _)) = r1_insert(&d, pa, rng.gen()) {
                d = d2;
            }
        }
        let n_sites = rng.gen_range(0..=cfg.max_sites);
        for _ in 0..n_sites {
            if d.crossings().count() + 2 > cfg.max_crossings {
                break;
            }
            let g = ComponentId(rng.gen_range(2..=n_surgery + 1));
            let (pa, ga) = (
                random_arc(&mut rng, &d, ComponentId(1)),
                random_arc(&mut rng, &d, g),
            );
            if let Ok((d2, _)) = r2_push(&d, pa, ga, true) {
                d = d2;
            }
        }

        if d.genus() != 0 {
            continue;
        }
        if !is_homology_sphere(&d).unwrap_or(false) {
            continue;
        }
        return Ok(d);
    }
    Err(Error::invariant(format!(
        "generator failed to produce a homology sphere from seed {seed}"
    )))
}

/// Outcome of one oracle case.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub seed: u64,
    pub pass: bool,
    pub pairs: usize,
    pub note: String,
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub cases: Vec<CaseResult>,
}

impl Summary {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    pub fn render(&self, seed: u64, count: u32) -> String {
        let mut out = format!("oracle seed={seed} count={count}\n");
        let mut histogram = std::collections::BTreeMap::new();
        for c in &self.cases {
            *histogram.entry(c.pairs).or_insert(0usize) += 1;
        }
        for c in &self.cases {
            if !c.pass {
                out.push_str(&format!("case seed={} FAIL {}\n", c.seed, c.note));
            }
        }
        out.push_str(&format!("pass {}/{}\n", self.passed(), self.cases.len()));
        let hist: Vec<String> =
            histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        out.push_str(&format!("gadget-pairs histogram: {}\n", hist.join(" ")));
        out
    }
}

/// Run `count` seeded cases: generate, unlink, verify, tally.
pub fn run(seed: u64, count: u32, level: CheckLevel, cfg: &GenConfig) -> Summary {
    let mut summary = Summary::default();
    for i in 0..count {
        let case_seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(i as u64);
        let result = run_case(case_seed, level, cfg);
        summary.cases.push(match result {
            Ok((pairs, ok, note)) => {
                CaseResult { seed: case_seed, pass: ok, pairs, note }
            }
            Err(e) => CaseResult { seed: case_seed, pass: false, pairs: 0, note: e.to_string() },
        });
    }
    summary
}

fn run_case(case_seed: u64, level: CheckLevel, cfg: &GenConfig) -> Result<(usize, bool, String)> {
    let d = generate(case_seed, cfg)?;
    let cert = unlink::unlink(&d, level)?;
    let outcome = unlink::verify_certificate(&cert, &d)?;
    let note = if outcome.ok {
        String::new()
    } else {
        outcome.mismatches.join("; ")
    };
    Ok((cert.pairs.len(), outcome.ok, note))
}

/// Deterministic catalog sample for smoke tests.
pub fn poincare_example() -> Diagram {
    catalog::poincare_sphere()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Role;

    #[test]
    fn generator_is_deterministic() {
        let cfg = GenConfig::default();
        let a = generate(42, &cfg).unwrap();
        let b = generate(42, &cfg).unwrap();
        assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn generated_presentations_are_valid() {
        let cfg = GenConfig::default();
        for seed in 0..20 {
            let d = generate(seed, &cfg).unwrap();
            assert!(is_homology_sphere(&d).unwrap(), "seed {seed}");
            assert_eq!(d.genus(), 0, "seed {seed}");
            assert!(d.crossings().count() <= cfg.max_crossings, "seed {seed}");
            assert!(!d.components_with_role(Role::Pattern).is_empty());
        }
    }

    #[test]
    fn oracle_small_run_passes() {
        let cfg = GenConfig::default();
        let s = run(1, 10, CheckLevel::Level1, &cfg);
        assert_eq!(s.passed(), 10, "{}", s.render(1, 10));
    }

    #[test]
    fn oracle_render_deterministic() {
        let cfg = GenConfig::default();
        let a = run(7, 5, CheckLevel::Level1, &cfg).render(7, 5);
        let b = run(7, 5, CheckLevel::Level1, &cfg).render(7, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_count_is_empty_summary() {
        let cfg = GenConfig::default();
        let s = run(3, 0, CheckLevel::Level1, &cfg);
        assert_eq!(s.cases.len(), 0);
        assert!(s.render(3, 0).contains("pass 0/0"));
    }
}
