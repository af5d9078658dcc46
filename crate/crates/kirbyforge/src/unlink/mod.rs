//! The unlinking pipeline: slide the pattern off the surgery curves until all
//! linking numbers vanish, pair the remaining over-crossings by sign, trade
//! each pair for a 0-framed helper pair, and split the pattern into its own
//! ball — emitting a certificate whose every claim can be re-derived.

pub mod certificate;

pub use certificate::{CurveRecord, CurveStep, PairRecord, Report, UnlinkCertificate};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::diagram::{ArcId, ComponentId, CrossingId, Diagram, Role};
use crate::error::{Error, Result};
use crate::groups::{self, fox, GroupPresentation, Word};
use crate::homology::{
    self, is_homology_sphere, linking_framing_matrix, linking_number, AbelianGroup, IntMatrix,
    RoleFilter,
};
use crate::moves::{
    gadget::{gadget_insert, gadget_resolve},
    handle_slide,
    split::{split_off, splits_under},
    trace::{Move, MoveTrace},
};

/// How much of the derived-series checking the pipeline performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckLevel {
    LinkingOnly,
    Level1,
    Level2,
}

impl CheckLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckLevel::LinkingOnly => "linking-only",
            CheckLevel::Level1 => "level1",
            CheckLevel::Level2 => "level2",
        }
    }

    pub fn parse(s: &str) -> Result<CheckLevel> {
        match s {
            "linking-only" => Ok(CheckLevel::LinkingOnly),
            "level1" => Ok(CheckLevel::Level1),
            "level2" => Ok(CheckLevel::Level2),
            other => Err(Error::precondition(format!("unknown check level `{other}`"))),
        }
    }
}

/// Arc provenance across the pipeline: current arc -> origin arc.
#[derive(Debug, Clone, Default)]
struct Origins {
    map: BTreeMap<ArcId, ArcId>,
}

impl Origins {
    fn resolve(&self, a: ArcId) -> ArcId {
        let mut cur = a;
        let mut guard = 0;
        while let Some(&b) = self.map.get(&cur) {
            if b == cur || guard > self.map.len() {
                break;
            }
            cur = b;
            guard += 1;
        }
        cur
    }

    fn absorb(&mut self, newer: &BTreeMap<ArcId, ArcId>) {
        for (&n, &o) in newer {
            if n != o {
                self.map.insert(n, o);
            }
        }
    }
}

/// Slide every pattern component over the surgery curves until all
/// pattern-surgery linking numbers vanish.  The slide counts solve the
/// integer system given by the surgery linking-framing matrix, which is
/// unimodular exactly when the input presents a homology sphere.
pub fn kill_linking(d: &Diagram) -> Result<(Diagram, MoveTrace)> {
    let (out, trace, _) = kill_linking_tracked(d)?;
    Ok((out, trace))
}

fn kill_linking_tracked(d: &Diagram) -> Result<(Diagram, MoveTrace, Origins)> {
    if !is_homology_sphere(d)? {
        let det = homology::surgery_determinant(d)?;
        return Err(Error::precondition(format!(
            "input is not a homology sphere presentation: det(A_Gamma) = {det}"
        )));
    }
    let surgery = homology::selected_components(d, RoleFilter::Surgery);
    let patterns = d.components_with_role(Role::Pattern);
    let a = linking_framing_matrix(d, RoleFilter::Surgery)?;
    let mut trace = MoveTrace::new(d);
    let mut cur = d.clone();
    let mut origins = Origins::default();

    for &c in &patterns {
        let v: Vec<BigInt> = surgery
            .iter()
            .map(|&g| linking_number(&cur, c, g).map(|x| BigInt::from(-x)))
            .collect::<Result<_>>()?;
        let x = crate::homology::snf::solve(&a, &v).ok_or_else(|| {
            Error::invariant("unimodular system unexpectedly unsolvable over the integers")
        })?;
        for (j, &g) in surgery.iter().enumerate() {
            let count = &x[j];
            let sign: i8 = if count >= &BigInt::from(0) { 1 } else { -1 };
            let n: u64 = {
                use num_traits::Signed;
                let abs = count.abs();
                abs.try_into().map_err(|_| Error::invariant("slide count overflow"))?
            };
            for _ in 0..n {
                let pre = cur.clone();
                let (next, rec) = handle_slide(&cur, c, g, sign)?;
                trace.push_applied(&pre, Move::HandleSlide { slid: c, over: g, sign }, &next)?;
                origins.absorb(&rec.arc_origin);
                cur = next;
            }
        }
    }
    // the point of the exercise, recomputed from the diagram
    for &c in &patterns {
        for &g in &surgery {
            let lk = linking_number(&cur, c, g)?;
            if lk != 0 {
                return Err(Error::invariant(format!(
                    "kill_linking left lk({c}, {g}) = {lk}"
                )));
            }
        }
    }
    Ok((cur, trace, origins))
}

/// Opposite-sign pairs of pattern-over-surgery crossings, grouped per
/// (pattern, surgery) ordered pair, paired greedily in traversal order along
/// the surgery component.  Requires all pattern-surgery linking numbers to
/// vanish; on a planar diagram the over-crossing signs then cancel exactly.
pub fn pair_crossings(
    d: &Diagram,
) -> Result<Vec<(ComponentId, ComponentId, CrossingId, CrossingId)>> {
    let patterns = d.components_with_role(Role::Pattern);
    let surgery = homology::selected_components(d, RoleFilter::Surgery);
    let mut out = Vec::new();
    for &c in &patterns {
        for &g in &surgery {
            if linking_number(d, c, g)? != 0 {
                return Err(Error::precondition(format!(
                    "pairing needs lk({c}, {g}) = 0"
                )));
            }
            // walk g's passages; collect crossings where c is over
            let comp = d.component(g).unwrap();
            let mut pending: Vec<(CrossingId, i8)> = Vec::new();
            for p in d.topology().passages_of(comp) {
                if p.is_over {
                    continue;
                }
                let x = d.crossing(p.crossing).unwrap();
                let (_, over) = d.strands(x);
                if over != c {
                    continue;
                }
                let s = d.sign(x.id)?;
                if let Some(pos) = pending.iter().position(|&(_, ps)| ps == -s) {
                    let (mate, _) = pending.remove(pos);
                    out.push((c, g, mate, x.id));
                } else {
                    pending.push((x.id, s));
                }
            }
            if !pending.is_empty() {
                // impossible on a planar diagram once linking vanishes; a
                // Reidemeister-2 normalization could only add cancelling
                // pairs, so a leftover signals corrupted input
                return Err(Error::invariant(format!(
                    "over-crossing signs of ({c}, {g}) do not cancel; diagram is not planar-consistent"
                )));
            }
        }
    }
    Ok(out)
}

/// Read the curve word of a recorded route in a presentation of the origin
/// complement: one letter per under-pass beneath a selected arc.
pub fn route_word(rec: &CurveRecord, pres: &GroupPresentation) -> Word {
    let mut w = Word::empty();
    for s in &rec.steps {
        if let CurveStep::Arc { arc, over: false, sign } = s {
            if let Some(g) = pres.generator_of_arc(*arc) {
                w.push(g, *sign);
            }
        }
    }
    w
}

fn bool_str(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// Recompute every report entry from the certificate body plus the origin
/// diagram.  This is the single source of truth used both when emitting a
/// certificate and when verifying one.
pub fn compute_report(
    origin: &Diagram,
    pairs: &[PairRecord],
    final_diagram: &Diagram,
    level: CheckLevel,
) -> Result<Report> {
    let mut rep = Report::new();
    let k = pairs.len();
    rep.insert("pairs".into(), k.to_string());
    rep.insert("crossing-changes".into(), (2 * k).to_string());
    rep.insert(
        "origin-homology-sphere".into(),
        bool_str(is_homology_sphere(origin)?),
    );

    // linking conditions from the recorded routes
    let comps = origin.component_ids();
    let mut all_links_ok = true;
    for (i, p) in pairs.iter().enumerate() {
        p.alpha.validate(origin)?;
        p.beta.validate(origin)?;
        let mates = p.beta.mate_signs();
        let lk_ab: i64 = mates.iter().map(|&s| s as i64).sum::<i64>() / 2;
        rep.insert(format!("lk-alpha-beta-{}", i + 1), lk_ab.to_string());
        if lk_ab != 1 {
            all_links_ok = false;
        }
        if !p.alpha.mate_signs().is_empty() {
            // mate crossings are recorded once, on the beta side
            all_links_ok = false;
        }
        for &c in &comps {
            if p.alpha.linking_with(origin, c)? != 0 || p.beta.linking_with(origin, c)? != 0 {
                all_links_ok = false;
            }
        }
    }
    rep.insert("helpers-null-linked".into(), bool_str(all_links_ok));

    // helper-block linking-framing matrix: hyperbolic blocks exactly.
    // Cross-pair entries are structurally zero: routes carry no cross-pair
    // crossings, and helpers-null-linked pins the component columns.
    let mut block_ok = true;
    for p in pairs {
        let mates = p.beta.mate_signs();
        let lk_ab: i64 = mates.iter().map(|&s| s as i64).sum::<i64>() / 2;
        if lk_ab.abs() != 1 {
            block_ok = false;
        }
    }
    rep.insert("helper-block-hyperbolic".into(), bool_str(block_ok));

    // H1 with helpers adjoined as 0-framed surgery curves, assembled from
    // the origin matrix and the recorded linking data
    {
        let base = linking_framing_matrix(origin, RoleFilter::Framed)?;
        let framed = homology::selected_components(origin, RoleFilter::Framed);
        let n = base.rows + 2 * k;
        let mut m = IntMatrix::zero(n, n);
        for i in 0..base.rows {
            for j in 0..base.cols {
                m[(i, j)] = base[(i, j)].clone();
            }
        }
        for (pi, p) in pairs.iter().enumerate() {
            let ai = base.rows + 2 * pi;
            let bi = ai + 1;
            for (j, &g) in framed.iter().enumerate() {
                let la = BigInt::from(p.alpha.linking_with(origin, g)?);
                let lb = BigInt::from(p.beta.linking_with(origin, g)?);
                m[(ai, j)] = la.clone();
                m[(j, ai)] = la;
                m[(bi, j)] = lb.clone();
                m[(j, bi)] = lb;
            }
            let mates: i64 = p.beta.mate_signs().iter().map(|&s| s as i64).sum::<i64>() / 2;
            m[(ai, bi)] = BigInt::from(mates);
            m[(bi, ai)] = BigInt::from(mates);
        }
        let h1 = AbelianGroup::from_presentation(&m);
        rep.insert("h1-with-helpers-trivial".into(), bool_str(h1.is_trivial()));
        let det = m.det();
        use num_traits::Signed;
        rep.insert("det-with-helpers-unit".into(), bool_str(det.abs().is_one()));
    }

    // the final diagram
    let patterns = final_diagram.components_with_role(Role::Pattern);
    rep.insert(
        "final-splits-under".into(),
        bool_str(!patterns.is_empty() && splits_under(final_diagram, &patterns)?),
    );
    rep.insert("final-genus-zero".into(), bool_str(final_diagram.genus() == 0));
    rep.insert(
        "final-homology-sphere".into(),
        bool_str(is_homology_sphere(final_diagram)?),
    );
    let no_helpers = final_diagram.components().all(|c| !c.role.is_helper());
    rep.insert("final-no-helpers".into(), bool_str(no_helpers));

    if level != CheckLevel::LinkingOnly {
        // derived level 1 for every recorded curve, against the Wirtinger
        // presentation of the whole origin complement
        let pres = groups::wirtinger(origin, &origin.component_ids())?;
        let mut all1 = true;
        let mut agrees = true;
        for (i, p) in pairs.iter().enumerate() {
            for (name, rec) in [("alpha", &p.alpha), ("beta", &p.beta)] {
                let w = route_word(rec, &pres);
                let l1 = groups::derived_level_1(&w, &pres);
                rep.insert(format!("level1-{}-{}", name, i + 1), bool_str(l1));
                if !l1 {
                    all1 = false;
                }
                // the level-1 verdict must agree with the linking report
                let links_zero = origin
                    .component_ids()
                    .iter()
                    .all(|&c| rec.linking_with(origin, c).map(|x| x == 0).unwrap_or(false));
                if l1 != links_zero {
                    agrees = false;
                }
            }
        }
        rep.insert("level1-all".into(), bool_str(all1));
        rep.insert("level1-matches-linking".into(), bool_str(agrees));
    }

    if level == CheckLevel::Level2 {
        // knot-case advisory: reduce each curve's Fox vector in the pattern
        // knot's Alexander module
        let patterns0 = origin.components_with_role(Role::Pattern);
        if patterns0.len() == 1 {
            let pres = groups::wirtinger(origin, &patterns0)?;
            for (i, p) in pairs.iter().enumerate() {
                for (name, rec) in [("alpha", &p.alpha), ("beta", &p.beta)] {
                    let w = route_word(rec, &pres);
                    let verdict = if groups::derived_level_1(&w, &pres) {
                        fox::derived_level_2(&w, &pres)?.to_string()
                    } else {
                        "not-in-G1".to_string()
                    };
                    rep.insert(format!("level2-{}-{}", name, i + 1), verdict);
                }
            }
        } else {
            rep.insert("level2".into(), "inconclusive-multi-component".into());
        }
    }

    Ok(rep)
}

/// Whether a freshly computed report is "all true": every boolean entry true
/// and every lk-alpha-beta entry equal to one.
pub fn report_all_true(rep: &Report) -> bool {
    rep.iter().all(|(k, v)| {
        if k.starts_with("lk-alpha-beta-") {
            v == "1"
        } else if k.starts_with("level2") {
            // advisory: inconclusive does not fail a certificate
            v != "not-in-G1"
        } else if k == "pairs" || k == "crossing-changes" {
            true
        } else {
            v == "true"
        }
    })
}

/// The full pipeline.
pub fn unlink(d: &Diagram, level: CheckLevel) -> Result<UnlinkCertificate> {
    let patterns = d.components_with_role(Role::Pattern);
    if patterns.is_empty() {
        return Err(Error::precondition("no pattern components to unlink"));
    }
    let (mut cur, mut trace, mut origins) = kill_linking_tracked(d)?;

    let pairs_found = pair_crossings(&cur)?;
    let over_total = pairs_found.len() * 2;
    let mut records: Vec<PairRecord> = Vec::new();

    // gadgets may only touch pattern-surgery crossings: snapshot each
    // pattern's self-crossing sign multiset at the staging diagram
    let self_multiset = |dd: &Diagram, c: ComponentId| -> Vec<i8> {
        let mut v: Vec<i8> = dd
            .crossings()
            .filter(|x| {
                let (u, o) = dd.strands(x);
                u == c && o == c
            })
            .map(|x| dd.sign(x.id).unwrap())
            .collect();
        v.sort();
        v
    };
    let staged_selfs: Vec<(ComponentId, Vec<i8>)> = cur
        .components_with_role(Role::Pattern)
        .into_iter()
        .map(|c| (c, self_multiset(&cur, c)))
        .collect();

    for (c, g, x1, x2) in pairs_found {
        let pre = cur.clone();
        let (with_gadget, handle) = gadget_insert(&cur, (x1, x2))?;
        trace.push_applied(&pre, Move::GadgetInsert { site: (x1, x2) }, &with_gadget)?;

        // record the curves in origin coordinates
        let mut alpha_rec = CurveRecord::default();
        for &xid in &handle.alpha_crossings {
            let x = with_gadget.crossing(xid).unwrap();
            let (_, over) = with_gadget.strands(x);
            let over_flag = over == handle.alpha;
            let host_arc = if over_flag {
                x.slots[0]
            } else {
                let oi = with_gadget.topology().over_in_slot(xid).unwrap() as usize;
                x.slots[oi]
            };
            let piece = handle.piece_origin.get(&host_arc).copied().unwrap_or(host_arc);
            let origin_arc = origins.resolve(piece);
            alpha_rec.steps.push(CurveStep::Arc {
                arc: origin_arc,
                over: over_flag,
                sign: with_gadget.sign(xid)?,
            });
        }
        let mut beta_rec = CurveRecord::default();
        for &xid in &handle.beta_crossings {
            let x = with_gadget.crossing(xid).unwrap();
            let (_, over) = with_gadget.strands(x);
            let over_flag = over == handle.beta;
            beta_rec
                .steps
                .push(CurveStep::Mate { over: over_flag, sign: with_gadget.sign(xid)? });
        }
        // sanity: route linking sums must reproduce the live diagram's
        for &comp in &d.component_ids() {
            let from_route = alpha_rec.linking_with(d, comp)?;
            let live = linking_number(&with_gadget, handle.alpha, comp)?;
            if from_route != live {
                return Err(Error::invariant(format!(
                    "route pullback mismatch: lk(alpha, {comp}) {from_route} != {live}"
                )));
            }
        }
        records.push(PairRecord { alpha: alpha_rec, beta: beta_rec, pattern: c, surgery: g });

        // resolve: slide-and-cancel as two trace moves
        gadget_resolve(&with_gadget, &handle)?;
        let mid = trace.push(
            &with_gadget,
            Move::GadgetSlide { alpha: handle.alpha, beta: handle.beta, site: handle.site },
        )?;
        cur = trace.push(&mid, Move::HelperCancel { alpha: handle.alpha, beta: handle.beta })?;
        origins.absorb(&handle.piece_origin);
    }

    // termination bound: one pair per two over-crossings
    if records.len() * 2 > over_total {
        return Err(Error::invariant("gadget count exceeded the over-crossing bound"));
    }

    // gadget phase must not have touched pattern self-knotting
    for (c, before) in &staged_selfs {
        let after = self_multiset(&cur, *c);
        if &after != before {
            return Err(Error::invariant(format!(
                "gadget phase changed self-crossings of pattern {c}"
            )));
        }
    }

    // final split checkpoint
    let patterns_now = cur.components_with_role(Role::Pattern);
    if !splits_under(&cur, &patterns_now)? {
        return Err(Error::invariant(
            "pipeline left a pattern strand passing over a surgery strand",
        ));
    }
    let pre = cur.clone();
    cur = trace.push(&pre, Move::Split { comps: patterns_now.clone() })?;
    split_off(&cur, &patterns_now)?;

    let cur = cur.canonicalize();
    let report = compute_report(d, &records, &cur, level)?;
    let cert = UnlinkCertificate {
        origin_hash: d.hash(),
        check_level: level.as_str().to_string(),
        pairs: records,
        final_diagram: cur,
        report,
    };
    // self-check before returning
    let outcome = verify_certificate(&cert, d)?;
    if !outcome.ok {
        let bad: Vec<String> = outcome
            .report
            .iter()
            .filter(|(k, v)| {
                !(v.as_str() == "true"
                    || k.starts_with("lk-alpha-beta-") && v.as_str() == "1"
                    || k.starts_with("level2")
                    || k.as_str() == "pairs"
                    || k.as_str() == "crossing-changes")
            })
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        return Err(Error::invariant(format!(
            "freshly produced certificate fails verification: mismatches {:?}, false entries {:?}",
            outcome.mismatches, bad
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: Report,
    pub ok: bool,
    pub mismatches: Vec<String>,
}

/// Recompute every report entry from scratch and compare with the stored
/// report; nothing in the certificate is trusted.
pub fn verify_certificate(cert: &UnlinkCertificate, origin: &Diagram) -> Result<VerifyOutcome> {
    if origin.hash() != cert.origin_hash {
        return Err(Error::integrity(format!(
            "origin hash mismatch: certificate has {:016x}, diagram has {:016x}",
            cert.origin_hash,
            origin.hash()
        )));
    }
    let level = CheckLevel::parse(&cert.check_level)?;
    let fresh = compute_report(origin, &cert.pairs, &cert.final_diagram, level)?;
    let mut mismatches = Vec::new();
    for (k, v) in &fresh {
        match cert.report.get(k) {
            Some(got) if got == v => {}
            Some(got) => mismatches.push(format!("{k}: stored {got}, recomputed {v}")),
            None => mismatches.push(format!("{k}: missing from stored report")),
        }
    }
    for k in cert.report.keys() {
        if !fresh.contains_key(k) {
            mismatches.push(format!("{k}: not recomputable"));
        }
    }
    let ok = mismatches.is_empty() && report_all_true(&fresh);
    Ok(VerifyOutcome { report: fresh, ok, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::moves::gadget::fig3_tangle;
    use crate::moves::ops::r2_push;

    fn split_input() -> Diagram {
        let text = "\
component 1 role=pattern framing=none arcs=1
component 2 role=surgery framing=1 arcs=2
";
        Diagram::parse(text).unwrap()
    }

    #[test]
    fn kill_linking_noop_when_unlinked() {
        let d = split_input();
        let (d2, trace) = kill_linking(&d).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(d2.serialize(), d.serialize());
    }

    #[test]
    fn kill_linking_single_curve() {
        // lk(c, gamma) = 2 over a single +1-framed gamma: two negative slides
        let d = split_input();
        let a1 = d.component(ComponentId(1)).unwrap().arcs[0];
        let a2 = d.component(ComponentId(2)).unwrap().arcs[0];
        let (d, _) = crate::moves::clasp(&d, a1, a2, 1).unwrap();
        let a1 = d.component(ComponentId(1)).unwrap().arcs[0];
        let a2 = d.component(ComponentId(2)).unwrap().arcs[0];
        let (d, _) = crate::moves::clasp(&d, a1, a2, 1).unwrap();
        assert_eq!(linking_number(&d, ComponentId(1), ComponentId(2)).unwrap(), 2);
        let (d2, trace) = kill_linking(&d).unwrap();
        assert_eq!(trace.steps.len(), 2, "two slides for lk 2 over framing 1");
        assert_eq!(linking_number(&d2, ComponentId(1), ComponentId(2)).unwrap(), 0);
        // replay reproduces the result
        let replayed = trace.replay(&d).unwrap();
        assert_eq!(replayed.hash(), d2.hash());
    }

    #[test]
    fn kill_linking_rejects_non_sphere() {
        let d = catalog::unknot(Role::Surgery, crate::diagram::Framing::Framed(0));
        let mut text = d.serialize();
        text.push_str("component 2 role=pattern framing=none arcs=50\n");
        let d = Diagram::parse(&text).unwrap();
        let e = kill_linking(&d).unwrap_err();
        assert!(format!("{e}").contains("det"), "{e}");
    }

    #[test]
    fn pairing_on_fig3() {
        let (d, pair) = fig3_tangle();
        let pairs = pair_crossings(&d).unwrap();
        assert_eq!(pairs.len(), 1);
        let (_, _, a, b) = pairs[0];
        assert_eq!(
            (a.min(b), a.max(b)),
            (pair.0.min(pair.1), pair.0.max(pair.1))
        );
    }

    #[test]
    fn pairing_empty_when_no_crossings() {
        let d = split_input();
        assert!(pair_crossings(&d).unwrap().is_empty());
    }

    #[test]
    fn unlink_split_input_gives_empty_certificate() {
        let d = split_input();
        let cert = unlink(&d, CheckLevel::Level1).unwrap();
        assert_eq!(cert.pairs.len(), 0);
        assert_eq!(cert.final_diagram.serialize(), d.serialize());
        assert!(report_all_true(&cert.report));
        let v = verify_certificate(&cert, &d).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
    }

    #[test]
    fn unlink_fig3_example() {
        let (d, _) = fig3_tangle();
        let cert = unlink(&d, CheckLevel::Level1).unwrap();
        assert_eq!(cert.pairs.len(), 1);
        assert!(report_all_true(&cert.report), "{:?}", cert.report);
        assert_eq!(cert.report["lk-alpha-beta-1"], "1");
        assert_eq!(cert.report["level1-alpha-1"], "true");
        let v = verify_certificate(&cert, &d).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
        // the final diagram splits: pattern all-under
        let pats = cert.final_diagram.components_with_role(Role::Pattern);
        assert!(splits_under(&cert.final_diagram, &pats).unwrap());
    }

    #[test]
    fn unlink_level2_advisory_on_fig3() {
        let (d, _) = fig3_tangle();
        let cert = unlink(&d, CheckLevel::Level2).unwrap();
        assert!(cert.report.keys().any(|k| k.starts_with("level2-")));
        let v = verify_certificate(&cert, &d).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
    }

    #[test]
    fn certificate_roundtrip() {
        let (d, _) = fig3_tangle();
        let cert = unlink(&d, CheckLevel::Level1).unwrap();
        let text = cert.to_text();
        let back = UnlinkCertificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn tampered_certificate_fails() {
        let (d, _) = fig3_tangle();
        let mut cert = unlink(&d, CheckLevel::Level1).unwrap();
        // reroute beta so lk(alpha, beta) reads 0
        cert.pairs[0].beta.steps.clear();
        let v = verify_certificate(&cert, &d).unwrap();
        assert!(!v.ok);
        assert!(v.mismatches.iter().any(|m| m.contains("lk-alpha-beta-1")));
    }

    #[test]
    fn certificate_against_wrong_origin() {
        let (d, _) = fig3_tangle();
        let cert = unlink(&d, CheckLevel::Level1).unwrap();
        let other = catalog::poincare_sphere();
        let e = verify_certificate(&cert, &other).unwrap_err();
        assert_eq!(e.exit_code(), 5);
    }

    #[test]
    fn unlink_after_extra_push() {
        // two opposite pairs: pattern pushed over gamma twice more
        let (d, _) = fig3_tangle();
        let pat_arc = d.component(ComponentId(1)).unwrap().arcs[0];
        let sur_arc = d.component(ComponentId(2)).unwrap().arcs[0];
        let (d2, _) = r2_push(&d, pat_arc, sur_arc, true).unwrap();
        assert!(is_homology_sphere(&d2).unwrap());
        let cert = unlink(&d2, CheckLevel::Level1).unwrap();
        assert_eq!(cert.pairs.len(), 2);
        assert!(report_all_true(&cert.report), "{:?}", cert.report);
        let v = verify_certificate(&cert, &d2).unwrap();
        assert!(v.ok, "{:?}", v.mismatches);
    }
}
