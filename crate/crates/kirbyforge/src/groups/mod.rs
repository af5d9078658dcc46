//! Wirtinger presentations of link-exterior groups, words for curves in the
//! complement, and derived-series membership checks.
//!
//! Generators correspond to the over-arcs of the selected components (runs of
//! PD arcs joined through over-passages, and through crossings whose other
//! strand is unselected).  Each crossing of the selected sub-diagram
//! contributes one conjugation relator, so relator count = crossing count.

pub mod fox;
pub mod laurent;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::diagram::{ArcId, ComponentId, Diagram};
use crate::error::{Error, Result};
use crate::homology::{smith, snf, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GenId(pub u32);

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// A word in free generators; letters carry exponent +-1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    letters: Vec<(GenId, i8)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(g: GenId, e: i8) -> Self {
        assert!(e == 1 || e == -1);
        Word { letters: vec![(g, e)] }
    }

    pub fn from_letters(letters: Vec<(GenId, i8)>) -> Self {
        let mut w = Word::empty();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn letters(&self) -> &[(GenId, i8)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, g: GenId, e: i8) {
        assert!(e == 1 || e == -1);
        if let Some(&(h, f)) = self.letters.last() {
            if h == g && f == -e {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((g, e));
    }

    /// Free reduction; idempotent.
    pub fn reduce(&mut self) {
        let letters = std::mem::take(&mut self.letters);
        for (g, e) in letters {
            self.push(g, e);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent sum per generator, indexed by generator number - 1.
    pub fn exponent_vector(&self, n_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; n_gens];
        for &(g, e) in &self.letters {
            v[(g.0 - 1) as usize] += e as i64;
        }
        v
    }
}

impl fmt::Display for Word {
    /// Signed sequence, e.g. `g1 g3^-1 g1^-1`; the empty word prints `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e == 1 { g.to_string() } else { format!("{g}^-1") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub id: GenId,
    pub component: ComponentId,
    /// Smallest PD arc in the over-arc class this generator stands for.
    pub rep_arc: ArcId,
}

#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub selection: Vec<ComponentId>,
    arc_gen: BTreeMap<ArcId, GenId>,
}

impl GroupPresentation {
    pub fn generator_of_arc(&self, a: ArcId) -> Option<GenId> {
        self.arc_gen.get(&a).copied()
    }

    pub fn meridians(&self, comp: ComponentId) -> Vec<GenId> {
        self.generators
            .iter()
            .filter(|g| g.component == comp)
            .map(|g| g.id)
            .collect()
    }

    pub fn n_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn component_of_gen(&self, g: GenId) -> ComponentId {
        self.generators[(g.0 - 1) as usize].component
    }

    /// Abelianized relator matrix: one row per relator, columns = generators.
    pub fn abelianized_relators(&self) -> Matrix<BigInt> {
        let n = self.n_gens();
        let rows: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|r| r.exponent_vector(n).into_iter().map(BigInt::from).collect())
            .collect();
        if rows.is_empty() {
            Matrix::zero(0, n)
        } else {
            Matrix::from_rows(rows)
        }
    }

    pub fn is_knot_presentation(&self) -> bool {
        self.selection.len() == 1
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.id.to_string()).collect();
        writeln!(f, "generators {}", gens.join(" "))?;
        for (i, r) in self.relators.iter().enumerate() {
            writeln!(f, "relator {} {}", i + 1, r)?;
        }
        Ok(())
    }
}

/// Wirtinger presentation of the complement of the selected components.
///
/// At each crossing of the selected sub-diagram the outgoing under-arc is the
/// conjugate of the incoming under-arc by the over-arc, with the conjugation
/// direction given by the crossing sign.
pub fn wirtinger(d: &Diagram, selection: &[ComponentId]) -> Result<GroupPresentation> {
    if selection.is_empty() {
        return Err(Error::precondition("empty component selection"));
    }
    let sel: std::collections::BTreeSet<ComponentId> = selection.iter().copied().collect();
    for &c in &sel {
        if d.component(c).is_none() {
            return Err(Error::precondition(format!("unknown component {c}")));
        }
    }

    // Union-find over PD arcs of selected components.
    let mut parent: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for &cid in &sel {
        for &a in &d.component(cid).unwrap().arcs {
            parent.insert(a, a);
        }
    }
    fn find(parent: &mut BTreeMap<ArcId, ArcId>, x: ArcId) -> ArcId {
        let p = parent[&x];
        if p == x {
            x
        } else {
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
    }
    fn union(parent: &mut BTreeMap<ArcId, ArcId>, a: ArcId, b: ArcId) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            if ra < rb {
                parent.insert(rb, ra);
            } else {
                parent.insert(ra, rb);
            }
        }
    }

    let topo = d.topology();
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        let over_in_slot = topo.over_in_slot(x.id).unwrap() as usize;
        let over_out_slot = (over_in_slot + 2) % 4;
        let (o_in, o_out) = (x.slots[over_in_slot], x.slots[over_out_slot]);
        if sel.contains(&over) {
            union(&mut parent, o_in, o_out);
        }
        if sel.contains(&under) && !sel.contains(&over) {
            // the crossing is invisible in the sub-diagram
            union(&mut parent, x.slots[0], x.slots[2]);
        }
    }

    // Number the classes by ascending representative arc.
    let arcs: Vec<ArcId> = parent.keys().copied().collect();
    let mut reps: Vec<ArcId> = Vec::new();
    for &a in &arcs {
        let r = find(&mut parent, a);
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    reps.sort();
    let mut arc_gen = BTreeMap::new();
    for &a in &arcs {
        let r = find(&mut parent, a);
        let idx = reps.binary_search(&r).unwrap();
        arc_gen.insert(a, GenId(idx as u32 + 1));
    }
    let generators: Vec<Generator> = reps
        .iter()
        .enumerate()
        .map(|(i, &r)| Generator {
            id: GenId(i as u32 + 1),
            component: d.arc_component(r).unwrap(),
            rep_arc: r,
        })
        .collect();

    // Relators at crossings internal to the selection.
    let mut relators = Vec::new();
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        if !(sel.contains(&under) && sel.contains(&over)) {
            continue;
        }
        let eps = d.sign(x.id)?;
        let over_in_slot = topo.over_in_slot(x.id).unwrap() as usize;
        let o = arc_gen[&x.slots[over_in_slot]];
        let u = arc_gen[&x.slots[0]];
        let v = arc_gen[&x.slots[2]];
        // v = o^eps u o^-eps  =>  relator  o^eps u o^-eps v^-1
        let mut r = Word::empty();
        r.push(o, eps);
        r.push(u, 1);
        r.push(o, -eps);
        r.push(v, -1);
        relators.push(r);
    }

    Ok(GroupPresentation { generators, relators, selection: selection.to_vec(), arc_gen })
}

/// The word a closed component curve reads in the presentation: one letter
/// per under-pass beneath a selected strand, signed by the crossing.  For a
/// component inside the selection this is its longitude, and the 0-framed
/// convention appends the meridian power that cancels the writhe.
pub fn component_word(d: &Diagram, pres: &GroupPresentation, comp: ComponentId) -> Result<Word> {
    let c = d
        .component(comp)
        .ok_or_else(|| Error::precondition(format!("unknown component {comp}")))?;
    let topo = d.topology();
    let mut w = Word::empty();
    for p in topo.passages_of(c) {
        if p.is_over {
            continue;
        }
        let x = d.crossing(p.crossing).unwrap();
        let over_in_slot = topo.over_in_slot(x.id).unwrap() as usize;
        let over_arc = x.slots[over_in_slot];
        if let Some(g) = pres.generator_of_arc(over_arc) {
            w.push(g, d.sign(x.id)?);
        }
    }
    if pres.selection.contains(&comp) {
        // 0-framed longitude: kill the writhe with a meridian power.
        let own = pres
            .meridians(comp)
            .first()
            .copied()
            .ok_or_else(|| Error::invariant("component has no generator"))?;
        let mut sum: i64 = 0;
        for &(g, e) in w.letters() {
            if pres.component_of_gen(g) == comp {
                sum += e as i64;
            }
        }
        for _ in 0..sum.unsigned_abs() {
            w.push(own, if sum > 0 { -1 } else { 1 });
        }
    }
    Ok(w)
}

/// Level-1 derived-series membership: true iff the exponent vector of `w`
/// lies in the lattice spanned by the abelianized relators, i.e. `w` dies in
/// H1 of the complement.
pub fn derived_level_1(w: &Word, pres: &GroupPresentation) -> bool {
    let e = w.exponent_vector(pres.n_gens());
    if e.iter().all(|&x| x == 0) {
        return true;
    }
    let m = pres.abelianized_relators();
    // x^T M = e  <=>  M^T x = e^T
    let mt = m.transpose();
    let b: Vec<BigInt> = e.into_iter().map(BigInt::from).collect();
    snf::solve(&mt, &b).is_some()
}

/// Abelianization of the presentation as an abelian group (cokernel of the
/// abelianized relator matrix acting on Z^gens).
pub fn abelianization(pres: &GroupPresentation) -> crate::homology::AbelianGroup {
    let m = pres.abelianized_relators();
    let mt = m.transpose();
    let s = smith(&mt);
    let factors = s.invariant_factors();
    use num_traits::One;
    let torsion: Vec<BigInt> = factors.iter().filter(|f| !f.is_one()).cloned().collect();
    crate::homology::AbelianGroup { torsion, free_rank: pres.n_gens() - factors.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;
    use crate::diagram::Role;

    #[test]
    fn word_reduction_idempotent() {
        let g = |n| GenId(n);
        let mut w = Word::from_letters(vec![(g(1), 1), (g(2), 1), (g(2), -1), (g(1), -1)]);
        assert!(w.is_empty());
        w.reduce();
        assert!(w.is_empty());
        let w2 = Word::from_letters(vec![(g(1), 1), (g(2), 1), (g(1), -1)]);
        assert_eq!(w2.letters().len(), 3);
    }

    #[test]
    fn crossingless_unknot_presentation() {
        let d = catalog::unknot(Role::Pattern, crate::diagram::Framing::Unframed);
        let p = wirtinger(&d, &[ComponentId(1)]).unwrap();
        assert_eq!(p.n_gens(), 1);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn trefoil_presentation() {
        let d = catalog::trefoil();
        let p = wirtinger(&d, &[ComponentId(1)]).unwrap();
        assert_eq!(p.n_gens(), 3);
        assert_eq!(p.relators.len(), 3);
        let ab = abelianization(&p);
        assert_eq!(ab.free_rank, 1);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn hopf_abelianization_rank_two() {
        let d = catalog::hopf_positive();
        let p = wirtinger(&d, &[ComponentId(1), ComponentId(2)]).unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab.free_rank, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn meridian_fails_level1_commutator_passes() {
        let d = catalog::trefoil();
        let p = wirtinger(&d, &[ComponentId(1)]).unwrap();
        let m = Word::letter(GenId(1), 1);
        assert!(!derived_level_1(&m, &p));
        let c = Word::commutator(&Word::letter(GenId(1), 1), &Word::letter(GenId(2), 1));
        assert!(derived_level_1(&c, &p));
        assert!(derived_level_1(&Word::empty(), &p));
    }

    #[test]
    fn longitude_has_zero_exponent_sum() {
        for d in [catalog::trefoil(), catalog::figure_eight()] {
            let p = wirtinger(&d, &[ComponentId(1)]).unwrap();
            let l = component_word(&d, &p, ComponentId(1)).unwrap();
            let e = l.exponent_vector(p.n_gens());
            assert_eq!(e.iter().sum::<i64>(), 0, "0-framed longitude");
            assert!(derived_level_1(&l, &p));
        }
    }

    #[test]
    fn word_display() {
        let w = Word::from_letters(vec![(GenId(1), 1), (GenId(3), -1)]);
        assert_eq!(w.to_string(), "g1 g3^-1");
        assert_eq!(Word::empty().to_string(), "e");
    }
}
