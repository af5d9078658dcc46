//! Linking numbers, the linking-framing matrix, and first homology of the
//! surgered manifold, all in exact arbitrary-precision arithmetic.

pub mod matrix;
pub mod ring;
pub mod snf;

pub use matrix::Matrix;
pub use ring::{Domain, EuclideanRing, Ring};
pub use snf::{smith, Snf};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::diagram::{ComponentId, Diagram};
use crate::error::{Error, Result};

pub type IntMatrix = Matrix<BigInt>;

/// Which framed components enter a linking-framing matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleFilter {
    /// All framed components: surgery plus helpers.
    Framed,
    /// Surgery components only.
    Surgery,
    /// Helper (alpha/beta) components only.
    Helpers,
}

pub fn selected_components(d: &Diagram, which: RoleFilter) -> Vec<ComponentId> {
    d.components()
        .filter(|c| match which {
            RoleFilter::Framed => c.framing.as_int().is_some(),
            RoleFilter::Surgery => c.role == crate::diagram::Role::Surgery,
            RoleFilter::Helpers => c.role.is_helper(),
        })
        .map(|c| c.id)
        .collect()
}

/// Linking number of two distinct components: half the signed count of their
/// mutual crossings.  Which strand is over does not matter.
pub fn linking_number(d: &Diagram, a: ComponentId, b: ComponentId) -> Result<i64> {
    if a == b {
        return Err(Error::precondition(
            "linking number of a component with itself is its framing, not a linking number",
        ));
    }
    if d.component(a).is_none() || d.component(b).is_none() {
        return Err(Error::precondition("unknown component id"));
    }
    let mut sum = 0i64;
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        if (under == a && over == b) || (under == b && over == a) {
            sum += d.sign(x.id)? as i64;
        }
    }
    debug_assert!(sum % 2 == 0, "signed mutual crossing count must be even");
    Ok(sum / 2)
}

/// Same number computed from only the crossings where `a` passes over `b`.
/// Agrees with [`linking_number`] on planar diagrams; kept separate so the
/// two routes can be cross-checked.
pub fn linking_number_over(d: &Diagram, a: ComponentId, b: ComponentId) -> Result<i64> {
    if a == b {
        return Err(Error::precondition("self-linking is framing"));
    }
    let mut sum = 0i64;
    for x in d.crossings() {
        let (under, over) = d.strands(x);
        if under == b && over == a {
            sum += d.sign(x.id)? as i64;
        }
    }
    Ok(sum)
}

/// Symmetric matrix with framings on the diagonal and linking numbers off it,
/// over the selected components in ascending id order.
pub fn linking_framing_matrix(d: &Diagram, which: RoleFilter) -> Result<IntMatrix> {
    let sel = selected_components(d, which);
    for &c in &sel {
        if d.component(c).unwrap().framing.as_int().is_none() {
            return Err(Error::precondition(format!(
                "component {c} in the selection is unframed"
            )));
        }
    }
    let n = sel.len();
    let mut m = IntMatrix::zero(n, n);
    for i in 0..n {
        m[(i, i)] = BigInt::from(d.component(sel[i]).unwrap().framing.as_int().unwrap());
        for j in i + 1..n {
            let lk = BigInt::from(linking_number(d, sel[i], sel[j])?);
            m[(i, j)] = lk.clone();
            m[(j, i)] = lk;
        }
    }
    Ok(m)
}

/// A finitely generated abelian group in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    /// Torsion invariant factors, each > 1, each dividing the next.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { torsion: Vec::new(), free_rank: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Cokernel of a presentation matrix (relations act on Z^rows).
    pub fn from_presentation(a: &IntMatrix) -> Self {
        let s = smith(a);
        let factors = s.invariant_factors();
        let torsion: Vec<BigInt> =
            factors.iter().filter(|f| !f.is_one()).cloned().collect();
        AbelianGroup { torsion, free_rank: a.rows - factors.len() }
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// First homology of the manifold presented by the framed components
/// (patterns are not surgered and are ignored).
pub fn h1_of_surgery(d: &Diagram) -> Result<AbelianGroup> {
    let a = linking_framing_matrix(d, RoleFilter::Framed)?;
    Ok(AbelianGroup::from_presentation(&a))
}

/// True iff surgery on the framed components yields a homology sphere.
/// Computed two ways — trivial cokernel, and |det| = 1 — and cross-checked.
pub fn is_homology_sphere(d: &Diagram) -> Result<bool> {
    let a = linking_framing_matrix(d, RoleFilter::Framed)?;
    let h1 = AbelianGroup::from_presentation(&a);
    let det = a.det();
    let by_det = det.abs().is_one();
    let by_h1 = h1.is_trivial();
    assert_eq!(
        by_det, by_h1,
        "determinant and SNF routes disagree on H1 triviality"
    );
    Ok(by_h1)
}

/// det of the framed linking-framing matrix, for error reporting.
pub fn surgery_determinant(d: &Diagram) -> Result<BigInt> {
    Ok(linking_framing_matrix(d, RoleFilter::Framed)?.det())
}
