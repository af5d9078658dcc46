//! The combinatorial diagram model.
//!
//! A diagram is a 4-valent graph with a rotation system: each crossing lists
//! its four incident arc ends in counterclockwise order starting from the
//! incoming under-strand, and each component records its arcs in traversal
//! (orientation) order.  Everything else — crossing signs, linking numbers,
//! faces, genus — is derived from this data.

mod canonical;
pub mod catalog;
mod faces;
mod text;
mod topology;

pub use faces::{FaceId, Faces};
pub use topology::{Passage, Topology};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingId(pub u32);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What a component is for.
///
/// `Pattern` components are the marked link whose concordance class is under
/// study; they are never surgered and carry no framing.  `Surgery` components
/// present the ambient manifold.  `HelperAlpha`/`HelperBeta` are the 0-framed
/// circles introduced by the crossing-change gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    Pattern,
    Surgery,
    HelperAlpha,
    HelperBeta,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Pattern => "pattern",
            Role::Surgery => "surgery",
            Role::HelperAlpha => "alpha",
            Role::HelperBeta => "beta",
        }
    }

    pub fn is_helper(self) -> bool {
        matches!(self, Role::HelperAlpha | Role::HelperBeta)
    }
}

/// Integer framing of a surgery/helper component, or `Unframed` for patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framing {
    Unframed,
    Framed(i64),
}

impl Framing {
    pub fn as_int(self) -> Option<i64> {
        match self {
            Framing::Unframed => None,
            Framing::Framed(n) => Some(n),
        }
    }
}

/// One crossing.  `slots` are the four incident arc ends in counterclockwise
/// order; slot 0 is always the incoming under-strand, so slot 2 is the
/// outgoing under-strand and slots 1/3 carry the over-strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub id: CrossingId,
    pub slots: [ArcId; 4],
}

impl Crossing {
    pub fn new(id: CrossingId, slots: [ArcId; 4]) -> Self {
        Crossing { id, slots }
    }

    pub fn under_in(&self) -> ArcId {
        self.slots[0]
    }

    pub fn under_out(&self) -> ArcId {
        self.slots[2]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    pub role: Role,
    pub framing: Framing,
    /// Arc cycle in traversal order; the order is the orientation.
    pub arcs: Vec<ArcId>,
    /// Optional handlebody-nesting annotation (data only; never computed).
    pub level: Option<u32>,
}

impl Component {
    pub fn new(id: ComponentId, role: Role, framing: Framing, arcs: Vec<ArcId>) -> Self {
        Component { id, role, framing, arcs, level: None }
    }
}

/// A validated diagram.  Construction via [`Diagram::new`] checks the
/// combinatorial closure invariants and resolves strand orientations at every
/// crossing; the result is immutable and safe to share.
#[derive(Debug, Clone)]
pub struct Diagram {
    components: BTreeMap<ComponentId, Component>,
    crossings: BTreeMap<CrossingId, Crossing>,
    metadata: BTreeMap<String, String>,
    topo: Topology,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && self.crossings == other.crossings
            && self.metadata == other.metadata
    }
}

impl Eq for Diagram {}

impl Diagram {
    pub fn new(
        components: Vec<Component>,
        crossings: Vec<Crossing>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut cmap = BTreeMap::new();
        for c in components {
            if cmap.insert(c.id, c).is_some() {
                return Err(Error::invariant("duplicate component id"));
            }
        }
        let mut xmap = BTreeMap::new();
        for x in crossings {
            if xmap.insert(x.id, x).is_some() {
                return Err(Error::invariant("duplicate crossing id"));
            }
        }
        Self::validate_roles(&cmap)?;
        let topo = Topology::build(&cmap, &xmap)?;
        Ok(Diagram { components: cmap, crossings: xmap, metadata, topo })
    }

    pub fn empty() -> Self {
        Diagram {
            components: BTreeMap::new(),
            crossings: BTreeMap::new(),
            metadata: BTreeMap::new(),
            topo: Topology::default(),
        }
    }

    fn validate_roles(components: &BTreeMap<ComponentId, Component>) -> Result<()> {
        for c in components.values() {
            match (c.role, c.framing) {
                (Role::Pattern, Framing::Framed(_)) => {
                    return Err(Error::invariant(format!(
                        "component {} has role pattern but carries a framing",
                        c.id
                    )));
                }
                (Role::HelperAlpha | Role::HelperBeta, f) if f != Framing::Framed(0) => {
                    return Err(Error::invariant(format!(
                        "helper component {} must be 0-framed",
                        c.id
                    )));
                }
                (Role::Surgery, Framing::Unframed) => {
                    return Err(Error::invariant(format!(
                        "surgery component {} has no framing",
                        c.id
                    )));
                }
                _ => {}
            }
            if c.arcs.is_empty() {
                return Err(Error::invariant(format!("component {} has no arcs", c.id)));
            }
        }
        Ok(())
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.components.values()
    }

    pub fn component(&self, id: ComponentId) -> Option<&Component> {
        self.components.get(&id)
    }

    pub fn crossings(&self) -> impl Iterator<Item = &Crossing> {
        self.crossings.values()
    }

    pub fn crossing(&self, id: CrossingId) -> Option<&Crossing> {
        self.crossings.get(&id)
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut BTreeMap<String, String> {
        &mut self.metadata
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn component_ids(&self) -> Vec<ComponentId> {
        self.components.keys().copied().collect()
    }

    pub fn components_with_role(&self, role: Role) -> Vec<ComponentId> {
        self.components
            .values()
            .filter(|c| c.role == role)
            .map(|c| c.id)
            .collect()
    }

    /// Components carrying an integer framing (surgery and helpers).
    pub fn framed_components(&self) -> Vec<ComponentId> {
        self.components
            .values()
            .filter(|c| c.framing.as_int().is_some())
            .map(|c| c.id)
            .collect()
    }

    /// Sign of a crossing by the right-hand convention, derived from the slot
    /// arrangement and the component orientations.
    pub fn sign(&self, c: CrossingId) -> Result<i8> {
        self.topo
            .sign(c)
            .ok_or_else(|| Error::precondition(format!("unknown crossing id {c}")))
    }

    /// Component owning an arc.
    pub fn arc_component(&self, a: ArcId) -> Option<ComponentId> {
        self.topo.arc_component(a)
    }

    /// Writhe of a component: sum of its self-crossing signs.
    pub fn writhe(&self, comp: ComponentId) -> i64 {
        let mut w = 0i64;
        for x in self.crossings.values() {
            let under = self.topo.arc_component(x.slots[0]).unwrap();
            let over = self.topo.arc_component(x.slots[1]).unwrap();
            if under == comp && over == comp {
                w += self.topo.sign(x.id).unwrap() as i64;
            }
        }
        w
    }

    /// The two strands at a crossing: (under component, over component).
    pub fn strands(&self, x: &Crossing) -> (ComponentId, ComponentId) {
        let under = self.topo.arc_component(x.slots[0]).unwrap();
        let over = self.topo.arc_component(x.slots[1]).unwrap();
        (under, over)
    }

    /// Genus of the surface obtained by tracing the faces of the rotation
    /// system; 0 exactly when the stored diagram is planar-realizable.
    pub fn genus(&self) -> u32 {
        Faces::trace(self).genus()
    }

    pub fn faces(&self) -> Faces {
        Faces::trace(self)
    }

    /// Canonical relabeling: arcs are renumbered 1,2,... in traversal order,
    /// walking components in ascending id order and starting each cycle at its
    /// smallest original arc id.  Component and crossing ids are untouched.
    pub fn canonicalize(&self) -> Diagram {
        canonical::canonicalize(self)
    }

    /// Canonical text form (see the text-format docs).
    pub fn serialize(&self) -> String {
        text::serialize(self)
    }

    pub fn parse(input: &str) -> Result<Diagram> {
        text::parse(input)
    }

    /// 64-bit FNV-1a hash of the canonical serialization.
    pub fn hash(&self) -> u64 {
        fnv1a(self.serialize().as_bytes())
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash())
    }

    /// Next unused arc id.
    pub fn fresh_arc_id(&self) -> u32 {
        self.components
            .values()
            .flat_map(|c| c.arcs.iter())
            .map(|a| a.0)
            .max()
            .map_or(1, |m| m + 1)
    }

    pub fn fresh_component_id(&self) -> u32 {
        self.components.keys().map(|c| c.0).max().map_or(1, |m| m + 1)
    }

    pub fn fresh_crossing_id(&self) -> u32 {
        self.crossings.keys().map(|c| c.0).max().map_or(1, |m| m + 1)
    }

    /// Gauss code of one component as a derived view: the sequence of
    /// (crossing, is-over, sign) passages in traversal order.
    pub fn gauss_code(&self, comp: ComponentId) -> Vec<(CrossingId, bool, i8)> {
        let Some(c) = self.components.get(&comp) else {
            return Vec::new();
        };
        self.topo
            .passages_of(c)
            .into_iter()
            .map(|p| (p.crossing, p.is_over, self.topo.sign(p.crossing).unwrap()))
            .collect()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Validate and report the diagram genus (0 iff planar).
pub fn validate_realizable(d: &Diagram) -> u32 {
    d.genus()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_vector() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn empty_diagram() {
        let d = Diagram::empty();
        assert_eq!(d.components().count(), 0);
        assert_eq!(d.genus(), 0);
        assert_eq!(d.serialize(), "");
    }

    #[test]
    fn pattern_rejects_framing() {
        let c = Component::new(
            ComponentId(1),
            Role::Pattern,
            Framing::Framed(1),
            vec![ArcId(1)],
        );
        assert!(Diagram::new(vec![c], vec![], BTreeMap::new()).is_err());
    }

    #[test]
    fn helper_must_be_zero_framed() {
        let c = Component::new(
            ComponentId(1),
            Role::HelperAlpha,
            Framing::Framed(1),
            vec![ArcId(1)],
        );
        assert!(Diagram::new(vec![c], vec![], BTreeMap::new()).is_err());
    }
}
