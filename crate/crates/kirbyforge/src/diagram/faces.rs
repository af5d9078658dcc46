//! Face tracing of the rotation system.
//!
//! Every arc incident to crossings yields two darts (forward along the
//! orientation and backward).  Walking a dart into its head crossing and
//! leaving at the next slot counterclockwise traces the faces of the surface
//! the rotation system embeds in; Euler characteristic per connected piece
//! then gives the genus.  Crossingless loops are their own genus-0 pieces.

use std::collections::BTreeMap;

use super::{ArcId, Diagram};

pub type FaceId = usize;

/// A directed arc: `(arc, true)` runs with the component orientation.
pub type Dart = (ArcId, bool);

#[derive(Debug, Clone)]
pub struct Faces {
    /// Dart cycles, one per face, in trace order.
    pub faces: Vec<Vec<Dart>>,
    dart_face: BTreeMap<Dart, FaceId>,
    /// Connected-piece index per face.
    face_piece: Vec<usize>,
    /// Connected-piece index per arc (crossingless loops get their own).
    arc_piece: BTreeMap<ArcId, usize>,
    pieces: usize,
    genus: u32,
}

impl Faces {
    pub fn trace(d: &Diagram) -> Faces {
        let topo = d.topology();

        // Union-find over components joined by shared crossings gives the
        // connected pieces of the underlying 4-valent graph.
        let comp_ids: Vec<_> = d.components().map(|c| c.id).collect();
        let mut parent: BTreeMap<_, _> = comp_ids.iter().map(|&c| (c, c)).collect();
        fn find(
            parent: &mut BTreeMap<super::ComponentId, super::ComponentId>,
            x: super::ComponentId,
        ) -> super::ComponentId {
            let p = parent[&x];
            if p == x {
                x
            } else {
                let r = find(parent, p);
                parent.insert(x, r);
                r
            }
        }
        for x in d.crossings() {
            let (u, o) = d.strands(x);
            let (ru, ro) = (find(&mut parent, u), find(&mut parent, o));
            if ru != ro {
                parent.insert(ru, ro);
            }
        }
        let mut piece_of_comp = BTreeMap::new();
        let mut piece_roots = Vec::new();
        for &c in &comp_ids {
            let r = find(&mut parent, c);
            let idx = match piece_roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    piece_roots.push(r);
                    piece_roots.len() - 1
                }
            };
            piece_of_comp.insert(c, idx);
        }
        let pieces = piece_roots.len();

        let mut arc_piece = BTreeMap::new();
        for c in d.components() {
            for &a in &c.arcs {
                arc_piece.insert(a, piece_of_comp[&c.id]);
            }
        }

        // Trace faces.  next(dart): arrive at head slot s, leave at slot
        // (s + 1) mod 4, directed away from the crossing.
        let mut darts: Vec<Dart> = Vec::new();
        for c in d.components() {
            for &a in &c.arcs {
                if topo.head(a).is_some() {
                    darts.push((a, true));
                    darts.push((a, false));
                }
            }
        }
        let next = |dart: Dart| -> Dart {
            let (a, fwd) = dart;
            let (xid, s) = if fwd { topo.head(a).unwrap() } else { topo.tail(a).unwrap() };
            let t = (s + 1) % 4;
            let b = d.crossing(xid).unwrap().slots[t as usize];
            // Leaving the crossing at slot t: forward if t is b's tail.
            if topo.tail(b) == Some((xid, t)) {
                (b, true)
            } else {
                debug_assert_eq!(topo.head(b), Some((xid, t)));
                (b, false)
            }
        };

        let mut dart_face = BTreeMap::new();
        let mut faces: Vec<Vec<Dart>> = Vec::new();
        for &start in &darts {
            if dart_face.contains_key(&start) {
                continue;
            }
            let id = faces.len();
            let mut cyc = Vec::new();
            let mut cur = start;
            loop {
                dart_face.insert(cur, id);
                cyc.push(cur);
                cur = next(cur);
                if cur == start {
                    break;
                }
            }
            faces.push(cyc);
        }

        let face_piece: Vec<usize> =
            faces.iter().map(|cyc| arc_piece[&cyc[0].0]).collect();

        // Euler characteristic per piece.
        let mut v = vec![0i64; pieces];
        let mut e = vec![0i64; pieces];
        let mut f = vec![0i64; pieces];
        for x in d.crossings() {
            let p = arc_piece[&x.slots[0]];
            v[p] += 1;
        }
        for c in d.components() {
            for &a in &c.arcs {
                if topo.head(a).is_some() {
                    e[arc_piece[&a]] += 1;
                }
            }
        }
        for (i, _) in faces.iter().enumerate() {
            f[face_piece[i]] += 1;
        }
        let mut genus = 0u32;
        for p in 0..pieces {
            if v[p] == 0 {
                continue; // crossingless loops: sphere pieces
            }
            let chi = v[p] - e[p] + f[p];
            debug_assert!(chi <= 2 && (2 - chi) % 2 == 0, "chi = {chi}");
            genus += ((2 - chi) / 2).max(0) as u32;
        }

        Faces { faces, dart_face, face_piece, arc_piece, pieces, genus }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_of(&self, dart: Dart) -> Option<FaceId> {
        self.dart_face.get(&dart).copied()
    }

    /// The two faces on either side of an arc, when the arc meets crossings.
    pub fn sides_of_arc(&self, a: ArcId) -> Option<(FaceId, FaceId)> {
        let f = self.dart_face.get(&(a, true))?;
        let g = self.dart_face.get(&(a, false))?;
        Some((*f, *g))
    }

    pub fn piece_of_face(&self, f: FaceId) -> usize {
        self.face_piece[f]
    }

    pub fn piece_of_arc(&self, a: ArcId) -> Option<usize> {
        self.arc_piece.get(&a).copied()
    }

    pub fn pieces(&self) -> usize {
        self.pieces
    }

    /// Representative "outer" face per piece: the lowest-id face of the piece.
    /// A planar embedding is free to put any face outside, so routing between
    /// pieces glues these representatives into one region.
    pub fn outer_face(&self, piece: usize) -> Option<FaceId> {
        self.face_piece.iter().position(|&p| p == piece)
    }
}
