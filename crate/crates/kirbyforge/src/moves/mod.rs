//! Diagram rewriting with a replayable trace.

pub mod builder;
pub mod gadget;
pub mod satellite;
pub mod split;
pub mod trace;
pub mod ops;
pub mod reidemeister;
pub mod slide;
pub(crate) mod splice;

pub use builder::{delete_components, flip_crossing, reverse_component};
pub use gadget::{gadget_insert, gadget_resolve, GadgetHandle};
pub use reidemeister::r3;
pub use satellite::satellite;
pub use slide::{handle_slide, SlideRecord};
pub use split::{split_off, splits_under};
pub use trace::{apply, Move, MoveTrace, TraceStep};
pub use ops::{clasp, r1_insert, r1_remove, r2_push, r2_remove, route_component, Crossed, RouteStep};


