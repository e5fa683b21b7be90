//! Composition tableaux for the adjoint action of a parabolic subalgebra of
//! `sl(n)` on its nilradical, and the line family giving the section `e + V`.
//!
//! A composition fixes column heights. The boxes are numbered down the
//! columns ([`model`]), entries are pushed rightward into the composition
//! tableau ([`propagation`]), and the way each entry moves and stops is read
//! as a family of lines labelled `1` or `*` ([`lines`]). [`staircase`]
//! predicts the composition tableau from column heights alone, and
//! [`verify`] checks the two against each other and against the expected
//! structure of the line family.

pub mod lines;
pub mod model;
pub mod propagation;
pub mod render;
pub mod report;
pub mod staircase;
pub mod verify;

pub use lines::{build_section, read_lines, Label, Line, LineSet, WeierstrassSection};
pub use model::{build_tableau, BoxCoord, Composition, Diagram, ModelError, NeighborPair, Tableau};
pub use propagation::{composition_map, propagate, propagate_diagram, ExtendedTableau};
