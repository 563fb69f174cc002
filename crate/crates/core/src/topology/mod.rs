//! Real topology of ℝC: tracing, numbering, colorings, orientations and
//! linking.

mod coloring;
mod linking;
mod orient;
mod trace;

pub use coloring::{chessboard_coloring, Coloring, ColoringOptions, PlaneSection};
pub use linking::{is_linked, is_linked_polyline};
pub use orient::{
    complex_orientation, d_orientation, obstruction_check, Crossing, LocusPoint, LoopOrientation, ObstructionVerdict,
    OrientationAssignment,
};
pub use trace::{check_no_planar_component, trace_real_locus, LocusPosition, RealLocus, TraceParams, TracedLoop};

#[cfg(test)]
mod tests;
