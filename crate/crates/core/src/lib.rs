//! Randomized graph coloring driven by bad-event families, with an
//! invertible execution record, a bound calculator and exact record counting.

pub mod bounds;
pub mod engine;
pub mod families;
pub mod generators;
pub mod graph;
pub mod plane;
pub mod records;
pub mod validators;

pub use engine::{
    color_stream, decode, replay_colored_sets, run, run_list, BadEventFamily, Color, ColoredSet, EngineError,
    EngineInput, EventId, EventTypeMeta, Manifest, PartialColoring, Record, RecordLine, RunOutcome, Status,
};
pub use graph::{load_graph, Graph, SpecialStructure};
pub use plane::{load_rotation, PlaneGraph};
