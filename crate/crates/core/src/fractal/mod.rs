//! Limit fractals of an interval: generators, cells, lacunae,
//! Lebesgue measure, box dimension, tube volumes and gauge contents.

mod gauge;
mod geometry;
mod lebesgue;
mod spec;
mod tube;

pub use gauge::GaugeFunction;
pub use geometry::{
    cells_at_level, gap_classes, intervals, lacunae_up_to_level, largest_length_at, scale_classes,
    Cell, Family, Interval, Lacuna, DEFAULT_BUDGET,
};
pub use lebesgue::{lebesgue_zero, LebesgueReport, MeasureVerdict};
pub use spec::{
    parse_real, FractalSpec, Orientation, Shorthand, Similarity, SymmetricSequences, ValidSpec,
};
pub use tube::{
    box_dim_from_gaps, minkowski_content, tube_volume, ContentTrend, EpsGrid, GapList,
    MinkowskiReport, TubeVolume, MINKOWSKI_THRESHOLD, MIN_GAPS, MIN_RANKED_GAPS,
};
