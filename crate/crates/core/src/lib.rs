//! Exact combinatorial dynamics of piecewise-linear interval maps: the
//! Sharkovsky ordering, covering arguments, orbit patterns, and the classical
//! witness constructions, all over arbitrary-precision rational arithmetic.

pub mod census;
pub mod dynamics;
pub mod error;
pub mod interval;
pub mod order;
pub mod pattern;
pub mod plmap;
pub mod rational;
pub mod witness;

pub use census::{
    fixed_points, orbits_of_least_period, periodic_points, periodic_points_capped,
    solutions_of_iterate, spectrum, spectrum_capped, FixedPointsReport, OrbitRecord, PeriodCount,
    SpectrumReport,
};
pub use dynamics::{
    covered_fixed_point, follow_cycle, pullback, turbulence_from_overshoot, CoverCycle,
    TurbulencePair,
};
pub use error::{Error, Result};
pub use interval::IntervalQ;
pub use order::{compare, decompose, least_period_under_power, lift_periods, tail, SharkovskyKey};
pub use pattern::{
    connect_the_dots, forced_spectrum, forced_spectrum_capped, is_stefan, markov_graph,
    orbit_to_pattern, pattern_points, random_cycle, CyclicPattern, MarkovGraph,
};
pub use plmap::{parse_map, PLMap, DEFAULT_PIECE_CAP};
pub use rational::{int, parse_rational, rat, Rational};
pub use witness::{
    clamp_surgery, minimal_diameter_orbit, minimal_diameter_orbit_capped, t_infinity_approx,
    t_infinity_approx_with_budget, tent, tent_truncation, tent_truncation_capped,
    tent_truncation_with_orbit, TruncationRecord,
};
