//! Concrete witness maps built from the tent map: value-clamped surgeries
//! that keep one chosen orbit and kill everything the orbit does not force,
//! plus finite-depth approximants of the limit of repeated clamping.

use std::collections::BTreeSet;

use crate::census::{orbits_of_least_period, OrbitRecord};
use crate::error::{Error, Result};
use crate::interval::IntervalQ;
use crate::plmap::{PLMap, DEFAULT_PIECE_CAP};
use crate::rational::{int, rat, Rational};

/// The tent map on [0, 1]: up with slope 2, down with slope 2.
pub fn tent() -> PLMap {
    PLMap::new(vec![
        (int(0), int(0)),
        (rat(1, 2), int(1)),
        (int(1), int(0)),
    ])
    .expect("tent nodes are valid")
}

/// A clamp surgery and its ingredients, kept together for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationRecord {
    pub base: PLMap,
    pub lo: Rational,
    pub hi: Rational,
    pub result: PLMap,
}

impl TruncationRecord {
    pub fn new(base: PLMap, lo: Rational, hi: Rational) -> Result<Self> {
        let result = clamp_surgery(&base, &lo, &hi)?;
        Ok(TruncationRecord {
            base,
            lo,
            hi,
            result,
        })
    }
}

/// Every x where `f` crosses the horizontal level `c`, with segments lying
/// entirely on the level contributing nothing (their endpoints are already
/// nodes of `f`).
fn level_crossings(f: &PLMap, c: &Rational) -> Vec<Rational> {
    let mut cuts = BTreeSet::new();
    for ((x0, y0), (x1, y1)) in f.segments() {
        if y0 == y1 {
            continue;
        }
        let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
        if lo <= c && c <= hi {
            cuts.insert(x0 + (c - y0) * (x1 - x0) / (y1 - y0));
        }
    }
    cuts.into_iter().collect()
}

/// Replaces every value of `f` below `lo` by `lo` and above `hi` by `hi`,
/// inserting exact breakpoints where `f` crosses either level.
pub fn clamp_surgery(f: &PLMap, lo: &Rational, hi: &Rational) -> Result<PLMap> {
    if lo >= hi {
        return Err(Error::InvalidInput(format!(
            "clamp needs lo < hi, got {lo} and {hi}"
        )));
    }
    let dom = f.domain();
    if lo < dom.lo() || hi > dom.hi() {
        return Err(Error::InvalidInput(format!(
            "clamp levels [{lo}, {hi}] leave the domain {dom}"
        )));
    }
    let mut xs: BTreeSet<Rational> = f.nodes().iter().map(|(x, _)| x.clone()).collect();
    xs.extend(level_crossings(f, lo));
    xs.extend(level_crossings(f, hi));
    let nodes = xs
        .into_iter()
        .map(|x| {
            let y = f.eval(&x)?;
            let clamped = if &y <= lo {
                lo.clone()
            } else if &y >= hi {
                hi.clone()
            } else {
                y
            };
            Ok((x, clamped))
        })
        .collect::<Result<Vec<_>>>()?;
    PLMap::new(nodes)
}

/// Among all orbits of least period `n` contained in `within`, the one of
/// smallest diameter; diameter ties go to the orbit with the smallest
/// minimum point.
pub fn minimal_diameter_orbit(f: &PLMap, n: u64, within: &IntervalQ) -> Result<OrbitRecord> {
    minimal_diameter_orbit_capped(f, n, within, DEFAULT_PIECE_CAP)
}

pub fn minimal_diameter_orbit_capped(
    f: &PLMap,
    n: u64,
    within: &IntervalQ,
    cap: usize,
) -> Result<OrbitRecord> {
    let mut best: Option<OrbitRecord> = None;
    for orbit in orbits_of_least_period(f, n, cap)? {
        if orbit.points.first().unwrap() < within.lo() || orbit.points.last().unwrap() > within.hi()
        {
            continue;
        }
        let better = match &best {
            None => true,
            // Orbit listings come sorted by minimum point, so on a diameter
            // tie the incumbent already has the smaller minimum.
            Some(b) => orbit.diameter < b.diameter,
        };
        if better {
            best = Some(orbit);
        }
    }
    best.ok_or_else(|| Error::NotFound(format!("no orbit of least period {n} inside {within}")))
}

/// The tent map clamped to its smallest-diameter least-period-n orbit: the
/// result keeps exactly one period-n orbit and the periods that orbit
/// forces, nothing else.
pub fn tent_truncation(n: u64) -> Result<PLMap> {
    tent_truncation_capped(n, DEFAULT_PIECE_CAP)
}

pub fn tent_truncation_capped(n: u64, cap: usize) -> Result<PLMap> {
    tent_truncation_with_orbit(n, cap).map(|(_, map)| map)
}

/// Same as [`tent_truncation_capped`], also returning the orbit whose hull
/// became the clamp window.
pub fn tent_truncation_with_orbit(n: u64, cap: usize) -> Result<(OrbitRecord, PLMap)> {
    let t = tent();
    let orbit = minimal_diameter_orbit_capped(&t, n, &t.domain(), cap)?;
    let lo = orbit.points.first().unwrap();
    let hi = orbit.points.last().unwrap();
    if lo == hi {
        // A one-point orbit clamps the map to a constant.
        let map = PLMap::constant(&t.domain(), lo.clone())?;
        return Ok((orbit, map));
    }
    let map = clamp_surgery(&t, lo, hi)?;
    Ok((orbit, map))
}

/// Repeatedly clamps the tent map to smallest-diameter orbits of period
/// 3 * 2^i, each chosen inside the previous clamp window. Returns the map
/// clamped at the deepest window together with the nested windows.
///
/// Depths beyond 2 square the census workload each step; they are refused
/// here and available through the explicit-budget variant.
pub fn t_infinity_approx(depth: u32) -> Result<(PLMap, Vec<IntervalQ>)> {
    if depth > 2 {
        let shift = 3u32.checked_shl(depth).unwrap_or(u32::MAX);
        return Err(Error::Resource {
            pieces: 1usize.checked_shl(shift).unwrap_or(usize::MAX),
            cap: DEFAULT_PIECE_CAP,
        });
    }
    t_infinity_approx_with_budget(depth, DEFAULT_PIECE_CAP)
}

pub fn t_infinity_approx_with_budget(depth: u32, cap: usize) -> Result<(PLMap, Vec<IntervalQ>)> {
    let t = tent();
    let mut window = t.domain();
    let mut bounds = Vec::with_capacity(depth as usize + 1);
    for i in 0..=depth {
        let period = 3u64 << i;
        let orbit = minimal_diameter_orbit_capped(&t, period, &window, cap)?;
        window = IntervalQ::new(
            orbit.points.first().unwrap().clone(),
            orbit.points.last().unwrap().clone(),
        )?;
        bounds.push(window.clone());
    }
    let map = clamp_surgery(&t, window.lo(), window.hi())?;
    Ok((map, bounds))
}
