//! Exact periodic-point census for piecewise-linear maps.
//!
//! The n-th iterate of a PL map is piecewise affine, with one affine branch
//! per "word": a sequence of segment indices visited by the first n iterates.
//! Rather than materializing iterates (whose size grows geometrically), the
//! census runs a depth-first search over words. Each live word carries the
//! exact affine composite `x -> alpha * x + beta` together with the image of
//! its domain cell, and yields at most one isolated solution of
//! `f^n(x) = x`, or a whole diagonal cell when the composite is the identity.
//!
//! Cells of the same depth tile the domain and share endpoints, so isolated
//! solutions are counted against half-open cells, with the right domain
//! endpoint checked once globally. Diagonal cells are merged into maximal
//! runs per level; points of least period n inside such runs form a
//! continuum, which the spectrum reports instead of an orbit count.
//!
//! Counting least periods never stores the (possibly enormous) solution
//! sets. With `iso(n)` the number of isolated solutions at level n and
//! `inside(d, n)` the number of isolated least-period-d points lying in the
//! closed level-n diagonal runs, the count of isolated least-period-n points
//! satisfies
//!
//! ```text
//! least(n) = iso(n) - sum over proper divisors d of n of (least(d) - inside(d, n))
//! ```
//!
//! because a lower-period point is missing from `iso(n)` exactly when it sits
//! inside a level-n run. The `inside` terms are computed by small searches
//! restricted to the runs, which exist only for degenerate configurations.
//!
//! Arithmetic: when every node coordinate has a common denominator D and all
//! segment slopes are integers, the whole search runs on integers (node
//! positions scaled by D). A precomputed magnitude bound decides whether
//! 128-bit integers suffice; otherwise big integers take over. Maps with
//! non-integer slopes fall back to full rational arithmetic.

use crate::error::{Error, Result};
use crate::interval::IntervalQ;
use crate::plmap::{PLMap, DEFAULT_PIECE_CAP};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// How many distinct orbits of a given least period a map has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodCount {
    Orbits(u64),
    /// An interval of points of this least period (an iterate contains a
    /// diagonal segment not fully explained by lower periods).
    Continuum,
}

impl PeriodCount {
    pub fn is_present(&self) -> bool {
        !matches!(self, PeriodCount::Orbits(0))
    }
}

/// Exact least-period census of a map up to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub bound: u64,
    /// Levels with at least one point of that least period.
    pub levels: BTreeMap<u64, PeriodCount>,
    /// True when some iterate up to the bound has a diagonal segment.
    pub degenerate: bool,
}

impl SpectrumReport {
    pub fn present(&self, n: u64) -> bool {
        self.levels.get(&n).is_some_and(PeriodCount::is_present)
    }

    pub fn present_periods(&self) -> Vec<u64> {
        self.levels.keys().copied().collect()
    }

    /// Number of orbits at a level, when finite.
    pub fn orbit_count(&self, n: u64) -> Option<u64> {
        match self.levels.get(&n) {
            Some(PeriodCount::Orbits(c)) => Some(*c),
            Some(PeriodCount::Continuum) => None,
            None => Some(0),
        }
    }
}

/// A single periodic orbit: its least period and sorted points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub period: u64,
    pub points: Vec<Rational>,
    pub diameter: Rational,
}

/// Exact fixed-point listing, with any diagonal segments reported apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointsReport {
    /// Isolated fixed points, sorted, none inside the diagonal segments.
    pub points: Vec<Rational>,
    /// Maximal segments where the map equals the identity.
    pub diagonals: Vec<IntervalQ>,
}

/// Scalar abstraction the word search runs over. Implementations: `i128`
/// (fast path), `BigInt` (overflow-proof), `Rational` (non-integer slopes,
/// where scaled coordinates are the coordinates themselves).
trait Num: Clone + Ord + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn vanishes(&self) -> bool;
    /// The exact rational `self / denom`.
    fn unscale(&self, denom: &BigInt) -> Rational;
    /// The exact rational `(num / den) / denom`.
    fn div_unscale(num: &Self, den: &Self, denom: &BigInt) -> Rational;
    /// The scaled representation of an unscaled rational, when exact.
    fn from_unscaled(x: &Rational, denom: &BigInt) -> Option<Self>;
}

impl Num for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn unscale(&self, denom: &BigInt) -> Rational {
        Rational::new(BigInt::from(*self), denom.clone())
    }
    fn div_unscale(num: &Self, den: &Self, denom: &BigInt) -> Rational {
        Rational::new(BigInt::from(*num), BigInt::from(*den) * denom)
    }
    fn from_unscaled(x: &Rational, denom: &BigInt) -> Option<Self> {
        let scaled = x * Rational::from(denom.clone());
        scaled.is_integer().then(|| scaled.to_integer().to_i128())?
    }
}

impl Num for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unscale(&self, denom: &BigInt) -> Rational {
        Rational::new(self.clone(), denom.clone())
    }
    fn div_unscale(num: &Self, den: &Self, denom: &BigInt) -> Rational {
        Rational::new(num.clone(), den * denom)
    }
    fn from_unscaled(x: &Rational, denom: &BigInt) -> Option<Self> {
        let scaled = x * Rational::from(denom.clone());
        scaled.is_integer().then(|| scaled.to_integer())
    }
}

impl Num for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unscale(&self, _denom: &BigInt) -> Rational {
        self.clone()
    }
    fn div_unscale(num: &Self, den: &Self, _denom: &BigInt) -> Rational {
        num / den
    }
    fn from_unscaled(x: &Rational, _denom: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
}

/// A map in search coordinates: lap boundaries and per-segment affine
/// coefficients, all scaled by the common denominator `denom` (one for the
/// rational backend).
struct ScaledMap<T> {
    cuts: Vec<T>,
    coeffs: Vec<(T, T)>,
    denom: BigInt,
}

impl<T: Num> ScaledMap<T> {
    fn lo(&self) -> &T {
        self.cuts.first().unwrap()
    }

    fn hi(&self) -> &T {
        self.cuts.last().unwrap()
    }

    /// Index of a segment whose x-range contains the scaled point.
    fn lap_of(&self, x: &T) -> usize {
        let after = self.cuts.partition_point(|c| c <= x);
        after.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    /// One application of the map in scaled coordinates.
    fn step(&self, x: &T) -> T {
        let (a, b) = &self.coeffs[self.lap_of(x)];
        a.mul(x).add(b)
    }
}

#[derive(Debug, Clone)]
enum State<T> {
    /// Invertible composite `X -> alpha X + b` with slope `alpha != 0`,
    /// known through the image `[ilo, ihi]` of its domain cell.
    Affine { alpha: T, b: T, ilo: T, ihi: T },
    /// Constant composite with value `v`; the domain cell is
    /// `{x : nlo <= den * x <= nhi}` with `den != 0`.
    Constant { v: T, nlo: T, nhi: T, den: T },
}

enum Mode {
    /// Count isolated solutions per level against half-open cells.
    Count { raw: Vec<u64> },
    /// Collect exact solutions at one target level into a set (closed
    /// cells; the set handles shared endpoints).
    Collect { level: u32, set: BTreeSet<Rational> },
}

struct Search<'a, T: Num> {
    map: &'a ScaledMap<T>,
    bound: u32,
    mode: Mode,
    /// Diagonal cells per level, pre-merge.
    runs: Vec<Vec<(T, T)>>,
    visited: u64,
    budget: u64,
    zero: T,
    one: T,
}

/// Compares `num / den` (with `den != 0`) against `bound`, exactly.
fn cmp_frac<T: Num>(num: &T, den: &T, zero: &T, bound: &T) -> Ordering {
    let rhs = bound.mul(den);
    if den > zero {
        num.cmp(&rhs)
    } else {
        rhs.cmp(num)
    }
}

impl<'a, T: Num> Search<'a, T> {
    fn new(map: &'a ScaledMap<T>, bound: u32, mode: Mode, budget: u64) -> Self {
        Search {
            map,
            bound,
            mode,
            runs: vec![Vec::new(); bound as usize + 1],
            visited: 0,
            budget,
            zero: T::from_i64(0),
            one: T::from_i64(1),
        }
    }

    fn charge(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Resource {
                pieces: self.visited as usize,
                cap: self.budget as usize,
            });
        }
        Ok(())
    }

    fn record(&mut self, st: &State<T>, depth: u32) {
        match &mut self.mode {
            Mode::Count { raw } => match st {
                State::Affine { alpha, b, ilo, ihi } => {
                    if *alpha == self.one {
                        if b.vanishes() {
                            self.runs[depth as usize].push((ilo.clone(), ihi.clone()));
                        }
                        return;
                    }
                    // Fixed point of the composite: X* = b / (1 - alpha).
                    // The half-open cell [lo, hi) maps onto [ilo, ihi) when
                    // the slope is positive and onto (ilo, ihi] otherwise.
                    let q = self.one.sub(alpha);
                    let at_lo = cmp_frac(b, &q, &self.zero, ilo);
                    let at_hi = cmp_frac(b, &q, &self.zero, ihi);
                    let hit = if alpha > &self.zero {
                        at_lo != Ordering::Less && at_hi == Ordering::Less
                    } else {
                        at_lo == Ordering::Greater && at_hi != Ordering::Greater
                    };
                    if hit {
                        raw[depth as usize] += 1;
                    }
                }
                State::Constant { v, nlo, nhi, den } => {
                    // x = v solves the level equation iff it lies in the
                    // cell; half-openness follows the sign of `den`.
                    let dv = den.mul(v);
                    let hit = if den > &self.zero {
                        &dv >= nlo && &dv < nhi
                    } else {
                        &dv > nlo && &dv <= nhi
                    };
                    if hit {
                        raw[depth as usize] += 1;
                    }
                }
            },
            Mode::Collect { level, set } => {
                if depth != *level {
                    return;
                }
                match st {
                    State::Affine { alpha, b, ilo, ihi } => {
                        if *alpha == self.one {
                            if b.vanishes() {
                                self.runs[depth as usize].push((ilo.clone(), ihi.clone()));
                            }
                            return;
                        }
                        let q = self.one.sub(alpha);
                        let at_lo = cmp_frac(b, &q, &self.zero, ilo);
                        let at_hi = cmp_frac(b, &q, &self.zero, ihi);
                        if at_lo != Ordering::Less && at_hi != Ordering::Greater {
                            set.insert(T::div_unscale(b, &q, &self.map.denom));
                        }
                    }
                    State::Constant { v, nlo, nhi, den } => {
                        // Closed membership does not depend on the sign of
                        // the cell's denominator.
                        let dv = den.mul(v);
                        if &dv >= nlo && &dv <= nhi {
                            set.insert(v.unscale(&self.map.denom));
                        }
                    }
                }
            }
        }
    }

    fn go(&mut self, st: &State<T>, depth: u32) -> Result<()> {
        if depth == self.bound {
            return Ok(());
        }
        match st {
            State::Affine { alpha, b, ilo, ihi } => {
                let cuts = &self.map.cuts;
                let mut j = cuts[1..].partition_point(|c| c <= ilo);
                while j < self.map.coeffs.len() && &cuts[j] < ihi {
                    let clo = ilo.max(&cuts[j]).clone();
                    let chi = ihi.min(&cuts[j + 1]).clone();
                    j += 1;
                    if clo >= chi {
                        continue;
                    }
                    self.charge()?;
                    let (aj, bj) = &self.map.coeffs[j - 1];
                    let child = if aj.vanishes() {
                        State::Constant {
                            v: bj.clone(),
                            nlo: clo.sub(b),
                            nhi: chi.sub(b),
                            den: alpha.clone(),
                        }
                    } else {
                        let y0 = aj.mul(&clo).add(bj);
                        let y1 = aj.mul(&chi).add(bj);
                        let (il, ih) = if aj > &self.zero { (y0, y1) } else { (y1, y0) };
                        State::Affine {
                            alpha: aj.mul(alpha),
                            b: aj.mul(b).add(bj),
                            ilo: il,
                            ihi: ih,
                        }
                    };
                    self.record(&child, depth + 1);
                    self.go(&child, depth + 1)?;
                }
                Ok(())
            }
            State::Constant { v, nlo, nhi, den } => {
                // A constant composite stays constant; its value just moves
                // along the orbit, and the cell never changes. No branching:
                // all laps containing the value agree on it.
                self.charge()?;
                let child = State::Constant {
                    v: self.map.step(v),
                    nlo: nlo.clone(),
                    nhi: nhi.clone(),
                    den: den.clone(),
                };
                self.record(&child, depth + 1);
                self.go(&child, depth + 1)
            }
        }
    }

    /// Runs the search from a root cell (in scaled coordinates) and returns
    /// the merged diagonal runs per level.
    fn run(&mut self, root_lo: T, root_hi: T) -> Result<()> {
        let root = State::Affine {
            alpha: self.one.clone(),
            b: self.zero.clone(),
            ilo: root_lo,
            ihi: root_hi,
        };
        self.go(&root, 0)
    }

    fn merged_runs(&self, level: u32) -> Vec<(Rational, Rational)> {
        let mut segs: Vec<(Rational, Rational)> = self.runs[level as usize]
            .iter()
            .map(|(a, b)| (a.unscale(&self.map.denom), b.unscale(&self.map.denom)))
            .collect();
        segs.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in segs {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        out
    }
}

/// The backend chosen for a map: integer-scaled search when every slope is
/// an integer (128-bit when a magnitude bound certifies no overflow),
/// otherwise plain rational arithmetic.
enum Backend {
    Small(ScaledMap<i128>),
    Big(ScaledMap<BigInt>),
    Rat(ScaledMap<Rational>),
}

fn prepare(f: &PLMap, bound: u32) -> Backend {
    let mut denom = BigInt::one();
    for (x, y) in f.nodes() {
        denom = denom.lcm(x.denom()).lcm(y.denom());
    }
    let scale = |r: &Rational| -> BigInt {
        let q = r * Rational::from(denom.clone());
        debug_assert!(q.is_integer());
        q.to_integer()
    };
    let xs: Vec<BigInt> = f.nodes().iter().map(|(x, _)| scale(x)).collect();
    let ys: Vec<BigInt> = f.nodes().iter().map(|(_, y)| scale(y)).collect();
    let mut coeffs: Vec<(BigInt, BigInt)> = Vec::with_capacity(xs.len() - 1);
    let mut integral = true;
    for i in 0..xs.len() - 1 {
        let dy = &ys[i + 1] - &ys[i];
        let dx = &xs[i + 1] - &xs[i];
        let (a, rem) = dy.div_rem(&dx);
        if !rem.vanishes() {
            integral = false;
            break;
        }
        let b = &ys[i] - &a * &xs[i];
        coeffs.push((a, b));
    }
    if !integral {
        let cuts: Vec<Rational> = f.nodes().iter().map(|(x, _)| x.clone()).collect();
        let coeffs = f
            .segments()
            .map(|((x0, y0), (x1, y1))| {
                let a = (y1 - y0) / (x1 - x0);
                let b = y0 - &a * x0;
                (a, b)
            })
            .collect();
        return Backend::Rat(ScaledMap {
            cuts,
            coeffs,
            denom: BigInt::one(),
        });
    }
    // Magnitude certificate for the 128-bit path: every quantity in the
    // search is bounded by 3 * M * s^bound * (s + 1) with M the largest
    // scaled coordinate and s the largest slope magnitude; keeping that
    // below 2^62 keeps all products inside i128.
    let m = xs
        .iter()
        .chain(ys.iter())
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigInt::one)
        .max(BigInt::one());
    let s = coeffs
        .iter()
        .map(|(a, _)| a.abs())
        .max()
        .unwrap_or_else(BigInt::one)
        .max(BigInt::one());
    let limit = BigInt::one() << 62;
    let bound_val = BigInt::from(3) * &m * s.pow(bound) * (&s + 1u32);
    if bound_val < limit {
        Backend::Small(ScaledMap {
            cuts: xs.iter().map(|v| v.to_i128().unwrap()).collect(),
            coeffs: coeffs
                .iter()
                .map(|(a, b)| (a.to_i128().unwrap(), b.to_i128().unwrap()))
                .collect(),
            denom,
        })
    } else {
        Backend::Big(ScaledMap {
            cuts: xs,
            coeffs,
            denom,
        })
    }
}

/// Outcome of a full counting pass: raw per-level counts, merged diagonal
/// runs, and whether the right domain endpoint is fixed at each level.
struct CountPass {
    raw: Vec<u64>,
    runs: Vec<Vec<(Rational, Rational)>>,
    hi_fixed: Vec<bool>,
}

fn count_pass<T: Num>(map: &ScaledMap<T>, bound: u32, budget: u64) -> Result<CountPass> {
    let mode = Mode::Count {
        raw: vec![0; bound as usize + 1],
    };
    let mut search = Search::new(map, bound, mode, budget);
    search.run(map.lo().clone(), map.hi().clone())?;
    let runs: Vec<Vec<(Rational, Rational)>> = (0..=bound).map(|n| search.merged_runs(n)).collect();
    let raw = match search.mode {
        Mode::Count { raw } => raw,
        _ => unreachable!(),
    };
    let mut hi_fixed = vec![false; bound as usize + 1];
    let mut x = map.hi().clone();
    for fixed in hi_fixed.iter_mut().skip(1) {
        x = map.step(&x);
        *fixed = &x == map.hi();
    }
    Ok(CountPass {
        raw,
        runs,
        hi_fixed,
    })
}

/// Solution points of one level, with the merged diagonal runs alongside.
type SolutionListing = (BTreeSet<Rational>, Vec<(Rational, Rational)>);

/// Collects the exact solutions of the level-`n` equation inside a root
/// cell, along with merged diagonal runs at that level.
fn collect_pass<T: Num>(
    map: &ScaledMap<T>,
    level: u32,
    root: Option<(T, T)>,
    budget: u64,
) -> Result<SolutionListing> {
    let mode = Mode::Collect {
        level,
        set: BTreeSet::new(),
    };
    let mut search = Search::new(map, level, mode, budget);
    let (lo, hi) = root.unwrap_or_else(|| (map.lo().clone(), map.hi().clone()));
    search.run(lo, hi)?;
    let runs = search.merged_runs(level);
    let set = match search.mode {
        Mode::Collect { set, .. } => set,
        _ => unreachable!(),
    };
    Ok((set, runs))
}

fn in_closed_runs(x: &Rational, runs: &[(Rational, Rational)]) -> bool {
    runs.iter().any(|(a, b)| a <= x && x <= b)
}

/// True when the level-`n` runs are not fully covered by the runs of the
/// proper divisor levels: the uncovered part is a continuum of points whose
/// least period is exactly n.
fn has_uncovered(runs_n: &[(Rational, Rational)], lower: &[(Rational, Rational)]) -> bool {
    for (a, b) in runs_n {
        // Walk the covering runs that intersect [a, b] in order; any gap of
        // positive length is uncovered.
        let mut edge = a.clone();
        for (c, d) in lower {
            if d < a || c > b {
                continue;
            }
            if *c > edge {
                return true;
            }
            if *d > edge {
                edge = d.clone();
            }
        }
        if edge < *b {
            return true;
        }
    }
    false
}

fn proper_divisors(n: u64) -> Vec<u64> {
    (1..n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Least period of `x` under `f`, given that `f^n(x) = x`.
fn least_period_of(f: &PLMap, x: &Rational, n: u64) -> Result<u64> {
    let mut cur = x.clone();
    for k in 1..=n {
        cur = f.eval(&cur)?;
        if &cur == x {
            return Ok(k);
        }
    }
    Err(Error::Consistency(format!(
        "point {x} does not return to itself within {n} steps"
    )))
}

fn spectrum_from_counts<T: Num>(
    map: &ScaledMap<T>,
    f: &PLMap,
    bound: u64,
    budget: u64,
) -> Result<SpectrumReport> {
    let pass = count_pass(map, bound as u32, budget)?;
    let domain = f.domain();
    let hi = domain.hi();
    let mut iso: Vec<i128> = vec![0; bound as usize + 1];
    let mut least: Vec<i128> = vec![0; bound as usize + 1];
    let mut levels = BTreeMap::new();
    let mut degenerate = false;
    for n in 1..=bound {
        let runs_n = &pass.runs[n as usize];
        // Each maximal diagonal run forces a spurious half-open count at its
        // right edge, except when that edge is the domain boundary.
        let spurious = runs_n.iter().filter(|(_, b)| b < hi).count() as i128;
        let hi_extra = if pass.hi_fixed[n as usize] && !in_closed_runs(hi, runs_n) {
            1
        } else {
            0
        };
        iso[n as usize] = pass.raw[n as usize] as i128 - spurious + hi_extra;
        let mut acc = iso[n as usize];
        for d in proper_divisors(n) {
            let inside = if runs_n.is_empty() {
                0
            } else {
                count_least_inside(map, f, d, runs_n, &pass.runs[d as usize], budget)? as i128
            };
            acc -= least[d as usize] - inside;
        }
        if acc < 0 {
            return Err(Error::Consistency(format!(
                "negative least-period count {acc} at level {n}"
            )));
        }
        least[n as usize] = acc;
        let mut lower: Vec<(Rational, Rational)> = Vec::new();
        for d in proper_divisors(n) {
            lower.extend(pass.runs[d as usize].iter().cloned());
        }
        lower.sort();
        if !runs_n.is_empty() {
            degenerate = true;
        }
        if has_uncovered(runs_n, &lower) {
            levels.insert(n, PeriodCount::Continuum);
        } else {
            if acc % n as i128 != 0 {
                return Err(Error::Consistency(format!(
                    "{acc} least-period-{n} points do not fill whole orbits"
                )));
            }
            if acc > 0 {
                levels.insert(n, PeriodCount::Orbits((acc / n as i128) as u64));
            }
        }
    }
    Ok(SpectrumReport {
        bound,
        levels,
        degenerate,
    })
}

/// Number of isolated least-period-`d` points lying inside the closed
/// level-n diagonal runs.
fn count_least_inside<T: Num>(
    map: &ScaledMap<T>,
    f: &PLMap,
    d: u64,
    runs_n: &[(Rational, Rational)],
    runs_d: &[(Rational, Rational)],
    budget: u64,
) -> Result<u64> {
    let mut total = 0;
    for (a, b) in runs_n {
        let ra =
            T::from_unscaled(a, &map.denom).expect("diagonal run endpoint off the coordinate grid");
        let rb =
            T::from_unscaled(b, &map.denom).expect("diagonal run endpoint off the coordinate grid");
        let (points, _) = collect_pass(map, d as u32, Some((ra, rb)), budget)?;
        for x in points {
            if in_closed_runs(&x, runs_d) {
                continue;
            }
            if least_period_of(f, &x, d)? == d {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// The least-period census of `f` up to `bound`, under the default budget.
pub fn spectrum(f: &PLMap, bound: u64) -> Result<SpectrumReport> {
    spectrum_capped(f, bound, DEFAULT_PIECE_CAP)
}

/// As `spectrum`, with an explicit budget on search work (counted in branch
/// words visited, the analogue of materialized pieces).
pub fn spectrum_capped(f: &PLMap, bound: u64, cap: usize) -> Result<SpectrumReport> {
    if bound == 0 || bound > 100_000 {
        return Err(Error::InvalidInput(format!(
            "census bound {bound} out of supported range"
        )));
    }
    let budget = cap as u64;
    match prepare(f, bound as u32) {
        Backend::Small(m) => spectrum_from_counts(&m, f, bound, budget),
        Backend::Big(m) => spectrum_from_counts(&m, f, bound, budget),
        Backend::Rat(m) => spectrum_from_counts(&m, f, bound, budget),
    }
}

/// All exact solutions of `f^n(x) = x`, labeled with their least periods.
/// Fails with a degenerate report when the n-th iterate contains a diagonal
/// segment.
pub fn periodic_points(f: &PLMap, n: u64) -> Result<Vec<(Rational, u64)>> {
    periodic_points_capped(f, n, DEFAULT_PIECE_CAP)
}

pub fn periodic_points_capped(f: &PLMap, n: u64, cap: usize) -> Result<Vec<(Rational, u64)>> {
    if n == 0 {
        return Err(Error::InvalidInput("period level must be positive".into()));
    }
    let (points, runs) = solutions_of_iterate(f, n, None, cap)?;
    if let Some(seg) = runs.first() {
        return Err(Error::Degenerate {
            level: n as u32,
            segment: Box::new(seg.clone()),
        });
    }
    points
        .into_iter()
        .map(|x| {
            let p = least_period_of(f, &x, n)?;
            Ok((x, p))
        })
        .collect()
}

/// Exact solutions of `f^n(x) = x` inside `within` (the whole domain when
/// `None`), returned with any diagonal segments at that level.
pub fn solutions_of_iterate(
    f: &PLMap,
    n: u64,
    within: Option<&IntervalQ>,
    cap: usize,
) -> Result<(Vec<Rational>, Vec<IntervalQ>)> {
    if n == 0 {
        return Err(Error::InvalidInput("period level must be positive".into()));
    }
    if let Some(j) = within {
        if !f.domain().contains_interval(j) {
            return Err(Error::OutsideDomain {
                point: Box::new(j.lo().clone()),
                domain: Box::new(f.domain()),
            });
        }
        if j.is_point() {
            let p = j.lo();
            let fixed = f.eval_iter(p, n)? == *p;
            let pts = if fixed { vec![p.clone()] } else { Vec::new() };
            return Ok((pts, Vec::new()));
        }
    }
    let budget = cap as u64;
    let (set, runs) = match prepare(f, n as u32) {
        Backend::Small(m) => restricted_collect(&m, n as u32, within, budget)?,
        Backend::Big(m) => restricted_collect(&m, n as u32, within, budget)?,
        Backend::Rat(m) => restricted_collect(&m, n as u32, within, budget)?,
    };
    let runs_iv = runs
        .into_iter()
        .map(|(a, b)| IntervalQ::new(a, b))
        .collect::<Result<Vec<_>>>()?;
    let points = set
        .into_iter()
        .filter(|x| !runs_iv.iter().any(|r| r.contains(x)))
        .collect();
    Ok((points, runs_iv))
}

fn restricted_collect<T: Num>(
    map: &ScaledMap<T>,
    level: u32,
    within: Option<&IntervalQ>,
    budget: u64,
) -> Result<SolutionListing> {
    let root = match within {
        None => None,
        Some(j) => {
            let lo = T::from_unscaled(j.lo(), &map.denom);
            let hi = T::from_unscaled(j.hi(), &map.denom);
            match (lo, hi) {
                (Some(a), Some(b)) => Some((a, b)),
                // The restriction is off the scaled grid; fall back to
                // rational coordinates for exactness.
                _ => return rational_restricted_collect(map, level, j, budget),
            }
        }
    };
    collect_pass(map, level, root, budget)
}

/// Rebuilds the map in rational coordinates to honor a restriction whose
/// endpoints are not multiples of the integer grid.
fn rational_restricted_collect<T: Num>(
    map: &ScaledMap<T>,
    level: u32,
    j: &IntervalQ,
    budget: u64,
) -> Result<SolutionListing> {
    let rat = ScaledMap::<Rational> {
        cuts: map.cuts.iter().map(|c| c.unscale(&map.denom)).collect(),
        coeffs: map
            .coeffs
            .iter()
            .map(|(a, b)| (a.unscale(&BigInt::one()), b.unscale(&map.denom)))
            .collect(),
        denom: BigInt::one(),
    };
    collect_pass(&rat, level, Some((j.lo().clone(), j.hi().clone())), budget)
}

/// Exact fixed points of `f`, with diagonal segments reported separately.
pub fn fixed_points(f: &PLMap) -> FixedPointsReport {
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    let mut diags: Vec<(Rational, Rational)> = Vec::new();
    let one = Rational::one();
    for ((x0, y0), (x1, y1)) in f.segments() {
        let alpha = (y1 - y0) / (x1 - x0);
        let beta = y0 - &alpha * x0;
        if alpha == one {
            if beta.vanishes() {
                diags.push((x0.clone(), x1.clone()));
            }
            continue;
        }
        let x = beta / (&one - &alpha);
        if &x >= x0 && &x <= x1 {
            points.insert(x);
        }
    }
    diags.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in diags {
        match merged.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => merged.push((a, b)),
        }
    }
    let diagonals: Vec<IntervalQ> = merged
        .into_iter()
        .map(|(a, b)| IntervalQ::new(a, b).expect("segment endpoints ordered"))
        .collect();
    let points = points
        .into_iter()
        .filter(|x| !diagonals.iter().any(|d| d.contains(x)))
        .collect();
    FixedPointsReport { points, diagonals }
}

/// All orbits of least period exactly `n`, sorted by smallest point.
pub fn orbits_of_least_period(f: &PLMap, n: u64, cap: usize) -> Result<Vec<OrbitRecord>> {
    let labeled = periodic_points_capped(f, n, cap)?;
    let of_period: Vec<Rational> = labeled
        .into_iter()
        .filter_map(|(x, p)| (p == n).then_some(x))
        .collect();
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    let mut orbits = Vec::new();
    for start in &of_period {
        if seen.contains(start) {
            continue;
        }
        let mut pts = Vec::with_capacity(n as usize);
        let mut cur = start.clone();
        for _ in 0..n {
            if !seen.insert(cur.clone()) {
                return Err(Error::Consistency(format!(
                    "orbit through {start} revisits {cur} early"
                )));
            }
            pts.push(cur.clone());
            cur = f.eval(&cur)?;
        }
        if &cur != start {
            return Err(Error::Consistency(format!(
                "orbit through {start} fails to close up"
            )));
        }
        pts.sort();
        let diameter = pts.last().unwrap() - pts.first().unwrap();
        orbits.push(OrbitRecord {
            period: n,
            points: pts,
            diameter,
        });
    }
    orbits.sort_by(|a, b| a.points[0].cmp(&b.points[0]));
    Ok(orbits)
}
