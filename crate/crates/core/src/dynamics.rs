//! Covering arguments for interval maps: fixed points in covered intervals,
//! exact pullback subintervals, periodic points that follow a covering cycle,
//! and turbulence pairs built from an overshooting orbit.

use crate::census::solutions_of_iterate;
use crate::error::{Error, Result};
use crate::interval::IntervalQ;
use crate::plmap::{PLMap, DEFAULT_PIECE_CAP};
use crate::rational::{rat, Rational};

/// A chain of closed intervals J_0 ... J_{n-1} where the image of each J_i
/// covers the next interval, indices wrapping around.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverCycle {
    intervals: Vec<IntervalQ>,
}

impl CoverCycle {
    /// Checks every covering link image(f, J_i) ⊇ J_{i+1 mod n} and keeps
    /// the chain on success.
    pub fn new(f: &PLMap, intervals: Vec<IntervalQ>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidInput(
                "a covering cycle needs at least one interval".into(),
            ));
        }
        let n = intervals.len();
        for i in 0..n {
            let next = &intervals[(i + 1) % n];
            let img = f.image(&intervals[i])?;
            if !img.contains_interval(next) {
                return Err(Error::Cover(format!(
                    "link {i}: image {img} does not contain {next}"
                )));
            }
        }
        Ok(CoverCycle { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[IntervalQ] {
        &self.intervals
    }
}

/// Two closed subintervals whose images under the map each cover the union
/// of both. `strict` records that the defining inequality of the source
/// orbit was strict, in which case the intervals are disjoint; otherwise
/// they share exactly one endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TurbulencePair {
    pub i0: IntervalQ,
    pub i1: IntervalQ,
    pub strict: bool,
}

impl TurbulencePair {
    /// Re-checks the defining containment against a map: the intersection
    /// of the two images must cover both intervals, and a strict pair must
    /// be disjoint.
    pub fn verify(&self, f: &PLMap) -> Result<()> {
        let im0 = f.image(&self.i0)?;
        let im1 = f.image(&self.i1)?;
        let both = im0
            .intersect(&im1)
            .ok_or_else(|| Error::Consistency("turbulence images do not meet".into()))?;
        if !both.contains_interval(&self.i0) || !both.contains_interval(&self.i1) {
            return Err(Error::Consistency(format!(
                "images meet in {both}, which does not cover {} and {}",
                self.i0, self.i1
            )));
        }
        match self.i0.intersect(&self.i1) {
            None => Ok(()),
            Some(common) if !self.strict && common.is_point() => Ok(()),
            Some(common) => Err(Error::Consistency(format!("intervals overlap in {common}"))),
        }
    }
}

/// The smallest fixed point of `f` inside `j`. Requires the image of `j`
/// to cover `j`, which guarantees that a fixed point exists.
pub fn covered_fixed_point(f: &PLMap, j: &IntervalQ) -> Result<Rational> {
    let img = f.image(j)?;
    if !img.contains_interval(j) {
        return Err(Error::Cover(format!("image {img} does not contain {j}")));
    }
    smallest_fixed_in(f, j)
}

fn smallest_fixed_in(f: &PLMap, j: &IntervalQ) -> Result<Rational> {
    smallest_periodic_in(f, 1, j)
}

fn smallest_periodic_in(f: &PLMap, n: u64, j: &IntervalQ) -> Result<Rational> {
    let (points, runs) = solutions_of_iterate(f, n, Some(j), DEFAULT_PIECE_CAP)?;
    let mut best: Option<Rational> = points.into_iter().next();
    for r in &runs {
        if best.as_ref().is_none_or(|b| r.lo() < b) {
            best = Some(r.lo().clone());
        }
    }
    best.ok_or_else(|| Error::Consistency("no fixed point in a covered interval".into()))
}

/// The closed subinterval K of `j` with image exactly `l`, built from the
/// extreme preimages of the two endpoints of `l`: first the preimages
/// nearest each other are located, then the bracket is tightened from both
/// sides so no interior point maps to an endpoint of `l`.
pub fn pullback(f: &PLMap, j: &IntervalQ, l: &IntervalQ) -> Result<IntervalQ> {
    let img = f.image(j)?;
    if !img.contains_interval(l) {
        return Err(Error::Cover(format!(
            "target {l} is not contained in the image {img}"
        )));
    }
    let missing = || Error::Consistency("endpoint preimage missing in a covered interval".into());
    let p = f.min_solution_in(j, l.lo())?.ok_or_else(missing)?;
    let q = f.min_solution_in(j, l.hi())?.ok_or_else(missing)?;
    match p.cmp(&q) {
        std::cmp::Ordering::Equal => Ok(IntervalQ::point(p)),
        std::cmp::Ordering::Less => {
            let bracket = IntervalQ::new(p, q.clone())?;
            let c = f.max_solution_in(&bracket, l.lo())?.ok_or_else(missing)?;
            let tail = IntervalQ::new(c.clone(), q)?;
            let d = f.min_solution_in(&tail, l.hi())?.ok_or_else(missing)?;
            IntervalQ::new(c, d)
        }
        std::cmp::Ordering::Greater => {
            let bracket = IntervalQ::new(q, p.clone())?;
            let d = f.max_solution_in(&bracket, l.hi())?.ok_or_else(missing)?;
            let tail = IntervalQ::new(d.clone(), p)?;
            let c = f.min_solution_in(&tail, l.lo())?.ok_or_else(missing)?;
            IntervalQ::new(d, c)
        }
    }
}

/// A point whose orbit travels through the cycle: the i-th iterate lies in
/// the i-th interval and the n-th iterate returns to the point itself.
/// Returns the point together with the pullback chain Q_0 ... Q_{n-1}
/// certifying the itinerary (f maps each Q_i onto Q_{i+1}, and Q_{n-1}
/// onto J_0).
pub fn follow_cycle(f: &PLMap, cycle: &CoverCycle) -> Result<(Rational, Vec<IntervalQ>)> {
    let js = cycle.intervals();
    let n = js.len();
    let mut chain = Vec::with_capacity(n);
    let mut q = js[0].clone();
    for j in js.iter().rev() {
        q = pullback(f, j, &q)?;
        chain.push(q.clone());
    }
    chain.reverse();
    let y = smallest_periodic_in(f, n as u64, &chain[0])?;
    Ok((y, chain))
}

/// A turbulence pair for `f` from a point `c` below a fixed point `z` whose
/// k-th iterate overshoots z: requires f(c) < c < z <= f^k(c). When the
/// last inequality is strict the returned intervals are disjoint.
pub fn turbulence_from_overshoot(
    f: &PLMap,
    c: &Rational,
    z: &Rational,
    k: u32,
) -> Result<TurbulencePair> {
    if k < 2 {
        return Err(Error::InvalidInput(
            "overshoot order k must be at least 2".into(),
        ));
    }
    let fz = f.eval(z)?;
    if fz != *z {
        return Err(Error::Hypothesis(format!(
            "z = {z} is not a fixed point: f(z) = {fz}"
        )));
    }
    let fc = f.eval(c)?;
    if fc >= *c {
        return Err(Error::Hypothesis(format!("need f(c) < c: f({c}) = {fc}")));
    }
    if c >= z {
        return Err(Error::Hypothesis(format!("need c < z: c = {c}, z = {z}")));
    }
    let fkc = f.eval_iter(c, u64::from(k))?;
    if fkc < *z {
        return Err(Error::Hypothesis(format!(
            "need z <= f^k(c): f^{k}(c) = {fkc} is below z = {z}"
        )));
    }
    let strict = *z < fkc;
    descend(f, c.clone(), z.clone(), k, strict)
}

/// Reduces the overshoot order one step at a time until the second iterate
/// of the working point already clears the working fixed point, then hands
/// off to the direct two-step construction.
fn descend(
    f: &PLMap,
    mut c: Rational,
    z: Rational,
    mut k: u32,
    strict: bool,
) -> Result<TurbulencePair> {
    loop {
        let fc = f.eval(&c)?;
        let f2c = f.eval(&fc)?;
        if z <= f2c {
            return base_pair(f, &c, &z, z < f2c, strict);
        }
        if k <= 2 {
            return Err(Error::Hypothesis(
                "descent reached order 2 without z <= f^2(c)".into(),
            ));
        }
        if f2c < fc {
            c = fc;
        } else if fc < f2c && f2c < c {
            let span = IntervalQ::new(c.clone(), z.clone())?;
            c = f
                .min_solution_in(&span, &f2c)?
                .ok_or_else(|| Error::Hypothesis("no preimage of f^2(c) between c and z".into()))?;
        } else if c < f2c {
            let f3c = f.eval(&f2c)?;
            if f2c < f3c {
                // A fixed point sits strictly between c and f^2(c): the map
                // is below the diagonal at c and above it at f^2(c). That
                // fixed point closes a strict two-step configuration.
                let riser = IntervalQ::new(c.clone(), f2c.clone())?;
                let zs = smallest_fixed_in(f, &riser)?;
                return base_pair(f, &c, &zs, true, strict);
            } else if f3c < f2c {
                let span = IntervalQ::new(f2c.clone(), z.clone())?;
                c = f.min_solution_in(&span, &f2c)?.ok_or_else(|| {
                    Error::Hypothesis("no preimage of f^2(c) between f^2(c) and z".into())
                })?;
            } else {
                return Err(Error::Hypothesis(
                    "f^2(c) is a fixed point strictly between c and z".into(),
                ));
            }
        } else {
            return Err(Error::Hypothesis(
                "the second iterate of c revisits c or f(c)".into(),
            ));
        }
        k -= 1;
    }
}

/// The two-step construction: with f(c) < c < z <= f^2(c) the pair
/// [f(c), c], [c, z] works directly. When the clearance is strict the pair
/// is pulled apart: t0 sits halfway between f(c) and the first preimage of
/// z left of c, and r is the first point right of c mapping to t0, giving
/// disjoint intervals [t0, c] and [r, z].
fn base_pair(
    f: &PLMap,
    c: &Rational,
    z: &Rational,
    strict_base: bool,
    strict: bool,
) -> Result<TurbulencePair> {
    let fc = f.eval(c)?;
    if !strict_base {
        return Ok(TurbulencePair {
            i0: IntervalQ::new(fc, c.clone())?,
            i1: IntervalQ::new(c.clone(), z.clone())?,
            strict,
        });
    }
    let left_leg = IntervalQ::new(fc.clone(), c.clone())?;
    let s = f
        .min_solution_in(&left_leg, z)?
        .ok_or_else(|| Error::Hypothesis("no preimage of z between f(c) and c".into()))?;
    let t0 = (&fc + &s) * rat(1, 2);
    let right_leg = IntervalQ::new(c.clone(), z.clone())?;
    let r = f
        .min_solution_in(&right_leg, &t0)?
        .ok_or_else(|| Error::Hypothesis("no preimage of t0 between c and z".into()))?;
    Ok(TurbulencePair {
        i0: IntervalQ::new(t0, c.clone())?,
        i1: IntervalQ::new(r, z.clone())?,
        strict,
    })
}
