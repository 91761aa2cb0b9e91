//! Continuous piecewise-linear self-maps of a closed rational interval.
//!
//! A map is stored as its node list `(x_i, y_i)` with strictly increasing
//! x-coordinates; the function is the linear interpolant through consecutive
//! nodes. The first and last x-coordinates are the domain endpoints, and every
//! node value must land back inside the domain, so the map is a self-map by
//! construction. Node lists are normalized: no two consecutive segments are
//! collinear, which makes structural equality meaningful.

use crate::error::{Error, Result};
use crate::interval::IntervalQ;
use crate::rational::{parse_rational, Rational};
use num_traits::Zero;
use std::fmt;

/// Default ceiling on the node count of any computed map.
pub const DEFAULT_PIECE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    nodes: Vec<(Rational, Rational)>,
}

impl PLMap {
    /// Builds a map from its interpolation nodes, validating the self-map
    /// invariants and merging collinear runs into single segments.
    pub fn new(nodes: Vec<(Rational, Rational)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidInput("a map needs at least two nodes".into()));
        }
        for pair in nodes.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidInput(format!(
                    "node x-coordinates must be strictly increasing, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        let lo = nodes.first().unwrap().0.clone();
        let hi = nodes.last().unwrap().0.clone();
        for (x, y) in &nodes {
            if y < &lo || y > &hi {
                return Err(Error::InvalidInput(format!(
                    "node value {y} at x = {x} leaves the domain [{lo}, {hi}]"
                )));
            }
        }
        let mut canon: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len());
        for node in nodes {
            canon.push(node);
            while canon.len() >= 3 {
                let k = canon.len();
                let (x0, y0) = &canon[k - 3];
                let (x1, y1) = &canon[k - 2];
                let (x2, y2) = &canon[k - 1];
                if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0) {
                    canon.remove(k - 2);
                } else {
                    break;
                }
            }
        }
        Ok(Self { nodes: canon })
    }

    /// The identity map on a non-degenerate interval.
    pub fn identity(domain: &IntervalQ) -> Result<Self> {
        Self::new(vec![
            (domain.lo().clone(), domain.lo().clone()),
            (domain.hi().clone(), domain.hi().clone()),
        ])
    }

    /// The constant map with value `c` on a non-degenerate interval.
    pub fn constant(domain: &IntervalQ, c: Rational) -> Result<Self> {
        Self::new(vec![
            (domain.lo().clone(), c.clone()),
            (domain.hi().clone(), c),
        ])
    }

    pub fn domain(&self) -> IntervalQ {
        IntervalQ::hull(
            self.nodes.first().unwrap().0.clone(),
            self.nodes.last().unwrap().0.clone(),
        )
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Pairs of consecutive nodes, one per linear segment.
    pub fn segments(&self) -> impl Iterator<Item = (&(Rational, Rational), &(Rational, Rational))> {
        self.nodes.iter().zip(self.nodes.iter().skip(1))
    }

    fn contains_x(&self, x: &Rational) -> bool {
        &self.nodes.first().unwrap().0 <= x && x <= &self.nodes.last().unwrap().0
    }

    /// Index of the segment whose x-range contains `x` (ties to the left
    /// segment's right endpoint resolve identically by continuity).
    fn segment_index(&self, x: &Rational) -> usize {
        let after = self.nodes.partition_point(|(xi, _)| xi <= x);
        after.saturating_sub(1).min(self.nodes.len() - 2)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !self.contains_x(x) {
            return Err(Error::OutsideDomain {
                point: Box::new(x.clone()),
                domain: Box::new(self.domain()),
            });
        }
        let i = self.segment_index(x);
        let (x0, y0) = &self.nodes[i];
        let (x1, y1) = &self.nodes[i + 1];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Applies the map `n` times to a point.
    pub fn eval_iter(&self, x: &Rational, n: u64) -> Result<Rational> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.eval(&cur)?;
        }
        Ok(cur)
    }

    /// The image of the whole domain.
    pub fn full_image(&self) -> IntervalQ {
        let mut lo = self.nodes[0].1.clone();
        let mut hi = lo.clone();
        for (_, y) in &self.nodes[1..] {
            if y < &lo {
                lo = y.clone();
            }
            if y > &hi {
                hi = y.clone();
            }
        }
        IntervalQ::hull(lo, hi)
    }

    /// The exact image of a subinterval of the domain. Extrema occur at the
    /// subinterval's endpoints or at interior nodes.
    pub fn image(&self, j: &IntervalQ) -> Result<IntervalQ> {
        let mut lo = self.eval(j.lo())?;
        let mut hi = self.eval(j.hi())?;
        if hi < lo {
            std::mem::swap(&mut lo, &mut hi);
        }
        for (x, y) in &self.nodes {
            if j.lo() < x && x < j.hi() {
                if y < &lo {
                    lo = y.clone();
                }
                if y > &hi {
                    hi = y.clone();
                }
            }
        }
        IntervalQ::new(lo, hi)
    }

    /// Exact composition `self ∘ other` under the default piece cap.
    pub fn compose(&self, other: &PLMap) -> Result<PLMap> {
        self.compose_capped(other, DEFAULT_PIECE_CAP)
    }

    /// Exact composition `self ∘ other`: refine `other`'s partition by the
    /// preimages of `self`'s breakpoints inside each segment, then interpolate
    /// the composite values. Fails if the result needs more than `cap` nodes.
    pub fn compose_capped(&self, other: &PLMap, cap: usize) -> Result<PLMap> {
        if !self.domain().contains_interval(&other.full_image()) {
            return Err(Error::InvalidInput(format!(
                "composition range mismatch: inner image {} outside outer domain {}",
                other.full_image(),
                self.domain()
            )));
        }
        let mut cuts: Vec<Rational> = Vec::new();
        for ((u0, v0), (u1, v1)) in other.segments() {
            cuts.push(u0.clone());
            if v0 != v1 {
                let (a, b) = if v0 < v1 { (v0, v1) } else { (v1, v0) };
                let start = self.nodes.partition_point(|(bx, _)| bx <= a);
                for (bx, _) in &self.nodes[start..] {
                    if bx >= b {
                        break;
                    }
                    cuts.push(u0 + (bx - v0) * (u1 - u0) / (v1 - v0));
                }
            }
            if cuts.len() > cap {
                return Err(Error::Resource {
                    pieces: cuts.len(),
                    cap,
                });
            }
        }
        cuts.push(other.nodes.last().unwrap().0.clone());
        cuts.sort_unstable();
        cuts.dedup();
        if cuts.len() > cap {
            return Err(Error::Resource {
                pieces: cuts.len(),
                cap,
            });
        }
        let nodes = cuts
            .into_iter()
            .map(|x| {
                let y = self.eval(&other.eval(&x)?)?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        PLMap::new(nodes)
    }

    /// The `n`-th iterate as an explicit map, under the default piece cap.
    pub fn iterate(&self, n: u32) -> Result<PLMap> {
        self.iterate_capped(n, DEFAULT_PIECE_CAP)
    }

    pub fn iterate_capped(&self, n: u32, cap: usize) -> Result<PLMap> {
        if n == 0 {
            return Err(Error::InvalidInput("iterate count must be positive".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Conjugates by the affine change of coordinates `h(x) = a x + b`,
    /// returning `h ∘ f ∘ h⁻¹` on the transported domain.
    pub fn conjugate_affine(&self, a: &Rational, b: &Rational) -> Result<PLMap> {
        if a.is_zero() {
            return Err(Error::InvalidInput(
                "affine conjugacy needs a nonzero scale".into(),
            ));
        }
        let mut nodes: Vec<(Rational, Rational)> = self
            .nodes
            .iter()
            .map(|(x, y)| (a * x + b, a * y + b))
            .collect();
        if a < &Rational::zero() {
            nodes.reverse();
        }
        PLMap::new(nodes)
    }

    /// Smallest `x` in `j` with `f(x) = target`, if any. Flat segments at the
    /// target height contribute their left ends.
    pub fn min_solution_in(&self, j: &IntervalQ, target: &Rational) -> Result<Option<Rational>> {
        self.extreme_solution_in(j, target, true)
    }

    /// Largest `x` in `j` with `f(x) = target`, if any.
    pub fn max_solution_in(&self, j: &IntervalQ, target: &Rational) -> Result<Option<Rational>> {
        self.extreme_solution_in(j, target, false)
    }

    fn extreme_solution_in(
        &self,
        j: &IntervalQ,
        target: &Rational,
        want_min: bool,
    ) -> Result<Option<Rational>> {
        if !self.domain().contains_interval(j) {
            return Err(Error::OutsideDomain {
                point: Box::new(j.lo().clone()),
                domain: Box::new(self.domain()),
            });
        }
        let mut best: Option<Rational> = None;
        let mut consider = |x: Rational| match &best {
            Some(b) if (want_min && &x >= b) || (!want_min && &x <= b) => {}
            _ => best = Some(x),
        };
        for ((x0, y0), (x1, y1)) in self.segments() {
            let lo = x0.max(j.lo());
            let hi = x1.min(j.hi());
            if lo > hi {
                continue;
            }
            if y0 == y1 {
                if y0 == target {
                    consider(if want_min { lo.clone() } else { hi.clone() });
                }
                continue;
            }
            let x = x0 + (target - y0) * (x1 - x0) / (y1 - y0);
            if &x >= lo && &x <= hi {
                consider(x);
            }
        }
        Ok(best)
    }
}

impl fmt::Display for PLMap {
    /// Canonical map file form, one `domain:` line and one `points:` line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.domain())?;
        write!(f, "points: [")?;
        for (i, (x, y)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{x}, {y}]")?;
        }
        writeln!(f, "]")
    }
}

/// Parses the map file format: a `domain: [lo, hi]` field and a
/// `points: [[x1, y1], ...]` field, every scalar a rational literal.
/// Whitespace between tokens is free; the printed form round-trips.
pub fn parse_map(text: &str) -> Result<PLMap> {
    let mut toks = Tokens::new(text);
    toks.expect_word("domain")?;
    toks.expect(':')?;
    toks.expect('[')?;
    let dlo = toks.rational()?;
    toks.expect(',')?;
    let dhi = toks.rational()?;
    toks.expect(']')?;
    toks.expect_word("points")?;
    toks.expect(':')?;
    toks.expect('[')?;
    let mut nodes = Vec::new();
    loop {
        toks.expect('[')?;
        let x = toks.rational()?;
        toks.expect(',')?;
        let y = toks.rational()?;
        toks.expect(']')?;
        nodes.push((x, y));
        match toks.next()? {
            Tok::Sym(',') => continue,
            Tok::Sym(']') => break,
            other => {
                return Err(Error::Parse(format!(
                    "expected ',' or ']' in points list, got {other:?}"
                )))
            }
        }
    }
    toks.expect_end()?;
    let map = PLMap::new(nodes)?;
    if map.domain() != IntervalQ::new(dlo.clone(), dhi.clone())? {
        return Err(Error::Parse(format!(
            "domain [{dlo}, {dhi}] does not match node range {}",
            map.domain()
        )));
    }
    Ok(map)
}

#[derive(Debug)]
enum Tok {
    Sym(char),
    Atom(String),
    End,
}

struct Tokens<'a> {
    rest: &'a str,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Self { rest: text }
    }

    fn next(&mut self) -> Result<Tok> {
        self.rest = self.rest.trim_start();
        let mut chars = self.rest.chars();
        let Some(c) = chars.next() else {
            return Ok(Tok::End);
        };
        if "[],:".contains(c) {
            self.rest = chars.as_str();
            return Ok(Tok::Sym(c));
        }
        let len = self
            .rest
            .find(|ch: char| ch.is_whitespace() || "[],:".contains(ch))
            .unwrap_or(self.rest.len());
        let atom = &self.rest[..len];
        self.rest = &self.rest[len..];
        Ok(Tok::Atom(atom.to_string()))
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        match self.next()? {
            Tok::Sym(c) if c == sym => Ok(()),
            other => Err(Error::Parse(format!("expected '{sym}', got {other:?}"))),
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<()> {
        match self.next()? {
            Tok::Atom(a) if a == word => Ok(()),
            other => Err(Error::Parse(format!("expected '{word}', got {other:?}"))),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next()? {
            Tok::End => Ok(()),
            other => Err(Error::Parse(format!("trailing input: {other:?}"))),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        match self.next()? {
            Tok::Atom(a) => parse_rational(&a),
            other => Err(Error::Parse(format!("expected a rational, got {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn tent() -> PLMap {
        PLMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), int(1)),
            (int(1), int(0)),
        ])
        .unwrap()
    }

    #[test]
    fn tent_evaluation() {
        let t = tent();
        assert_eq!(t.eval(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(t.eval(&rat(3, 4)).unwrap(), rat(1, 2));
        assert_eq!(t.eval(&rat(2, 7)).unwrap(), rat(4, 7));
        assert_eq!(t.eval(&int(0)).unwrap(), int(0));
        assert_eq!(t.eval(&int(1)).unwrap(), int(0));
        assert!(matches!(t.eval(&int(2)), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn normalization_merges_collinear_runs() {
        let m = PLMap::new(vec![
            (int(0), int(0)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), int(1)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert_eq!(m, tent());
        assert_eq!(m.segment_count(), 2);
    }

    #[test]
    fn construction_rejects_bad_nodes() {
        assert!(PLMap::new(vec![(int(0), int(0))]).is_err());
        assert!(PLMap::new(vec![(int(1), int(0)), (int(0), int(1))]).is_err());
        assert!(PLMap::new(vec![(int(0), int(2)), (int(1), int(0))]).is_err());
    }

    #[test]
    fn composition_of_tent_with_itself() {
        let t = tent();
        let t2 = t.compose(&t).unwrap();
        let xs: Vec<Rational> = t2.nodes().iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(xs, vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
        assert_eq!(t2.segment_count(), 4);
        assert_eq!(t2.eval(&rat(1, 8)).unwrap(), rat(1, 2));
    }

    #[test]
    fn composition_identities() {
        let t = tent();
        let id = PLMap::identity(&t.domain()).unwrap();
        assert_eq!(id.compose(&t).unwrap(), t);
        assert_eq!(t.compose(&id).unwrap(), t);
        let c = PLMap::constant(&t.domain(), rat(1, 3)).unwrap();
        assert_eq!(c.compose(&t).unwrap(), c);
    }

    #[test]
    fn iterates_double_in_size() {
        let t = tent();
        assert_eq!(t.iterate(1).unwrap(), t);
        assert_eq!(t.iterate(2).unwrap(), t.compose(&t).unwrap());
        assert_eq!(t.iterate(3).unwrap().segment_count(), 8);
        for n in 1..=6u32 {
            let tn = t.iterate(n).unwrap();
            let x = rat(3, 11);
            assert_eq!(tn.eval(&x).unwrap(), t.eval_iter(&x, n as u64).unwrap());
        }
    }

    #[test]
    fn piece_cap_trips() {
        let t = tent();
        let err = t.iterate_capped(8, 100).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 100, .. }));
    }

    #[test]
    fn images() {
        let t = tent();
        assert_eq!(
            t.image(&IntervalQ::new(int(0), rat(1, 2)).unwrap())
                .unwrap(),
            IntervalQ::new(int(0), int(1)).unwrap()
        );
        assert_eq!(
            t.image(&IntervalQ::new(rat(1, 4), rat(3, 4)).unwrap())
                .unwrap(),
            IntervalQ::new(rat(1, 2), int(1)).unwrap()
        );
        let c = PLMap::constant(&t.domain(), rat(1, 3)).unwrap();
        assert_eq!(
            c.image(&IntervalQ::new(rat(1, 4), rat(3, 4)).unwrap())
                .unwrap(),
            IntervalQ::point(rat(1, 3))
        );
    }

    #[test]
    fn affine_conjugation_preserves_dynamics() {
        let t = tent();
        let g = t.conjugate_affine(&int(3), &int(-1)).unwrap();
        assert_eq!(g.domain(), IntervalQ::new(int(-1), int(2)).unwrap());
        let x = rat(5, 13);
        let hx = int(3) * &x + int(-1);
        assert_eq!(g.eval(&hx).unwrap(), int(3) * t.eval(&x).unwrap() + int(-1));
        let r = t.conjugate_affine(&int(-1), &int(1)).unwrap();
        assert_eq!(r.domain(), t.domain());
        assert_eq!(r.eval(&rat(1, 2)).unwrap(), int(0));
    }

    #[test]
    fn extreme_solutions() {
        let t = tent();
        let whole = t.domain();
        assert_eq!(
            t.min_solution_in(&whole, &rat(1, 2)).unwrap(),
            Some(rat(1, 4))
        );
        assert_eq!(
            t.max_solution_in(&whole, &rat(1, 2)).unwrap(),
            Some(rat(3, 4))
        );
        assert_eq!(
            t.min_solution_in(&IntervalQ::new(rat(1, 2), int(1)).unwrap(), &rat(1, 2))
                .unwrap(),
            Some(rat(3, 4))
        );
        assert_eq!(t.min_solution_in(&whole, &int(2)).unwrap(), None);
        let c = PLMap::constant(&whole, rat(1, 3)).unwrap();
        assert_eq!(c.min_solution_in(&whole, &rat(1, 3)).unwrap(), Some(int(0)));
        assert_eq!(c.max_solution_in(&whole, &rat(1, 3)).unwrap(), Some(int(1)));
    }

    #[test]
    fn map_file_round_trip() {
        let t = tent();
        let text = t.to_string();
        assert_eq!(text, "domain: [0, 1]\npoints: [[0, 0], [1/2, 1], [1, 0]]\n");
        let back = parse_map(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_string(), text);
        let loose = parse_map("domain:[0,1] points:[[0,0],[1/2,1],[1,0]]").unwrap();
        assert_eq!(loose, t);
    }

    #[test]
    fn map_file_rejects_garbage() {
        assert!(parse_map("domain: [0, 1]\npoints: [[0, 0], [1/0, 1], [1, 0]]\n").is_err());
        assert!(parse_map("domain: [0, 2]\npoints: [[0, 0], [1, 0]]\n").is_err());
        assert!(parse_map("points: [[0, 0], [1, 0]]\n").is_err());
        assert!(parse_map("domain: [0, 1]\npoints: [[0, 0], [1, 0]] extra\n").is_err());
    }
}
