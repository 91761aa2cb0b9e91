//! Cyclic orbit patterns: the spatial type of a periodic orbit, its Markov
//! covering graph over the gap intervals, a canonical piecewise linear
//! realization, the period spectrum that realization forces, and the
//! two-chain test recognizing the special odd-period cycles.

use std::fmt;

use rand::Rng;

use crate::census::{spectrum_capped, OrbitRecord, SpectrumReport};
use crate::error::{Error, Result};
use crate::plmap::{PLMap, DEFAULT_PIECE_CAP};
use crate::rational::{int, Rational};

/// A single m-cycle on ranks 1..m. Entry i-1 of the image list holds the
/// rank that the i-th smallest orbit point maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPattern {
    image: Vec<usize>,
}

impl CyclicPattern {
    /// Validates an image list given with 1-based ranks: every rank in
    /// 1..=m exactly once, and the whole permutation is one m-cycle.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        if m < 2 {
            return Err(Error::InvalidInput(
                "a pattern needs at least two points".into(),
            ));
        }
        let mut hit = vec![false; m];
        for &v in &image {
            if v < 1 || v > m {
                return Err(Error::InvalidInput(format!("rank {v} is outside 1..={m}")));
            }
            if hit[v - 1] {
                return Err(Error::InvalidInput(format!("rank {v} appears twice")));
            }
            hit[v - 1] = true;
        }
        let mut at = 1;
        for _ in 0..m - 1 {
            at = image[at - 1];
            if at == 1 {
                return Err(Error::InvalidInput(
                    "the permutation splits into more than one cycle".into(),
                ));
            }
        }
        Ok(CyclicPattern { image })
    }

    /// Parses the whitespace-separated image list notation, e.g. `5 4 2 1 3`.
    pub fn parse(text: &str) -> Result<Self> {
        let image = text
            .split_whitespace()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad rank {w:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        CyclicPattern::new(image)
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    /// The rank that rank `i` maps to (both 1-based).
    pub fn image_of(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }
}

impl fmt::Display for CyclicPattern {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        write!(out, "{}", words.join(" "))
    }
}

/// A uniformly random single m-cycle: a shuffled ordering of the ranks
/// visited after rank 1.
pub fn random_cycle<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<CyclicPattern> {
    if m < 2 {
        return Err(Error::InvalidInput(
            "a pattern needs at least two points".into(),
        ));
    }
    let mut rest: Vec<usize> = (2..=m).collect();
    for i in (1..rest.len()).rev() {
        rest.swap(i, rng.gen_range(0..=i));
    }
    let mut image = vec![0usize; m];
    let mut at = 1;
    for &next in &rest {
        image[at - 1] = next;
        at = next;
    }
    image[at - 1] = 1;
    CyclicPattern::new(image)
}

/// Reads the spatial type off an orbit of `f`: entry i is the rank of the
/// image of the i-th smallest orbit point.
pub fn orbit_to_pattern(orbit: &OrbitRecord, f: &PLMap) -> Result<CyclicPattern> {
    let pts = &orbit.points;
    if pts.len() < 2 {
        return Err(Error::Consistency(
            "a pattern needs at least two orbit points".into(),
        ));
    }
    let mut image = Vec::with_capacity(pts.len());
    for x in pts {
        let y = f.eval(x)?;
        match pts.binary_search(&y) {
            Ok(r) => image.push(r + 1),
            Err(_) => {
                return Err(Error::Consistency(format!(
                    "the image {y} of orbit point {x} is not an orbit point"
                )))
            }
        }
    }
    CyclicPattern::new(image).map_err(|e| Error::Consistency(e.to_string()))
}

/// Covering relations between the m-1 gap intervals of a pattern: an edge
/// i -> j says the image hull of gap i contains gap j, rank-for-rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl MarkovGraph {
    /// Number of gap intervals (one less than the pattern size).
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// All edges, 1-based, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |(a, _)| *a == i)
            .map(|(_, b)| *b)
    }
}

/// The covering graph of a pattern: gap i = [x_i, x_{i+1}] covers gap j
/// exactly when the hull of the two endpoint images spans ranks j and j+1.
pub fn markov_graph(p: &CyclicPattern) -> MarkovGraph {
    let m = p.size();
    let mut edges = Vec::new();
    for i in 1..m {
        let a = p.image_of(i);
        let b = p.image_of(i + 1);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for j in lo..hi {
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    MarkovGraph {
        node_count: m - 1,
        edges,
    }
}

/// The canonical realization of a pattern: straight lines through the
/// points (i/(m+1), sigma(i)/(m+1)) on the domain [1/(m+1), m/(m+1)].
pub fn connect_the_dots(p: &CyclicPattern) -> PLMap {
    let m = p.size();
    let den = int(m as i64 + 1);
    let nodes = (1..=m)
        .map(|i| (int(i as i64) / &den, int(p.image_of(i) as i64) / &den))
        .collect();
    PLMap::new(nodes).expect("pattern nodes are strictly increasing and within range")
}

/// The period spectrum of the canonical realization up to `bound`: the
/// desk-scale set of periods the pattern forces.
pub fn forced_spectrum(p: &CyclicPattern, bound: u64) -> Result<SpectrumReport> {
    forced_spectrum_capped(p, bound, DEFAULT_PIECE_CAP)
}

pub fn forced_spectrum_capped(p: &CyclicPattern, bound: u64, cap: usize) -> Result<SpectrumReport> {
    spectrum_capped(&connect_the_dots(p), bound, cap)
}

/// Whether some orbit point realizes one of the two alternating spatial
/// chains: odd iterates marching strictly away on one side while even
/// iterates march strictly away on the other. Defined for odd sizes >= 3.
pub fn is_stefan(p: &CyclicPattern) -> Result<bool> {
    let m = p.size();
    if m.is_multiple_of(2) || m < 3 {
        return Err(Error::InvalidInput(format!(
            "the chain test is defined for odd sizes >= 3, got {m}"
        )));
    }
    for start in 1..=m {
        let mut orbit = Vec::with_capacity(m);
        let mut at = start;
        for _ in 0..m {
            orbit.push(at);
            at = p.image_of(at);
        }
        // Chain one: ranks of iterates m-2, m-4, ..., 3, 1, 0, 2, 4, ..., m-1
        // strictly increase; chain two is the mirror image.
        let down_up: Vec<usize> = (1..m - 1)
            .rev()
            .step_by(2)
            .chain(std::iter::once(0))
            .chain((2..m).step_by(2))
            .map(|t| orbit[t])
            .collect();
        let up_down: Vec<usize> = (2..m)
            .rev()
            .step_by(2)
            .chain(std::iter::once(0))
            .chain((1..m).step_by(2))
            .map(|t| orbit[t])
            .collect();
        if down_up.windows(2).all(|w| w[0] < w[1]) || up_down.windows(2).all(|w| w[0] < w[1]) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The orbit points of the canonical realization, x_i = i/(m+1).
pub fn pattern_points(p: &CyclicPattern) -> Vec<Rational> {
    let m = p.size();
    let den = int(m as i64 + 1);
    (1..=m).map(|i| int(i as i64) / &den).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::orbits_of_least_period;
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tent() -> PLMap {
        PLMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), int(1)),
            (int(1), int(0)),
        ])
        .unwrap()
    }

    #[test]
    fn pattern_validation() {
        assert!(CyclicPattern::new(vec![2, 3, 1]).is_ok());
        assert!(CyclicPattern::new(vec![5, 4, 2, 1, 3]).is_ok());
        for bad in [
            vec![1],
            vec![1, 2],
            vec![2, 1, 3],
            vec![2, 2, 1],
            vec![2, 1, 4, 3],
            vec![0, 1],
            vec![2, 3, 4],
        ] {
            assert!(CyclicPattern::new(bad.clone()).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn pattern_text_round_trip() {
        let p = CyclicPattern::parse("5 4 2 1 3").unwrap();
        assert_eq!(p.to_string(), "5 4 2 1 3");
        assert_eq!(p.image_of(3), 2);
        assert!(matches!(
            CyclicPattern::parse("5 4 two 1 3"),
            Err(Error::Parse(_))
        ));
        assert!(CyclicPattern::parse("").is_err());
    }

    #[test]
    fn random_cycles_are_single_cycles_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 2..=9 {
            for _ in 0..20 {
                let p = random_cycle(m, &mut rng).unwrap();
                assert_eq!(p.size(), m);
            }
        }
        let a = random_cycle(8, &mut ChaCha8Rng::seed_from_u64(41)).unwrap();
        let b = random_cycle(8, &mut ChaCha8Rng::seed_from_u64(41)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tent_period_three_orbits_share_their_pattern() {
        let t = tent();
        let orbits = orbits_of_least_period(&t, 3, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(orbits.len(), 2);
        for orbit in &orbits {
            let p = orbit_to_pattern(orbit, &t).unwrap();
            assert_eq!(p.image(), &[2, 3, 1]);
        }
    }

    #[test]
    fn fixed_point_orbit_has_no_pattern() {
        let t = tent();
        let fixed = orbits_of_least_period(&t, 1, DEFAULT_PIECE_CAP).unwrap();
        let err = orbit_to_pattern(&fixed[0], &t).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }

    #[test]
    fn foreign_orbit_is_rejected() {
        let t = tent();
        let fake = OrbitRecord {
            period: 2,
            points: vec![rat(1, 3), rat(1, 2)],
            diameter: rat(1, 6),
        };
        assert!(matches!(
            orbit_to_pattern(&fake, &t),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn covering_graphs_match_hand_computation() {
        let g = markov_graph(&CyclicPattern::new(vec![2, 3, 1]).unwrap());
        assert_eq!(g.edges(), &[(1, 2), (2, 1), (2, 2)]);
        assert!(g.has_edge(2, 2) && !g.has_edge(1, 1));

        let g = markov_graph(&CyclicPattern::new(vec![3, 4, 2, 1]).unwrap());
        assert_eq!(g.edges(), &[(1, 3), (2, 2), (2, 3), (3, 1)]);

        let g = markov_graph(&CyclicPattern::new(vec![2, 1]).unwrap());
        assert_eq!(g.edges(), &[(1, 1)]);
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn realization_interpolates_the_pattern() {
        let p = CyclicPattern::new(vec![2, 3, 1]).unwrap();
        let f = connect_the_dots(&p);
        assert_eq!(
            f.nodes(),
            &[
                (rat(1, 4), rat(1, 2)),
                (rat(1, 2), rat(3, 4)),
                (rat(3, 4), rat(1, 4)),
            ]
        );
        let xs = pattern_points(&p);
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(f.eval(x).unwrap(), xs[p.image_of(i + 1) - 1]);
        }
    }

    #[test]
    fn realization_carries_the_defining_orbit() {
        // The doubling pattern's fourth iterate is the identity on whole
        // segments, so check its orbit by direct iteration.
        let p = CyclicPattern::new(vec![3, 4, 2, 1]).unwrap();
        let f = connect_the_dots(&p);
        let xs = pattern_points(&p);
        let mut at = rat(1, 5);
        for step in [3, 2, 4, 1] {
            at = f.eval(&at).unwrap();
            assert_eq!(at, xs[step - 1]);
        }
        // A pattern with a clean census also shows up in the orbit listing.
        let p = CyclicPattern::new(vec![5, 4, 2, 1, 3]).unwrap();
        let f = connect_the_dots(&p);
        let orbits = orbits_of_least_period(&f, 5, DEFAULT_PIECE_CAP).unwrap();
        assert!(orbits.iter().any(|o| o.points == pattern_points(&p)));
    }

    #[test]
    fn forced_spectra_match_hand_census() {
        let stefan3 = CyclicPattern::new(vec![2, 3, 1]).unwrap();
        let report = forced_spectrum(&stefan3, 6).unwrap();
        assert_eq!(report.present_periods(), vec![1, 2, 3, 4, 5, 6]);

        let doubling = CyclicPattern::new(vec![3, 4, 2, 1]).unwrap();
        let report = forced_spectrum(&doubling, 8).unwrap();
        assert_eq!(report.present_periods(), vec![1, 2, 4]);

        let stefan5 = CyclicPattern::new(vec![5, 4, 2, 1, 3]).unwrap();
        let report = forced_spectrum(&stefan5, 7).unwrap();
        assert_eq!(report.present_periods(), vec![1, 2, 4, 5, 6, 7]);
        assert!(!report.present(3));
    }

    #[test]
    fn chain_test_recognizes_the_classic_cycles() {
        assert!(is_stefan(&CyclicPattern::new(vec![2, 3, 1]).unwrap()).unwrap());
        assert!(is_stefan(&CyclicPattern::new(vec![5, 4, 2, 1, 3]).unwrap()).unwrap());
        assert!(is_stefan(&CyclicPattern::new(vec![7, 6, 5, 3, 2, 1, 4]).unwrap()).unwrap());
    }

    #[test]
    fn chain_test_rejects_rotations_and_even_sizes() {
        let rotation = CyclicPattern::new(vec![2, 3, 4, 5, 1]).unwrap();
        assert!(!is_stefan(&rotation).unwrap());
        let even = CyclicPattern::new(vec![3, 4, 2, 1]).unwrap();
        assert!(matches!(is_stefan(&even), Err(Error::InvalidInput(_))));
        let two = CyclicPattern::new(vec![2, 1]).unwrap();
        assert!(matches!(is_stefan(&two), Err(Error::InvalidInput(_))));
    }
}
