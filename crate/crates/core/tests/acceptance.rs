//! The acceptance gate: eight exact checks, one per criterion, each ending
//! in a single printed pass line. Every assertion is zero-tolerance; there
//! are no approximate comparisons anywhere.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharkovsky_core::{
    compare, connect_the_dots, follow_cycle, forced_spectrum_capped, int, is_stefan, pullback,
    random_cycle, rat, solutions_of_iterate, spectrum, t_infinity_approx, tail, tent,
    tent_truncation, turbulence_from_overshoot, CoverCycle, CyclicPattern, IntervalQ, PLMap,
    PeriodCount, Rational,
};

const CAP: usize = 100_000_000;

#[test]
fn criterion_1_ordering_fidelity() {
    let mut all: Vec<u64> = (1..=41).collect();
    all.sort_by(|a, b| compare(*a, *b).unwrap());
    let first20: Vec<u64> = (0..20).map(|i| 3 + 2 * i).collect();
    assert_eq!(&all[..20], &first20[..], "head of the ordering is wrong");

    let mut small: Vec<u64> = (1..=12).collect();
    small.sort_by(|a, b| compare(*a, *b).unwrap());
    assert_eq!(small, vec![3, 5, 7, 9, 11, 6, 10, 12, 8, 4, 2, 1]);
    println!("criterion 1 (ordering fidelity): pass");
}

#[test]
fn criterion_2_tent_census_powers_of_two() {
    let t = tent();
    for n in 1u64..=12 {
        let (points, runs) = solutions_of_iterate(&t, n, None, CAP).unwrap();
        assert!(runs.is_empty(), "tent iterate {n} has a solution run");
        assert_eq!(
            points.len() as u64,
            1u64 << n,
            "tent iterate {n} solution count"
        );
    }
    println!("criterion 2 (tent census, 2^n solutions up to n = 12): pass");
}

#[test]
fn criterion_3_random_patterns_are_sharkovsky_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    let mut violations = 0u32;
    for _ in 0..100 {
        let m = rng.gen_range(3..=8);
        let p = random_cycle(m, &mut rng).unwrap();
        let census = forced_spectrum_capped(&p, 12, 4_000_000_000).unwrap();
        for a in census.present_periods() {
            for b in 1..=12 {
                if compare(a, b).unwrap() == Ordering::Less && !census.present(b) {
                    eprintln!("violation: {p} has {a} without {b}");
                    violations += 1;
                }
            }
        }
    }
    assert_eq!(violations, 0);
    println!("criterion 3 (100 random forced spectra closed under the ordering): pass");
}

#[test]
fn criterion_4_truncations_hit_exact_tails() {
    for n in [1u64, 2, 4, 8, 3, 5, 6, 7, 9, 10, 12] {
        let g = tent_truncation(n).unwrap();
        let census = spectrum(&g, 14).unwrap();
        assert_eq!(
            census.levels.get(&n),
            Some(&PeriodCount::Orbits(1)),
            "trunc {n} must keep exactly one orbit of its own period"
        );
        for k in tail(n, 14).unwrap() {
            assert!(census.present(k), "trunc {n} is missing forced period {k}");
        }
        for m in 1..=14 {
            if compare(m, n).unwrap() == Ordering::Less {
                assert!(
                    !census.present(m),
                    "trunc {n} kept period {m}, which comes before {n}"
                );
            }
        }
    }
    println!("criterion 4 (truncations realize exactly their tails): pass");
}

#[test]
fn criterion_5_nested_truncation_tower() {
    let (_, b0) = t_infinity_approx(0).unwrap();
    let (_, b1) = t_infinity_approx(1).unwrap();
    let (map2, b2) = t_infinity_approx(2).unwrap();
    assert_eq!(b0.len(), 1);
    assert_eq!(b1.len(), 2);
    assert_eq!(b2.len(), 3);
    assert_eq!(b0[0], b2[0]);
    assert_eq!(b1[1], b2[1]);
    for pair in b2.windows(2) {
        assert!(
            pair[1].strictly_inside(&pair[0]),
            "windows are not strictly nested: {} then {}",
            pair[0],
            pair[1]
        );
    }
    let census = spectrum(&map2, 12).unwrap();
    for k in [1u64, 2, 4, 12] {
        assert!(census.present(k), "depth 2 lost period {k}");
    }
    for k in [3u64, 5, 7, 9, 11] {
        assert!(!census.present(k), "depth 2 kept odd period {k}");
    }
    println!("criterion 5 (strictly nested clamp tower, no odd periods at depth 2): pass");
}

fn q01(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(1i64..=24);
    let num = rng.gen_range(0i64..=den);
    rat(num, den)
}

fn random_map(rng: &mut ChaCha8Rng, extra: usize) -> PLMap {
    let mut xs = BTreeSet::new();
    xs.insert(int(0));
    xs.insert(int(1));
    for _ in 0..extra {
        xs.insert(q01(rng));
    }
    let nodes = xs.into_iter().map(|x| (x, q01(rng))).collect();
    PLMap::new(nodes).unwrap()
}

fn node_cells(f: &PLMap) -> Vec<IntervalQ> {
    f.segments()
        .map(|((x0, _), (x1, _))| IntervalQ::new(x0.clone(), x1.clone()).unwrap())
        .collect()
}

fn closed_walks(succ: &[Vec<usize>], max_len: usize, limit: usize) -> Vec<Vec<usize>> {
    fn extend(
        succ: &[Vec<usize>],
        len: usize,
        walk: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if walk.len() == len {
            if succ[*walk.last().unwrap()].contains(&walk[0]) {
                out.push(walk.clone());
            }
            return;
        }
        let from: Vec<usize> = match walk.last() {
            Some(&v) => succ[v].clone(),
            None => (0..succ.len()).collect(),
        };
        for c in from {
            walk.push(c);
            extend(succ, len, walk, out, limit);
            walk.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        extend(succ, len, &mut Vec::new(), &mut out, limit);
        if out.len() >= limit {
            break;
        }
    }
    out
}

#[test]
fn criterion_6_lemma_kernels_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);

    let mut pullbacks = 0;
    while pullbacks < 200 {
        let f = random_map(&mut rng, 6);
        for _ in 0..8 {
            let (a, b) = (q01(&mut rng), q01(&mut rng));
            if a == b {
                continue;
            }
            let j = IntervalQ::hull(a, b);
            let im = f.image(&j).unwrap();
            if im.is_point() {
                continue;
            }
            let width = im.hi() - im.lo();
            let p1 = im.lo() + &width * q01(&mut rng);
            let p2 = im.lo() + &width * q01(&mut rng);
            if p1 == p2 {
                continue;
            }
            let l = IntervalQ::hull(p1, p2);
            let k = pullback(&f, &j, &l).unwrap();
            assert!(j.contains_interval(&k));
            assert_eq!(f.image(&k).unwrap(), l);
            pullbacks += 1;
        }
    }

    let mut pool = vec![
        tent(),
        connect_the_dots(&CyclicPattern::parse("2 3 1").unwrap()),
        connect_the_dots(&CyclicPattern::parse("5 4 2 1 3").unwrap()),
    ];
    for _ in 0..20 {
        pool.push(random_map(&mut rng, 6));
    }
    let mut cycles = 0;
    'outer: for f in &pool {
        let cells = node_cells(f);
        let succ: Vec<Vec<usize>> = cells
            .iter()
            .map(|c| {
                let im = f.image(c).unwrap();
                cells
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| im.contains_interval(d))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        for walk in closed_walks(&succ, 6, 10) {
            let intervals: Vec<IntervalQ> = walk.iter().map(|&c| cells[c].clone()).collect();
            let cycle = CoverCycle::new(f, intervals.clone()).unwrap();
            let (y, _) = follow_cycle(f, &cycle).unwrap();
            for (i, j) in intervals.iter().enumerate() {
                assert!(j.contains(&f.eval_iter(&y, i as u64).unwrap()));
            }
            assert_eq!(f.eval_iter(&y, walk.len() as u64).unwrap(), y);
            cycles += 1;
            if cycles >= 100 {
                break 'outer;
            }
        }
    }
    assert!(cycles >= 100, "only {cycles} cycles were available");

    let w = PLMap::new(vec![
        (int(0), rat(1, 2)),
        (rat(1, 10), rat(7, 10)),
        (rat(1, 5), rat(1, 10)),
        (rat(7, 10), rat(9, 10)),
        (int(1), rat(9, 10)),
    ])
    .unwrap();
    let overshoot = PLMap::new(vec![
        (int(0), rat(1, 2)),
        (rat(1, 4), int(0)),
        (rat(1, 2), rat(1, 2)),
        (int(1), int(0)),
    ])
    .unwrap();
    let instances = [
        (&w, rat(1, 5), rat(11, 30), 2u32),
        (&overshoot, rat(1, 4), rat(1, 2), 2),
    ];
    for (f, c, z, k) in &instances {
        let pair = turbulence_from_overshoot(f, c, z, *k).unwrap();
        pair.verify(f).unwrap();
        let im0 = f.image(&pair.i0).unwrap();
        let im1 = f.image(&pair.i1).unwrap();
        let both = im0.intersect(&im1).unwrap();
        assert!(both.contains_interval(&pair.i0));
        assert!(both.contains_interval(&pair.i1));
    }
    println!("criterion 6 (pullbacks, followed cycles, turbulence pairs all exact): pass");
}

/// Every cyclic pattern of size m, one per permutation of the orbit walk.
fn all_cycles(m: usize) -> Vec<CyclicPattern> {
    fn permute(rest: &mut Vec<usize>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(chosen.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            chosen.push(v);
            permute(rest, chosen, out);
            chosen.pop();
            rest.insert(i, v);
        }
    }
    let mut orders = Vec::new();
    permute(&mut (2..=m).collect(), &mut Vec::new(), &mut orders);
    orders
        .into_iter()
        .map(|walk| {
            let mut image = vec![0usize; m];
            let mut cur = 1usize;
            for next in walk {
                image[cur - 1] = next;
                cur = next;
            }
            image[cur - 1] = 1;
            CyclicPattern::new(image).unwrap()
        })
        .collect()
}

#[test]
fn criterion_7_odd_free_spectra_only_from_stefan_cycles() {
    for m in [5usize, 7] {
        let candidates = all_cycles(m);
        assert_eq!(candidates.len(), (1..m).product::<usize>());
        let mut odd_free = 0;
        for p in &candidates {
            let census = forced_spectrum_capped(p, m as u64, CAP).unwrap();
            let has_small_odd = (3..m as u64).step_by(2).any(|k| census.present(k));
            if !has_small_odd {
                odd_free += 1;
                assert!(
                    is_stefan(p).unwrap(),
                    "{p} forces no smaller odd period but is not a spiral cycle"
                );
            }
        }
        assert_eq!(odd_free, 2, "size {m} must have exactly two such patterns");
    }
    println!("criterion 7 (odd-free size-5 and size-7 patterns are all spiral cycles): pass");
}

#[test]
fn criterion_8_stefan_spectra_spot_checks() {
    for (m, word) in [(3u64, "2 3 1"), (5, "5 4 2 1 3"), (7, "7 6 5 3 2 1 4")] {
        let p = CyclicPattern::parse(word).unwrap();
        assert!(is_stefan(&p).unwrap());
        let census = forced_spectrum_capped(&p, 2 * m, CAP).unwrap();
        for k in [2, m + 2, 6, 2 * m] {
            assert!(census.present(k), "spiral {m} cycle is missing period {k}");
        }
    }
    println!("criterion 8 (spiral cycle spectra contain 2, m+2, 6, 2m): pass");
}
