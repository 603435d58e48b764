//! Test oracles that share no code with the deciders.
#![allow(dead_code)]

use std::collections::HashSet;

use dynlab_core::{Rational, SystemMap};

/// Decides `(ε, δ)`-shadowing by enumerating δ-pseudo-orbit prefixes level
/// by level up to `|X|·2^|X|`.
///
/// A level-`k` state is the current point together with the set of initial
/// points `z` whose orbit has stayed within `ε` so far, tested with directly
/// computed iterates `f^k(z)`. Shadowing fails iff some prefix leaves that set
/// empty.
pub fn brute_force_shadows(f: &SystemMap, epsilon: &Rational, delta: &Rational) -> bool {
    let n = f.len();
    assert!(n <= 16, "oracle is meant for tiny systems");
    let space = f.space();
    let near: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| space.dist(a, b) < epsilon).collect())
        .collect();
    let step: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| space.dist(f.apply(x), y) < delta).collect())
        .collect();
    let bound = n * (1usize << n);

    let mut position: Vec<usize> = (0..n).collect(); // f^k(z)
    let mut level: HashSet<(usize, u32)> = HashSet::new();
    for (x0, row) in near.iter().enumerate() {
        let s = (0..n).filter(|&z| row[z]).fold(0u32, |m, z| m | 1 << z);
        level.insert((x0, s));
    }
    for _ in 0..bound {
        for p in position.iter_mut() {
            *p = f.apply(*p);
        }
        let mut next = HashSet::new();
        for &(x, s) in &level {
            for y in (0..n).filter(|&y| step[x][y]) {
                let s2 = (0..n)
                    .filter(|&z| s & (1 << z) != 0 && near[position[z]][y])
                    .fold(0u32, |m, z| m | 1 << z);
                if s2 == 0 {
                    return false;
                }
                next.insert((y, s2));
            }
        }
        level = next;
    }
    true
}

/// Positive distances plus one value beyond the diameter.
pub fn candidate_grid(f: &SystemMap) -> Vec<Rational> {
    let mut grid = f.space().positive_spectrum();
    grid.push(f.space().diameter() + Rational::one());
    grid
}

/// `f^n` by repeated application, independent of `SystemMap::iterate`.
pub fn power_table(f: &SystemMap, n: u64) -> Vec<usize> {
    (0..f.len()).map(|x| (0..n).fold(x, |y, _| f.apply(y))).collect()
}
