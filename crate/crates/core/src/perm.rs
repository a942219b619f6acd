//! Permutations of `{1..n}`.
//!
//! Storage is 0-based; every public method takes and returns 1-based points.
//! Composition follows `(outer ∘ inner)(a) = outer(inner(a))`, so a derangement
//! `D` improved by a cycle `s` becomes `D.compose(&s)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

/// Orbits of a permutation in canonical form: each cycle starts at its
/// smallest point and cycles are ordered by that point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    pub fixed_points: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Builds from the row form `images[a - 1] = p(a)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for (i, &b) in images.iter().enumerate() {
            if b == 0 || b > n {
                return Err(Error::NotAPermutation(format!(
                    "image of {} is {b}, outside 1..={n}",
                    i + 1
                )));
            }
            if std::mem::replace(&mut seen[b - 1], true) {
                return Err(Error::NotAPermutation(format!("{b} appears twice")));
            }
            image.push(b - 1);
        }
        Ok(Permutation { image })
    }

    /// Product of disjoint cycles on `n` points.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &a in cycle {
                if a == 0 || a > n {
                    return Err(Error::NotAPermutation(format!("point {a} outside 1..={n}")));
                }
                if std::mem::replace(&mut used[a - 1], true) {
                    return Err(Error::NotAPermutation(format!(
                        "point {a} appears in more than one place"
                    )));
                }
            }
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                image[a - 1] = b - 1;
            }
        }
        Ok(Permutation { image })
    }

    /// Parses cycle notation such as `(1 4 2 3)(5 7 8 6)`; `()` is the identity.
    /// Commas are accepted as separators.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::CycleNotation(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::CycleNotation("unclosed '('".into()))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::CycleNotation(format!("bad point {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    /// A uniformly random `n`-cycle: `1` followed by a seeded shuffle of `2..=n`,
    /// read as a single cycle.
    pub fn random_n_cycle(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "an n-cycle needs n >= 2, got {n}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (2..=n).collect();
        order.shuffle(&mut rng);
        order.insert(0, 1);
        Self::from_cycles(n, &[order])
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `p(a)` for a 1-based point.
    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a - 1] + 1
    }

    /// Row form, 1-based.
    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&b| b + 1).collect()
    }

    pub fn compose(&self, inner: &Permutation) -> Result<Permutation> {
        if self.n() != inner.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                got: inner.n(),
            });
        }
        Ok(Permutation {
            image: inner.image.iter().map(|&b| self.image[b]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (a, &b) in self.image.iter().enumerate() {
            inv[b] = a;
        }
        Permutation { image: inv }
    }

    pub fn decompose(&self) -> CycleDecomposition {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        let mut fixed_points = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            if self.image[start] == start {
                seen[start] = true;
                fixed_points.push(start + 1);
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                cycle.push(a + 1);
                a = self.image[a];
            }
            cycles.push(cycle);
        }
        CycleDecomposition {
            cycles,
            fixed_points,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(a, &b)| a == b)
    }

    pub fn is_derangement(&self) -> bool {
        self.image.iter().enumerate().all(|(a, &b)| a != b)
    }

    pub fn is_n_cycle(&self) -> bool {
        let n = self.n();
        if n < 2 {
            return false;
        }
        let mut a = self.image[0];
        let mut len = 1;
        while a != 0 {
            a = self.image[a];
            len += 1;
            if len > n {
                return false;
            }
        }
        len == n
    }

    /// The two-line row form: points on the first line, images on the second.
    pub fn row_form(&self) -> String {
        let width = self.n().to_string().len();
        let top: Vec<String> = (1..=self.n()).map(|a| format!("{a:>width$}")).collect();
        let bottom: Vec<String> = self
            .images()
            .iter()
            .map(|b| format!("{b:>width$}"))
            .collect();
        format!("{}\n{}", top.join(" "), bottom.join(" "))
    }
}

impl CycleDecomposition {
    pub fn recompose(&self, n: usize) -> Result<Permutation> {
        Permutation::from_cycles(n, &self.cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dec = self.decompose();
        if dec.cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in &dec.cycles {
            let body: Vec<String> = cycle.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[n={}]{}", self.n(), self)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Formats a single cycle given as a vertex list, e.g. `(5 6 4)`.
pub fn cycle_notation(vertices: &[usize]) -> String {
    let body: Vec<String> = vertices.iter().map(|a| a.to_string()).collect();
    format!("({})", body.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(n: usize) -> Permutation {
        Permutation::from_cycles(n, &[(1..=n).collect::<Vec<_>>()]).unwrap()
    }

    #[test]
    fn compose_applies_inner_first() {
        let d = shift(8);
        let s = Permutation::parse_cycles(8, "(5 6 4)").unwrap();
        let d1 = d.compose(&s).unwrap();
        assert_eq!(d1.images(), vec![2, 3, 4, 6, 7, 5, 8, 1]);
        assert_eq!(d.compose(&Permutation::identity(8)).unwrap(), d);
    }

    #[test]
    fn compose_rejects_size_mismatch() {
        assert!(matches!(
            shift(3).compose(&shift(4)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn inverse_of_shift() {
        assert_eq!(shift(8).inverse().images(), vec![8, 1, 2, 3, 4, 5, 6, 7]);
        assert!(Permutation::identity(5).inverse().is_identity());
    }

    #[test]
    fn decompose_canonical() {
        let d3 = Permutation::from_images(&[4, 3, 1, 2, 7, 5, 8, 6]).unwrap();
        let dec = d3.decompose();
        assert_eq!(dec.cycles, vec![vec![1, 4, 2, 3], vec![5, 7, 8, 6]]);
        assert!(dec.fixed_points.is_empty());
        assert!(d3.is_derangement());
        assert!(!d3.is_n_cycle());
        assert_eq!(d3.to_string(), "(1 4 2 3)(5 7 8 6)");

        let id = Permutation::identity(5).decompose();
        assert!(id.cycles.is_empty());
        assert_eq!(id.fixed_points, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn predicates() {
        let id = Permutation::identity(4);
        assert!(!id.is_derangement());
        assert!(!id.is_n_cycle());
        let tour = Permutation::parse_cycles(8, "(1 4 8 6 5 7 2 3)").unwrap();
        assert!(tour.is_n_cycle());
        assert!(tour.is_derangement());
    }

    #[test]
    fn parse_print_round_trip() {
        let text = "(1 4 2 3)(5 7 8 6)";
        let p = Permutation::parse_cycles(8, text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(
            Permutation::parse_cycles(3, "()").unwrap(),
            Permutation::identity(3)
        );
        assert!(Permutation::parse_cycles(3, "(1 2)(2 3)").is_err());
        assert!(Permutation::parse_cycles(3, "(1 4)").is_err());
        assert!(Permutation::parse_cycles(3, "(1 2").is_err());
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert!(Permutation::from_images(&[1, 1, 2]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[3, 1]).is_err());
    }

    #[test]
    fn random_n_cycle_contract() {
        assert!(Permutation::random_n_cycle(1, 0).is_err());
        for seed in 0..5 {
            assert_eq!(
                Permutation::random_n_cycle(2, seed).unwrap().images(),
                vec![2, 1]
            );
        }
        let a = Permutation::random_n_cycle(17, 99).unwrap();
        assert_eq!(a, Permutation::random_n_cycle(17, 99).unwrap());
        assert!(a.is_n_cycle());
    }

    #[test]
    fn row_form_layout() {
        assert_eq!(shift(3).row_form(), "1 2 3\n2 3 1");
    }
}
