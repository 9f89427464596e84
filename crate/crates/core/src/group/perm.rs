use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

/// A permutation of `{1, …, m}` in one-line notation: `images[i - 1]` is the
/// image of `i`.
///
/// Products compose right to left, `(a·b)(i) = a(b(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (1..=degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Result<Self, String> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &v in &images {
            if v == 0 || v as usize > m || seen[v as usize] {
                return Err(format!("{images:?} is not a permutation of 1..={m}"));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[1, 2], &[3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, String> {
        let mut images: Vec<u32> = (1..=degree as u32).collect();
        let mut touched = vec![false; degree + 1];
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point == 0 || point as usize > degree || touched[point as usize] {
                    return Err(format!("bad or repeated point {point} in cycles"));
                }
                touched[point as usize] = true;
                images[point as usize - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize - 1]
    }

    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        Permutation {
            images: rhs.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// Uniform sample by Fisher–Yates shuffle.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut images: Vec<u32> = (1..=degree as u32).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// Disjoint cycle decomposition, fixed points omitted, each cycle
    /// starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree() + 1];
        let mut out = Vec::new();
        for start in 1..=self.degree() as u32 {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next as usize] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Permutation::from_cycles(5, &[&[2, 1, 4, 3, 5]]).unwrap();
        assert_eq!(p.images(), &[4, 1, 5, 3, 2]);
        assert_eq!(p.to_string(), "(1 4 3 5 2)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(vec![1, 1, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 1]).is_err());
        assert!(Permutation::from_images(vec![3, 1]).is_err());
        assert!(Permutation::from_images(vec![2, 1]).is_ok());
    }
}
