use std::fmt;

use rand::Rng;

/// A 3×3 upper unitriangular matrix over `Z_q`,
///
/// ```text
/// [1 a c]
/// [0 1 b]
/// [0 0 1]
/// ```
///
/// i.e. an element of the discrete Heisenberg group mod `q`. The slice
/// `b = 0` is abelian; the center is `a = b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unitriangular {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

fn add_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 + y as u128) % m as u128) as u64
}

fn neg_mod(x: u64, m: u64) -> u64 {
    if x == 0 {
        0
    } else {
        m - x
    }
}

impl Unitriangular {
    pub fn new(modulus: u64, a: u64, b: u64, c: u64) -> Self {
        Unitriangular {
            modulus,
            a: a % modulus,
            b: b % modulus,
            c: c % modulus,
        }
    }

    pub fn identity(modulus: u64) -> Self {
        Unitriangular::new(modulus, 0, 0, 0)
    }

    pub fn compose(&self, rhs: &Unitriangular) -> Unitriangular {
        let m = self.modulus;
        Unitriangular {
            modulus: m,
            a: add_mod(self.a, rhs.a, m),
            b: add_mod(self.b, rhs.b, m),
            c: add_mod(add_mod(self.c, rhs.c, m), mul_mod(self.a, rhs.b, m), m),
        }
    }

    pub fn inverse(&self) -> Unitriangular {
        let m = self.modulus;
        Unitriangular {
            modulus: m,
            a: neg_mod(self.a, m),
            b: neg_mod(self.b, m),
            c: add_mod(mul_mod(self.a, self.b, m), neg_mod(self.c, m), m),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0
    }

    pub fn random<R: Rng + ?Sized>(modulus: u64, rng: &mut R) -> Self {
        Unitriangular {
            modulus,
            a: rng.gen_range(0..modulus),
            b: rng.gen_range(0..modulus),
            c: rng.gen_range(0..modulus),
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> [u64; 9] {
        [1, self.a, self.c, 0, 1, self.b, 0, 0, 1]
    }

    /// Inverse of [`Unitriangular::entries`], rejecting matrices that are not
    /// upper unitriangular or have unreduced entries.
    pub fn from_entries(modulus: u64, e: [u64; 9]) -> Result<Self, String> {
        let shape_ok = e[0] == 1 && e[4] == 1 && e[8] == 1 && e[3] == 0 && e[6] == 0 && e[7] == 0;
        if !shape_ok {
            return Err(format!("{e:?} is not upper unitriangular"));
        }
        if [e[1], e[2], e[5]].iter().any(|&x| x >= modulus) {
            return Err(format!("entries of {e:?} not reduced modulo {modulus}"));
        }
        Ok(Unitriangular {
            modulus,
            a: e[1],
            b: e[5],
            c: e[2],
        })
    }
}

impl fmt::Display for Unitriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[1, {}, {}], [0, 1, {}], [0, 0, 1]] mod {}",
            self.a, self.c, self.b, self.modulus
        )
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, n);
            }
            base = mul_mod(base, base, n);
            exp >>= 1;
        }
        acc
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain 3×3 matrix product mod m, independent of the (a, b, c) formulas.
    fn matmul(x: [u64; 9], y: [u64; 9], m: u64) -> [u64; 9] {
        let mut out = [0u64; 9];
        for r in 0..3 {
            for c in 0..3 {
                out[r * 3 + c] = (0..3).map(|k| x[r * 3 + k] * y[k * 3 + c]).sum::<u64>() % m;
            }
        }
        out
    }

    #[test]
    fn composition_matches_matrix_product() {
        let m = 7;
        for (x, y) in [
            ((1, 2, 3), (4, 5, 6)),
            ((6, 6, 6), (6, 6, 6)),
            ((0, 3, 1), (2, 0, 5)),
        ] {
            let x = Unitriangular::new(m, x.0, x.1, x.2);
            let y = Unitriangular::new(m, y.0, y.1, y.2);
            assert_eq!(x.compose(&y).entries(), matmul(x.entries(), y.entries(), m));
            assert!(x.compose(&x.inverse()).is_identity());
        }
    }

    #[test]
    fn abelian_slice_adds_coordinates() {
        let x = Unitriangular::new(5, 2, 0, 3);
        let y = Unitriangular::new(5, 4, 0, 4);
        assert_eq!(x.compose(&y), Unitriangular::new(5, 1, 0, 2));
        assert_eq!(x.compose(&y), y.compose(&x));
    }

    #[test]
    fn prime_check_u64() {
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64((1 << 61) + 1));
        assert!(is_prime_u64(7));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751));
    }
}
