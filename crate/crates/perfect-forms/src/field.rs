//! Exact arithmetic in `Q`, in `F = Q(ω_D)`, and in `O_D = Z[ω_D]`.
//!
//! For a fundamental discriminant `D < 0` the generator is
//!
//! ```text
//! ω = √(D/4)        if D ≡ 0 (mod 4),
//! ω = (1 + √D)/2    if D ≡ 1 (mod 4),
//! ```
//!
//! so `ω` satisfies `ω² = tω − n` with trace `t ∈ {0, 1}` and norm
//! `n = −D/4` resp. `(1 − D)/4`. Elements are stored on the `{1, ω}` basis
//! with exact (arbitrary-precision) coordinates; nothing is ever rounded.

use alloc::{vec, vec::Vec};
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational, always in lowest terms.
pub type Rat = num_rational::BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(int(num), int(den))
}

/// True iff `d` is a fundamental discriminant of an imaginary quadratic field:
/// `d < 0` and either `d ≡ 1 (mod 4)` squarefree, or `d ≡ 0 (mod 4)` with
/// `d/4` squarefree and `d/4 ≡ 2, 3 (mod 4)`.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            is_squarefree(m) && matches!(m.rem_euclid(4), 2 | 3)
        }
        _ => false,
    }
}

fn is_squarefree(v: i64) -> bool {
    let mut m = v.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut p: u64 = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// A fundamental discriminant `D < 0` together with the trace and norm of
/// `ω_D`. Copyable context passed to all ring and field operations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disc {
    d: i64,
    tr: i64,
    nm: i64,
}

impl fmt::Debug for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Disc({})", self.d)
    }
}

impl Disc {
    pub fn new(d: i64) -> Result<Disc> {
        if !is_fundamental(d) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let (tr, nm) = if d.rem_euclid(4) == 0 {
            (0, -d / 4)
        } else {
            (1, (1 - d) / 4)
        };
        Ok(Disc { d, tr, nm })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Trace of `ω`: `ω + ω̄`.
    pub fn omega_trace(&self) -> i64 {
        self.tr
    }

    /// Norm of `ω`: `ω·ω̄`.
    pub fn omega_norm(&self) -> i64 {
        self.nm
    }

    /// Matrix of multiplication by `ω` on `O_D ≅ Z²` in the basis `{1, ω}`,
    /// column-major action: `ω·1 = ω`, `ω·ω = −n + tω`.
    pub fn omega_companion(&self) -> [[i64; 2]; 2] {
        [[0, -self.nm], [1, self.tr]]
    }

    /// The unit group `O_D^*`: order 4 for `D = −4`, order 6 for `D = −3`,
    /// `{±1}` otherwise.
    pub fn units(&self) -> Vec<QuadInt> {
        let one = QuadInt::one();
        let mut us = vec![one.clone(), one.neg()];
        match self.d {
            -4 => {
                let i = QuadInt::omega();
                us.push(i.clone());
                us.push(i.neg());
            }
            -3 => {
                // powers of ω = e^{iπ/3}: ω, ω² = ω − 1, and negatives
                let w = QuadInt::omega();
                let w2 = QuadInt::new(int(-1), int(1));
                us.push(w.clone());
                us.push(w.neg());
                us.push(w2.clone());
                us.push(w2.neg());
            }
            _ => {}
        }
        us
    }

    pub fn unit_count(&self) -> usize {
        match self.d {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }
}

/// Element `a + b·ω` of `O_D`, with arbitrary-precision integer coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadInt {
    pub a: Int,
    pub b: Int,
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}ω)", self.a, self.b)
    }
}

impl QuadInt {
    pub fn new(a: Int, b: Int) -> QuadInt {
        QuadInt { a, b }
    }

    pub fn from_i64(a: i64, b: i64) -> QuadInt {
        QuadInt::new(int(a), int(b))
    }

    pub fn zero() -> QuadInt {
        QuadInt::new(Int::zero(), Int::zero())
    }

    pub fn one() -> QuadInt {
        QuadInt::new(Int::one(), Int::zero())
    }

    pub fn omega() -> QuadInt {
        QuadInt::new(Int::zero(), Int::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt::new(-&self.a, -&self.b)
    }

    pub fn add(&self, rhs: &QuadInt) -> QuadInt {
        QuadInt::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }

    pub fn sub(&self, rhs: &QuadInt) -> QuadInt {
        QuadInt::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }

    /// `(a + bω)(c + dω) = ac − n·bd + (ad + bc + t·bd)·ω`.
    pub fn mul(&self, rhs: &QuadInt, k: Disc) -> QuadInt {
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a - int(k.nm) * &bd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + int(k.tr) * &bd;
        QuadInt::new(a, b)
    }

    /// Complex conjugate `(a + tb) − bω`.
    pub fn conj(&self, k: Disc) -> QuadInt {
        QuadInt::new(&self.a + int(k.tr) * &self.b, -&self.b)
    }

    /// `x·x̄ = a² + t·ab + n·b² ≥ 0`.
    pub fn norm(&self, k: Disc) -> Int {
        &self.a * &self.a + int(k.tr) * &self.a * &self.b + int(k.nm) * &self.b * &self.b
    }

    pub fn is_unit(&self, k: Disc) -> bool {
        self.norm(k).is_one()
    }

    pub fn to_elem(&self) -> QuadElem {
        QuadElem::new(Rat::from_integer(self.a.clone()), Rat::from_integer(self.b.clone()))
    }
}

/// Element `a + b·ω` of `F = Q(ω_D)`, with exact rational coordinates.
/// The `Ord` instance is the structural lexicographic order on `(a, b)`,
/// used for canonical keys, not a field order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}ω)", self.a, self.b)
    }
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat) -> QuadElem {
        QuadElem { a, b }
    }

    pub fn zero() -> QuadElem {
        QuadElem::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> QuadElem {
        QuadElem::new(Rat::one(), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> QuadElem {
        QuadElem::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the `ω`-coordinate vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational coordinate, erroring when the `ω`-part is nonzero.
    pub fn expect_rational(&self) -> Result<Rat> {
        if self.is_rational() {
            Ok(self.a.clone())
        } else {
            Err(Error::Internal(alloc::format!(
                "expected rational value, got {:?}",
                self
            )))
        }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem::new(-&self.a, -&self.b)
    }

    pub fn add(&self, rhs: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }

    pub fn sub(&self, rhs: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }

    pub fn mul(&self, rhs: &QuadElem, k: Disc) -> QuadElem {
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a - rat(k.nm) * &bd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + rat(k.tr) * &bd;
        QuadElem::new(a, b)
    }

    pub fn scale(&self, r: &Rat) -> QuadElem {
        QuadElem::new(&self.a * r, &self.b * r)
    }

    pub fn conj(&self, k: Disc) -> QuadElem {
        QuadElem::new(&self.a + rat(k.tr) * &self.b, -&self.b)
    }

    /// `x·x̄ ∈ Q`, strictly positive for `x ≠ 0`.
    pub fn norm(&self, k: Disc) -> Rat {
        &self.a * &self.a + rat(k.tr) * &self.a * &self.b + rat(k.nm) * &self.b * &self.b
    }

    /// Multiplicative inverse `x̄ / norm(x)`; `None` for zero.
    pub fn inv(&self, k: Disc) -> Option<QuadElem> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm(k);
        let c = self.conj(k);
        Some(QuadElem::new(c.a / &n, c.b / &n))
    }

    /// Real part under the complex embedding: `a + t·b/2`. Exact.
    pub fn re(&self, k: Disc) -> Rat {
        &self.a + rat_frac(k.tr, 2) * &self.b
    }

    /// Trace `x + x̄ = 2a + t·b`.
    pub fn trace(&self, k: Disc) -> Rat {
        rat(2) * &self.a + rat(k.tr) * &self.b
    }

    /// Both integer coordinates in `Z`, i.e. membership in `O_D`.
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        if self.a.is_integer() && self.b.is_integer() {
            Some(QuadInt::new(self.a.to_integer(), self.b.to_integer()))
        } else {
            None
        }
    }
}

/// Floor of a rational as `Int`.
pub fn rat_floor(r: &Rat) -> Int {
    r.floor().to_integer()
}

/// Ceiling of a rational as `Int`.
pub fn rat_ceil(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// Exact integer square root floor of a nonnegative rational:
/// the largest `s ≥ 0` with `s² ≤ r`.
/// Uses `⌊√r⌋ = ⌊√⌊r⌋⌋` for `r ≥ 0`.
pub fn rat_sqrt_floor(r: &Rat) -> Int {
    debug_assert!(!r.is_negative());
    num_integer::Roots::sqrt(&rat_floor(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-7));
        assert!(is_fundamental(-8));
        assert!(is_fundamental(-11));
        assert!(is_fundamental(-15));
        assert!(is_fundamental(-20));
        assert!(is_fundamental(-23));
        assert!(is_fundamental(-24));
        assert!(!is_fundamental(-12)); // −12/4 = −3 ≡ 1 mod 4
        assert!(!is_fundamental(-9)); // not squarefree
        assert!(!is_fundamental(-16));
        assert!(!is_fundamental(-5)); // ≡ 3 mod 4
        assert!(!is_fundamental(5));
        assert!(!is_fundamental(0));
    }

    #[test]
    fn unit_groups() {
        assert_eq!(Disc::new(-4).unwrap().units().len(), 4);
        assert_eq!(Disc::new(-3).unwrap().units().len(), 6);
        assert_eq!(Disc::new(-7).unwrap().units().len(), 2);
        for d in [-3, -4, -7, -8, -11] {
            let k = Disc::new(d).unwrap();
            for u in k.units() {
                assert!(u.is_unit(k));
            }
            // units are pairwise distinct
            let us = k.units();
            for i in 0..us.len() {
                for j in 0..i {
                    assert_ne!(us[i], us[j]);
                }
            }
        }
        assert!(Disc::new(-12).is_err());
        assert!(Disc::new(4).is_err());
    }

    #[test]
    fn companion_matrices() {
        assert_eq!(Disc::new(-4).unwrap().omega_companion(), [[0, -1], [1, 0]]);
        assert_eq!(Disc::new(-3).unwrap().omega_companion(), [[0, -1], [1, 1]]);
        // J₀² = −2·I for D = −8
        let j = Disc::new(-8).unwrap().omega_companion();
        let sq = [
            [
                j[0][0] * j[0][0] + j[0][1] * j[1][0],
                j[0][0] * j[0][1] + j[0][1] * j[1][1],
            ],
            [
                j[1][0] * j[0][0] + j[1][1] * j[1][0],
                j[1][0] * j[0][1] + j[1][1] * j[1][1],
            ],
        ];
        assert_eq!(sq, [[-2, 0], [0, -2]]);
    }

    #[test]
    fn companion_satisfies_minimal_polynomial() {
        // J₀² = t·J₀ − n·I exactly, for a spread of discriminants
        for d in [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24] {
            let k = Disc::new(d).unwrap();
            let j = k.omega_companion();
            for r in 0..2 {
                for c in 0..2 {
                    let sq = j[r][0] * j[0][c] + j[r][1] * j[1][c];
                    let expect =
                        k.omega_trace() * j[r][c] - k.omega_norm() * i64::from(r == c);
                    assert_eq!(sq, expect);
                }
            }
        }
    }

    #[test]
    fn conj_is_involution_and_norm_multiplicative() {
        let k = Disc::new(-7).unwrap();
        let x = QuadElem::new(rat_frac(3, 2), rat_frac(-5, 7));
        let y = QuadElem::new(rat_frac(-1, 3), rat_frac(2, 5));
        assert_eq!(x.conj(k).conj(k), x);
        assert_eq!(
            x.mul(&y, k).norm(k),
            x.norm(k) * y.norm(k)
        );
        assert_eq!(x.mul(&y, k).conj(k), x.conj(k).mul(&y.conj(k), k));
        let xinv = x.inv(k).unwrap();
        assert_eq!(x.mul(&xinv, k), QuadElem::one());
    }

    #[test]
    fn norm_positive() {
        for d in [-3, -4, -8, -11] {
            let k = Disc::new(d).unwrap();
            let x = QuadInt::from_i64(-2, 3);
            assert!(x.norm(k) > Int::zero());
        }
    }

    #[test]
    fn sqrt_floor() {
        assert_eq!(rat_sqrt_floor(&rat(0)), int(0));
        assert_eq!(rat_sqrt_floor(&rat(1)), int(1));
        assert_eq!(rat_sqrt_floor(&rat(8)), int(2));
        assert_eq!(rat_sqrt_floor(&rat(9)), int(3));
        assert_eq!(rat_sqrt_floor(&rat_frac(13, 2)), int(2));
        assert_eq!(rat_sqrt_floor(&rat_frac(1, 4)), int(0));
    }
}
