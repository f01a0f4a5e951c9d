//! Commutative rings of multiplicities.
//!
//! Every coefficient stored in a term or normal form is an element of some
//! [`Ring`]. Three instances are provided: arbitrary-precision integers
//! (polysets), the two-element field (ordinary sets) and 64-bit reals
//! (generalised fuzzy sets).

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// A commutative ring with unit.
///
/// Implementations must satisfy the usual ring axioms; `is_zero(r)` holds
/// exactly when `r == zero()`.
pub trait Ring: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Short name used on the command line (`z`, `gf2`, `real`).
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;

    /// Image of an integer under the unique ring map from ℤ.
    fn from_i64(n: i64) -> Self;

    /// Parses the textual rendering produced by `Display`.
    fn parse(text: &str) -> Option<Self>;

    /// A total order on representations, used only to make canonical forms
    /// deterministic. It need not be compatible with the ring operations.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    /// Sign relative to zero, for rings that carry an order.
    fn sign(&self) -> Option<Ordering> {
        None
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Arbitrary-precision integer. Small values stay inline; anything outside
/// the `i64` range is promoted to a heap-allocated big integer.
#[derive(Clone, Debug)]
pub enum Integer {
    Small(i64),
    Big(BigInt),
}

impl Integer {
    fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(n) => Integer::Small(n),
            None => Integer::Big(b),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Integer::Small(n) => BigInt::from(*n),
            Integer::Big(b) => b.clone(),
        }
    }

    /// The value as an `i64`, when it fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Integer::Small(n) => Some(*n),
            Integer::Big(_) => None,
        }
    }
}

impl From<i64> for Integer {
    fn from(n: i64) -> Self {
        Integer::Small(n)
    }
}

impl From<BigInt> for Integer {
    fn from(b: BigInt) -> Self {
        Integer::from_big(b)
    }
}

impl PartialEq for Integer {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a == b,
            // Big values are never in i64 range, so mixed comparisons are false.
            (Integer::Big(a), Integer::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Integer {}

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Integer {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integer::Small(n) => write!(f, "{n}"),
            Integer::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Ring for Integer {
    const NAME: &'static str = "z";

    fn zero() -> Self {
        Integer::Small(0)
    }

    fn one() -> Self {
        Integer::Small(1)
    }

    fn add(&self, other: &Self) -> Self {
        if let (Integer::Small(a), Integer::Small(b)) = (self, other) {
            if let Some(c) = a.checked_add(*b) {
                return Integer::Small(c);
            }
        }
        Integer::from_big(self.to_big() + other.to_big())
    }

    fn neg(&self) -> Self {
        if let Integer::Small(a) = self {
            if let Some(c) = a.checked_neg() {
                return Integer::Small(c);
            }
        }
        Integer::from_big(-self.to_big())
    }

    fn mul(&self, other: &Self) -> Self {
        if let (Integer::Small(a), Integer::Small(b)) = (self, other) {
            if let Some(c) = a.checked_mul(*b) {
                return Integer::Small(c);
            }
        }
        Integer::from_big(self.to_big() * other.to_big())
    }

    fn is_zero(&self) -> bool {
        match self {
            Integer::Small(n) => *n == 0,
            Integer::Big(b) => b.is_zero(),
        }
    }

    fn from_i64(n: i64) -> Self {
        Integer::Small(n)
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Ok(n) = text.parse::<i64>() {
            return Some(Integer::Small(n));
        }
        text.parse::<BigInt>().ok().map(Integer::from_big)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn sign(&self) -> Option<Ordering> {
        Some(self.cmp(&Integer::Small(0)))
    }
}

/// The field with two elements: addition is xor, multiplication is and.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2(pub bool);

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Ring for Gf2 {
    const NAME: &'static str = "gf2";

    fn zero() -> Self {
        Gf2(false)
    }

    fn one() -> Self {
        Gf2(true)
    }

    fn add(&self, other: &Self) -> Self {
        Gf2(self.0 ^ other.0)
    }

    fn neg(&self) -> Self {
        *self
    }

    fn mul(&self, other: &Self) -> Self {
        Gf2(self.0 && other.0)
    }

    fn is_zero(&self) -> bool {
        !self.0
    }

    fn from_i64(n: i64) -> Self {
        Gf2(n.rem_euclid(2) == 1)
    }

    fn parse(text: &str) -> Option<Self> {
        let n: i64 = text.trim().parse().ok()?;
        Some(Gf2::from_i64(n))
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

static REAL_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Absolute tolerance used by [`Real`] for equality and zero tests.
pub fn real_tolerance() -> f64 {
    f64::from_bits(REAL_TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets the process-wide absolute tolerance for [`Real`]. Negative or NaN
/// values are clamped to zero (exact comparison).
pub fn set_real_tolerance(tol: f64) {
    let tol = if tol.is_nan() || tol < 0.0 { 0.0 } else { tol };
    REAL_TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// 64-bit floating point multiplicities compared up to [`real_tolerance`].
#[derive(Clone, Copy, Debug)]
pub struct Real(pub f64);

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= real_tolerance()
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Rust's float Display is the shortest representation that round-trips.
        write!(f, "{}", self.0)
    }
}

impl Ring for Real {
    const NAME: &'static str = "real";

    fn zero() -> Self {
        Real(0.0)
    }

    fn one() -> Self {
        Real(1.0)
    }

    fn add(&self, other: &Self) -> Self {
        Real(self.0 + other.0)
    }

    fn neg(&self) -> Self {
        Real(-self.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Real(self.0 * other.0)
    }

    fn is_zero(&self) -> bool {
        self.0.abs() <= real_tolerance()
    }

    fn from_i64(n: i64) -> Self {
        Real(n as f64)
    }

    fn parse(text: &str) -> Option<Self> {
        text.trim().parse().ok().map(Real)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    fn sign(&self) -> Option<Ordering> {
        if self.is_zero() {
            Some(Ordering::Equal)
        } else {
            self.0.partial_cmp(&0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: i64) -> Integer {
        Integer::from(n)
    }

    #[test]
    fn integer_examples() {
        assert_eq!(z(2).add(&z(3)), z(5));
        assert_eq!(z(3).add(&z(-3)), z(0));
        assert_eq!(z(2).mul(&z(7)), z(14));
        assert_eq!(z(2).neg(), z(-2));
        assert!(z(0).mul(&z(99)).is_zero());
    }

    #[test]
    fn gf2_examples() {
        let one = Gf2::one();
        assert_eq!(one.add(&one), Gf2::zero());
        assert_eq!(one.mul(&one), one);
        assert_eq!(one.neg(), one);
    }

    #[test]
    fn default_real_tolerance() {
        assert_eq!(real_tolerance(), 1e-9);
    }

    #[test]
    fn real_examples() {
        assert_eq!(Real(0.3).neg(), Real(-0.3));
        assert!(Real(0.1).add(&Real(0.2)).sub(&Real(0.3)).is_zero());
        assert_eq!(Real(0.3).to_string(), "0.3");
    }

    #[test]
    fn integer_overflow_promotes() {
        let big = z(i64::MAX).add(&z(1));
        assert!(matches!(big, Integer::Big(_)));
        assert_eq!(big.add(&z(-1)), z(i64::MAX));
        let sq = z(i64::MAX).mul(&z(i64::MAX));
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(z(i64::MIN).neg().to_string(), "9223372036854775808");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["0", "-17", "85070591730234615847396907784232501249"] {
            assert_eq!(Integer::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(Gf2::parse("3"), Some(Gf2(true)));
        assert_eq!(Gf2::parse("-2"), Some(Gf2(false)));
        assert_eq!(Real::parse("2.5").unwrap().0, 2.5);
        assert!(Integer::parse("x").is_none());
    }

    fn check_laws<R: Ring>(x: R, y: R, z: R) {
        assert_eq!(x.add(&y.add(&z)), x.add(&y).add(&z));
        assert_eq!(x.add(&y), y.add(&x));
        assert_eq!(x.add(&R::zero()), x);
        assert!(x.add(&x.neg()).is_zero());
        assert!(R::zero().mul(&x).is_zero());
        assert_eq!(R::one().mul(&x), x);
        assert_eq!(x.mul(&y.mul(&z)), x.mul(&y).mul(&z));
        assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        assert_eq!(x.mul(&y), y.mul(&x));
        assert_eq!(x.is_zero(), x == R::zero());
    }

    proptest! {
        #[test]
        fn integer_laws(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            check_laws(z(a), z(b), z(c));
        }

        #[test]
        fn gf2_laws(a in any::<bool>(), b in any::<bool>(), c in any::<bool>()) {
            check_laws(Gf2(a), Gf2(b), Gf2(c));
        }

        #[test]
        fn real_laws(a in -100i32..100, b in -100i32..100, c in -100i32..100) {
            // Quarter steps are exact in binary, so associativity holds bit for bit.
            check_laws(Real(a as f64 / 4.0), Real(b as f64 / 4.0), Real(c as f64 / 4.0));
        }
    }
}
