//! Pluggable exact coefficient fields: the rationals, the rationals with a
//! primitive cube root of unity adjoined, and prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// An exact field of coefficients. Implementations carry whatever runtime
/// configuration they need (e.g. the modulus of a prime field); elements are
/// plain values that only make sense relative to their field object.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero; callers check first.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_ratio(&self, num: i64, den: i64) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// The field of arbitrary-precision rationals.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(&self, num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
}

/// Renders a rational as `p` or `p/q` with positive denominator.
pub fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// `a + b*w` with `w` a primitive cube root of unity, so `w^2 = -1 - w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycElem {
    pub rat: BigRational,
    pub omega: BigRational,
}

impl CycElem {
    pub fn new(rat: BigRational, omega: BigRational) -> Self {
        CycElem { rat, omega }
    }

    /// Evaluates at one of the two complex embeddings of `w`:
    /// `w = (-1 ± i*sqrt(3))/2`. Used only by floating cross-checks.
    pub fn to_complex(&self, conjugate: bool) -> (f64, f64) {
        let a = self.rat.to_f64().expect("rational fits f64");
        let b = self.omega.to_f64().expect("rational fits f64");
        let s = if conjugate { -1.0 } else { 1.0 };
        (a - b / 2.0, s * b * 3f64.sqrt() / 2.0)
    }
}

/// The field Q(w), w a primitive cube root of one.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Cyclotomic;

impl Cyclotomic {
    /// The generator w itself.
    pub fn omega(&self) -> CycElem {
        CycElem::new(BigRational::zero(), BigRational::one())
    }

    /// The canonical embedding Q -> Q(w).
    pub fn embed(&self, a: &BigRational) -> CycElem {
        CycElem::new(a.clone(), BigRational::zero())
    }
}

impl Field for Cyclotomic {
    type Elem = CycElem;

    fn zero(&self) -> CycElem {
        CycElem::new(BigRational::zero(), BigRational::zero())
    }
    fn one(&self) -> CycElem {
        CycElem::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self, a: &CycElem) -> bool {
        a.rat.is_zero() && a.omega.is_zero()
    }
    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem::new(&a.rat + &b.rat, &a.omega + &b.omega)
    }
    fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem::new(&a.rat - &b.rat, &a.omega - &b.omega)
    }
    fn neg(&self, a: &CycElem) -> CycElem {
        CycElem::new(-&a.rat, -&a.omega)
    }
    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        // (a1 + a2 w)(b1 + b2 w) = a1 b1 - a2 b2 + (a1 b2 + a2 b1 - a2 b2) w
        let cross = &a.omega * &b.omega;
        CycElem::new(
            &a.rat * &b.rat - &cross,
            &a.rat * &b.omega + &a.omega * &b.rat - &cross,
        )
    }
    fn inv(&self, a: &CycElem) -> CycElem {
        // conjugate a + b w^2 = (a - b) - b w; norm = a^2 - ab + b^2
        let norm = &a.rat * &a.rat - &a.rat * &a.omega + &a.omega * &a.omega;
        assert!(!norm.is_zero(), "inverse of zero");
        CycElem::new((&a.rat - &a.omega) / &norm, -&a.omega / &norm)
    }
    fn from_i64(&self, n: i64) -> CycElem {
        self.embed(&BigRational::from_integer(BigInt::from(n)))
    }
    fn from_ratio(&self, num: i64, den: i64) -> CycElem {
        self.embed(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn format(&self, a: &CycElem) -> String {
        if a.omega.is_zero() {
            format_rational(&a.rat)
        } else if a.rat.is_zero() {
            format!("{}*w", format_rational(&a.omega))
        } else {
            format!(
                "{}{}{}*w",
                format_rational(&a.rat),
                if a.omega.is_negative() { "" } else { "+" },
                format_rational(&a.omega)
            )
        }
    }
    fn name(&self) -> String {
        "Q(w)".to_string()
    }
}

/// The default prime: 2^31 - 1, which is 1 mod 3 so that Q(w) embeds.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// The prime field F_p for a configured odd prime p < 2^32.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 1 && p < (1 << 32), "modulus out of range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The reduction map Q -> F_p; fails when p divides the denominator.
    pub fn from_rational(&self, a: &BigRational) -> Result<u64, Error> {
        let p = BigInt::from(self.p);
        let num = ((a.numer() % &p) + &p) % &p;
        let den = ((a.denom() % &p) + &p) % &p;
        let den = den.to_u64().unwrap();
        if den == 0 {
            return Err(Error::BadDenominator(self.p));
        }
        Ok(self.mul(&num.to_u64().unwrap(), &self.inv(&den)))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        assert!(r0 == 1, "{} not invertible mod {}", a, self.p);
        (((t0 % self.p as i128) + self.p as i128) % self.p as i128) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        (((n as i128 % self.p as i128) + self.p as i128) % self.p as i128) as u64
    }
    fn from_ratio(&self, num: i64, den: i64) -> u64 {
        self.mul(&self.from_i64(num), &self.inv(&self.from_i64(den)))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_cubed_is_one() {
        let f = Cyclotomic;
        let w = f.omega();
        let w2 = f.mul(&w, &w);
        assert_eq!(f.mul(&w2, &w), f.one());
        // 1 + w + w^2 = 0
        assert!(f.is_zero(&f.add(&f.add(&f.one(), &w), &w2)));
    }

    #[test]
    fn cyclotomic_inverse() {
        let f = Cyclotomic;
        let x = f.add(&f.from_ratio(3, 2), &f.mul(&f.from_i64(-2), &f.omega()));
        assert_eq!(f.mul(&x, &f.inv(&x)), f.one());
    }

    #[test]
    fn cyclotomic_matches_complex_embeddings() {
        let f = Cyclotomic;
        let x = f.add(&f.from_ratio(1, 3), &f.mul(&f.from_i64(2), &f.omega()));
        let y = f.sub(&f.from_i64(-4), &f.omega());
        let z = f.mul(&x, &y);
        for conj in [false, true] {
            let (xr, xi) = x.to_complex(conj);
            let (yr, yi) = y.to_complex(conj);
            let (zr, zi) = z.to_complex(conj);
            assert!((xr * yr - xi * yi - zr).abs() < 1e-12);
            assert!((xr * yi + xi * yr - zi).abs() < 1e-12);
        }
    }

    #[test]
    fn prime_field_roundtrip() {
        let f = PrimeField::new(DEFAULT_PRIME);
        assert_eq!(DEFAULT_PRIME % 3, 1);
        let half = f.from_ratio(1, 2);
        assert_eq!(f.add(&half, &half), f.one());
        let r = BigRational::new(BigInt::from(-7), BigInt::from(3));
        let e = f.from_rational(&r).unwrap();
        assert_eq!(f.mul(&e, &f.from_i64(3)), f.from_i64(-7));
    }

    #[test]
    fn prime_field_rejects_bad_denominator() {
        let f = PrimeField::new(5);
        let r = BigRational::new(BigInt::from(1), BigInt::from(10));
        assert!(f.from_rational(&r).is_err());
    }
}
