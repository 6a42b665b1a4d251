//! Coefficient fields.
//!
//! Every polynomial in the crate is generic over a [`Field`]. Elements are
//! plain values; all arithmetic goes through the field object so that a
//! runtime prime modulus can be carried without per-element overhead.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default word-sized prime, `p ≡ 1 (mod 4)`.
pub const DEFAULT_PRIME: u64 = 2_147_483_629;
/// Second prime used for cross-prime agreement checks.
pub const SECONDARY_PRIME: u64 = 2_147_483_549;

pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero; callers check first.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of `num/den`. Fails when `den` is not invertible in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    /// A square root of −1, when the field contains one.
    fn imaginary_unit(&self) -> Option<Self::Elem>;
    /// Whether arithmetic is exact (everything but complex doubles).
    fn is_exact(&self) -> bool {
        true
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    /// Bit size of an exact element, used for coefficient-growth budgets.
    fn height_bits(&self, _a: &Self::Elem) -> u64 {
        0
    }
    /// Render an element in the polynomial text grammar.
    fn format(&self, a: &Self::Elem) -> String;
    /// True when the element prints as a single signed atom (no `+` inside).
    fn is_atomic(&self, a: &Self::Elem) -> bool;
    /// Sign of the printed form, used to fold `+ -c` into `- c`.
    fn is_negative(&self, a: &Self::Elem) -> bool;
}

/// Serializable description of a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FieldKind {
    Rationals,
    GaussianRationals,
    PrimeField { modulus: u64 },
    ComplexDouble,
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
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
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn imaginary_unit(&self) -> Option<BigRational> {
        None
    }
    fn height_bits(&self, a: &BigRational) -> u64 {
        a.numer().bits() + a.denom().bits()
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn is_atomic(&self, _a: &BigRational) -> bool {
        true
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

// ---------------------------------------------------------------------------

/// `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }
    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GaussianRationals;

impl Field for GaussianRationals {
    type Elem = Gaussian;

    fn zero(&self) -> Gaussian {
        Gaussian::from_ints(0, 0)
    }
    fn one(&self) -> Gaussian {
        Gaussian::from_ints(1, 0)
    }
    fn is_zero(&self, a: &Gaussian) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }
    fn add(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        Gaussian::new(&a.re + &b.re, &a.im + &b.im)
    }
    fn sub(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        Gaussian::new(&a.re - &b.re, &a.im - &b.im)
    }
    fn mul(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        Gaussian::new(
            &a.re * &b.re - &a.im * &b.im,
            &a.re * &b.im + &a.im * &b.re,
        )
    }
    fn neg(&self, a: &Gaussian) -> Gaussian {
        Gaussian::new(-&a.re, -&a.im)
    }
    fn inv(&self, a: &Gaussian) -> Gaussian {
        let norm = &a.re * &a.re + &a.im * &a.im;
        Gaussian::new(&a.re / &norm, -&a.im / &norm)
    }
    fn from_i64(&self, n: i64) -> Gaussian {
        Gaussian::from_ints(n, 0)
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Gaussian> {
        Ok(Gaussian::new(Rationals.from_ratio(num, den)?, BigRational::zero()))
    }
    fn imaginary_unit(&self) -> Option<Gaussian> {
        Some(Gaussian::from_ints(0, 1))
    }
    fn height_bits(&self, a: &Gaussian) -> u64 {
        Rationals.height_bits(&a.re) + Rationals.height_bits(&a.im)
    }
    fn format(&self, a: &Gaussian) -> String {
        match (a.re.is_zero(), a.im.is_zero()) {
            (_, true) => format_rational(&a.re),
            (true, false) => {
                if a.im.is_one() {
                    "i".into()
                } else if (-&a.im).is_one() {
                    "-i".into()
                } else {
                    format!("{}*i", format_rational(&a.im))
                }
            }
            (false, false) => {
                let im = if a.im.is_negative() {
                    format!(" - {}*i", format_rational(&-&a.im))
                } else {
                    format!(" + {}*i", format_rational(&a.im))
                };
                format!("({}{})", format_rational(&a.re), im)
            }
        }
    }
    fn is_atomic(&self, a: &Gaussian) -> bool {
        a.re.is_zero() || a.im.is_zero()
    }
    fn is_negative(&self, a: &Gaussian) -> bool {
        if a.im.is_zero() {
            a.re.is_negative()
        } else if a.re.is_zero() {
            a.im.is_negative()
        } else {
            false
        }
    }
}

// ---------------------------------------------------------------------------

/// `Z/pZ` with `p ≡ 1 (mod 4)` and a fixed square root of −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    sqrt_neg_one: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeField {
    /// Builds `F_p`, locating `r` with `r² ≡ −1` as `g^((p−1)/4)` for the
    /// first quadratic non-residue `g`.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::InvalidInput(format!("modulus {p} exceeds 32 bits")));
        }
        if !is_prime(p) || p % 4 != 1 {
            return Err(Error::InvalidInput(format!(
                "modulus {p} must be a prime congruent to 1 mod 4"
            )));
        }
        let g = (2..p)
            .find(|&g| pow_mod(g, (p - 1) / 2, p) == p - 1)
            .expect("a non-residue exists for odd primes");
        let r = pow_mod(g, (p - 1) / 4, p);
        debug_assert_eq!(mul_mod(r, r, p), p - 1);
        if mul_mod(r, r, p) != p - 1 {
            return Err(Error::InvalidInput(format!("no square root of -1 found mod {p}")));
        }
        Ok(Self { p, sqrt_neg_one: r })
    }

    /// Uses a caller-chosen residue `r`; it must satisfy `r² ≡ −1`.
    pub fn with_residue(p: u64, r: u64) -> Result<Self> {
        let base = Self::new(p)?;
        let r = r % p;
        if mul_mod(r, r, p) != p - 1 {
            return Err(Error::InvalidInput(format!("{r}^2 is not -1 mod {p}")));
        }
        Ok(Self { sqrt_neg_one: r, ..base })
    }

    pub fn default_prime() -> Self {
        Self::new(DEFAULT_PRIME).expect("default prime is valid")
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn sqrt_neg_one(&self) -> u64 {
        self.sqrt_neg_one
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        m.to_u64().expect("residue fits")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^32 so the product fits in 64 bits.
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        pow_mod(*a, self.p - 2, self.p)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64> {
        let d = self.reduce_bigint(den);
        if d == 0 {
            return Err(Error::BadSpecialization(format!(
                "denominator {den} is divisible by {}",
                self.p
            )));
        }
        Ok(self.mul(&self.reduce_bigint(num), &self.inv(&d)))
    }
    fn imaginary_unit(&self) -> Option<u64> {
        Some(self.sqrt_neg_one)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn is_atomic(&self, _a: &u64) -> bool {
        true
    }
    fn is_negative(&self, _a: &u64) -> bool {
        false
    }
}

// ---------------------------------------------------------------------------

/// Complex doubles; only used for evaluation and path tracking.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexDouble;

impl Field for ComplexDouble {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Complex64 {
        a.inv()
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Complex64> {
        let q = Rationals.from_ratio(num, den)?;
        Ok(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
    }
    fn imaginary_unit(&self) -> Option<Complex64> {
        Some(Complex64::new(0.0, 1.0))
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn format(&self, a: &Complex64) -> String {
        if a.im == 0.0 {
            format!("{}", a.re)
        } else if a.re == 0.0 {
            format!("{}*i", a.im)
        } else {
            format!("({} + {}*i)", a.re, a.im)
        }
    }
    fn is_atomic(&self, a: &Complex64) -> bool {
        a.re == 0.0 || a.im == 0.0
    }
    fn is_negative(&self, a: &Complex64) -> bool {
        (a.im == 0.0 && a.re < 0.0) || (a.re == 0.0 && a.im < 0.0)
    }
}

/// Maps exact gaussian rationals into another field, sending `i` to the
/// target's square root of −1.
pub fn gaussian_into<F: Field>(target: &F, a: &Gaussian) -> Result<F::Elem> {
    let re = target.from_ratio(a.re.numer(), a.re.denom())?;
    if a.im.is_zero() {
        return Ok(re);
    }
    let unit = target.imaginary_unit().ok_or_else(|| {
        Error::BadSpecialization("target field has no square root of -1".into())
    })?;
    let im = target.from_ratio(a.im.numer(), a.im.denom())?;
    Ok(target.add(&re, &target.mul(&im, &unit)))
}

/// Rationals embed into every field.
pub fn rational_into<F: Field>(target: &F, a: &BigRational) -> Result<F::Elem> {
    target.from_ratio(a.numer(), a.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes_have_square_roots_of_minus_one() {
        for p in [DEFAULT_PRIME, SECONDARY_PRIME] {
            let f = PrimeField::new(p).unwrap();
            let r = f.sqrt_neg_one();
            assert_eq!(f.add(&f.mul(&r, &r), &1), 0);
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(7).is_err()); // 3 mod 4
        assert!(PrimeField::new(21).is_err());
        assert!(PrimeField::new(13).is_ok());
    }

    #[test]
    fn i_over_f13_with_residue_five() {
        let f = PrimeField::with_residue(13, 5).unwrap();
        assert_eq!(gaussian_into(&f, &Gaussian::from_ints(0, 1)).unwrap(), 5);
        let half = Gaussian::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
        assert_eq!(gaussian_into(&f, &half).unwrap(), 7);
        assert!(PrimeField::with_residue(13, 4).is_err());
    }

    #[test]
    fn denominator_divisible_by_p_is_rejected() {
        let f = PrimeField::new(13).unwrap();
        let bad = Gaussian::new(BigRational::new(1.into(), 26.into()), BigRational::zero());
        assert!(matches!(gaussian_into(&f, &bad), Err(Error::BadSpecialization(_))));
    }

    #[test]
    fn gaussian_inverse() {
        let g = GaussianRationals;
        let a = Gaussian::from_ints(3, -4);
        assert_eq!(g.mul(&a, &g.inv(&a)), g.one());
    }

    #[test]
    fn miller_rabin_small_table() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }
}
