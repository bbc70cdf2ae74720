//! Exact field scalars: arbitrary-precision rationals and prime fields F_p.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// The ground field of a computation. All scalars in one object agree on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    /// F_p for a prime p < 2^31.
    Prime(u32),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::one()),
            Field::Prime(p) => Scalar::Fp { p: *p, v: 1 },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let p64 = *p as i64;
                let v = ((n % p64) + p64) % p64;
                Scalar::Fp { p: *p, v: v as u32 }
            }
        }
    }

    /// All field elements, for exhaustive enumeration. Only finite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(|v| Scalar::Fp { p: *p, v }).collect()),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact scalar. Representatives of F_p are canonical in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(q.recip()))
                }
            }
            Scalar::Fp { p, v } => {
                if *v == 0 {
                    None
                } else {
                    // Extended Euclid on i64; p < 2^31 so this cannot overflow.
                    let (mut a, mut b) = (*v as i64, *p as i64);
                    let (mut x0, mut x1) = (1i64, 0i64);
                    while b != 0 {
                        let q = a / b;
                        let r = a - q * b;
                        a = b;
                        b = r;
                        let x2 = x0 - q * x1;
                        x0 = x1;
                        x1 = x2;
                    }
                    debug_assert_eq!(a, 1, "modulus must be prime");
                    let p64 = *p as i64;
                    let v = ((x0 % p64) + p64) % p64;
                    Some(Scalar::Fp { p: *p, v: v as u32 })
                }
            }
        }
    }

    pub fn pow_sign(parity: i64) -> i64 {
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

fn fp_add(p: u32, a: u32, b: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

fn fp_mul(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp { p, v: fp_add(p, a, b) }
            }
            _ => panic!("mixed ground fields"),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp { p, v: fp_mul(p, a, b) }
            }
            _ => panic!("mixed ground fields"),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p, v: if v == 0 { 0 } else { p - v } },
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.clone() + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.clone() - rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Parses "a" or "a/b" over the given field.
pub fn parse_scalar(field: Field, s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if den == 0 {
        return None;
    }
    let d = field.from_i64(den);
    Some(field.from_i64(num) * d.inv()?)
}

/// Normalizes a row of rationals to coprime integers (content removal).
/// Keeps coefficient growth in check during elimination; a no-op over F_p.
pub fn normalize_row(row: &mut [Scalar]) {
    let all_q = row.iter().all(|s| matches!(s, Scalar::Q(_)));
    if !all_q {
        return;
    }
    let mut lcm_den = BigInt::one();
    let mut gcd_num = BigInt::zero();
    for s in row.iter() {
        if let Scalar::Q(q) = s {
            if !q.is_zero() {
                lcm_den = num::integer::lcm(lcm_den, q.denom().clone());
                gcd_num = num::integer::gcd(gcd_num, q.numer().abs());
            }
        }
    }
    if gcd_num.is_zero() {
        return;
    }
    let factor = BigRational::new(lcm_den, gcd_num);
    for s in row.iter_mut() {
        if let Scalar::Q(q) = s {
            *q = &*q * &factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let f = Field::Prime(101);
        for n in 1..101 {
            let a = f.from_i64(n);
            let inv = a.clone().inv().unwrap();
            assert!((a * inv).is_one());
        }
    }

    #[test]
    fn rational_inverse() {
        let f = Field::Rationals;
        let a = parse_scalar(f, "-3/7").unwrap();
        assert!((a.clone() * a.inv().unwrap()).is_one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn canonical_representatives() {
        let f = Field::Prime(5);
        assert_eq!(f.from_i64(-1), Scalar::Fp { p: 5, v: 4 });
        assert_eq!(f.from_i64(12), Scalar::Fp { p: 5, v: 2 });
    }

    #[test]
    fn row_normalization_preserves_ratios() {
        let f = Field::Rationals;
        let mut row = vec![
            parse_scalar(f, "2/3").unwrap(),
            parse_scalar(f, "4/9").unwrap(),
        ];
        normalize_row(&mut row);
        // 2/3 : 4/9 = 3 : 2 after clearing denominators and content.
        assert_eq!(row[0], f.from_i64(3));
        assert_eq!(row[1], f.from_i64(2));
    }
}
