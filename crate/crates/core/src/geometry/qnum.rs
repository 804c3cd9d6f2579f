//! Exact numbers of the form `a + b*sqrt(d)` with rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GeometryError;

/// `a + b*sqrt(d)`; `d` squarefree, and `b == 0` iff `d == 0`.
#[derive(Clone, Debug, Hash, PartialEq, Eq)]
pub struct QNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sign_of(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of `a + b*sqrt(d)` for `d >= 0`.
fn sign_single(a: &BigRational, b: &BigRational, d: &BigRational) -> i32 {
    let (sa, sb) = (sign_of(a), if d.is_zero() { 0 } else { sign_of(b) });
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Splits a positive integer into `(s, f)` with `n = s^2 * f`, `f` squarefree.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return (root, BigInt::one());
    }
    let mut rest = n.clone();
    let (mut s, mut f) = (BigInt::one(), BigInt::one());
    let mut p = BigInt::from(2u32);
    while (&p * &p) <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            count += 1;
        }
        s *= p.pow(count / 2);
        if count % 2 == 1 {
            f *= &p;
        }
        p += 1u32;
    }
    (s, f * rest)
}

impl QNum {
    pub fn zero() -> Self {
        QNum::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        QNum::rational(BigRational::one())
    }

    pub fn rational(a: BigRational) -> Self {
        QNum { a, b: BigRational::zero(), d: 0 }
    }

    pub fn int(n: i64) -> Self {
        QNum::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        QNum::rational(rat(n, d))
    }

    /// `a + b*sqrt(d)` for any `d >= 0`; square factors of `d` are pulled out.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return QNum::rational(a);
        }
        let (s, f) = square_split(&BigInt::from(d));
        let b = b * BigRational::from_integer(s);
        if f.is_one() {
            return QNum::rational(a + b);
        }
        QNum { a, b, d: f.to_u64().expect("squarefree part fits") }
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt_rational(r: &BigRational) -> Result<QNum, GeometryError> {
        if r.is_negative() {
            return Err(GeometryError::NonRepresentable(format!("square root of negative {r}")));
        }
        if r.is_zero() {
            return Ok(QNum::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = r.numer() * r.denom();
        let (s, f) = square_split(&pq);
        let coeff = BigRational::new(s, r.denom().clone());
        if f.is_one() {
            return Ok(QNum::rational(coeff));
        }
        let d = f
            .to_u64()
            .ok_or_else(|| GeometryError::NonRepresentable(format!("radicand of {r} too large")))?;
        Ok(QNum { a: BigRational::zero(), b: coeff, d })
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> i32 {
        sign_single(&self.a, &self.b, &BigRational::from_integer(BigInt::from(self.d)))
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.d == 0 {
            a
        } else {
            a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
        }
    }

    fn common_radicand(&self, other: &QNum) -> Result<u64, GeometryError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(GeometryError::NonRepresentable(format!("mixed radicands sqrt({d}) and sqrt({e})"))),
        }
    }

    pub fn neg(&self) -> QNum {
        QNum { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn add(&self, o: &QNum) -> Result<QNum, GeometryError> {
        let d = self.common_radicand(o)?;
        Ok(QNum::new(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn sub(&self, o: &QNum) -> Result<QNum, GeometryError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QNum) -> Result<QNum, GeometryError> {
        let d = self.common_radicand(o)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(QNum::new(a, b, d))
    }

    pub fn scale(&self, r: &BigRational) -> QNum {
        QNum::new(&self.a * r, &self.b * r, self.d)
    }

    /// Multiplicative inverse via the conjugate.
    pub fn recip(&self) -> Result<QNum, GeometryError> {
        if self.is_zero() {
            return Err(GeometryError::NonRepresentable("division by zero".into()));
        }
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        Ok(QNum::new(&self.a / &norm, -(&self.b / &norm), self.d))
    }

    pub fn div(&self, o: &QNum) -> Result<QNum, GeometryError> {
        self.mul(&o.recip()?)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let guess = self.to_f64().floor();
        let mut n = BigInt::from(guess as i64);
        while qnum_compare(&QNum::rational(BigRational::from_integer(n.clone())), self) == Ordering::Greater {
            n -= 1;
        }
        while qnum_compare(&QNum::rational(BigRational::from_integer(&n + 1)), self) != Ordering::Greater {
            n += 1;
        }
        n
    }
}

/// Exact comparison, including numbers over different quadratic fields.
pub fn qnum_compare(u: &QNum, v: &QNum) -> Ordering {
    // u - v = A + B sqrt(d) + C sqrt(f)
    let (a, b, d, c, f) = if u.d == v.d || v.d == 0 || u.d == 0 {
        let d = u.d.max(v.d);
        (&u.a - &v.a, &u.b - &v.b, d, BigRational::zero(), 0u64)
    } else {
        (&u.a - &v.a, u.b.clone(), u.d, -v.b.clone(), v.d)
    };
    let dr = BigRational::from_integer(BigInt::from(d));
    let fr = BigRational::from_integer(BigInt::from(f));
    let sx = sign_single(&a, &b, &dr);
    let sy = if f == 0 { 0 } else { sign_of(&c) };
    let s = if sy == 0 || sx == sy {
        if sx == 0 { sy } else { sx }
    } else if sx == 0 {
        sy
    } else {
        // |X| vs |C sqrt f| through X^2 - C^2 f = (A^2 + d B^2 - C^2 f) + 2AB sqrt d
        let p = &a * &a + &dr * &b * &b - &c * &c * &fr;
        let q = BigRational::from_integer(BigInt::from(2)) * &a * &b;
        match sign_single(&p, &q, &dr) {
            1 => sx,
            -1 => sy,
            _ => 0,
        }
    };
    s.cmp(&0)
}

impl PartialOrd for QNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QNum {
    fn cmp(&self, other: &Self) -> Ordering {
        qnum_compare(self, other)
    }
}

/// Simplest rational strictly between `lo < hi`.
pub fn simplest_between(lo: &QNum, hi: &QNum) -> BigRational {
    assert!(lo < hi, "empty interval");
    let fl = lo.floor();
    let next = BigRational::from_integer(&fl + 1);
    if QNum::rational(next.clone()) < *hi {
        return next;
    }
    let flq = QNum::rational(BigRational::from_integer(fl.clone()));
    let lo_frac = lo.sub(&flq).expect("same field");
    let hi_frac = hi.sub(&flq).expect("same field");
    let inv_hi = hi_frac.recip().expect("positive");
    let inner = if lo_frac.is_zero() {
        BigRational::from_integer(inv_hi.floor() + 1)
    } else {
        simplest_between(&inv_hi, &lo_frac.recip().expect("positive"))
    };
    BigRational::from_integer(fl) + inner.recip()
}

impl fmt::Display for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// JSON form `{"a":[n,d],"b":[n,d],"rad":int}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QNumJson {
    pub a: (i64, i64),
    #[serde(default = "zero_pair")]
    pub b: (i64, i64),
    #[serde(default)]
    pub rad: u64,
}

fn zero_pair() -> (i64, i64) {
    (0, 1)
}

fn rat_to_pair(r: &BigRational) -> Result<(i64, i64), GeometryError> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(GeometryError::NonRepresentable(format!("{r} exceeds 64-bit JSON range"))),
    }
}

impl QNumJson {
    pub fn to_qnum(&self) -> Result<QNum, GeometryError> {
        if self.a.1 == 0 || self.b.1 == 0 {
            return Err(GeometryError::InvalidParams("zero denominator".into()));
        }
        Ok(QNum::new(rat(self.a.0, self.a.1), rat(self.b.0, self.b.1), self.rad))
    }

    pub fn from_qnum(q: &QNum) -> Result<Self, GeometryError> {
        Ok(QNumJson { a: rat_to_pair(&q.a)?, b: rat_to_pair(&q.b)?, rad: q.d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: i64) -> QNum {
        QNum::sqrt_rational(&rat(n, 1)).unwrap()
    }

    #[test]
    fn basic_comparisons() {
        let third_root3 = sqrt(3).scale(&rat(1, 3));
        assert_eq!(qnum_compare(&QNum::frac(1, 2), &third_root3), Ordering::Less);
        assert_eq!(qnum_compare(&sqrt(2), &QNum::frac(3, 2)), Ordering::Less);
        assert_eq!(qnum_compare(&sqrt(7), &sqrt(7)), Ordering::Equal);
    }

    #[test]
    fn mixed_radicands() {
        // sqrt2 + sqrt3 vs sqrt 10: 5 + 2 sqrt6 > 10
        let s = sqrt(2);
        let t = sqrt(3);
        assert_eq!(qnum_compare(&s, &t.neg()), Ordering::Greater);
        assert_eq!(qnum_compare(&s, &t), Ordering::Less);
        let lhs = QNum::new(rat(1, 1), rat(1, 1), 2); // 1 + sqrt2 ~ 2.414
        assert_eq!(qnum_compare(&lhs, &t), Ordering::Greater);
        assert_eq!(qnum_compare(&lhs, &sqrt(6)), Ordering::Less); // 2.449
    }

    #[test]
    fn squarefree_extraction() {
        let q = QNum::sqrt_rational(&rat(19, 100)).unwrap();
        assert_eq!(q.radicand(), 19);
        assert_eq!(q.radical_part(), &rat(1, 10));
        assert!(QNum::sqrt_rational(&rat(9, 4)).unwrap().is_rational());
        assert_eq!(QNum::new(rat(0, 1), rat(1, 1), 12).radicand(), 3);
        assert_eq!(QNum::sqrt_rational(&rat(98, 1)).unwrap().radical_part(), &rat(7, 1));
        assert_eq!(QNum::sqrt_rational(&rat(2 * 3 * 5 * 7 * 49, 1)).unwrap().radicand(), 210);
    }

    #[test]
    fn field_arithmetic() {
        let x = QNum::new(rat(1, 2), rat(3, 2), 3);
        let y = x.recip().unwrap();
        assert_eq!(x.mul(&y).unwrap(), QNum::one());
        assert!(x.add(&sqrt(2)).is_err());
        assert_eq!(sqrt(3).mul(&sqrt(3)).unwrap(), QNum::int(3));
    }

    #[test]
    fn floors_and_sampling() {
        assert_eq!(sqrt(2).floor(), BigInt::from(1));
        assert_eq!(sqrt(2).neg().floor(), BigInt::from(-2));
        assert_eq!(simplest_between(&QNum::frac(-4, 5), &QNum::frac(-5, 7)), rat(-3, 4));
        assert_eq!(simplest_between(&QNum::int(-1), &QNum::frac(-4, 5)), rat(-5, 6));
        let r = simplest_between(&QNum::frac(1, 2), &sqrt(3).scale(&rat(1, 3)));
        let q = QNum::rational(r);
        assert!(QNum::frac(1, 2) < q && q < sqrt(3).scale(&rat(1, 3)));
    }
}
