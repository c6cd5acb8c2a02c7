//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] is stored in the power basis `1, z, ..., z^(phi(n)-1)` of
//! `Q(z)`, `z = exp(2 pi i / n)`, where `n` is the least conductor of a field
//! containing the value. Two values are equal iff their stored forms agree.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::{self, Solution};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d, d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let den = cyclotomic_poly(d);
        num = poly_div_exact(&num, &den);
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces a polynomial in `z` modulo `Phi_n`, returning `phi(n)` coefficients.
fn reduce_mod_phi(n: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() <= deg {
        poly.resize(deg, BigRational::zero());
        return poly;
    }
    for top in (deg..poly.len()).rev() {
        if poly[top].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[top], BigRational::zero());
        for (i, &pc) in phi.iter().enumerate().take(deg) {
            if pc != 0 {
                let idx = top - deg + i;
                poly[idx] = &poly[idx] - &c * BigRational::from_integer(BigInt::from(pc));
            }
        }
    }
    poly.truncate(deg);
    poly
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `z_n^k` for a primitive n-th root of unity `z_n`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let mut dense = vec![BigRational::zero(); n as usize];
        dense[e] = BigRational::one();
        Self::from_dense(n, dense)
    }

    /// Builds `sum_j dense[j] z_n^j` (any length; exponents are taken mod n).
    pub fn from_dense(n: u32, dense: Vec<BigRational>) -> Self {
        assert!(n > 0, "conductor must be positive");
        let mut folded = vec![BigRational::zero(); n as usize];
        for (j, c) in dense.into_iter().enumerate() {
            if !c.is_zero() {
                let idx = j % n as usize;
                folded[idx] = &folded[idx] + c;
            }
        }
        Self::canonical(n, reduce_mod_phi(n, folded))
    }

    /// Takes coefficients already reduced mod `Phi_n` and lowers the conductor.
    fn canonical(n: u32, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), euler_phi(n) as usize);
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            return Self::from_rational(coeffs.into_iter().next().unwrap_or_else(Zero::zero));
        }
        for d in divisors(n) {
            if d == 1 || d == n || d % 4 == 2 {
                continue;
            }
            if let Some(sub) = Self::express_in_subfield(n, &coeffs, d) {
                return Cyclotomic {
                    conductor: d,
                    coeffs: sub,
                };
            }
        }
        if n % 4 == 2 {
            // Q(z_n) = Q(z_{n/2}) and the subfield search above covers n/2,
            // so this is unreachable for non-rational values.
            unreachable!("value in Q(z_{n}) not found in Q(z_{})", n / 2);
        }
        Cyclotomic {
            conductor: n,
            coeffs,
        }
    }

    fn express_in_subfield(n: u32, coeffs: &[BigRational], d: u32) -> Option<Vec<BigRational>> {
        let phi_n = coeffs.len();
        let phi_d = euler_phi(d) as usize;
        let step = (n / d) as usize;
        let basis: Vec<Vec<BigRational>> = (0..phi_d)
            .map(|j| {
                let mut dense = vec![BigRational::zero(); n as usize];
                dense[j * step] = BigRational::one();
                reduce_mod_phi(n, dense)
            })
            .collect();
        let rows: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|r| basis.iter().map(|b| b[r].clone()).collect())
            .collect();
        match linalg::solve(&rows, coeffs, phi_d) {
            Solution::Unique(x) => Some(x),
            _ => None,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the power basis of `Q(z_conductor)`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coordinates in the power basis of `Q(z_n)`; `n` must be a multiple of
    /// the conductor.
    pub fn coordinates_over(&self, n: u32) -> Vec<BigRational> {
        assert!(n % self.conductor == 0, "{n} is not a multiple of {}", self.conductor);
        reduce_mod_phi(n, self.lift_dense(n))
    }

    fn lift_dense(&self, n: u32) -> Vec<BigRational> {
        let step = (n / self.conductor) as usize;
        let mut dense = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            dense[(j * step) % n as usize] = c.clone();
        }
        dense
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    /// Complex conjugation, `z -> z^-1`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let n = self.conductor as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            dense[(n - j) % n] = c.clone();
        }
        Self::from_dense(self.conductor, dense)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        if self.conductor == other.conductor {
            let coeffs: Vec<BigRational> = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect();
            return Self::canonical(self.conductor, coeffs);
        }
        let n = self.conductor.lcm(&other.conductor);
        let a = self.coordinates_over(n);
        let b = other.coordinates_over(n);
        let coeffs = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        Self::canonical(n, coeffs)
    }

    fn multiply(&self, other: &Self) -> Self {
        if self.is_rational() {
            return other.scale(&self.coeffs[0]);
        }
        if other.is_rational() {
            return self.scale(&other.coeffs[0]);
        }
        let n = self.conductor.lcm(&other.conductor);
        let a = self.coordinates_over(n);
        let b = other.coordinates_over(n);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = &prod[i + j] + x * y;
                }
            }
        }
        Self::canonical(n, reduce_mod_phi(n, prod))
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_rational() && rhs.is_rational() {
            return Cyclotomic::from_rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        self.combine(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_rational() && rhs.is_rational() {
            return Cyclotomic::from_rational(&self.coeffs[0] - &rhs.coeffs[0]);
        }
        self.combine(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.multiply(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::one()
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Writes the literal form `c0+c1*z+c2*z^2@n`; rationals print without `@`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&fmt_rational(&self.coeffs[0]));
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if negative {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mono = match j {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{j}"),
            };
            if j == 0 {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        write!(f, "{out}@{}", self.conductor)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses `c0+c1*z+...@n`. Terms may repeat and exponents may exceed `n`.
impl FromStr for Cyclotomic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, n) = match compact.rsplit_once('@') {
            Some((b, n)) => {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid conductor in `{s}`")))?;
                if n == 0 {
                    return Err(Error::Parse(format!("conductor must be positive in `{s}`")));
                }
                (b.to_string(), n)
            }
            None => (compact.clone(), 1),
        };
        if body.is_empty() {
            return Err(Error::Parse("empty cyclotomic literal".into()));
        }

        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in body.char_indices() {
            if ch == '+' || ch == '-' {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if i != 0 {
                    return Err(Error::Parse(format!("malformed literal `{s}`")));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{s}`")));
        }
        terms.push((negative, current));

        let mut dense = vec![BigRational::zero(); n as usize];
        for (neg, term) in terms {
            let (coef, exp) = parse_term(&term, s)?;
            let idx = (exp % n as u64) as usize;
            let c = if neg { -coef } else { coef };
            dense[idx] = &dense[idx] + c;
        }
        Ok(Cyclotomic::from_dense(n, dense))
    }
}

fn parse_term(term: &str, whole: &str) -> Result<(BigRational, u64)> {
    let bad = || Error::Parse(format!("malformed term `{term}` in `{whole}`"));
    let (coef_part, mono) = match term.find('z') {
        Some(pos) => {
            let (c, m) = term.split_at(pos);
            let c = c.strip_suffix('*').unwrap_or(c);
            if c.is_empty() && pos != 0 {
                return Err(bad());
            }
            (c, Some(m))
        }
        None => (term, None),
    };
    let coef = if coef_part.is_empty() {
        BigRational::one()
    } else {
        parse_rational(coef_part)?
    };
    let exp = match mono {
        None => 0,
        Some("z") => 1,
        Some(m) => m
            .strip_prefix("z^")
            .and_then(|e| e.parse::<u64>().ok())
            .ok_or_else(bad)?,
    };
    Ok((coef, exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn zeta3_sum_is_minus_one() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn zeta7_times_inverse_is_one() {
        assert_eq!(&z(7, 1) * &z(7, 6), Cyclotomic::one());
    }

    #[test]
    fn conj_of_one_plus_i() {
        let x = &Cyclotomic::one() + &z(4, 1);
        let expected = &Cyclotomic::one() - &z(4, 1);
        assert_eq!(x.conj(), expected);
    }

    #[test]
    fn conductor_is_lowered() {
        // z_6 = -z_3^2 lives in Q(z_3); z_8^2 = i lives in Q(z_4).
        assert_eq!(z(6, 1), -z(3, 2));
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(8, 2).conductor(), 4);
        assert_eq!(z(2, 1), Cyclotomic::from_integer(-1));
        // sqrt(5) = 1 + 2(z + z^4) from Q(z_5) stays at conductor 5
        let s = &Cyclotomic::one() + &(&z(5, 1) + &z(5, 4)).scale(&rat(2));
        assert_eq!(s.conductor(), 5);
        assert_eq!(&s * &s, Cyclotomic::from_integer(5));
        // lifting and combining different conductors
        let w = &z(3, 1) * &z(4, 1);
        assert_eq!(w.conductor(), 12);
        assert_eq!(&w * &w.conj(), Cyclotomic::one());
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["z+z^2+z^4@7", "1/2-3*z^2@5", "-7/3", "0", "z^3+z^5+z^6@7"] {
            let x: Cyclotomic = lit.parse().unwrap();
            let back: Cyclotomic = x.to_string().parse().unwrap();
            assert_eq!(x, back, "{lit}");
        }
        let x: Cyclotomic = "z+z^2+z^4@7".parse().unwrap();
        assert_eq!(&x + &x.conj(), Cyclotomic::from_integer(-1));
        let y: Cyclotomic = "2+z+2*z^2+2*z^3+z^4@5".parse().unwrap();
        assert_eq!(y.to_string(), "1+z^2+z^3@5");
        assert_eq!("-z@4".parse::<Cyclotomic>().unwrap(), -z(4, 1));
        assert!("1+@5".parse::<Cyclotomic>().is_err());
        assert!("z@0".parse::<Cyclotomic>().is_err());
        assert!("abc".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn powers_of_roots() {
        for n in 1..=12u32 {
            assert_eq!(z(n, 1).pow(n), Cyclotomic::one(), "n = {n}");
            let total: Cyclotomic = (0..n as i64).map(|k| z(n, k)).sum();
            let expected = if n == 1 { 1 } else { 0 };
            assert_eq!(total, Cyclotomic::from_integer(expected));
        }
    }
}
