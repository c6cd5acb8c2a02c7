//! Truncated q-series with exact rational coefficients, eta quotients and
//! partition generating functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `t^offset * sum_{n <= order} c_n t^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    offset: BigRational,
    coeffs: Vec<BigRational>,
}

/// First index where two series differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub left: BigRational,
    pub right: BigRational,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coefficient of t^{}: {} vs {}",
            self.index,
            fmt_rational(&self.left),
            fmt_rational(&self.right)
        )
    }
}

impl QSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least the constant term");
        QSeries {
            offset: BigRational::zero(),
            coeffs,
        }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![BigRational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigRational::one())
    }

    pub fn monomial(order: usize, n: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn with_offset(mut self, offset: BigRational) -> Self {
        self.offset = offset;
        self
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral {
                        context: format!("coefficient of t^{n}"),
                        value: fmt_rational(c),
                    })
                }
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        QSeries {
            offset: self.offset.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.offset, other.offset, "adding series with different offsets");
        let order = self.order().min(other.order());
        QSeries {
            offset: self.offset.clone(),
            coeffs: (0..=order).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + a * b;
                }
            }
        }
        QSeries {
            offset: &self.offset + &other.offset,
            coeffs,
        }
    }

    /// Multiplicative inverse; the constant term must be non-zero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitConstant("constant term is zero".into()));
        }
        let inv0 = BigRational::one() / c0;
        let order = self.order();
        let mut out = vec![BigRational::zero(); order + 1];
        out[0] = inv0.clone();
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    s += &self.coeffs[k] * &out[n - k];
                }
            }
            out[n] = -s * &inv0;
        }
        Ok(QSeries {
            offset: -&self.offset,
            coeffs: out,
        })
    }

    /// Integer power; negative exponents need an invertible constant term.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `t -> t^m`, keeping the order.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1);
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * m > order {
                break;
            }
            coeffs[n * m] = c.clone();
        }
        QSeries {
            offset: &self.offset * rat(m as i64),
            coeffs,
        }
    }

    /// Formal exponential of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant(fmt_rational(&self.coeffs[0])));
        }
        let order = self.order();
        let mut f = vec![BigRational::zero(); order + 1];
        f[0] = BigRational::one();
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    s += rat(k as i64) * &self.coeffs[k] * &f[n - k];
                }
            }
            f[n] = s / rat(n as i64);
        }
        Ok(Self::new(f))
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant(fmt_rational(&self.coeffs[0])));
        }
        let order = self.order();
        let mut a = vec![BigRational::zero(); order + 1];
        // n f_n = sum_{k=1}^n k a_k f_{n-k}, solved for a_n.
        for n in 1..=order {
            let mut s = rat(n as i64) * &self.coeffs[n];
            for k in 1..n {
                if !a[k].is_zero() {
                    s -= rat(k as i64) * &a[k] * &self.coeffs[n - k];
                }
            }
            a[n] = s / rat(n as i64);
        }
        Ok(Self::new(a))
    }

    /// Exact comparison of offsets and coefficients up to `order`.
    pub fn compare(&self, other: &Self, order: usize) -> std::result::Result<(), Mismatch> {
        if self.offset != other.offset {
            return Err(Mismatch {
                index: 0,
                left: self.offset.clone(),
                right: other.offset.clone(),
            });
        }
        for n in 0..=order {
            let (a, b) = (self.coeff(n), other.coeff(n));
            if a != b {
                return Err(Mismatch {
                    index: n,
                    left: a,
                    right: b,
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "offset": fmt_rational(&self.offset),
            "order": self.order(),
            "coefficients": self.coeffs.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

/// Plain form `c0, c1, c2`, prefixed by `t^a * ` when there is an offset.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.offset.is_zero() {
            write!(f, "t^{} * ", fmt_rational(&self.offset))?;
        }
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Exact comparison up to `order` with the first mismatch reported.
pub fn qseries_equal(a: &QSeries, b: &QSeries, order: usize) -> std::result::Result<(), Mismatch> {
    a.compare(b, order)
}

/// `prod_{n >= 1} (1 - t^(a n))^e`.
pub fn euler_product(scale: usize, exponent: i64, order: usize) -> QSeries {
    assert!(scale >= 1);
    let mut base = QSeries::one(order);
    let mut n = 1;
    while scale * n <= order {
        let mut factor = QSeries::one(order);
        factor.coeffs[scale * n] = rat(-1);
        base = base.mul(&factor);
        n += 1;
    }
    base.pow(exponent).expect("constant term is 1")
}

/// `prod_a eta(t^a)^(e_a)` with `eta(t) = t^(1/24) prod (1 - t^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EtaQuotient {
    factors: Vec<(u32, i64)>,
}

impl EtaQuotient {
    /// Merges repeated scales, drops zero exponents and sorts by scale.
    pub fn new(factors: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<u32, i64> = Default::default();
        for (a, e) in factors {
            if a == 0 {
                return Err(Error::InvalidArgument("eta scale must be positive".into()));
            }
            *merged.entry(a).or_insert(0) += e;
        }
        Ok(EtaQuotient {
            factors: merged.into_iter().filter(|&(_, e)| e != 0).collect(),
        })
    }

    pub fn factors(&self) -> &[(u32, i64)] {
        &self.factors
    }

    /// Half the sum of the exponents.
    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::from(self.factors.iter().map(|&(_, e)| e).sum::<i64>()), BigInt::from(2))
    }

    /// `sum_a a e_a`; the leading power is this over 24.
    pub fn level_sum(&self) -> i64 {
        self.factors.iter().map(|&(a, e)| a as i64 * e).sum()
    }

    pub fn expand(&self, order: usize) -> QSeries {
        let mut s = QSeries::one(order);
        for &(a, e) in &self.factors {
            s = s.mul(&euler_product(a as usize, e, order));
        }
        s.with_offset(BigRational::new(BigInt::from(self.level_sum()), BigInt::from(24)))
    }

    /// Expansion of `t / (this quotient)`.
    pub fn trace_form(&self, order: usize) -> QSeries {
        let inv = self.expand(order).inverse().expect("constant term is 1");
        let offset = BigRational::one() + inv.offset();
        inv.with_offset(offset)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(a, e)| format!("{a}^{e}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `a^e` items separated by commas, e.g. `1^8,2^8`. A bare `a` means
/// exponent 1 and the empty string is the empty quotient.
impl FromStr for EtaQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (a, e) = item.split_once('^').unwrap_or((item, "1"));
            let a: u32 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid eta scale in `{item}`")))?;
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid eta exponent in `{item}`")))?;
            factors.push((a, e));
        }
        EtaQuotient::new(factors)
    }
}

/// Denominators `prod eta(t^a)^e` of the symplectic trace forms `t / F(t)`
/// for a generator of a cyclic group of order `N = 1..8`.
pub const SYMPLECTIC_ETA_TABLE: [&[(u32, i64)]; 8] = [
    &[(1, 24)],
    &[(1, 8), (2, 8)],
    &[(1, 6), (3, 6)],
    &[(1, 4), (2, 2), (4, 4)],
    &[(1, 4), (5, 4)],
    &[(1, 2), (2, 2), (3, 2), (6, 2)],
    &[(1, 3), (7, 3)],
    &[(1, 2), (2, 1), (4, 1), (8, 2)],
];

pub fn symplectic_eta_row(n: u32) -> Result<EtaQuotient> {
    if !(1..=8).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    EtaQuotient::new(SYMPLECTIC_ETA_TABLE[n as usize - 1].iter().copied())
}

/// Bivariate series `sum c[n][d] t^n z^d`, truncated in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    pub coeffs: Vec<Vec<BigRational>>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            coeffs: vec![Vec::new(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize, d: usize) -> BigRational {
        self.coeffs
            .get(n)
            .and_then(|row| row.get(d))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_to(&mut self, n: usize, d: usize, c: &BigRational) {
        let row = &mut self.coeffs[n];
        if row.len() <= d {
            row.resize(d + 1, BigRational::zero());
        }
        row[d] += c;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for n in 0..=order {
            for m in 0..=order - n {
                for (d, a) in self.coeffs[n].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (e, b) in other.coeffs[m].iter().enumerate() {
                        if !b.is_zero() {
                            out.add_to(n + m, d + e, &(a * b));
                        }
                    }
                }
            }
        }
        out.trim();
        out
    }

    /// Drops trailing zeros in each row.
    pub fn trim(&mut self) {
        for row in &mut self.coeffs {
            while row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
        }
    }

    /// `z -> 1`.
    pub fn at_z_one(&self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|row| row.iter().sum()).collect())
    }

    /// The `t^n` coefficient as a polynomial in `z`, e.g. `1+22z^2+z^4`.
    pub fn format_row(&self, n: usize) -> String {
        let mut out = String::new();
        for (d, c) in self.coeffs[n].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = c.abs();
            let mono = match d {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{d}"),
            };
            if d == 0 || !a.is_one() {
                out.push_str(&fmt_rational(&a));
            }
            out.push_str(&mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|row| Value::Array(row.iter().map(|c| Value::String(fmt_rational(c))).collect()))
                .collect(),
        )
    }
}

/// `sum_n p(n) t^n` restricted to partitions with at most `max_parts` parts
/// (`None` for no restriction).
pub fn partition_series(max_parts: Option<usize>, order: usize) -> QSeries {
    // Partitions with at most k parts equal partitions with parts at most k.
    let largest = max_parts.unwrap_or(order).min(order);
    let mut c = vec![BigRational::zero(); order + 1];
    c[0] = BigRational::one();
    for part in 1..=largest {
        for n in part..=order {
            let prev = c[n - part].clone();
            c[n] += prev;
        }
    }
    QSeries::new(c)
}

/// `prod_{i >= 1} 1 / (1 - z^(i-1) t^i)`. The `t^n z^d` coefficient is the
/// number of partitions of `n` into `n - d` parts.
pub fn cell_count_series(order: usize) -> BiSeries {
    let mut out = BiSeries::zero(order);
    out.add_to(0, 0, &BigRational::one());
    for i in 1..=order {
        // multiply by sum_k z^{k(i-1)} t^{ki}
        let mut next = BiSeries::zero(order);
        for n in 0..=order {
            for (d, c) in out.coeffs[n].clone().into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut k = 0;
                while n + k * i <= order {
                    next.add_to(n + k * i, d + k * (i - 1), &c);
                    k += 1;
                }
            }
        }
        out = next;
    }
    out.trim();
    out
}

/// Number of partitions of `n` into exactly `k` parts.
pub fn partitions_into_parts(n: usize, k: usize) -> BigInt {
    let mut p = vec![vec![BigInt::zero(); k + 1]; n + 1];
    p[0][0] = BigInt::one();
    for m in 1..=n {
        for j in 1..=k.min(m) {
            p[m][j] = &p[m - 1][j - 1] + &p[m - j][j];
        }
    }
    p[n][k].clone()
}
