//! Graded virtual representations and truncated power series over them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{same_table, CharacterTable, ClassFunction, Cyclotomic};
use crate::error::{Error, Result};
use crate::qseries::{BiSeries, QSeries};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A class function in each cohomological degree; zero components are not
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedRep {
    table: Arc<CharacterTable>,
    components: BTreeMap<u32, ClassFunction>,
}

impl GradedRep {
    pub fn zero(table: &Arc<CharacterTable>) -> Self {
        GradedRep {
            table: table.clone(),
            components: BTreeMap::new(),
        }
    }

    /// The trivial representation in degree 0.
    pub fn unit(table: &Arc<CharacterTable>) -> Self {
        Self::concentrated(0, ClassFunction::trivial(table))
    }

    pub fn concentrated(degree: u32, f: ClassFunction) -> Self {
        let mut g = GradedRep {
            table: f.table().clone(),
            components: BTreeMap::new(),
        };
        g.insert(degree, f);
        g
    }

    pub fn from_components(
        table: &Arc<CharacterTable>,
        parts: impl IntoIterator<Item = (u32, ClassFunction)>,
    ) -> Result<Self> {
        let mut g = Self::zero(table);
        for (d, f) in parts {
            if !same_table(table, f.table()) {
                return Err(Error::TableMismatch);
            }
            g.insert(d, f);
        }
        Ok(g)
    }

    fn insert(&mut self, degree: u32, f: ClassFunction) {
        let sum = match self.components.remove(&degree) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.components.insert(degree, sum);
        }
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn components(&self) -> &BTreeMap<u32, ClassFunction> {
        &self.components
    }

    pub fn component(&self, degree: u32) -> ClassFunction {
        self.components
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| ClassFunction::zero(&self.table))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let mut out = self.clone();
        for (&d, f) in &other.components {
            out.insert(d, f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GradedRep {
            table: self.table.clone(),
            components: self.components.iter().map(|(&d, f)| (d, -f)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Graded tensor product: degrees add.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let mut out = Self::zero(&self.table);
        for (&d, f) in &self.components {
            for (&e, h) in &other.components {
                out.insert(d + e, f * h);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.table);
        }
        GradedRep {
            table: self.table.clone(),
            components: self.components.iter().map(|(&d, f)| (d, f.scale(q))).collect(),
        }
    }

    /// Moves the degree-`d` component to degree `d + s`.
    pub fn shift_degree(&self, s: u32) -> Self {
        GradedRep {
            table: self.table.clone(),
            components: self.components.iter().map(|(&d, f)| (d + s, f.clone())).collect(),
        }
    }

    /// `sum_d (-1)^d H^d`.
    pub fn euler_collapse(&self) -> ClassFunction {
        let mut acc = ClassFunction::zero(&self.table);
        for (&d, f) in &self.components {
            acc = if d % 2 == 0 { &acc + f } else { &acc - f };
        }
        acc
    }

    /// Signed trace of class `c`.
    pub fn trace(&self, c: usize) -> Cyclotomic {
        self.euler_collapse().value(c).clone()
    }

    /// Dimension in each degree as `(degree, dim)` pairs.
    pub fn betti(&self) -> Vec<(u32, Cyclotomic)> {
        self.components
            .iter()
            .map(|(&d, f)| (d, f.degree().clone()))
            .collect()
    }
}

impl fmt::Debug for GradedRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.components.iter()).finish()
    }
}

/// `H^0: χ1, H^2: 22χ1` style listing; `0` for the zero rep.
impl fmt::Display for GradedRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(d, c)| format!("H^{d}: {}", c.describe()))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Truncated power series `sum_{n <= order} a_n t^n` with graded coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepSeries {
    table: Arc<CharacterTable>,
    coeffs: Vec<GradedRep>,
}

impl RepSeries {
    pub fn zero(table: &Arc<CharacterTable>, order: usize) -> Self {
        RepSeries {
            table: table.clone(),
            coeffs: vec![GradedRep::zero(table); order + 1],
        }
    }

    pub fn one(table: &Arc<CharacterTable>, order: usize) -> Self {
        let mut s = Self::zero(table, order);
        s.coeffs[0] = GradedRep::unit(table);
        s
    }

    /// `a t^n`.
    pub fn monomial(order: usize, n: usize, a: GradedRep) -> Self {
        let mut s = Self::zero(a.table(), order);
        if n <= order {
            s.coeffs[n] = a;
        }
        s
    }

    pub fn from_coeffs(table: &Arc<CharacterTable>, coeffs: Vec<GradedRep>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs a constant term".into()));
        }
        if coeffs.iter().any(|c| !same_table(table, c.table())) {
            return Err(Error::TableMismatch);
        }
        Ok(RepSeries {
            table: table.clone(),
            coeffs,
        })
    }

    /// Series with class-function coefficients placed in degree 0.
    pub fn from_class_functions(table: &Arc<CharacterTable>, coeffs: Vec<ClassFunction>) -> Result<Self> {
        let coeffs = coeffs.into_iter().map(|f| GradedRep::concentrated(0, f)).collect();
        Self::from_coeffs(table, coeffs)
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GradedRep] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &GradedRep {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, GradedRep::zero(&self.table));
        RepSeries {
            table: self.table.clone(),
            coeffs,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].try_add(&other.coeffs[n]))
            .collect::<Result<_>>()?;
        Ok(RepSeries {
            table: self.table.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        RepSeries {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect(),
        }
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = vec![GradedRep::zero(&self.table); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let term = self.coeffs[i].try_mul(&other.coeffs[j])?;
                coeffs[i + j] = coeffs[i + j].try_add(&term)?;
            }
        }
        Ok(RepSeries {
            table: self.table.clone(),
            coeffs,
        })
    }

    fn require_unit_constant(&self) -> Result<()> {
        if self.coeffs[0] != GradedRep::unit(&self.table) {
            return Err(Error::NonUnitConstant(self.coeffs[0].to_string()));
        }
        Ok(())
    }

    /// Inverse of a series with constant term the trivial rep in degree 0.
    pub fn inverse(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let order = self.order();
        let mut out = vec![GradedRep::zero(&self.table); order + 1];
        out[0] = GradedRep::unit(&self.table);
        for n in 1..=order {
            let mut s = GradedRep::zero(&self.table);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !out[n - k].is_zero() {
                    s = s.try_add(&self.coeffs[k].try_mul(&out[n - k])?)?;
                }
            }
            out[n] = s.neg();
        }
        Ok(RepSeries {
            table: self.table.clone(),
            coeffs: out,
        })
    }

    /// `t -> t^m`, keeping the order.
    pub fn substitute_power(&self, m: usize) -> Self {
        let mut s = Self::zero(&self.table, self.order());
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * m > self.order() {
                break;
            }
            s.coeffs[n * m] = c.clone();
        }
        s
    }

    /// Formal exponential; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant(self.coeffs[0].to_string()));
        }
        let order = self.order();
        let mut f = vec![GradedRep::zero(&self.table); order + 1];
        f[0] = GradedRep::unit(&self.table);
        for n in 1..=order {
            let mut s = GradedRep::zero(&self.table);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    let term = self.coeffs[k].try_mul(&f[n - k])?.scale(&rat(k as i64));
                    s = s.try_add(&term)?;
                }
            }
            f[n] = s.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
        }
        Ok(RepSeries {
            table: self.table.clone(),
            coeffs: f,
        })
    }

    /// Formal logarithm; the constant term must be the unit.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let order = self.order();
        let mut a = vec![GradedRep::zero(&self.table); order + 1];
        for n in 1..=order {
            let mut s = self.coeffs[n].scale(&rat(n as i64));
            for k in 1..n {
                if !a[k].is_zero() {
                    let term = a[k].try_mul(&self.coeffs[n - k])?.scale(&rat(k as i64));
                    s = s.try_sub(&term)?;
                }
            }
            a[n] = s.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
        }
        Ok(RepSeries {
            table: self.table.clone(),
            coeffs: a,
        })
    }

    /// Coefficient-wise signed collapse to class functions.
    pub fn euler_series(&self) -> Vec<ClassFunction> {
        self.coeffs.iter().map(GradedRep::euler_collapse).collect()
    }

    /// Signed trace of class `c` on every coefficient. Fails if some trace is
    /// not rational.
    pub fn trace_at(&self, c: usize) -> Result<QSeries> {
        if c >= self.table.class_count() {
            return Err(Error::UnknownClass(c.to_string()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|g| {
                let v = g.trace(c);
                v.to_rational().ok_or_else(|| Error::NonRational(v.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries::new(coeffs))
    }

    /// `sum_n sum_d dim(H^d of a_n) z^d t^n`.
    pub fn poincare_at(&self) -> Result<BiSeries> {
        let mut out = BiSeries::zero(self.order());
        for (n, g) in self.coeffs.iter().enumerate() {
            for (d, dim) in g.betti() {
                let q = dim.to_rational().ok_or_else(|| Error::NonRational(dim.to_string()))?;
                out.add_to(n, d as usize, &q);
            }
        }
        out.trim();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn z2() -> Arc<CharacterTable> {
        builtin("Z2").unwrap()
    }

    fn cf(t: &Arc<CharacterTable>, v: &[i64]) -> ClassFunction {
        ClassFunction::from_integers(t.clone(), v).unwrap()
    }

    #[test]
    fn geometric_series() {
        let t = z2();
        let sign = cf(&t, &[1, -1]);
        let a = RepSeries::one(&t, 5)
            .sub(&RepSeries::monomial(5, 1, GradedRep::concentrated(0, sign)))
            .unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(inv.trace_at(1).unwrap(), QSeries::from_integers(&[1, -1, 1, -1, 1, -1]));
        assert_eq!(inv.trace_at(0).unwrap(), QSeries::from_integers(&[1; 6]));
        assert_eq!(a.mul(&inv).unwrap(), RepSeries::one(&t, 5));
    }

    #[test]
    fn euler_collapse_signs() {
        let t = z2();
        let e = GradedRep::from_components(&t, [(0, cf(&t, &[1, 1])), (1, cf(&t, &[2, -2])), (2, cf(&t, &[1, 1]))])
            .unwrap();
        assert_eq!(e.euler_collapse(), cf(&t, &[0, 4]));
        assert_eq!(GradedRep::concentrated(3, cf(&t, &[1, 1])).euler_collapse(), cf(&t, &[-1, -1]));
        assert_eq!(e.shift_degree(2).components().keys().copied().collect::<Vec<_>>(), [2, 3, 4]);
    }

    #[test]
    fn exp_log_round_trip() {
        let t = z2();
        let mut coeffs = vec![ClassFunction::zero(&t)];
        for n in 1..=6 {
            coeffs.push(cf(&t, &[n, 2 - n]));
        }
        let a = RepSeries::from_class_functions(&t, coeffs).unwrap();
        let e = a.exp().unwrap();
        assert_eq!(e.log().unwrap(), a);
        assert!(RepSeries::one(&t, 3).exp().is_err());
    }
}
