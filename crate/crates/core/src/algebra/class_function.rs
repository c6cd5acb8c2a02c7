use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyclotomic;
use super::table::CharacterTable;
use crate::error::{Error, Result};

/// A class function on a group, stored as one value per conjugacy class.
///
/// Virtual characters are class functions whose inner products with every
/// irreducible character are integers.
#[derive(Clone)]
pub struct ClassFunction {
    table: Arc<CharacterTable>,
    values: Vec<Cyclotomic>,
}

pub type VirtualRep = ClassFunction;

pub(crate) fn same_table(a: &Arc<CharacterTable>, b: &Arc<CharacterTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ClassFunction {
    pub fn new(table: Arc<CharacterTable>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != table.class_count() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} classes",
                values.len(),
                table.class_count()
            )));
        }
        Ok(ClassFunction { table, values })
    }

    pub fn from_integers(table: Arc<CharacterTable>, values: &[i64]) -> Result<Self> {
        Self::new(table, values.iter().map(|&v| Cyclotomic::from_integer(v)).collect())
    }

    pub fn zero(table: &Arc<CharacterTable>) -> Self {
        Self::constant(table, Cyclotomic::zero())
    }

    pub fn constant(table: &Arc<CharacterTable>, value: Cyclotomic) -> Self {
        ClassFunction {
            values: vec![value; table.class_count()],
            table: table.clone(),
        }
    }

    pub fn trivial(table: &Arc<CharacterTable>) -> Self {
        Self::constant(table, Cyclotomic::one())
    }

    /// Character of the regular representation.
    pub fn regular(table: &Arc<CharacterTable>) -> Self {
        let mut f = Self::zero(table);
        f.values[0] = Cyclotomic::from_bigint(BigInt::from(table.group_order()));
        f
    }

    pub fn irrep(table: &Arc<CharacterTable>, i: usize) -> Self {
        ClassFunction {
            values: table.irrep_values(i).to_vec(),
            table: table.clone(),
        }
    }

    /// `sum_i m_i chi_i`.
    pub fn from_multiplicities(table: &Arc<CharacterTable>, mults: &[i64]) -> Result<Self> {
        if mults.len() != table.irrep_count() {
            return Err(Error::InvalidArgument(format!(
                "{} multiplicities for {} irreps",
                mults.len(),
                table.irrep_count()
            )));
        }
        let mut f = Self::zero(table);
        for (i, &m) in mults.iter().enumerate() {
            if m != 0 {
                f = &f + &Self::irrep(table, i).scale(&rat(m));
            }
        }
        Ok(f)
    }

    /// `Ind_<g>^G 1` for `g` in class `c`.
    pub fn induce_from_cyclic(table: &Arc<CharacterTable>, c: usize) -> Self {
        let n = table.class_order(c) as i64;
        let g = table.group_order() as i64;
        let values = (0..table.class_count())
            .map(|x| {
                let hits = (0..n).filter(|&k| table.power(c, k) == x).count() as i64;
                let centralizer = g / table.class_size(x) as i64;
                Cyclotomic::from_rational(BigRational::new(
                    BigInt::from(centralizer * hits),
                    BigInt::from(n),
                ))
            })
            .collect();
        ClassFunction {
            table: table.clone(),
            values,
        }
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &Cyclotomic {
        &self.values[c]
    }

    /// Value at the identity.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_zero)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.map(|v| v.scale(q))
    }

    pub fn scale_cyclotomic(&self, x: &Cyclotomic) -> Self {
        self.map(|v| v * x)
    }

    pub fn conj(&self) -> Self {
        self.map(Cyclotomic::conj)
    }

    fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> Self {
        ClassFunction {
            table: self.table.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<Self> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        Ok(ClassFunction {
            table: self.table.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    /// `(1/|G|) sum_c |c| f(c) conj(h(c))`.
    pub fn inner_product(&self, other: &Self) -> Result<BigRational> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let total: Cyclotomic = (0..self.values.len())
            .map(|c| {
                (&self.values[c] * &other.values[c].conj())
                    .scale(&BigRational::from_integer(BigInt::from(self.table.class_size(c))))
            })
            .sum();
        let q = total.to_rational().ok_or_else(|| Error::NonRational(total.to_string()))?;
        Ok(q / BigRational::from_integer(BigInt::from(self.table.group_order())))
    }

    /// Rational multiplicities against the irreducible characters.
    pub fn multiplicities(&self) -> Result<Vec<BigRational>> {
        (0..self.table.irrep_count())
            .map(|i| self.inner_product(&Self::irrep(&self.table, i)))
            .collect()
    }

    /// Integer multiplicities `m_i` with `self = sum_i m_i chi_i`.
    pub fn decompose(&self) -> Result<Vec<BigInt>> {
        self.multiplicities()?
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                if m.is_integer() {
                    Ok(m.to_integer())
                } else {
                    Err(Error::NonIntegral {
                        context: format!("multiplicity of χ{}", i + 1),
                        value: m.to_string(),
                    })
                }
            })
            .collect()
    }

    pub fn is_virtual_character(&self) -> bool {
        self.decompose().is_ok()
    }

    pub fn is_genuine(&self) -> bool {
        self.decompose()
            .map(|m| m.iter().all(|x| !x.is_negative()))
            .unwrap_or(false)
    }

    /// `psi^k f (g) = f(g^k)`.
    pub fn adams(&self, k: i64) -> Self {
        let values = (0..self.values.len())
            .map(|c| self.values[self.table.power(c, k)].clone())
            .collect();
        ClassFunction {
            table: self.table.clone(),
            values,
        }
    }

    /// `lambda^0 .. lambda^max` by the Newton recursion. Valid for any class
    /// function; for a genuine character of degree `d` the terms above `d`
    /// vanish.
    pub fn lambda_powers(&self, max: usize) -> Vec<Self> {
        let mut out = vec![Self::trivial(&self.table)];
        let adams: Vec<Self> = (1..=max as i64).map(|k| self.adams(k)).collect();
        for i in 1..=max {
            let mut acc = Self::zero(&self.table);
            for k in 1..=i {
                let term = &adams[k - 1] * &out[i - k];
                acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            out.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(i))));
        }
        out
    }

    /// `lambda^i` of a genuine character.
    pub fn exterior_power(&self, i: usize) -> Result<Self> {
        if !self.is_genuine() {
            return Err(Error::NotGenuine(self.to_string()));
        }
        let d = self.dimension()?;
        if i > d {
            return Ok(Self::zero(&self.table));
        }
        Ok(self.lambda_powers(i).pop().expect("non-empty"))
    }

    /// All exterior powers `lambda^0 .. lambda^d` of a genuine character.
    pub fn exterior_powers(&self) -> Result<Vec<Self>> {
        if !self.is_genuine() {
            return Err(Error::NotGenuine(self.to_string()));
        }
        Ok(self.lambda_powers(self.dimension()?))
    }

    /// Degree as a non-negative integer.
    pub fn dimension(&self) -> Result<usize> {
        self.degree()
            .to_integer()
            .filter(|d| !d.is_negative())
            .and_then(|d| d.to_usize())
            .ok_or_else(|| Error::NonIntegral {
                context: "dimension".into(),
                value: self.degree().to_string(),
            })
    }

    /// Eigenvalues at class `c` as exponents of `z_n`, `n = order(c)`.
    pub fn eigenvalue_multiset(&self, c: usize) -> Result<Vec<u32>> {
        self.table.eigenvalue_multiset(&self.values, c)
    }

    /// Dimension of the subspace fixed by a representative of class `c`.
    pub fn fixed_dimension(&self, c: usize) -> Result<BigInt> {
        let n = self.table.class_order(c) as i64;
        let total: Cyclotomic = (0..n).map(|k| self.values[self.table.power(c, k)].clone()).sum();
        let q = total
            .to_rational()
            .ok_or_else(|| Error::NonRational(total.to_string()))?
            / rat(n);
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::NonIntegral {
                context: format!("fixed dimension at {}", self.table.class(c).label),
                value: q.to_string(),
            })
        }
    }

    /// Decomposition string such as `χ1+χ5+2χ6`, or the raw values when the
    /// function is not a virtual character.
    pub fn describe(&self) -> String {
        match self.decompose() {
            Ok(m) => format_decomposition(&m),
            Err(_) => {
                let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
                format!("[{}]", vals.join(", "))
            }
        }
    }
}

/// Formats `sum m_i chi_i`; the zero vector prints as `0`.
pub fn format_decomposition(mults: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, m) in mults.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        if m.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = m.abs();
        if !a.is_one() {
            out.push_str(&a.to_string());
        }
        out.push_str(&format!("χ{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.table.name(), self.values)
    }
}

impl fmt::Display for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        /// Panics if the operands live on different tables; use the
        /// `try_` method for a fallible version.
        impl<'a> $tr<&'a ClassFunction> for &'a ClassFunction {
            type Output = ClassFunction;
            fn $m(self, rhs: &ClassFunction) -> ClassFunction {
                self.$try(rhs).expect("class functions on different tables")
            }
        }
        impl $tr<ClassFunction> for ClassFunction {
            type Output = ClassFunction;
            fn $m(self, rhs: ClassFunction) -> ClassFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &ClassFunction {
    type Output = ClassFunction;
    fn neg(self) -> ClassFunction {
        self.map(|v| -v)
    }
}

impl Neg for ClassFunction {
    type Output = ClassFunction;
    fn neg(self) -> ClassFunction {
        -&self
    }
}
