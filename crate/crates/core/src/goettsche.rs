//! Symmetric powers, Hilbert schemes of points on surfaces and K3 trace series.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{same_table, CharacterTable, ClassFunction, Cyclotomic};
use crate::error::{Error, Result};
use crate::qseries::{euler_product, BiSeries, QSeries};
use crate::repseries::{GradedRep, RepSeries};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Characters of `G` on `H^0 .. H^{2N}` of a smooth projective variety of
/// dimension `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    table: Arc<CharacterTable>,
    characters: Vec<ClassFunction>,
}

impl Cohomology {
    pub fn new(table: &Arc<CharacterTable>, characters: Vec<ClassFunction>) -> Result<Self> {
        if characters.len() < 3 || characters.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "expected characters for H^0..H^2N, got {}",
                characters.len()
            )));
        }
        if characters.iter().any(|c| !same_table(table, c.table())) {
            return Err(Error::TableMismatch);
        }
        for (j, c) in characters.iter().enumerate() {
            if !c.is_genuine() {
                return Err(Error::NotGenuine(format!("H^{j} = {}", c.describe())));
            }
        }
        let top = characters.len() - 1;
        let betti: Vec<usize> = characters
            .iter()
            .map(ClassFunction::dimension)
            .collect::<Result<_>>()?;
        if betti[0] != 1 || betti[top] != 1 {
            return Err(Error::InvalidArgument("H^0 and the top cohomology must be 1-dimensional".into()));
        }
        if (0..=top).any(|j| betti[j] != betti[top - j]) {
            return Err(Error::InvalidArgument(format!("Betti numbers {betti:?} violate duality")));
        }
        Ok(Cohomology {
            table: table.clone(),
            characters,
        })
    }

    /// Trivial action with the given Betti numbers.
    pub fn trivial_action(table: &Arc<CharacterTable>, betti: &[u32]) -> Result<Self> {
        let chars = betti
            .iter()
            .map(|&b| ClassFunction::trivial(table).scale(&rat(b as i64)))
            .collect();
        Self::new(table, chars)
    }

    /// A curve: trivial `H^0` and `H^2`, the given character on `H^1`.
    pub fn curve(h1: ClassFunction) -> Result<Self> {
        let table = h1.table().clone();
        let one = ClassFunction::trivial(&table);
        Self::new(&table, vec![one.clone(), h1, one])
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn dimension(&self) -> usize {
        (self.characters.len() - 1) / 2
    }

    pub fn characters(&self) -> &[ClassFunction] {
        &self.characters
    }

    pub fn betti(&self) -> Vec<u32> {
        self.characters
            .iter()
            .map(|c| c.dimension().expect("checked on construction") as u32)
            .collect()
    }

    /// As a graded representation.
    pub fn graded(&self) -> GradedRep {
        GradedRep::from_components(
            &self.table,
            self.characters.iter().enumerate().map(|(j, c)| (j as u32, c.clone())),
        )
        .expect("same table")
    }

    /// `[e(X)] = sum_j (-1)^j H^j`.
    pub fn euler(&self) -> ClassFunction {
        self.graded().euler_collapse()
    }
}

/// `sum_i (+-1)^i lambda^i(h) t^i` with `lambda^i` placed in degree `i * step`.
fn lambda_series(h: &ClassFunction, step: u32, alternate: bool, order: usize) -> Result<RepSeries> {
    let table = h.table();
    let powers = h.exterior_powers()?;
    let mut coeffs = vec![GradedRep::zero(table); order + 1];
    for (i, l) in powers.into_iter().enumerate().take(order + 1) {
        let l = if alternate && i % 2 == 1 { -l } else { l };
        coeffs[i] = GradedRep::concentrated(i as u32 * step, l);
    }
    RepSeries::from_coeffs(table, coeffs)
}

/// Factor of the symmetric-power product coming from `H^j`.
fn macdonald_factor(h: &ClassFunction, j: u32, order: usize) -> Result<RepSeries> {
    if j % 2 == 0 {
        lambda_series(h, j, true, order)?.inverse()
    } else {
        lambda_series(h, j, false, order)
    }
}

/// `sum_k [H^*(X^(k))] t^k` as a product over `j` of exterior-power series.
pub fn macdonald_series(x: &Cohomology, order: usize) -> Result<RepSeries> {
    let mut s = RepSeries::one(&x.table, order);
    for (j, h) in x.characters.iter().enumerate() {
        s = s.mul(&macdonald_factor(h, j as u32, order)?)?;
    }
    Ok(s)
}

/// `t^n -> t^(m n)` with the coefficient shifted up by `2 n (m - 1)`.
fn twist(s: &RepSeries, m: usize) -> RepSeries {
    let order = s.order();
    let mut coeffs = vec![GradedRep::zero(s.table()); order + 1];
    for n in 0..=order / m {
        coeffs[m * n] = s.coeff(n).shift_degree((2 * n * (m - 1)) as u32);
    }
    RepSeries::from_coeffs(s.table(), coeffs).expect("same table")
}

fn require_surface(s: &Cohomology) -> Result<()> {
    if s.dimension() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a surface, got dimension {}",
            s.dimension()
        )));
    }
    Ok(())
}

/// `sum_n [H^*(S^[n])] t^n` through the symmetric-power route.
pub fn goettsche_series(s: &Cohomology, order: usize) -> Result<RepSeries> {
    require_surface(s)?;
    let mac = macdonald_series(s, order)?;
    let mut out = RepSeries::one(&s.table, order);
    for m in 1..=order.max(1) {
        out = out.mul(&twist(&mac, m))?;
    }
    Ok(out)
}

/// The same series assembled factor by factor over `m` and `j`.
pub fn goettsche_series_quotient_form(s: &Cohomology, order: usize) -> Result<RepSeries> {
    require_surface(s)?;
    let mut out = RepSeries::one(&s.table, order);
    for (j, h) in s.characters.iter().enumerate() {
        let factor = macdonald_factor(h, j as u32, order)?;
        for m in 1..=order.max(1) {
            out = out.mul(&twist(&factor, m))?;
        }
    }
    Ok(out)
}

/// `sum_n [e(S^[n])] t^n` as a product of signed exterior-power factors.
pub fn euler_product_form(s: &Cohomology, order: usize) -> Result<Vec<ClassFunction>> {
    require_surface(s)?;
    let mut out = RepSeries::one(&s.table, order);
    for (j, h) in s.characters.iter().enumerate() {
        let base = lambda_series(h, 0, true, order)?;
        let base = if j % 2 == 0 { base.inverse()? } else { base };
        for m in 1..=order.max(1) {
            out = out.mul(&base.substitute_power(m))?;
        }
    }
    Ok(out.euler_series())
}

/// Poincaré generating series of the Hilbert schemes of a surface with Betti
/// numbers `b_0 .. b_4`:
/// `prod_m prod_j (1 - (-1)^j z^(2m-2+j) t^m)^(-(-1)^j b_j)`.
pub fn poincare_product(betti: &[u32], order: usize) -> Result<BiSeries> {
    if betti.len() != 5 {
        return Err(Error::InvalidArgument("expected five Betti numbers".into()));
    }
    let mut out = BiSeries::zero(order);
    out.add_to(0, 0, &BigRational::one());
    for m in 1..=order {
        for (j, &b) in betti.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let zdeg = 2 * m - 2 + j;
            let mut factor = BiSeries::zero(order);
            let mut k = 0usize;
            while k * m <= order {
                let c = if j % 2 == 0 {
                    // (1 - x)^(-b)
                    binomial(BigInt::from(b as usize + k - 1), BigInt::from(k))
                } else if k <= b as usize {
                    // (1 + x)^b
                    binomial(BigInt::from(b), BigInt::from(k))
                } else {
                    BigInt::zero()
                };
                if !c.is_zero() {
                    factor.add_to(k * m, k * zdeg, &BigRational::from_integer(c));
                }
                k += 1;
            }
            out = out.mul(&factor);
        }
    }
    Ok(out)
}

/// Degree-`i` part of `[H^*(S^[n])]` is the same character for all
/// `n >= first`. Returns that character and the least such `first` found up
/// to `order`, after checking that `(1 - t)` times the series has no degree-`i`
/// part beyond `t^i`.
pub fn stabilization_check(s: &Cohomology, i: u32, order: usize) -> Result<(ClassFunction, usize)> {
    if order < i as usize + 2 {
        return Err(Error::InvalidArgument(format!("order {order} is below {}", i + 2)));
    }
    let series = goettsche_series(s, order)?;
    let part = |n: usize| series.coeff(n).component(i);
    let stable = part(order);
    let mut first = order;
    while first > 0 && part(first - 1) == stable {
        first -= 1;
    }
    if first > i as usize {
        return Err(Error::Verification(format!(
            "degree {i} only stabilizes from n = {first}"
        )));
    }
    let one_minus_t = RepSeries::one(&s.table, order).sub(&RepSeries::monomial(
        order,
        1,
        GradedRep::unit(&s.table),
    ))?;
    let g = one_minus_t.mul(&series)?;
    for n in i as usize + 1..=order {
        if !g.coeff(n).component(i).is_zero() {
            return Err(Error::Verification(format!(
                "degree {i} part of (1-t)G(t) at t^{n} is {}",
                g.coeff(n).component(i).describe()
            )));
        }
    }
    Ok((stable, first))
}

/// Fixed-point count of a symplectic automorphism of order `n` of a K3
/// surface.
pub fn epsilon(n: u32) -> Result<i64> {
    const EPS: [i64; 8] = [24, 8, 6, 4, 4, 2, 3, 2];
    if (1..=8).contains(&n) {
        Ok(EPS[n as usize - 1])
    } else {
        Err(Error::OrderOutOfRange(n))
    }
}

/// `24 / (n prod_{p | n} (1 + 1/p))`.
pub fn epsilon_formula(n: u32) -> BigRational {
    let mut denom = rat(n as i64);
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            denom *= BigRational::new(BigInt::from(p + 1), BigInt::from(p));
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    rat(24) / denom
}

/// `exp(sum_{m,k >= 1} L(g^k) t^(mk) / k)` for `g` in class `g`, with the
/// Lefschetz numbers `L` given per class.
pub fn euler_trace_series(
    table: &CharacterTable,
    lefschetz: &[BigRational],
    g: usize,
    order: usize,
) -> Result<QSeries> {
    if lefschetz.len() != table.class_count() {
        return Err(Error::InvalidArgument("one Lefschetz number per class expected".into()));
    }
    let mut a = vec![BigRational::zero(); order + 1];
    for (n, slot) in a.iter_mut().enumerate().skip(1) {
        for k in (1..=n).filter(|k| n % k == 0) {
            *slot += &lefschetz[table.power(g, k as i64)] / rat(k as i64);
        }
    }
    let s = QSeries::new(a).exp()?;
    s.integer_coeffs()?;
    Ok(s)
}

/// How a finite group acts on a K3 surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K3Action {
    Symplectic,
    /// Every non-identity element has prime order `p` and acts non-symplectically,
    /// with transcendental lattice of rank `rank_t`.
    NonSymplectic { p: u32, rank_t: u32 },
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl K3Action {
    /// `rank_t / (p - 1)` for the non-symplectic case.
    pub fn d(&self) -> Result<u32> {
        match *self {
            K3Action::Symplectic => Err(Error::InvalidArgument("d is only defined for non-symplectic actions".into())),
            K3Action::NonSymplectic { p, rank_t } => {
                if !is_prime(p) {
                    return Err(Error::InvalidArgument(format!("{p} is not prime")));
                }
                if rank_t == 0 || rank_t % (p - 1) != 0 {
                    return Err(Error::InvalidArgument(format!("{} does not divide rank T = {rank_t}", p - 1)));
                }
                Ok(rank_t / (p - 1))
            }
        }
    }

    /// Lefschetz number of every class.
    pub fn lefschetz(&self, table: &CharacterTable) -> Result<Vec<BigRational>> {
        (0..table.class_count())
            .map(|c| {
                let n = table.class_order(c);
                match *self {
                    K3Action::Symplectic => Ok(rat(epsilon(n)?)),
                    K3Action::NonSymplectic { p, .. } => {
                        let d = self.d()? as i64;
                        match n {
                            1 => Ok(rat(24)),
                            _ if n == p => Ok(rat(24 - d * p as i64)),
                            _ => Err(Error::InvalidArgument(format!(
                                "class {} has order {n}, expected 1 or {p}",
                                table.class(c).label
                            ))),
                        }
                    }
                }
            })
            .collect()
    }

    /// Cohomology of the K3 surface with `H^2` determined by the Lefschetz
    /// numbers.
    pub fn cohomology(&self, table: &Arc<CharacterTable>) -> Result<Cohomology> {
        let l = self.lefschetz(table)?;
        let h2 = ClassFunction::new(
            table.clone(),
            l.iter().map(|x| Cyclotomic::from_rational(x - rat(2))).collect(),
        )?;
        let one = ClassFunction::trivial(table);
        Cohomology::new(table, vec![one.clone(), ClassFunction::zero(table), h2, ClassFunction::zero(table), one])
    }
}

/// `prod (1 - t^m)^(dp - 24) prod (1 - t^(mp))^(-d)`.
pub fn nonsymplectic_closed_form(p: u32, d: u32, order: usize) -> QSeries {
    let dp = (d * p) as i64;
    euler_product(1, dp - 24, order).mul(&euler_product(p as usize, -(d as i64), order))
}

/// `sum_n Tr(g | [e(S^[n])]) t^n` for a K3 surface `S`.
pub fn k3_trace_series(table: &CharacterTable, action: K3Action, g: usize, order: usize) -> Result<QSeries> {
    match action {
        K3Action::Symplectic => euler_trace_series(table, &action.lefschetz(table)?, g, order),
        K3Action::NonSymplectic { p, .. } => {
            let d = action.d()?;
            action.lefschetz(table)?;
            if table.class_order(g) == 1 {
                Ok(euler_product(1, -24, order))
            } else {
                Ok(nonsymplectic_closed_form(p, d, order))
            }
        }
    }
}

/// Integer coefficients of a series, for display.
pub fn to_integers(s: &QSeries) -> Result<Vec<i64>> {
    s.integer_coeffs()?
        .into_iter()
        .map(|c| {
            c.to_i64().ok_or_else(|| Error::NonIntegral {
                context: "machine integer".into(),
                value: c.to_string(),
            })
        })
        .collect()
}

/// Whether every coefficient of `s` is a non-negative integer.
pub fn is_nonnegative_integral(s: &QSeries) -> bool {
    s.coeffs().iter().all(|c| c.is_integer() && !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn epsilon_matches_formula() {
        for n in 1..=8 {
            assert_eq!(rat(epsilon(n).unwrap()), epsilon_formula(n), "n = {n}");
        }
        assert!(epsilon(9).is_err());
    }

    #[test]
    fn genus_two_symmetric_powers() {
        let t = builtin("TRIVIAL").unwrap();
        let c = Cohomology::trivial_action(&t, &[1, 4, 1]).unwrap();
        let p = macdonald_series(&c, 3).unwrap().poincare_at().unwrap();
        assert_eq!(p.format_row(1), "1+4z+z^2");
        // (1+zt)^4 / ((1-t)(1-z^2 t)) at t^2
        assert_eq!(p.format_row(2), "1+4z+7z^2+4z^3+z^4");
    }

    #[test]
    fn k3_low_terms() {
        let t = builtin("TRIVIAL").unwrap();
        let k3 = K3Action::Symplectic.cohomology(&t).unwrap();
        let g = goettsche_series(&k3, 3).unwrap();
        assert_eq!(g.trace_at(0).unwrap(), QSeries::from_integers(&[1, 24, 324, 3200]));
        let p = g.poincare_at().unwrap();
        assert_eq!(p.format_row(1), "1+22z^2+z^4");
        assert_eq!(p.coeff(2, 2), rat(23));
        assert_eq!(p, poincare_product(&[1, 0, 22, 0, 1], 3).unwrap());
    }

    #[test]
    fn example_two_coefficient() {
        let t = builtin("Z3").unwrap();
        let a = K3Action::NonSymplectic { p: 3, rank_t: 14 };
        let s = k3_trace_series(&t, a, 1, 4).unwrap();
        assert_eq!(s.coeff(1), rat(3));
        let exp = euler_trace_series(&t, &a.lefschetz(&t).unwrap(), 1, 4).unwrap();
        assert_eq!(s, exp);
    }
}
