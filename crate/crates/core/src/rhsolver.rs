//! Equivariant Riemann–Hurwitz for Galois covers of the projective line.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{format_decomposition, CharacterTable, ClassFunction};
use crate::error::{Error, Result};

/// Largest number of branch points accepted by the search.
pub const MAX_BRANCH_POINTS: usize = 6;

/// Stabilizer classes of the points over each branch point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    table: Arc<CharacterTable>,
    classes: Vec<usize>,
}

impl BranchData {
    /// Classes are stored sorted; each must have element order at least 2.
    pub fn new(table: &Arc<CharacterTable>, mut classes: Vec<usize>) -> Result<Self> {
        for &c in &classes {
            if c >= table.class_count() {
                return Err(Error::InvalidArgument(format!("class index {c} out of range")));
            }
            if table.class_order(c) < 2 {
                return Err(Error::InvalidArgument(format!(
                    "branch class {} has order 1",
                    table.class(c).label
                )));
            }
        }
        classes.sort_unstable();
        Ok(BranchData {
            table: table.clone(),
            classes,
        })
    }

    pub fn from_labels(table: &Arc<CharacterTable>, labels: &[&str]) -> Result<Self> {
        let classes = labels
            .iter()
            .map(|l| table.class_index(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(table, classes)
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    /// `(r - 2)|G| - sum |G|/ord(g_p) + 2` for `r` branch points.
    pub fn expected_dimension(&self) -> BigInt {
        let g = BigInt::from(self.table.group_order());
        let r = BigInt::from(self.classes.len() as i64);
        let mut d = (r - 2) * &g + 2;
        for &c in &self.classes {
            d -= &g / self.table.class_order(c);
        }
        d
    }
}

impl fmt::Display for BranchData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.classes.iter().map(|&c| self.table.class(c).label.as_str()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// `H^1(C) = sum_p (I_1 - I_<g_p>) - 2 I_1 + 2`, where `I_H` is the
/// permutation character on cosets of `H`.
pub fn h1_from_branch_data(b: &BranchData) -> ClassFunction {
    let t = &b.table;
    let regular = ClassFunction::regular(t);
    let two = BigRational::from_integer(BigInt::from(2));
    let mut h1 = ClassFunction::trivial(t).scale(&two) - regular.scale(&two);
    for &c in &b.classes {
        h1 = &h1 + &(&regular - &ClassFunction::induce_from_cyclic(t, c));
    }
    h1
}

/// Genus of `C/<g>` for `g` in class `c`: half the dimension of the fixed
/// subspace of `H^1(C)`.
pub fn quotient_genus(h1: &ClassFunction, c: usize) -> Result<BigInt> {
    let fixed = h1.fixed_dimension(c)?;
    let (q, r) = fixed.div_rem(&BigInt::from(2));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::NonIntegral {
            context: format!("quotient genus at {}", h1.table().class(c).label),
            value: format!("{fixed}/2"),
        });
    }
    Ok(q)
}

/// Filters applied by [`enumerate_branch_data`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConstraints {
    pub require_rational_quotient: bool,
    pub require_genuine: bool,
    pub forbid_fixed_vector_irreps: bool,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            require_rational_quotient: true,
            require_genuine: true,
            forbid_fixed_vector_irreps: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhSolution {
    pub branch: BranchData,
    pub h1: ClassFunction,
    pub multiplicities: Vec<BigInt>,
    pub genus: BigInt,
    /// Classes whose quotient is rational.
    pub rational_classes: Vec<usize>,
}

impl fmt::Display for RhSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} H1={} genus={}",
            self.branch,
            format_decomposition(&self.multiplicities),
            self.genus
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    NegativeDimension(BigInt),
    OddDimension(BigInt),
    NotGenuine,
    FixedVectorIrrep(usize),
    NoRationalQuotient,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::NegativeDimension(d) => write!(f, "negative dimension {d}"),
            RejectReason::OddDimension(d) => write!(f, "odd dimension {d}"),
            RejectReason::NotGenuine => write!(f, "not a genuine character"),
            RejectReason::FixedVectorIrrep(i) => {
                write!(f, "contains χ{}, which has fixed vectors under every element", i + 1)
            }
            RejectReason::NoRationalQuotient => write!(f, "every element has fixed vectors"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub branch: BranchData,
    pub h1: ClassFunction,
    pub reason: RejectReason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} H1={} rejected: {}", self.branch, self.h1.describe(), self.reason)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    pub solutions: Vec<RhSolution>,
    pub rejected: Vec<Rejection>,
}

/// Classes representing each conjugacy class of non-trivial cyclic
/// subgroups: the smallest class index among generators.
pub fn cyclic_subgroup_classes(table: &CharacterTable) -> Vec<usize> {
    (1..table.class_count())
        .filter(|&c| {
            let n = table.class_order(c) as i64;
            (1..n)
                .filter(|k| k.gcd(&n) == 1)
                .all(|k| table.power(c, k) >= c)
        })
        .collect()
}

/// Irreps with a non-zero fixed vector under every element.
pub fn everywhere_fixed_irreps(table: &Arc<CharacterTable>) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..table.irrep_count() {
        let chi = ClassFunction::irrep(table, i);
        let mut all = true;
        for c in 0..table.class_count() {
            if !chi.fixed_dimension(c)?.is_positive() {
                all = false;
                break;
            }
        }
        if all {
            out.push(i);
        }
    }
    Ok(out)
}

fn multisets(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        multisets(items, size, i, cur, out);
        cur.pop();
    }
}

/// Exhaustive search over multisets of at most `max_branch` branch classes,
/// one class per conjugacy class of cyclic subgroups. Results are ordered by
/// size, then lexicographically by class index.
pub fn enumerate_branch_data(
    table: &Arc<CharacterTable>,
    max_branch: usize,
    constraints: SearchConstraints,
) -> Result<SearchReport> {
    if max_branch > MAX_BRANCH_POINTS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_BRANCH_POINTS} branch points are supported"
        )));
    }
    let classes = cyclic_subgroup_classes(table);
    let forbidden = if constraints.forbid_fixed_vector_irreps {
        everywhere_fixed_irreps(table)?
    } else {
        Vec::new()
    };
    let mut report = SearchReport::default();
    for size in 0..=max_branch {
        let mut candidates = Vec::new();
        multisets(&classes, size, 0, &mut Vec::new(), &mut candidates);
        for cand in candidates {
            let branch = BranchData::new(table, cand)?;
            let h1 = h1_from_branch_data(&branch);
            let dim = h1
                .degree()
                .to_integer()
                .ok_or_else(|| Error::NonRational(h1.degree().to_string()))?;
            let reject = |reason| Rejection {
                branch: branch.clone(),
                h1: h1.clone(),
                reason,
            };
            if dim.is_negative() {
                report.rejected.push(reject(RejectReason::NegativeDimension(dim)));
                continue;
            }
            if dim.is_odd() {
                report.rejected.push(reject(RejectReason::OddDimension(dim)));
                continue;
            }
            let mults = h1.decompose()?;
            if constraints.require_genuine && mults.iter().any(|m| m.is_negative()) {
                report.rejected.push(reject(RejectReason::NotGenuine));
                continue;
            }
            if let Some(&i) = forbidden.iter().find(|&&i| !mults[i].is_zero()) {
                report.rejected.push(reject(RejectReason::FixedVectorIrrep(i)));
                continue;
            }
            let mut rational_classes = Vec::new();
            for c in 1..table.class_count() {
                if quotient_genus(&h1, c)?.is_zero() {
                    rational_classes.push(c);
                }
            }
            if constraints.require_rational_quotient && rational_classes.is_empty() {
                report.rejected.push(reject(RejectReason::NoRationalQuotient));
                continue;
            }
            let genus = &dim / 2;
            report.solutions.push(RhSolution {
                branch,
                h1,
                multiplicities: mults,
                genus,
                rational_classes,
            });
        }
    }
    Ok(report)
}

/// Genus of the cover from the classical formula
/// `2g - 2 = |G| (r - 2 - sum 1/ord(g_p))`, when it is a non-negative integer.
pub fn hurwitz_genus(b: &BranchData) -> Option<i64> {
    let d = b.expected_dimension();
    if d.is_negative() || d.is_odd() {
        return None;
    }
    (d / BigInt::from(2)).to_i64()
}
