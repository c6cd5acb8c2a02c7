use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    pub label: String,
    pub size: u64,
    pub order: u32,
}

/// Character table of a finite group together with its power maps.
///
/// Class 0 is the identity class. `power_map[c][k]` is the class of `g^k`
/// for `g` in class `c`, for `0 <= k < order(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    name: String,
    group_order: u64,
    classes: Vec<ConjClass>,
    power_map: Vec<Vec<usize>>,
    irreps: Vec<Vec<Cyclotomic>>,
    eigenvalues: Option<Vec<Vec<Vec<u32>>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TableFile {
    #[serde(default)]
    name: Option<String>,
    group_order: u64,
    classes: Vec<ConjClass>,
    power_map: Vec<Vec<usize>>,
    irreps: Vec<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<Vec<Vec<u32>>>>,
}

impl CharacterTable {
    /// Builds a table after checking shapes and index ranges. Arithmetic
    /// invariants are checked separately by [`verify_table`].
    pub fn new(
        name: impl Into<String>,
        group_order: u64,
        classes: Vec<ConjClass>,
        power_map: Vec<Vec<usize>>,
        irreps: Vec<Vec<Cyclotomic>>,
        eigenvalues: Option<Vec<Vec<Vec<u32>>>>,
    ) -> Result<Self> {
        let h = classes.len();
        let schema = |msg: String| Err(Error::Schema(msg));
        if h == 0 {
            return schema("a table needs at least one class".into());
        }
        if group_order == 0 {
            return schema("groupOrder must be positive".into());
        }
        if classes.iter().any(|c| c.size == 0 || c.order == 0) {
            return schema("class sizes and orders must be positive".into());
        }
        if power_map.len() != h {
            return schema(format!("powerMap has {} rows for {h} classes", power_map.len()));
        }
        for (c, row) in power_map.iter().enumerate() {
            if row.len() != classes[c].order as usize {
                return schema(format!(
                    "powerMap row for {} has length {}, expected the element order {}",
                    classes[c].label,
                    row.len(),
                    classes[c].order
                ));
            }
            if let Some(&bad) = row.iter().find(|&&i| i >= h) {
                return schema(format!("powerMap entry {bad} out of range"));
            }
        }
        for (i, row) in irreps.iter().enumerate() {
            if row.len() != h {
                return schema(format!("irrep {} has {} values for {h} classes", i + 1, row.len()));
            }
        }
        if let Some(eig) = &eigenvalues {
            if eig.len() != irreps.len() || eig.iter().any(|r| r.len() != h) {
                return schema("eigenvalues must have one list per irrep and class".into());
            }
        }
        Ok(CharacterTable {
            name: name.into(),
            group_order,
            classes,
            power_map,
            irreps,
            eigenvalues,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("character table: {e}")))?;
        let irreps = file
            .irreps
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|lit| match lit {
                        Literal::Int(n) => Ok(Cyclotomic::from_integer(n)),
                        Literal::Text(s) => s.parse(),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Schema(e.to_string()))?;
        Self::new(
            file.name.unwrap_or_else(|| "custom".into()),
            file.group_order,
            file.classes,
            file.power_map,
            irreps,
            file.eigenvalues,
        )
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            name: Some(self.name.clone()),
            group_order: self.group_order,
            classes: self.classes.clone(),
            power_map: self.power_map.clone(),
            irreps: self
                .irreps
                .iter()
                .map(|row| row.iter().map(|v| Literal::Text(v.to_string())).collect())
                .collect(),
            eigenvalues: self.eigenvalues.clone(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, c: usize) -> &ConjClass {
        &self.classes[c]
    }

    pub fn class_order(&self, c: usize) -> u32 {
        self.classes[c].order
    }

    pub fn class_size(&self, c: usize) -> u64 {
        self.classes[c].size
    }

    pub fn class_index(&self, label: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c.label.eq_ignore_ascii_case(label))
            .ok_or_else(|| Error::UnknownClass(label.to_string()))
    }

    /// Class of `g^k` for `g` in class `c`; `k` may be any integer.
    pub fn power(&self, c: usize, k: i64) -> usize {
        let n = self.classes[c].order as i64;
        self.power_map[c][k.rem_euclid(n) as usize]
    }

    pub fn power_map(&self) -> &[Vec<usize>] {
        &self.power_map
    }

    pub fn irrep_count(&self) -> usize {
        self.irreps.len()
    }

    pub fn irrep_values(&self, i: usize) -> &[Cyclotomic] {
        &self.irreps[i]
    }

    pub fn eigenvalue_data(&self) -> Option<&[Vec<Vec<u32>>]> {
        self.eigenvalues.as_deref()
    }

    /// Multiplicities of `z_n^j`, `n = order(c)`, among the eigenvalues of a
    /// class representative acting in the representation with character
    /// `values`. Returned as rationals so callers can report failures.
    pub fn eigenvalue_multiplicities(&self, values: &[Cyclotomic], c: usize) -> Vec<BigRational> {
        let n = self.class_order(c);
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        (0..n as i64)
            .map(|j| {
                let total: Cyclotomic = (0..n as i64)
                    .map(|k| &values[self.power(c, k)] * &Cyclotomic::root_of_unity(n, -j * k))
                    .sum();
                match total.to_rational() {
                    Some(q) => q * &inv_n,
                    // A non-rational sum cannot be a multiplicity; flag it with -1.
                    None => -BigRational::one(),
                }
            })
            .collect()
    }

    /// Exponents `j` of `z_n^j` with repetition, ascending.
    pub fn eigenvalue_multiset(&self, values: &[Cyclotomic], c: usize) -> Result<Vec<u32>> {
        let mults = self.eigenvalue_multiplicities(values, c);
        let mut out = Vec::new();
        for (j, m) in mults.iter().enumerate() {
            if !m.is_integer() || m.is_negative() {
                return Err(Error::NonIntegral {
                    context: format!("eigenvalue multiplicity of z^{j} at class {}", self.classes[c].label),
                    value: m.to_string(),
                });
            }
            let count: usize = m.to_integer().try_into().unwrap_or(usize::MAX);
            out.extend(std::iter::repeat(j as u32).take(count));
        }
        Ok(out)
    }
}

impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (order {})", self.name, self.group_order)?;
        let labels: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("{}_{}", c.label, c.size))
            .collect();
        writeln!(f, "     {}", labels.join("  "))?;
        for (i, row) in self.irreps.iter().enumerate() {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "χ{:<3} {}", i + 1, vals.join("  "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Identity,
    ClassSizes,
    IrrepCount,
    PowerMap,
    RowOrthogonality,
    ColumnOrthogonality,
    EigenvalueIntegrality,
    EigenvalueData,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Identity => "identity class",
            Check::ClassSizes => "class sizes",
            Check::IrrepCount => "irrep count",
            Check::PowerMap => "power map",
            Check::RowOrthogonality => "row orthogonality",
            Check::ColumnOrthogonality => "column orthogonality",
            Check::EigenvalueIntegrality => "eigenvalue integrality",
            Check::EigenvalueData => "eigenvalue data",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: Check,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.message)
    }
}

/// Lists every violated table invariant. An empty report means the table is
/// consistent.
pub fn verify_table(t: &CharacterTable) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |check, message: String| out.push(Diagnostic { check, message });
    let h = t.class_count();
    let g = t.group_order;

    let id = &t.classes[0];
    if id.size != 1 || id.order != 1 {
        push(Check::Identity, format!("class {} is not the identity class", id.label));
    }

    let total: u64 = t.classes.iter().map(|c| c.size).sum();
    if total != g {
        push(Check::ClassSizes, format!("class sizes sum to {total}, group order is {g}"));
    }
    for c in &t.classes {
        if g % c.size != 0 {
            push(Check::ClassSizes, format!("size of {} does not divide {g}", c.label));
        }
        if g % c.order as u64 != 0 {
            push(Check::ClassSizes, format!("order of {} does not divide {g}", c.label));
        }
    }

    if t.irrep_count() != h {
        push(
            Check::IrrepCount,
            format!("{} irreps for {h} classes", t.irrep_count()),
        );
    }

    for (c, row) in t.power_map.iter().enumerate() {
        let n = t.classes[c].order;
        let label = &t.classes[c].label;
        if row[0] != 0 {
            push(Check::PowerMap, format!("{label}^0 is not the identity"));
        }
        if n > 1 && row[1] != c {
            push(Check::PowerMap, format!("{label}^1 is not {label}"));
        }
        for (k, &d) in row.iter().enumerate() {
            let expected = n / n.gcd(&(k as u32));
            if t.classes[d].order != expected {
                push(
                    Check::PowerMap,
                    format!(
                        "{label}^{k} lands in {} of order {}, expected order {expected}",
                        t.classes[d].label, t.classes[d].order
                    ),
                );
            }
            for (m, &e) in t.power_map[d].iter().enumerate() {
                if t.power(c, (k * m) as i64) != e {
                    push(
                        Check::PowerMap,
                        format!("({label}^{k})^{m} disagrees with {label}^{}", k * m),
                    );
                }
            }
        }
    }

    if t.irrep_count() == h {
        let order = BigRational::from_integer(BigInt::from(g));
        for i in 0..h {
            for j in i..h {
                let s: Cyclotomic = (0..h)
                    .map(|c| {
                        (&t.irreps[i][c] * &t.irreps[j][c].conj())
                            .scale(&BigRational::from_integer(BigInt::from(t.classes[c].size)))
                    })
                    .sum();
                let expected = if i == j { order.clone() } else { BigRational::zero() };
                if s.to_rational().as_ref() != Some(&expected) {
                    push(
                        Check::RowOrthogonality,
                        format!("<χ{}, χ{}> = {}/{g}", i + 1, j + 1, s),
                    );
                }
            }
        }
        for a in 0..h {
            for b in a..h {
                let s: Cyclotomic = (0..h)
                    .map(|i| &t.irreps[i][a] * &t.irreps[i][b].conj())
                    .sum();
                let expected = if a == b {
                    BigRational::new(BigInt::from(g), BigInt::from(t.classes[a].size))
                } else {
                    BigRational::zero()
                };
                if s.to_rational().as_ref() != Some(&expected) {
                    push(
                        Check::ColumnOrthogonality,
                        format!("columns {} and {} give {s}", t.classes[a].label, t.classes[b].label),
                    );
                }
            }
        }
    }

    for (i, row) in t.irreps.iter().enumerate() {
        for c in 0..h {
            match t.eigenvalue_multiset(row, c) {
                Err(e) => push(Check::EigenvalueIntegrality, format!("χ{} at {}: {e}", i + 1, t.classes[c].label)),
                Ok(mut got) => {
                    let dim = row[0].to_i64();
                    if dim != Some(got.len() as i64) {
                        push(
                            Check::EigenvalueIntegrality,
                            format!("χ{} at {}: {} eigenvalues for degree {}", i + 1, t.classes[c].label, got.len(), row[0]),
                        );
                    }
                    if let Some(data) = t.eigenvalues.as_ref().and_then(|e| e.get(i)).map(|r| &r[c]) {
                        let mut want = data.clone();
                        want.sort_unstable();
                        got.sort_unstable();
                        if want != got {
                            push(
                                Check::EigenvalueData,
                                format!(
                                    "χ{} at {}: listed exponents {:?}, reconstructed {:?}",
                                    i + 1,
                                    t.classes[c].label,
                                    want,
                                    got
                                ),
                            );
                        }
                    }
                }
            }
        }
    }

    out
}
