//! Equivariant Euler characters of compactified Jacobians of nodal curves,
//! family sums over stratified linear systems and orbit-count solving.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{solve, Solution};
use crate::algebra::{same_table, CharacterTable, ClassFunction, Cyclotomic};
use crate::error::{Error, Result};

/// Largest node count accepted by [`NodalCurve::new`].
pub const MAX_NODES: usize = 24;

/// How a group element treats the two branches at a node it maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BranchFlag {
    BranchesFixed,
    BranchesSwapped,
}

impl BranchFlag {
    pub fn is_swapped(self) -> bool {
        self == BranchFlag::BranchesSwapped
    }
}

/// Action of one class representative on the nodes: node `i` goes to
/// `permutation[i]`, exchanging the branches when `flags[i]` is swapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAction {
    pub permutation: Vec<usize>,
    pub flags: Vec<BranchFlag>,
}

/// A cycle of a group element on torus factors. `inverted` is the composite
/// action on one factor after going once around the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusCycle {
    pub length: usize,
    pub inverted: bool,
}

impl NodeAction {
    pub fn identity(nodes: usize) -> Self {
        NodeAction {
            permutation: (0..nodes).collect(),
            flags: vec![BranchFlag::BranchesFixed; nodes],
        }
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    fn validate(&self, nodes: usize) -> Result<()> {
        if self.permutation.len() != nodes || self.flags.len() != nodes {
            return Err(Error::InconsistentNodeAction(format!(
                "action lists {} images and {} flags for {} nodes",
                self.permutation.len(),
                self.flags.len(),
                nodes
            )));
        }
        let mut seen = vec![false; nodes];
        for &p in &self.permutation {
            if p >= nodes || seen[p] {
                return Err(Error::InconsistentNodeAction(format!(
                    "{:?} is not a permutation",
                    self.permutation
                )));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &NodeAction) -> NodeAction {
        let permutation = self.permutation.iter().map(|&p| other.permutation[p]).collect();
        let flags = (0..self.len())
            .map(|i| {
                let swapped = self.flags[i].is_swapped() ^ other.flags[self.permutation[i]].is_swapped();
                if swapped {
                    BranchFlag::BranchesSwapped
                } else {
                    BranchFlag::BranchesFixed
                }
            })
            .collect();
        NodeAction { permutation, flags }
    }

    pub fn pow(&self, k: u32) -> NodeAction {
        let mut out = NodeAction::identity(self.len());
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
            && self.flags.iter().all(|f| !f.is_swapped())
    }

    /// Cycles restricted to the nodes in `subset` (all nodes when `None`),
    /// in order of their smallest node.
    pub fn cycles(&self, subset: Option<&[bool]>) -> Vec<TorusCycle> {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if visited[start] || subset.is_some_and(|s| !s[start]) {
                continue;
            }
            let mut length = 0;
            let mut inverted = false;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                inverted ^= self.flags[i].is_swapped();
                length += 1;
                i = self.permutation[i];
            }
            out.push(TorusCycle { length, inverted });
        }
        out
    }

    /// Sorted cycle type with composite flags; invariant under conjugation.
    pub fn signature(&self) -> Vec<TorusCycle> {
        let mut s = self.cycles(None);
        s.sort();
        s
    }

    fn stabilizes(&self, subset: &[bool]) -> bool {
        (0..self.len()).all(|i| subset[i] == subset[self.permutation[i]])
    }
}

/// Trace of an element on the signed compactly supported cohomology of a
/// product of multiplicative groups it permutes.
///
/// A cycle whose composite is the identity on its factor contributes 0 and
/// one whose composite is inversion contributes 2.
pub fn torus_euler_trace(cycles: &[TorusCycle]) -> BigInt {
    cycles.iter().fold(BigInt::one(), |acc, c| {
        if c.inverted {
            acc * 2
        } else {
            BigInt::zero()
        }
    })
}

/// An integral nodal curve with a group action: the character on `H^1` of
/// its normalization and the action of each class representative on the
/// nodes.
#[derive(Debug, Clone)]
pub struct NodalCurve {
    table: Arc<CharacterTable>,
    normalization_h1: ClassFunction,
    nodes: Vec<String>,
    actions: Vec<NodeAction>,
}

impl NodalCurve {
    pub fn new(
        normalization_h1: ClassFunction,
        nodes: Vec<String>,
        actions: Vec<NodeAction>,
    ) -> Result<Self> {
        let table = normalization_h1.table().clone();
        let dim = normalization_h1.dimension()?;
        if dim % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "normalization H^1 has odd dimension {dim}"
            )));
        }
        if !normalization_h1.is_genuine() {
            return Err(Error::NotGenuine(normalization_h1.describe()));
        }
        if nodes.len() > MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "{} nodes exceeds the limit of {MAX_NODES}",
                nodes.len()
            )));
        }
        if actions.len() != table.class_count() {
            return Err(Error::InconsistentNodeAction(format!(
                "{} node actions for {} classes",
                actions.len(),
                table.class_count()
            )));
        }
        for a in &actions {
            a.validate(nodes.len())?;
        }
        if !actions[0].is_identity() {
            return Err(Error::InconsistentNodeAction("identity moves a node".into()));
        }
        for (c, a) in actions.iter().enumerate() {
            let order = table.class_order(c);
            for k in 1..=order {
                let target = table.power(c, k as i64);
                if a.pow(k).signature() != actions[target].signature() {
                    return Err(Error::InconsistentNodeAction(format!(
                        "power {k} of {} does not act like {}",
                        table.class(c).label,
                        table.class(target).label
                    )));
                }
            }
        }
        Ok(NodalCurve {
            table,
            normalization_h1,
            nodes,
            actions,
        })
    }

    /// A curve with `nodes` nodes, each fixed with fixed branches by every
    /// element.
    pub fn with_fixed_nodes(normalization_h1: ClassFunction, nodes: usize) -> Result<Self> {
        let k = normalization_h1.table().class_count();
        Self::new(
            normalization_h1,
            (0..nodes).map(|i| format!("p{}", i + 1)).collect(),
            vec![NodeAction::identity(nodes); k],
        )
    }

    pub fn smooth(h1: ClassFunction) -> Result<Self> {
        Self::with_fixed_nodes(h1, 0)
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn normalization_h1(&self) -> &ClassFunction {
        &self.normalization_h1
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn actions(&self) -> &[NodeAction] {
        &self.actions
    }

    pub fn geometric_genus(&self) -> usize {
        self.normalization_h1.dimension().unwrap_or(0) / 2
    }

    pub fn arithmetic_genus(&self) -> usize {
        self.geometric_genus() + self.nodes.len()
    }

    /// `sum (-1)^i lambda^i H^1`, the character of the Jacobian of the
    /// normalization.
    pub fn abelian_part(&self) -> Result<ClassFunction> {
        let mut acc = ClassFunction::zero(&self.table);
        for (i, l) in self.normalization_h1.exterior_powers()?.iter().enumerate() {
            acc = if i % 2 == 0 { &acc + l } else { &acc - l };
        }
        Ok(acc)
    }
}

/// Euler character of the compactified Jacobian, via the cycle product
/// `det(1 - g | H^1) * prod_cycles (1 + t(cycle))`.
pub fn jac_euler_rep(curve: &NodalCurve) -> Result<ClassFunction> {
    let det = curve.abelian_part()?;
    let values = curve
        .actions
        .iter()
        .enumerate()
        .map(|(c, a)| {
            let torus: BigInt = a
                .cycles(None)
                .iter()
                .map(|cy| BigInt::one() + torus_euler_trace(&[*cy]))
                .product();
            det.value(c) * &Cyclotomic::from_bigint(torus)
        })
        .collect();
    ClassFunction::new(curve.table.clone(), values)
}

/// The same character summed stratum by stratum: one term per subset of
/// nodes kept as torus factors, in the given order of subsets. Subsets not
/// stable under an element contribute nothing to its trace.
pub fn jac_euler_rep_stratified(curve: &NodalCurve, subsets: &[Vec<bool>]) -> Result<ClassFunction> {
    let det = curve.abelian_part()?;
    let mut acc = ClassFunction::zero(&curve.table);
    for s in subsets {
        if s.len() != curve.nodes.len() {
            return Err(Error::InvalidArgument(format!(
                "subset mask of length {} for {} nodes",
                s.len(),
                curve.nodes.len()
            )));
        }
        let values = curve
            .actions
            .iter()
            .enumerate()
            .map(|(c, a)| {
                if a.stabilizes(s) {
                    det.value(c) * &Cyclotomic::from_bigint(torus_euler_trace(&a.cycles(Some(s))))
                } else {
                    Cyclotomic::zero()
                }
            })
            .collect();
        acc = acc.try_add(&ClassFunction::new(curve.table.clone(), values)?)?;
    }
    Ok(acc)
}

/// All subsets of `n` nodes as masks, in binary counting order.
pub fn all_node_subsets(n: usize) -> Vec<Vec<bool>> {
    (0u64..1 << n)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// True when every element fixes a non-zero vector of the normalization's
/// `H^1`, so that no quotient of the normalization is rational. In that case
/// the Jacobian character is checked to vanish.
pub fn vanishing_certificate(curve: &NodalCurve) -> Result<bool> {
    let h1 = &curve.normalization_h1;
    for c in 0..curve.table.class_count() {
        if !h1.fixed_dimension(c)?.is_positive() {
            return Ok(false);
        }
    }
    let e = jac_euler_rep(curve)?;
    if !e.is_zero() {
        return Err(Error::Verification(format!(
            "certificate holds but the Jacobian character is {}",
            e.describe()
        )));
    }
    Ok(true)
}

/// How a character of a stabilizer subgroup is induced up to the group.
#[derive(Debug, Clone)]
pub enum Inducer {
    /// Trivial stabilizer; the fiber is over the one-class table.
    Trivial,
    /// The stabilizer is the whole group.
    Whole,
    /// The cyclic subgroup generated by a representative of this class; the
    /// fiber is over the cyclic table whose class `k` is `g^k`.
    Cyclic { class: usize },
    /// Explicit map: `Ind(phi)(x) = sum_j matrix[x][j] phi(j)`.
    Matrix {
        subgroup: Arc<CharacterTable>,
        matrix: Vec<Vec<BigRational>>,
    },
}

impl Inducer {
    pub fn induce(&self, group: &Arc<CharacterTable>, phi: &ClassFunction) -> Result<ClassFunction> {
        let sub = phi.table();
        match self {
            Inducer::Trivial => {
                if sub.class_count() != 1 {
                    return Err(Error::TableMismatch);
                }
                Ok(ClassFunction::regular(group).scale_cyclotomic(phi.value(0)))
            }
            Inducer::Whole => {
                if !same_table(group, sub) {
                    return Err(Error::TableMismatch);
                }
                Ok(phi.clone())
            }
            Inducer::Cyclic { class } => {
                let c = *class;
                if c >= group.class_count() {
                    return Err(Error::InvalidArgument(format!("class index {c} out of range")));
                }
                let n = group.class_order(c) as usize;
                let cyclic_ok = sub.class_count() == n
                    && sub.group_order() == n as u64
                    && (n < 2 || (0..n).all(|k| sub.power(1, k as i64) == k));
                if !cyclic_ok {
                    return Err(Error::InvalidArgument(format!(
                        "stabilizer table {} is not the cyclic table of order {n}",
                        sub.name()
                    )));
                }
                let values = (0..group.class_count())
                    .map(|x| {
                        let sum: Cyclotomic = (0..n)
                            .filter(|&k| group.power(c, k as i64) == x)
                            .map(|k| phi.value(k).clone())
                            .sum();
                        let centralizer = group.group_order() / group.class_size(x);
                        sum.scale(&BigRational::new(BigInt::from(centralizer), BigInt::from(n)))
                    })
                    .collect();
                ClassFunction::new(group.clone(), values)
            }
            Inducer::Matrix { subgroup, matrix } => {
                if !same_table(subgroup, sub) {
                    return Err(Error::TableMismatch);
                }
                if matrix.len() != group.class_count()
                    || matrix.iter().any(|r| r.len() != sub.class_count())
                {
                    return Err(Error::InvalidArgument(format!(
                        "induction matrix must be {} x {}",
                        group.class_count(),
                        sub.class_count()
                    )));
                }
                let values = matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .map(|(j, m)| phi.value(j).scale(m))
                            .sum()
                    })
                    .collect();
                ClassFunction::new(group.clone(), values)
            }
        }
    }
}

/// One stratum of a family: base Euler number, stabilizer and fiber.
#[derive(Debug, Clone)]
pub struct StratumSpec {
    pub label: String,
    pub inducer: Inducer,
    pub base_euler: i64,
    pub fiber: NodalCurve,
}

impl StratumSpec {
    pub fn contribution(&self, group: &Arc<CharacterTable>) -> Result<ClassFunction> {
        let local = jac_euler_rep(&self.fiber)?.scale(&BigRational::from_integer(self.base_euler.into()));
        self.inducer.induce(group, &local)
    }
}

/// `sum Ind(e(B) * e(Jac(fiber)))` over the strata.
pub fn family_euler_rep(group: &Arc<CharacterTable>, strata: &[StratumSpec]) -> Result<ClassFunction> {
    let mut acc = ClassFunction::zero(group);
    for s in strata {
        acc = acc.try_add(&s.contribution(group)?)?;
    }
    Ok(acc)
}

/// Non-negative integers `n` with `sum n_i basis_i = target`, solved exactly
/// over the character values.
pub fn solve_orbit_counts(target: &ClassFunction, basis: &[ClassFunction]) -> Result<Vec<BigInt>> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    let table = target.table();
    if basis.iter().any(|b| !same_table(b.table(), table)) {
        return Err(Error::TableMismatch);
    }
    let conductor = basis
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|f| f.values().iter().map(|v| v.conductor() as u64))
        .fold(1u64, num_integer::lcm) as u32;
    // Rows keyed by (class, coordinate).
    let mut rows: BTreeMap<(usize, usize), (Vec<BigRational>, BigRational)> = BTreeMap::new();
    for c in 0..table.class_count() {
        let t = target.value(c).coordinates_over(conductor);
        for (j, tj) in t.into_iter().enumerate() {
            let row: Vec<BigRational> = basis
                .iter()
                .map(|b| b.value(c).coordinates_over(conductor)[j].clone())
                .collect();
            rows.insert((c, j), (row, tj));
        }
    }
    let (a, b): (Vec<_>, Vec<_>) = rows.into_values().unzip();
    match solve(&a, &b, basis.len()) {
        Solution::Unique(x) => {
            let mut out = Vec::with_capacity(x.len());
            for v in x {
                if !v.is_integer() || v.is_negative() {
                    return Err(Error::Infeasible(format!("unique rational solution has entry {v}")));
                }
                out.push(v.to_integer());
            }
            Ok(out)
        }
        Solution::Underdetermined { rank } => Err(Error::Underdetermined {
            rank,
            unknowns: basis.len(),
        }),
        Solution::Inconsistent => Err(Error::Infeasible("the linear system is inconsistent".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn z2() -> Arc<CharacterTable> {
        builtin("Z2").unwrap()
    }

    fn ints(f: &ClassFunction) -> Vec<i64> {
        f.values().iter().map(|v| v.to_i64().unwrap()).collect()
    }

    fn one_node_elliptic() -> NodalCurve {
        let h1 = ClassFunction::from_integers(z2(), &[2, -2]).unwrap();
        NodalCurve::with_fixed_nodes(h1, 1).unwrap()
    }

    fn two_swapped_nodes() -> NodalCurve {
        let h1 = ClassFunction::zero(&z2());
        let swap = NodeAction {
            permutation: vec![1, 0],
            flags: vec![BranchFlag::BranchesFixed; 2],
        };
        NodalCurve::new(h1, vec!["a".into(), "b".into()], vec![NodeAction::identity(2), swap]).unwrap()
    }

    #[test]
    fn torus_traces() {
        let id = TorusCycle { length: 1, inverted: false };
        let inv = TorusCycle { length: 1, inverted: true };
        let swap = TorusCycle { length: 2, inverted: false };
        assert_eq!(torus_euler_trace(&[id]), BigInt::zero());
        assert_eq!(torus_euler_trace(&[swap]), BigInt::zero());
        assert_eq!(torus_euler_trace(&[inv]), BigInt::from(2));
        assert_eq!(torus_euler_trace(&[]), BigInt::one());
    }

    #[test]
    fn one_node_with_elliptic_normalization() {
        assert_eq!(ints(&jac_euler_rep(&one_node_elliptic()).unwrap()), vec![0, 4]);
    }

    #[test]
    fn swapped_nodes_with_rational_normalization() {
        let e = jac_euler_rep(&two_swapped_nodes()).unwrap();
        assert_eq!(ints(&e), vec![1, 1]);
    }

    #[test]
    fn stratified_sum_is_order_independent() {
        for curve in [one_node_elliptic(), two_swapped_nodes()] {
            let direct = jac_euler_rep(&curve).unwrap();
            let mut subsets = all_node_subsets(curve.nodes().len());
            assert_eq!(jac_euler_rep_stratified(&curve, &subsets).unwrap(), direct);
            subsets.reverse();
            assert_eq!(jac_euler_rep_stratified(&curve, &subsets).unwrap(), direct);
        }
    }

    #[test]
    fn inconsistent_action_is_rejected() {
        // An order-2 element acting as a 3-cycle.
        let h1 = ClassFunction::zero(&z2());
        let bad = NodeAction {
            permutation: vec![1, 2, 0],
            flags: vec![BranchFlag::BranchesFixed; 3],
        };
        let r = NodalCurve::new(h1, vec!["a".into(), "b".into(), "c".into()], vec![NodeAction::identity(3), bad]);
        assert!(matches!(r, Err(Error::InconsistentNodeAction(_))));
    }

    #[test]
    fn orbit_counts() {
        let t = z2();
        let target = ClassFunction::from_integers(t.clone(), &[24, 8]).unwrap();
        let basis = vec![
            ClassFunction::from_integers(t.clone(), &[2, 0]).unwrap(),
            ClassFunction::from_integers(t.clone(), &[0, 4]).unwrap(),
        ];
        let n = solve_orbit_counts(&target, &basis).unwrap();
        assert_eq!(n, vec![BigInt::from(12), BigInt::from(2)]);
        let twice = vec![basis[0].clone(), basis[0].clone()];
        assert!(matches!(
            solve_orbit_counts(&target, &twice),
            Err(Error::Underdetermined { rank: 1, unknowns: 2 }) | Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn cyclic_induction_of_trivial_matches_permutation_character() {
        let g = builtin("PSL27").unwrap();
        let c = g.class_index("7A").unwrap();
        let sub = builtin("Z7").unwrap();
        let ind = Inducer::Cyclic { class: c }
            .induce(&g, &ClassFunction::trivial(&sub))
            .unwrap();
        assert_eq!(ind, ClassFunction::induce_from_cyclic(&g, c));
    }
}
