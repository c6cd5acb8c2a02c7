//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use hilbrep_core::jacobian::{BranchFlag, NodalCurve, NodeAction};
use hilbrep_core::{builtin, CharacterTable, ClassFunction, Cohomology};

pub fn table(name: &str) -> Arc<CharacterTable> {
    builtin(name).expect("built-in table")
}

/// K3 cohomology with a symplectic involution: H^2 = 22 - 2*8 sign pairs.
pub fn k3_with_involution() -> Cohomology {
    let t = table("Z2");
    let c = |v: [i64; 2]| ClassFunction::from_multiplicities(&t, &[(v[0] + v[1]) / 2, (v[0] - v[1]) / 2]).unwrap();
    Cohomology::new(&t, vec![c([1, 1]), c([0, 0]), c([22, 6]), c([0, 0]), c([1, 1])]).unwrap()
}

/// Genus-one normalization with `n` nodes, alternately fixed and swapped by the involution.
pub fn nodal_curve(n: usize) -> NodalCurve {
    let t = table("Z2");
    let h1 = ClassFunction::from_multiplicities(&t, &[2, 0]).unwrap();
    let flags = (0..n)
        .map(|i| if i % 2 == 0 { BranchFlag::BranchesFixed } else { BranchFlag::BranchesSwapped })
        .collect();
    let gen = NodeAction { permutation: (0..n).collect(), flags };
    NodalCurve::new(h1, (0..n).map(|i| format!("p{i}")).collect(), vec![NodeAction::identity(n), gen]).unwrap()
}
